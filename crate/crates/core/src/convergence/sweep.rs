use serde::{Deserialize, Serialize};

use super::{build_soliton_for_peakon, sup_distance, DistanceOptions};
use crate::error::Result;
use crate::limitprofile::build_limit_profile;
use crate::numkit::{with_bits, Real};
use crate::peakon::{peakon_state, PeakonSpec};
use crate::soliton::InversionConfig;

/// Working precision as a function of `kappa`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PrecisionPolicy {
    /// `max(256, ceil(8 N ln(1/kappa) / ln 2) + 256)` bits.
    Scaling,
    Fixed(u32),
}

impl PrecisionPolicy {
    pub fn bits(&self, n: usize, kappa: &Real) -> u32 {
        match *self {
            PrecisionPolicy::Fixed(b) => b,
            PrecisionPolicy::Scaling => {
                let extra = (8.0 * n as f64 * (1.0 / kappa.to_f64()).ln() / std::f64::consts::LN_2).ceil();
                (extra.max(0.0) as u32 + 256).max(256)
            }
        }
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GridSpec {
    /// `points` uniform samples over `[xbar_1 - margin, xbar_N + margin]`.
    AroundBreakpoints { points: usize, margin: Real },
    Range { start: Real, end: Real, points: usize },
    Values(Vec<Real>),
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepConfig {
    pub kappas: Vec<Real>,
    pub times: Vec<Real>,
    pub grid: GridSpec,
    pub include_breakpoints: bool,
    pub precision: PrecisionPolicy,
    #[serde(skip)]
    pub distance: DistanceOptions,
    /// Final `d_shift` must not exceed this fraction of the peak amplitude.
    pub threshold_fraction: Real,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            kappas: (1..=8).map(|e| Real::one().mul_pow2(-e)).collect(),
            times: vec![Real::zero()],
            grid: GridSpec::AroundBreakpoints {
                points: 801,
                margin: Real::from_i64(5),
            },
            include_breakpoints: true,
            precision: PrecisionPolicy::Scaling,
            distance: DistanceOptions::default(),
            threshold_fraction: Real::parse("0.05").expect("literal"),
        }
    }
}

fn uniform(start: &Real, end: &Real, points: usize) -> Vec<Real> {
    match points {
        0 => Vec::new(),
        1 => vec![start.clone()],
        _ => {
            let step = (end - start) / Real::from_i64(points as i64 - 1);
            (0..points).map(|i| start + &step * Real::from_i64(i as i64)).collect()
        }
    }
}

/// The evaluation grid at time `t`, sorted, with breakpoints merged in when
/// requested.
pub fn default_grid(target: &PeakonSpec, t: &Real, grid: &GridSpec, include_breakpoints: bool) -> Result<Vec<Real>> {
    let profile = build_limit_profile(target, t)?;
    let bps = profile.breakpoints();
    let mut xs = match grid {
        GridSpec::AroundBreakpoints { points, margin } => {
            uniform(&(&bps[0] - margin), &(&bps[bps.len() - 1] + margin), *points)
        }
        GridSpec::Range { start, end, points } => uniform(start, end, *points),
        GridSpec::Values(v) => v.clone(),
    };
    if include_breakpoints {
        xs.extend(bps.iter().cloned());
    }
    xs.sort_by(Real::total_cmp);
    xs.dedup();
    Ok(xs)
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepEntry {
    pub kappa: Real,
    pub t: Real,
    pub bits_used: u32,
    pub d_raw: Option<Real>,
    pub d_shift: Option<Real>,
    pub shift: Option<Real>,
    pub worst_x: Option<Real>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TimeSummary {
    pub t: Real,
    pub peak_amplitude: Real,
    /// Least-squares slope of `ln d_shift` against `ln kappa` over the last
    /// half of the sweep; diagnostic only.
    pub fitted_slope: Option<f64>,
    pub tail_strictly_decreasing: bool,
    pub final_within_threshold: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceReport {
    pub entries: Vec<SweepEntry>,
    pub times: Vec<TimeSummary>,
    /// Some entry failed; the others are still reported.
    pub partial: bool,
}

impl ConvergenceReport {
    pub fn criteria_met(&self) -> bool {
        !self.partial
            && self
                .times
                .iter()
                .all(|s| s.tail_strictly_decreasing && s.final_within_threshold)
    }
}

fn run_entry(target: &PeakonSpec, config: &SweepConfig, kappa: &Real, t: &Real, bits: u32) -> Result<SweepEntry> {
    with_bits(bits, || {
        let spec = build_soliton_for_peakon(target, kappa)?;
        let grid = default_grid(target, t, &config.grid, config.include_breakpoints)?;
        let opts = DistanceOptions {
            inversion: InversionConfig {
                tol: config.distance.inversion.tol.with_prec(bits),
                ..config.distance.inversion.clone()
            },
            ..config.distance.clone()
        };
        let d = sup_distance(&spec, target, t, &grid, &opts)?;
        Ok(SweepEntry {
            kappa: kappa.clone(),
            t: t.clone(),
            bits_used: bits,
            d_raw: Some(d.d_raw),
            d_shift: Some(d.d_shift),
            shift: Some(d.shift),
            worst_x: Some(d.worst_x),
            error: None,
        })
    })
}

fn slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Every `(kappa, t)` pair in configured order. Failures are recorded on
/// their entry and the sweep carries on.
pub fn run_sweep(target: &PeakonSpec, config: &SweepConfig) -> Result<ConvergenceReport> {
    let mut entries = Vec::new();
    for kappa in &config.kappas {
        for t in &config.times {
            let bits = config.precision.bits(target.len(), kappa);
            let entry = run_entry(target, config, kappa, t, bits).unwrap_or_else(|e| SweepEntry {
                kappa: kappa.clone(),
                t: t.clone(),
                bits_used: bits,
                d_raw: None,
                d_shift: None,
                shift: None,
                worst_x: None,
                error: Some(e.to_string()),
            });
            entries.push(entry);
        }
    }
    let mut times = Vec::new();
    if !config.kappas.is_empty() {
        for t in &config.times {
            let peak = peakon_state(target, t)?.peak_amplitude();
            let series: Vec<&SweepEntry> = entries.iter().filter(|e| &e.t == t).collect();
            let tail: Vec<Option<&Real>> = series.iter().rev().take(3).rev().map(|e| e.d_shift.as_ref()).collect();
            let tail_strictly_decreasing = tail.iter().all(Option::is_some)
                && tail.windows(2).all(|w| w[1].expect("checked") < w[0].expect("checked"));
            let limit = &peak * &config.threshold_fraction;
            let final_within_threshold = series
                .last()
                .and_then(|e| e.d_shift.as_ref())
                .is_some_and(|d| *d <= limit);
            let half = series.len() / 2;
            let fit: Vec<(f64, f64)> = series[half..]
                .iter()
                .filter_map(|e| {
                    let d = e.d_shift.as_ref()?.to_f64();
                    (d > 0.0).then(|| (e.kappa.to_f64().ln(), d.ln()))
                })
                .collect();
            times.push(TimeSummary {
                t: t.clone(),
                peak_amplitude: peak,
                fitted_slope: slope(&fit),
                tail_strictly_decreasing,
                final_within_threshold,
            });
        }
    }
    let partial = entries.iter().any(|e| e.error.is_some());
    Ok(ConvergenceReport { entries, times, partial })
}
