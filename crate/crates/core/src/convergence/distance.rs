use serde::Serialize;

use crate::error::{Error, Result};
use crate::numkit::{par_map, Real};
use crate::peakon::{peakon_state, PeakonSpec, PeakonState};
use crate::soliton::{eval_physical, InversionConfig, SolitonSpec};

#[derive(Clone, Debug)]
pub struct DistanceOptions {
    /// Shifts are searched in `[-shift_bound, shift_bound]`.
    pub shift_bound: f64,
    pub shift_resolution: f64,
    /// Step of the coarse scan that seeds the golden-section search.
    pub scan_step: f64,
    pub inversion: InversionConfig,
}

impl Default for DistanceOptions {
    fn default() -> Self {
        DistanceOptions {
            shift_bound: 2.0,
            shift_resolution: 1e-8,
            scan_step: 0.05,
            inversion: InversionConfig::default(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SupDistance {
    /// `max |u_soliton(x) - u_peakon(x)|`.
    pub d_raw: Real,
    /// The same maximum after the best global translation of the soliton.
    pub d_shift: Real,
    /// Translation `s` with the soliton read at `x + s`.
    pub shift: Real,
    pub worst_x: Real,
    pub worst_x_shifted: Real,
    /// Grid points plus refinement points.
    pub points: usize,
}

struct Samples {
    x: Vec<Real>,
    u: Vec<Real>,
}

impl Samples {
    /// `max_j |u_j - u_peakon(x_j - s)|`, which compares the soliton at
    /// `x + s` with the peakon at `x` on the translated grid.
    fn distance(&self, state: &PeakonState, s: &Real) -> (Real, usize) {
        let mut best = (Real::zero(), 0);
        for (j, (x, u)) in self.x.iter().zip(&self.u).enumerate() {
            let d = (u - state.eval(&(x - s))).abs();
            if d > best.0 {
                best = (d, j);
            }
        }
        best
    }

    fn extend(&mut self, spec: &SolitonSpec, t: &Real, xs: Vec<Real>, cfg: &InversionConfig) -> Result<()> {
        let us: Vec<Result<Real>> = par_map(&xs, |x| eval_physical(spec, x, t, cfg));
        for (x, u) in xs.into_iter().zip(us) {
            self.u.push(u?);
            self.x.push(x);
        }
        Ok(())
    }

    /// Midpoints to both grid neighbours of `x_w` and the crest nearest it.
    fn refinement(&self, w: usize, grid: &[Real], crests: &[Real], s: &Real) -> Vec<Real> {
        let xw = &self.x[w];
        let mut out = Vec::with_capacity(3);
        let below = grid.iter().filter(|g| *g < xw).fold(None::<&Real>, |m, g| match m {
            Some(m) if m >= g => Some(m),
            _ => Some(g),
        });
        let above = grid.iter().filter(|g| *g > xw).fold(None::<&Real>, |m, g| match m {
            Some(m) if m <= g => Some(m),
            _ => Some(g),
        });
        out.extend(below.map(|b| (b + xw).mul_pow2(-1)));
        out.extend(above.map(|a| (a + xw).mul_pow2(-1)));
        if let Some(c) = crests
            .iter()
            .map(|c| c + s)
            .min_by(|a, b| (a - xw).abs().total_cmp(&(b - xw).abs()))
        {
            out.push(c);
        }
        out
    }
}

fn golden_section(lo: f64, hi: f64, tol: f64, mut f: impl FnMut(f64) -> Real) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    (a + b) / 2.0
}

/// Sup-norm distance between the soliton and the peakon at time `t`, raw and
/// after the best translation in the configured window. The soliton is
/// evaluated once per point; translations act on the peakon argument. One
/// refinement pass adds the neighbour midpoints and the nearest crest around
/// each maximiser.
pub fn sup_distance(
    spec: &SolitonSpec,
    target: &PeakonSpec,
    t: &Real,
    grid: &[Real],
    opts: &DistanceOptions,
) -> Result<SupDistance> {
    if grid.is_empty() {
        return Err(Error::Domain("sup distance on an empty grid".into()));
    }
    let state = peakon_state(target, t)?;
    let mut samples = Samples { x: Vec::new(), u: Vec::new() };
    samples.extend(spec, t, grid.to_vec(), &opts.inversion)?;

    let zero = Real::zero();
    let (_, w0) = samples.distance(&state, &zero);
    let extra = samples.refinement(w0, grid, &state.positions, &zero);
    samples.extend(spec, t, extra, &opts.inversion)?;

    let eval = |s: f64| samples.distance(&state, &Real::from_f64(s)).0;
    let steps = (opts.shift_bound / opts.scan_step).round() as i64;
    let (mut best_s, mut best_d) = (0.0, eval(0.0));
    for i in -steps..=steps {
        let s = i as f64 * opts.scan_step;
        let d = eval(s);
        if d < best_d {
            best_s = s;
            best_d = d;
        }
    }
    let lo = (best_s - opts.scan_step).max(-opts.shift_bound);
    let hi = (best_s + opts.scan_step).min(opts.shift_bound);
    let refined = golden_section(lo, hi, opts.shift_resolution, eval);
    let mut shift = Real::from_f64(if eval(refined) < best_d { refined } else { best_s });

    let (_, ws) = samples.distance(&state, &shift);
    let extra = samples.refinement(ws, grid, &state.positions, &shift);
    samples.extend(spec, t, extra, &opts.inversion)?;

    let (d_raw, wr) = samples.distance(&state, &zero);
    let (mut d_shift, mut ws) = samples.distance(&state, &shift);
    if d_shift > d_raw {
        shift = zero;
        d_shift = d_raw.clone();
        ws = wr;
    }
    Ok(SupDistance {
        worst_x: samples.x[wr].clone(),
        worst_x_shifted: samples.x[ws].clone(),
        d_raw,
        d_shift,
        shift,
        points: samples.x.len(),
    })
}
