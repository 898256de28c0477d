//! JSON run configuration. Numbers may be written as JSON numbers or as
//! decimal strings; strings keep every digit, JSON numbers pass through an
//! f64 first. Values are parsed into working-precision reals only after the
//! precision has been fixed.

use std::path::{Path, PathBuf};

use chlab_core::convergence::{GridSpec, PrecisionPolicy};
use chlab_core::{PeakonSpec, Real, SolitonSpec};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{CliError, CliResult};

/// A number kept as its decimal text.
#[derive(Clone, Debug, Serialize)]
#[serde(transparent)]
pub struct Num(String);

impl<'de> Deserialize<'de> for Num {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct NumVisitor;
        impl Visitor<'_> for NumVisitor {
            type Value = Num;
            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                f.write_str("a number or a decimal string")
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Num, E> {
                Ok(Num(v.trim().to_string()))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Num, E> {
                Ok(Num(v.to_string()))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Num, E> {
                Ok(Num(v.to_string()))
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Num, E> {
                Ok(Num(format!("{v:e}")))
            }
        }
        d.deserialize_any(NumVisitor)
    }
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct PeakonBlock {
    pub speeds: Vec<Num>,
    #[serde(default)]
    pub phases: Option<Vec<Num>>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SolitonBlock {
    pub kappa: Num,
    /// Bilinear-form wave numbers, `0 < kappa k_i < 1`, increasing.
    pub k: Vec<Num>,
    #[serde(default)]
    pub y0: Option<Vec<Num>>,
    #[serde(default)]
    pub alpha: Option<Num>,
}

#[derive(Clone, Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct GridBlock {
    pub start: Option<Num>,
    pub end: Option<Num>,
    pub points: Option<usize>,
    pub values: Option<Vec<Num>>,
    #[serde(default)]
    pub include_breakpoints: bool,
}

#[derive(Clone, Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyBlock {
    pub instances: Option<usize>,
    pub max_n: Option<usize>,
    /// `(y, t)` samples per soliton spec.
    pub samples: Option<usize>,
    /// Replaces every per-family threshold when set.
    pub threshold: Option<Num>,
}

#[derive(Clone, Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SweepBlock {
    pub kappas: Option<Vec<Num>>,
    pub times: Option<Vec<Num>>,
    pub grid: Option<GridBlock>,
    pub precision: Option<PrecisionPolicy>,
    pub threshold_fraction: Option<Num>,
}

#[derive(Clone, Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub bits: Option<u32>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub peakon: Option<PeakonBlock>,
    pub soliton: Option<SolitonBlock>,
    pub grid: Option<GridBlock>,
    pub parametric_grid: Option<GridBlock>,
    pub times: Option<Vec<Num>>,
    pub inversion_tol: Option<Num>,
    pub verify: Option<VerifyBlock>,
    pub sweep: Option<SweepBlock>,
}

/// A loaded configuration with its source text, for locating keys in
/// error messages.
pub struct Loaded {
    pub config: RunConfig,
    pub raw: serde_json::Value,
    text: String,
    path: PathBuf,
}

pub fn load(path: &Path) -> CliResult<Loaded> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("cannot read {}: {e}", path.display())))?;
    let config: RunConfig =
        serde_json::from_str(&text).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
    let raw = serde_json::from_str(&text).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
    Ok(Loaded {
        config,
        raw,
        text,
        path: path.to_path_buf(),
    })
}

impl Loaded {
    /// Validation error pointing at the first line that mentions `key`.
    pub fn invalid(&self, key: &str, msg: impl std::fmt::Display) -> CliError {
        let needle = format!("\"{key}\"");
        match self.text.lines().position(|l| l.contains(&needle)) {
            Some(i) => CliError::Validation(format!("{}:{}: {key}: {msg}", self.path.display(), i + 1)),
            None => CliError::Validation(format!("{}: {key}: {msg}", self.path.display())),
        }
    }

    pub fn real(&self, key: &str, n: &Num) -> CliResult<Real> {
        let v = Real::parse(&n.0).map_err(|_| self.invalid(key, format!("'{}' is not a number", n.0)))?;
        if !v.is_finite() {
            return Err(self.invalid(key, format!("'{}' is not finite", n.0)));
        }
        Ok(v)
    }

    pub fn reals(&self, key: &str, ns: &[Num]) -> CliResult<Vec<Real>> {
        ns.iter().map(|n| self.real(key, n)).collect()
    }

    pub fn peakon_spec(&self) -> CliResult<PeakonSpec> {
        let block = self
            .config
            .peakon
            .as_ref()
            .ok_or_else(|| CliError::Validation(format!("{}: missing \"peakon\" block", self.path.display())))?;
        let speeds = self.reals("speeds", &block.speeds)?;
        let phases = match &block.phases {
            Some(p) => self.reals("phases", p)?,
            None => vec![Real::zero(); speeds.len()],
        };
        PeakonSpec::new(speeds, phases).map_err(|e| self.invalid("speeds", e))
    }

    pub fn soliton_spec(&self) -> CliResult<SolitonSpec> {
        let block = self
            .config
            .soliton
            .as_ref()
            .ok_or_else(|| CliError::Validation(format!("{}: missing \"soliton\" block", self.path.display())))?;
        let kappa = self.real("kappa", &block.kappa)?;
        let k = self.reals("k", &block.k)?;
        let y0 = match &block.y0 {
            Some(y) => self.reals("y0", y)?,
            None => vec![Real::zero(); k.len()],
        };
        let alpha = match &block.alpha {
            Some(a) => self.real("alpha", a)?,
            None => Real::zero(),
        };
        SolitonSpec::new(kappa, k, y0, alpha).map_err(|e| self.invalid("k", e))
    }

    pub fn times(&self, key: &str, times: Option<&Vec<Num>>) -> CliResult<Vec<Real>> {
        match times {
            None => Ok(vec![Real::zero()]),
            Some(t) if t.is_empty() => Err(self.invalid(key, "at least one time is required")),
            Some(t) => self.reals(key, t),
        }
    }

    pub fn grid_spec(&self, key: &str, block: &GridBlock) -> CliResult<GridSpec> {
        match (&block.values, &block.start, &block.end, block.points) {
            (Some(values), None, None, None) => Ok(GridSpec::Values(self.reals(key, values)?)),
            (None, Some(start), Some(end), Some(points)) => {
                let (start, end) = (self.real(key, start)?, self.real(key, end)?);
                if points > 1 && start > end {
                    return Err(self.invalid(key, "start exceeds end"));
                }
                Ok(GridSpec::Range { start, end, points })
            }
            _ => Err(self.invalid(key, "give either \"values\" or all of \"start\", \"end\", \"points\"")),
        }
    }

    /// The x grid at time `t` for `spec`, failing on an empty grid.
    pub fn grid(&self, key: &str, block: Option<&GridBlock>, spec: Option<&PeakonSpec>, t: &Real) -> CliResult<Vec<Real>> {
        let block = block.ok_or_else(|| CliError::Validation(format!("{}: missing \"{key}\" block", self.path.display())))?;
        let gs = self.grid_spec(key, block)?;
        let xs = match (spec, block.include_breakpoints) {
            (Some(spec), true) => chlab_core::convergence::default_grid(spec, t, &gs, true)?,
            (_, true) => return Err(self.invalid(key, "include_breakpoints needs a \"peakon\" block")),
            (_, false) => match gs {
                GridSpec::Range { start, end, points } => uniform(&start, &end, points),
                GridSpec::Values(v) => v,
                GridSpec::AroundBreakpoints { .. } => unreachable!("not produced from a config block"),
            },
        };
        if xs.is_empty() {
            return Err(self.invalid(key, "grid has no points"));
        }
        Ok(xs)
    }
}

pub fn uniform(start: &Real, end: &Real, points: usize) -> Vec<Real> {
    match points {
        0 => Vec::new(),
        1 => vec![start.clone()],
        _ => {
            let step = (end - start) / Real::from_i64(points as i64 - 1);
            (0..points).map(|i| start + &step * Real::from_i64(i as i64)).collect()
        }
    }
}
