use chlab_core::numkit::par_map;
use chlab_core::soliton::{eval_parametric, eval_physical, InversionConfig, DEFAULT_INVERSION_TOL};
use chlab_core::Real;

use super::{cell, finish};
use crate::error::CliResult;
use crate::output::Staged;
use crate::Run;

pub fn run(run: &Run) -> CliResult<()> {
    let cfg = &run.cfg;
    let spec = cfg.soliton_spec()?;
    let times = cfg.times("times", cfg.config.times.as_ref())?;
    let tol = match &cfg.config.inversion_tol {
        Some(n) => cfg.real("inversion_tol", n)?,
        None => Real::from_f64(DEFAULT_INVERSION_TOL),
    };
    if !tol.is_positive() {
        return Err(cfg.invalid("inversion_tol", "must be positive"));
    }
    let inversion = InversionConfig::with_tol(tol);
    let peakon = match cfg.config.peakon {
        Some(_) => Some(cfg.peakon_spec()?),
        None => None,
    };
    let mut staged = Staged::new();
    for (k, t) in times.iter().enumerate() {
        let grid = cfg.grid("grid", cfg.config.grid.as_ref(), peakon.as_ref(), t)?;
        let u = par_map(&grid, |x| eval_physical(&spec, x, t, &inversion))
            .into_iter()
            .collect::<chlab_core::Result<Vec<Real>>>()?;
        staged.csv(
            &format!("soliton_profile_t{k}.csv"),
            &["x", "u"],
            grid.iter().zip(&u).map(|(x, u)| vec![cell(x), cell(u)]),
        )?;
        if let Some(block) = &cfg.config.parametric_grid {
            let ys = cfg.grid("parametric_grid", Some(block), None, t)?;
            let rows = par_map(&ys, |y| eval_parametric(&spec, y, t));
            staged.csv(
                &format!("soliton_parametric_t{k}.csv"),
                &["y", "x", "u"],
                ys.iter().zip(&rows).map(|(y, (x, u))| vec![cell(y), cell(x), cell(u)]),
            )?;
        }
    }
    finish(run, staged)
}
