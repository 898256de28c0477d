use chlab_core::numkit::par_map;
use chlab_core::{build_limit_profile, peakon_state, Real};

use super::{cell, finish};
use crate::error::CliResult;
use crate::output::Staged;
use crate::Run;

pub fn run(run: &Run) -> CliResult<()> {
    let cfg = &run.cfg;
    let spec = cfg.peakon_spec()?;
    let times = cfg.times("times", cfg.config.times.as_ref())?;
    let mut staged = Staged::new();
    for (k, t) in times.iter().enumerate() {
        let grid = cfg.grid("grid", cfg.config.grid.as_ref(), Some(&spec), t)?;
        let profile = build_limit_profile(&spec, t)?;
        let state = peakon_state(&spec, t)?;
        let u = par_map(&grid, |x| profile.eval(x));
        let gap = grid
            .iter()
            .zip(&u)
            .map(|(x, u)| (u - state.eval(x)).abs())
            .fold(Real::zero(), Real::max);
        println!("t = {}: max |limit - peakon| = {}", t.to_sci(6), gap.to_sci(3));
        staged.csv(
            &format!("limit_profile_t{k}.csv"),
            &["x", "u"],
            grid.iter().zip(&u).map(|(x, u)| vec![cell(x), cell(u)]),
        )?;
        staged.csv(
            &format!("limit_breakpoints_t{k}.csv"),
            &["n", "xbar_n"],
            profile
                .breakpoints()
                .iter()
                .enumerate()
                .map(|(n, b)| vec![(n + 1).to_string(), cell(b)]),
        )?;
    }
    finish(run, staged)
}
