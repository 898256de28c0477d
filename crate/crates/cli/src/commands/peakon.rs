use chlab_core::numkit::par_map;
use chlab_core::peakon_state;

use super::{cell, finish};
use crate::error::CliResult;
use crate::output::Staged;
use crate::Run;

pub fn run(run: &Run) -> CliResult<()> {
    let cfg = &run.cfg;
    let spec = cfg.peakon_spec()?;
    let times = cfg.times("times", cfg.config.times.as_ref())?;
    let mut speeds = spec.speeds().to_vec();
    speeds.sort_by(|a, b| a.total_cmp(b));
    let mut staged = Staged::new();
    for (k, t) in times.iter().enumerate() {
        let grid = cfg.grid("grid", cfg.config.grid.as_ref(), Some(&spec), t)?;
        let state = peakon_state(&spec, t)?;
        let u = par_map(&grid, |x| state.eval(x));
        staged.csv(
            &format!("peakon_profile_t{k}.csv"),
            &["x", "u"],
            grid.iter().zip(&u).map(|(x, u)| vec![cell(x), cell(u)]),
        )?;
        staged.csv(
            &format!("peakon_state_t{k}.csv"),
            &["i", "m_i", "x_i", "c_i"],
            (0..state.len()).map(|i| {
                vec![
                    (i + 1).to_string(),
                    cell(&state.amplitudes[i]),
                    cell(&state.positions[i]),
                    cell(&speeds[i]),
                ]
            }),
        )?;
    }
    finish(run, staged)
}
