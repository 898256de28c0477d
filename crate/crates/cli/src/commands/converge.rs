use chlab_core::convergence::GridSpec;
use chlab_core::{run_sweep, Real, SweepConfig};
use serde_json::json;

use super::{cell, finish, REPORT_VERSION};
use crate::error::{CliError, CliResult};
use crate::output::Staged;
use crate::Run;

pub fn run(run: &Run) -> CliResult<()> {
    let cfg = &run.cfg;
    let target = cfg.peakon_spec()?;
    let block = cfg.config.sweep.clone().unwrap_or_default();
    let mut sweep = SweepConfig::default();
    if let Some(k) = &block.kappas {
        sweep.kappas = cfg.reals("kappas", k)?;
        if let Some(bad) = sweep.kappas.iter().find(|k| !k.is_positive()) {
            return Err(cfg.invalid("kappas", format!("kappa must be positive, got {bad}")));
        }
    }
    if block.times.is_some() {
        sweep.times = cfg.times("times", block.times.as_ref())?;
    }
    if let Some(g) = &block.grid {
        sweep.grid = cfg.grid_spec("grid", g)?;
        sweep.include_breakpoints = g.include_breakpoints;
        if matches!(&sweep.grid, GridSpec::Range { points: 0, .. }) || matches!(&sweep.grid, GridSpec::Values(v) if v.is_empty()) {
            return Err(cfg.invalid("grid", "grid has no points"));
        }
    }
    if let Some(p) = block.precision {
        sweep.precision = p;
    }
    if let Some(f) = &block.threshold_fraction {
        sweep.threshold_fraction = cfg.real("threshold_fraction", f)?;
    }

    let report = run_sweep(&target, &sweep)?;
    for e in &report.entries {
        match (&e.d_shift, &e.error) {
            (Some(d), _) => println!("kappa = {} t = {}: d_shift = {}", e.kappa.to_sci(6), e.t.to_sci(6), d.to_sci(3)),
            (None, Some(err)) => println!("kappa = {} t = {}: failed: {err}", e.kappa.to_sci(6), e.t.to_sci(6)),
            (None, None) => {}
        }
    }
    let opt = |v: &Option<Real>| v.as_ref().map(cell).unwrap_or_default();
    let mut staged = Staged::new();
    staged.json(
        "convergence_report.json",
        &json!({
            "version": REPORT_VERSION,
            "config": sweep,
            "report": report,
        }),
    )?;
    staged.csv(
        "convergence.csv",
        &["kappa", "t", "d_raw", "d_shift", "shift", "worst_x", "bits_used"],
        report.entries.iter().map(|e| {
            vec![
                cell(&e.kappa),
                cell(&e.t),
                opt(&e.d_raw),
                opt(&e.d_shift),
                opt(&e.shift),
                opt(&e.worst_x),
                e.bits_used.to_string(),
            ]
        }),
    )?;
    finish(run, staged)?;
    if report.criteria_met() {
        Ok(())
    } else {
        let failed = report.entries.iter().filter(|e| e.error.is_some()).count();
        Err(CliError::Convergence(format!(
            "{failed} failed entries; tail decreasing and final threshold per time: {}",
            report
                .times
                .iter()
                .map(|s| format!("t = {}: {}/{}", s.t.to_sci(6), s.tail_strictly_decreasing, s.final_within_threshold))
                .collect::<Vec<_>>()
                .join(", ")
        )))
    }
}
