//! Soliton families that converge to a target peakon as `kappa -> 0`, and the
//! measurements that show it: sup-norm distances over a `kappa` sweep and
//! the leading-order comparison of `g1 / g2` with the `h_n` coefficients.

mod build;
mod distance;
mod leading;
mod sweep;

pub use build::{build_soliton_for_peakon, build_soliton_with_sign, PhaseSign, CALIBRATED_PHASE_SIGN};
pub use distance::{sup_distance, DistanceOptions, SupDistance};
pub use leading::{leading_order_diagnostic, LeadingOrder};
pub use sweep::{
    default_grid, run_sweep, ConvergenceReport, GridSpec, PrecisionPolicy, SweepConfig, SweepEntry, TimeSummary,
};
