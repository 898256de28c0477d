//! Explicit N-soliton and N-peakon machinery for the Camassa-Holm equation,
//! together with a harness that measures how the dispersive solitons approach
//! the peakons as the dispersion vanishes.
//!
//! All arithmetic runs on [`Real`], an MPFR float whose precision is taken
//! from [`numkit::working_bits`] at construction.

pub mod convergence;
pub mod corpus;
pub mod error;
pub mod hankel;
pub mod limitprofile;
pub mod numkit;
pub mod peakon;
pub mod soliton;

pub use convergence::{build_soliton_for_peakon, run_sweep, ConvergenceReport, SweepConfig};
pub use error::{Error, Result};
pub use hankel::SpectralData;
pub use limitprofile::{build_limit_profile, LimitProfile};
pub use numkit::{Matrix, Real};
pub use peakon::{peakon_state, PeakonSpec, PeakonState};
pub use soliton::{SolitonSpec, SubsetFormSpec};
