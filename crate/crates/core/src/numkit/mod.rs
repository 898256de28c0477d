//! Precision arithmetic and determinant utilities.

mod logsum;
mod matrix;
pub mod precision;
mod real;

pub use logsum::{log_sum_exp, log_sum_exp_values, LogSum, LogSumAccumulator};
pub use matrix::{det_cofactor, det_dense, minor, Matrix};
pub use precision::{par_map, with_bits, working_bits, DEFAULT_BITS};
pub use real::Real;
