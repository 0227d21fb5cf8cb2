//! Constant angle surfaces in warped products `I x_f E^2`.

// Negated comparisons reject NaN deliberately; index loops mirror tensor notation.
#![allow(
    clippy::neg_cmp_op_on_partial_ord,
    clippy::needless_range_loop,
    clippy::excessive_precision
)]

pub mod cli;
pub mod config;
pub mod error;
pub mod export;
pub mod expr;
pub mod generators;
pub mod interp;
pub mod numdiff;
pub mod quadrature;
pub mod surface;
pub mod verify;
pub mod warped_space;

pub use error::{GeometryError, Result};
