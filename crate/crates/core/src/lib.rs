//! Walsh-Fourier analysis on the truncated dyadic group `G_M`.
//!
//! The crate is organized bottom-up:
//!
//! - [`dyadic`]: binary characters of indices, block decompositions, band spectra;
//! - [`grid`]: points, intervals and functions on `G_M`, the Walsh transform and quasi-norms;
//! - [`kernels`]: exact integer Dirichlet and Fejér kernels with their closed forms and bounds;
//! - [`operators`]: partial sums, Fejér means, maximal functions, atoms, weighted maximal operators;
//! - [`counterexample`]: the divergence martingale for non-admissible weights;
//! - [`verify`]: named brute-force suites over the identities above;
//! - [`io`]: CSV formats for grid functions, coefficients and kernels.

pub mod counterexample;
pub mod dyadic;
pub mod error;
pub mod grid;
pub mod io;
pub mod kernels;
pub mod operators;
pub mod verify;

pub use error::{Result, WfError};
pub use grid::{DyadicInterval, GridFunction, GroupPoint};
pub use kernels::ScaledKernel;

/// Largest supported grid scale; a grid at this scale holds `2^20` values.
pub const MAX_SCALE: u32 = 20;
