//! Exact computations around generalized GCD heights of rational points on
//! projective space: polynomial ideals and their Hilbert data, auxiliary
//! forms vanishing along a subscheme, and an empirical harness comparing the
//! GCD height with the Weil height.

pub mod auxdiv;
pub mod cli;
pub mod harness;
pub mod heights;
pub mod ideals;
pub mod polyalgebra;
pub mod rr_lab;
