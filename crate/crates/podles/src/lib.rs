//! Spectral geometry of the standard Podles sphere, computed exactly.
//!
//! The crate evaluates the spectral data attached to the q-deformed Dirac
//! operator on the standard Podles sphere for a deformation parameter
//! 0 < q < 1: the eigenvalue ladder, the spectral zeta function and its
//! meromorphic continuation, the exact heat trace as a residue series over
//! the pole lattice, the exact spectral action for Laplace-class cutoff
//! functions, and a finite matrix truncation of the spectral triple used for
//! relation checks, regularity probes, and one-form fluctuations.

use blas_src as _;

pub mod action;
pub mod error;
pub mod heat;
pub mod params;
pub mod quad;
pub mod specfun;
pub mod sum;
pub mod zeta;

pub use error::{Error, Result};
pub use params::{QParams, SeriesControl};
