//! Numerics for amoebas of random complex plane curves.
//!
//! The crate samples Kostlan random polynomials on CP^2, decides whether
//! their zero sets meet given Log-tori, estimates amoeba areas by Monte Carlo
//! and evaluates the deterministic upper bounds those estimates are checked
//! against.

pub mod amoeba;
pub mod bergman;
pub mod bounds;
pub mod chart;
pub mod error;
pub mod fs_geometry;
pub mod kostlan;
pub mod quadrature;
pub mod rng;
pub mod roots;
pub mod stats;

pub use bergman::{CovarianceMatrix, GaussianVectorSpec};
pub use error::{Error, Result};
pub use fs_geometry::{LogPoint, TorusRadii};
pub use kostlan::{HomogeneousPoly, MultiIndex};
pub use num_complex::Complex64;
pub use rng::RngStream;
pub use stats::EstimatorResult;
