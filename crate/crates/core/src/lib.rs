//! Numerical tools for two-dimensional Dirac operators with electrostatic and
//! Lorentz-scalar δ-shell interactions supported on closed curves.
//!
//! The crate builds Nyström discretizations of the boundary integral
//! operators, evaluates the corner Fredholm symbols, classifies
//! self-adjointness, and locates discrete eigenvalues in the gap (−m, m).

pub mod boundary_ops;
pub mod classify;
pub mod corner_symbol;
pub mod error;
pub mod geometry;
pub mod kernels;
pub mod linalg;
pub mod quad;
pub mod spectral;
pub mod special;

pub use error::{Error, Result};
pub use geometry::{build_curve, discretize, Curve, CurveSpec, QuadratureGrid, Vec2};
pub use kernels::{Coupling, SpinorMatrix};
pub use num_complex::Complex64 as c64;
