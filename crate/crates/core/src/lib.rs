//! Semi-Lagrangian solvers for the periodic advection equation
//! `φ_t + u(x, t) φ_x = 0` on `[0, 1)`.
//!
//! The crate provides
//!
//! * [`grid`]: periodic, possibly non-uniform meshes;
//! * [`interpolation`]: cubic Hermite, periodic cubic spline and symmetric
//!   Lagrange interpolants;
//! * [`characteristics`]: RK3 backtracing of the augmented characteristic
//!   system and a high-accuracy reference tracer;
//! * [`schemes`]: the CIP scheme, spline and Lagrange semi-Lagrangian
//!   schemes and first-order upwind;
//! * [`norms`]: relative L², H¹, H² and weighted H² errors and rates;
//! * [`spectral`]: DFT-based phase-shift analysis.

pub mod characteristics;
pub mod error;
pub mod grid;
pub mod interpolation;
pub mod linalg;
pub mod norms;
pub mod quadrature;
pub mod schemes;
pub mod spectral;

pub use error::{Error, Result};
pub use grid::{wrap, PeriodicGrid};
pub use interpolation::{hermite_interpolate, lagrange_interpolate, spline_interpolate, Interpolant};
pub use schemes::{Problem, SchemeKind, SchemeState};
