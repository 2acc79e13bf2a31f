//! Dunkl intertwining operator for the symmetric group S_d through its simplex
//! integral representation, spherical h-harmonics built on top of it, and
//! numerical experiments on Cesàro summability of h-harmonic expansions.
//!
//! The layers, bottom to top:
//!
//! * [`poly`]: exact sparse polynomials, Dunkl operators and the Dunkl Laplacian.
//! * [`orthopoly`]: Jacobi/Gegenbauer polynomials and Fourier–Jacobi Cesàro kernels.
//! * [`gauss`], [`simplex`]: Gauss–Jacobi rules and tensor rules on the simplex.
//! * [`intertwine`]: V_κ on axis functions, exact action on monomials, the d = 2
//!   representation, the Z_2^d product formula and the sphere-average identity.
//! * [`bessel`]: Dunkl exponential at coordinate vectors and the generalized Bessel function.
//! * [`harmonics`]: sphere rules, h-harmonic bases and reproducing kernels.
//! * [`summability`]: Cesàro kernels at coordinate vectors, Lebesgue-constant sweeps
//!   and numerical checks of the pointwise kernel bounds.

// `!(x > y)` is used on purpose so that NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bessel;
pub mod error;
pub mod gauss;
pub mod harmonics;
pub mod intertwine;
pub mod linalg;
pub mod orthopoly;
pub mod params;
pub mod poly;
pub mod simplex;
pub mod special;
pub mod summability;

pub use error::{Error, Result};
pub use harmonics::{HarmonicBasis, SphereRule};
pub use orthopoly::{CesaroOrder, JacobiParams};
pub use params::KappaParams;
pub use poly::{Monomial, Polynomial};
pub use simplex::SimplexRule;
pub use summability::SweepRecord;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
