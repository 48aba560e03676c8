//! Complex supersymmetric partner potentials and their numerical verification.
//!
//! The crate covers four layers:
//!
//! - [`numerics`]: uniform grids, sampled complex functions, finite
//!   differences, cumulative quadrature, RK4 stepping and scalar root finding.
//! - [`susy`]: a complex superpotential `W = f + i g`, the partner pair
//!   `V± = W² ∓ W' + E`, the factor operators `A = d/dx + W`,
//!   `A† = -d/dx + W`, intertwining residuals and zero modes.
//! - [`sl2c`]: the three sl(2,C) families (tanh/sech, coth/cosech,
//!   exponential), their potentials `V_m`, the shared spectrum and the bridge
//!   `W = (m - 1/2) F - G` whose partner is `V_{m-1}`.
//! - [`elliptic`]: the Weierstrass-℘ partner pair with a real `V⁺` and a
//!   purely imaginary `V⁻`, including the hyperbolic (degenerate) limit.
//!
//! [`spectral`] closes the loop with a shooting eigensolver over real
//! energies.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod elliptic;
mod error;
pub mod numerics;
pub mod sl2c;
pub mod spectral;
pub mod susy;

pub use error::{Error, Result};
pub use num_complex::Complex64;

pub use elliptic::{EllipticParams, Regime, WeierstrassData};
pub use numerics::{CubicRoots, Grid, SampledFunction};
pub use sl2c::{Branch, Case, FamilySpectrum, Sl2cFamily};
pub use spectral::{Boundary, SpectralProblem, SpectrumResult};
pub use susy::{PartnerPair, RealMap, Sector, SuperpotentialSpec};
