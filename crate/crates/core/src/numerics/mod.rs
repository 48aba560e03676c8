//! Shared numerical substrate: grids, sampled complex functions, finite
//! differences, cumulative quadrature, RK4 stepping and scalar root finding.
//!
//! Everything here is a pure function of its inputs.

mod calculus;
mod grid;
mod ode;
mod roots;

pub use calculus::{central_derivative, midpoint_interpolate, trapezoid_cumulative, Derivative};
pub use grid::{Grid, SampledFunction};
pub use ode::{rk4_integrate, rk4_step, Direction};
pub use roots::{golden_section_min, refine_root, solve_depressed_cubic, CubicRoots};
