//! Well-balanced finite-volume solver for the 2D shallow water equations
//! with topography and Manning friction.
//!
//! The library provides:
//! - a first-order two-step scheme built on a two-intermediate-state
//!   approximate Riemann solver that exactly preserves discrete steady
//!   states, including lake-at-rest configurations with emerged obstacles
//!   and 1D moving steady states with friction;
//! - arbitrary-order (degrees 0..=5) polynomial reconstruction with Gauss
//!   quadrature fluxes and sources, time-integrated by SSP Runge–Kutta;
//! - a steady-state-detector convex combination that blends the high-order
//!   and first-order schemes so the result is simultaneously high-order and
//!   well-balanced;
//! - a posteriori MOOD limiting (PAD / DMP / u2 detector chain) driving a
//!   per-cell polynomial degree map;
//! - a benchmark case library with error norms, a convergence driver,
//!   snapshot output and a flat-text run configuration.

pub mod cases;
pub mod config;
pub mod driver;
pub mod error;
pub mod grid;
pub mod mood;
pub mod norms;
pub mod quadrature;
pub mod reconstruction;
pub mod riemann;
pub mod scheme_fo;
pub mod scheme_ho;
pub mod snapshot;
pub mod state;
pub mod wb;

pub use error::{Result, SwellError};
pub use grid::{fill_ghosts, AnalyticSolution, BcKind, BoundarySpec, FieldSet, Grid2D};
pub use state::{ConservedState, PhysParams, H_DRY};
