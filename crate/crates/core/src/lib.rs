//! Propagator-series solver for abstract Nth-order Cauchy problems
//! `d^N u / dt^N = G u` on periodic grids.
//!
//! The solution is built from generalized hyperbolic series
//! `H_{N,j}(z) = sum_n z^{Nn+j} / (Nn+j)!` applied to the operator G: the
//! state at time t is `sum_j (t-t0)^j Phi_{N,j}(t-t0, G) u_j`, where `u_j` is
//! the j-th prescribed time derivative at t0. The [`oracles`] module carries
//! independent reference solutions (companion-system RK4, spectral
//! translation, d'Alembert's formula) used to cross-check the series path.

pub mod config;
mod dd;
pub mod error;
pub mod fourier;
pub mod grid;
pub mod hyper;
pub mod operator;
pub mod oracles;
pub mod propagator;
pub mod runner;

pub use error::{Error, Result};
pub use grid::{Grid, GridFunction};
pub use hyper::scalar_h;
pub use operator::OperatorSpec;
pub use propagator::{
    apply_phi, derivative_frames, propagate, propagate_order2_closed, substep_propagate,
    CauchyProblem, SeriesParams, SolutionFrame,
};
