//! Exact analysis and simulation of the one-parameter floor map
//! `f(x) = floor(lambda * x)` over the rationals.
//!
//! - [`rational`]: exact rationals and the floor function.
//! - [`analysis`]: parameter regions, fixed points, predicted limits and basins.
//! - [`orbit`]: orbit simulation with proof-carrying divergence certificates.
//! - [`verify`]: suites that check the closed forms against simulation.
//! - [`cli`]: the `floordyn` command-line interface.

pub mod analysis;
pub mod cli;
pub mod orbit;
pub mod rational;
pub mod verify;

pub use analysis::{
    basin_decomposition, classify_lambda, fixed_points, predict_limit, BasinDecomposition, FixedPointSet,
    LambdaRegion, LimitBehavior, Sign,
};
pub use orbit::{apply_map, certify_divergence, cobweb_points, omega_limit, simulate_orbit, Classification, Orbit};
pub use rational::{Integer, Rational};
