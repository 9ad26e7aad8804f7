//! Action-sampling and payoff-sampling revision dynamics for two-population
//! generalized hawk–dove games.
//!
//! The crate is organised bottom-up:
//!
//! * [`game`]: payoffs, population states and the mixed Nash benchmark.
//! * [`sampling`]: sample-size distributions, best replies to raw samples and
//!   the single-deviation thresholds.
//! * [`response`]: the response polynomials `w(p)` (Bernstein basis), their
//!   derivatives and inverses.
//! * [`equilibria`]: stationary states, Jacobian classification and the
//!   closed-form stability tests.
//! * [`flow`]: RK4 integration of the mean dynamics, basin estimation, the
//!   replicator baseline and phase-portrait data.
//! * [`abm`]: the finite-population stochastic counterpart.
//!
//! Numerical code is generic over [`Scalar`]; the `*64` aliases below fix the
//! scalar to `f64`, which is what the CLI and the agent-based model use.

pub mod abm;
pub mod binomial;
pub mod equilibria;
pub mod error;
pub mod flow;
pub mod game;
pub mod poly;
pub mod response;
pub mod sampling;
pub mod scalar;
pub mod stats;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub use equilibria::{Label, PureStability, StationaryReport, StationaryState, Verdict};
pub use game::{Action, Game, State, ValidationMode};
pub use response::{Environment, ResponseFunction, ResponseKind};
pub use sampling::{DynamicsKind, SampleDistribution, Strictness, Thresholds, TieRule};

pub type Game64 = game::Game<f64>;
pub type Game32 = game::Game<f32>;
pub type State64 = game::State<f64>;
pub type State32 = game::State<f32>;
pub type Distribution64 = sampling::SampleDistribution<f64>;
pub type Distribution32 = sampling::SampleDistribution<f32>;
pub type Environment64 = response::Environment<f64>;
pub type Response64 = response::ResponseFunction<f64>;
pub type Response32 = response::ResponseFunction<f32>;
pub type Bernstein64 = poly::Bernstein<f64>;
pub type Stationary64 = equilibria::StationaryState<f64>;
pub type Report64 = equilibria::StationaryReport<f64>;
pub type Trajectory64 = flow::TrajectoryResult<f64>;
pub type Basins64 = flow::BasinEstimate<f64>;
