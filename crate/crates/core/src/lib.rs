//! Stochastic gradient flow laboratory.
//!
//! Simulates the gradient SDE `dX = -grad f(X) dt + sigma(t,X) dW` together
//! with its composite (Moreau-smoothed) and cocoercive-operator variants, and
//! estimates convergence rates against the closed-form bounds that each
//! catalog problem certifies.
//!
//! The crate is organized around the experiment pipeline:
//!
//! * [`potentials`] - smooth/nonsmooth convex test problems with analytically
//!   known constants (Lipschitz, strong convexity, error-bound and gradient
//!   inequality exponents), so every run has ground truth.
//! * [`smoothing`] - Moreau envelope calculus: envelope values/gradients via
//!   prox, strong-convexity transfer, approximation gaps, minimizer drift and
//!   the smoothing-parameter schedules.
//! * [`operators`] - resolvents, forward-backward operators, cocoercivity
//!   constants and Holder metric subregularity checks.
//! * [`sde`] - seeded Brownian paths on dyadic grids with refinement, the
//!   explicit Euler-Maruyama sweep, volatility schedules and interpolants.
//! * [`rates`] - Monte-Carlo estimation of expected gaps/distances, the bound
//!   evaluators, decay-rate fitting, and the step-size/theta/decay studies.
//!
//! Everything is deterministic given a seed: randomness flows through a
//! counter-based generator, so identical configurations reproduce identical
//! outputs regardless of worker count.

// parameter guards are written as `!(x > 0.0)` so NaN inputs are rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod operators;
pub mod potentials;
pub mod rates;
pub mod report;
pub mod sde;
pub mod smoothing;

pub use error::SgfError;
pub use report::BooleanReport;

/// Result alias used across the crate.
pub type Result<T> = std::result::Result<T, SgfError>;
