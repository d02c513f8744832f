//! Path-level simulation: seeded Brownian paths, volatility schedules and the
//! explicit Euler-Maruyama engine.

pub mod brownian;
pub mod engine;
pub mod rng;
pub mod volatility;

pub use brownian::BrownianPath;
pub use engine::{em_step, simulate, Interpolation, PathInterpolant, Problem, Trajectory};
pub use volatility::{VolKind, VolatilitySchedule};
