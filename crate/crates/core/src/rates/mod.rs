//! Monte-Carlo rate estimation: expected gap/distance series, closed-form
//! bound evaluation, decay-exponent fitting, and the discretization-order,
//! smoothing-sweep and tail-decay studies.

pub mod bounds;
pub mod estimate;
pub mod series;
pub mod studies;

pub use bounds::*;
pub use estimate::{estimate, EstimateConfig, Quantity};
pub use series::{check_bound, fit_rate, BoundReport, GapSeries, RateFit, RateModel};
pub use studies::{
    as_decay_fraction, conjecture_study, strong_order_study, theta_sweep, ConjectureBranch,
    ConjectureResult, OrderLevelRow, OrderStudyResult, ThetaSweepResult, ThetaSweepRow,
};
