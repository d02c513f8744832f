//! Path-parallel Monte-Carlo estimation with deterministic reduction.
//!
//! Each path is an independent unit of work keyed by its index; per-path
//! sample vectors are collected in ascending path order and reduced
//! sequentially, so the aggregate is bit-identical at any worker count.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::SgfError;
use crate::rates::series::GapSeries;
use crate::sde::brownian::BrownianPath;
use crate::sde::engine::{simulate, Problem, Trajectory};
use crate::sde::volatility::VolatilitySchedule;
use crate::Result;

/// Which expected quantity a series tracks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Quantity {
    /// `E[phi(X(t)) - min]` pointwise, where `phi` is the driving objective.
    ObjectiveGap,
    /// `E[(1/t) int_0^t phi(X) - min]`, the time-averaged objective gap
    /// (the averaged state's gap is below it by convexity).
    ErgodicObjectiveGap,
    /// `E |X(t) - x*|^2`.
    SqDistance,
    /// `E |M(X(t))|^2` pointwise (operator problems).
    OperatorNormSq,
    /// `E[(1/t) int_0^t |M(X)|^2]` (operator problems).
    ErgodicOperatorNormSq,
}

impl Quantity {
    pub fn label(&self) -> &'static str {
        match self {
            Quantity::ObjectiveGap => "objective_gap",
            Quantity::ErgodicObjectiveGap => "ergodic_objective_gap",
            Quantity::SqDistance => "sq_distance",
            Quantity::OperatorNormSq => "operator_norm_sq",
            Quantity::ErgodicOperatorNormSq => "ergodic_operator_norm_sq",
        }
    }
}

/// Inputs of a Monte-Carlo estimation run.
#[derive(Clone)]
pub struct EstimateConfig {
    pub problem: Problem,
    pub vol: VolatilitySchedule,
    pub x0: Vec<f64>,
    pub horizon: f64,
    pub level: u32,
    pub n_paths: usize,
    pub seed: u64,
    pub record_stride: usize,
}

fn extract(quantity: Quantity, problem: &Problem, traj: &Trajectory) -> Result<Vec<f64>> {
    let floor = traj.objective_floor;
    match quantity {
        Quantity::ObjectiveGap => Ok((0..traj.len()).map(|i| traj.gap(i)).collect()),
        Quantity::ErgodicObjectiveGap => Ok(traj
            .running_objective_average
            .iter()
            .map(|v| v - floor)
            .collect()),
        Quantity::SqDistance => match problem {
            Problem::Smooth(f) => Ok((0..traj.len())
                .map(|i| f.dist_to_argmin(traj.state(i)).powi(2))
                .collect()),
            _ => Err(SgfError::Unsupported(
                "sq_distance needs a smooth problem with a known solution set".into(),
            )),
        },
        Quantity::OperatorNormSq | Quantity::ErgodicOperatorNormSq => match problem {
            Problem::Operator(_) => {
                if quantity == Quantity::OperatorNormSq {
                    // the recorded scalar of operator runs is |M(x)|^2
                    Ok(traj.objective.clone())
                } else {
                    Ok(traj.running_objective_average.clone())
                }
            }
            _ => Err(SgfError::Unsupported(
                "operator norms need an operator-driven problem".into(),
            )),
        },
    }
}

/// Simulates `n_paths` independent trajectories and aggregates the tagged
/// quantity. Any path failure aborts the whole run with its path index
/// attached.
pub fn estimate(config: &EstimateConfig, quantity: Quantity) -> Result<GapSeries> {
    if config.n_paths < 2 {
        return Err(SgfError::InvalidParameter(
            "estimation needs at least two paths".into(),
        ));
    }
    let per_path: Vec<Result<(Vec<f64>, Vec<f64>)>> = (0..config.n_paths)
        .into_par_iter()
        .map(|i| {
            let path = BrownianPath::sample(
                config.seed,
                i as u64,
                config.horizon,
                config.level,
                config.x0.len(),
            )?;
            let traj = simulate(
                &config.problem,
                &config.vol,
                &config.x0,
                config.horizon,
                config.level,
                &path,
                config.record_stride,
            )
            .map_err(|e| attach_path(e, i))?;
            let values = extract(quantity, &config.problem, &traj)?;
            Ok((traj.times, values))
        })
        .collect();

    let mut times: Option<Vec<f64>> = None;
    let mut samples = Vec::with_capacity(config.n_paths);
    for r in per_path {
        let (t, v) = r?;
        if times.is_none() {
            times = Some(t);
        }
        samples.push(v);
    }
    GapSeries::aggregate(quantity, times.unwrap(), &samples)
}

/// Path failures abort the experiment with the offending path index.
fn attach_path(e: SgfError, path_index: usize) -> SgfError {
    match e {
        SgfError::Divergence { step, norm } => SgfError::NumericFailure {
            step,
            detail: format!("path {path_index} diverged (|x| = {norm:.3e})"),
        },
        SgfError::NumericFailure { step, detail } => SgfError::NumericFailure {
            step,
            detail: format!("path {path_index}: {detail}"),
        },
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potentials::SmoothPotential;

    /// Exact second moment of the linear-drift diffusion
    /// `dX = -X dt + s dW`: `E X(t)^2 = x0^2 e^{-2t} + s^2 (1 - e^{-2t}) / 2`.
    fn ou_second_moment(x0: f64, s: f64, t: f64) -> f64 {
        x0 * x0 * (-2.0 * t).exp() + 0.5 * s * s * (1.0 - (-2.0 * t).exp())
    }

    fn base_config(n_paths: usize, sigma0: f64, seed: u64) -> EstimateConfig {
        EstimateConfig {
            problem: Problem::Smooth(SmoothPotential::quadratic(&[1.0], &[0.0]).unwrap()),
            vol: VolatilitySchedule::constant(1, sigma0).unwrap(),
            x0: vec![1.0],
            horizon: 2.0,
            level: 9,
            n_paths,
            seed,
            record_stride: 64,
        }
    }

    #[test]
    fn matches_exact_second_moment_oracle() {
        let config = base_config(4000, 0.5, 31);
        let series = estimate(&config, Quantity::SqDistance).unwrap();
        let i = series.times.len() - 1;
        assert!((series.times[i] - 2.0).abs() < 1e-12);
        let exact = ou_second_moment(1.0, 0.5, 2.0);
        // frozen from the oracle above: 0.141026...
        assert!((exact - 0.14102623).abs() < 1e-7);
        assert!(
            (series.mean[i] - exact).abs() < series.ci_halfwidth[i] + 0.004,
            "mean {} vs exact {exact} (ci {})",
            series.mean[i],
            series.ci_halfwidth[i]
        );
    }

    #[test]
    fn zero_noise_gives_zero_ci_and_deterministic_mean() {
        let config = base_config(8, 0.0, 0);
        let series = estimate(&config, Quantity::SqDistance).unwrap();
        for (m, ci) in series.mean.iter().zip(&series.ci_halfwidth) {
            assert_eq!(*ci, 0.0);
            assert!(*m >= 0.0);
        }
        // deterministic Euler value: x_k = (1 - h)^k
        let h = 2.0 / 512.0;
        let expect = (1.0f64 - h).powi(512).powi(2);
        let last = *series.mean.last().unwrap();
        assert!((last - expect).abs() < 1e-12);
    }

    #[test]
    fn ci_shrinks_with_sqrt_paths() {
        let a = estimate(&base_config(500, 0.5, 7), Quantity::SqDistance).unwrap();
        let b = estimate(&base_config(1000, 0.5, 7), Quantity::SqDistance).unwrap();
        let i = a.times.len() - 1;
        let ratio = b.ci_halfwidth[i] / a.ci_halfwidth[i];
        assert!(
            (0.55..0.9).contains(&ratio),
            "ci ratio {ratio} not near 1/sqrt(2)"
        );
    }

    #[test]
    fn reproducible_at_any_worker_count() {
        let config = base_config(256, 0.4, 99);
        let pool1 = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let pool8 = rayon::ThreadPoolBuilder::new().num_threads(8).build().unwrap();
        let s1 = pool1.install(|| estimate(&config, Quantity::ErgodicObjectiveGap).unwrap());
        let s8 = pool8.install(|| estimate(&config, Quantity::ErgodicObjectiveGap).unwrap());
        assert_eq!(s1.mean, s8.mean);
        assert_eq!(s1.ci_halfwidth, s8.ci_halfwidth);
    }

    #[test]
    fn means_are_nonnegative_for_every_quantity() {
        let config = base_config(64, 0.5, 5);
        for q in [
            Quantity::ObjectiveGap,
            Quantity::ErgodicObjectiveGap,
            Quantity::SqDistance,
        ] {
            let s = estimate(&config, q).unwrap();
            assert!(s.mean.iter().all(|m| *m >= 0.0), "{q:?}");
        }
    }

    #[test]
    fn rejects_single_path_and_mismatched_quantity() {
        let mut config = base_config(1, 0.5, 0);
        assert!(estimate(&config, Quantity::SqDistance).is_err());
        config.n_paths = 4;
        assert!(matches!(
            estimate(&config, Quantity::OperatorNormSq),
            Err(SgfError::Unsupported(_))
        ));
    }
}
