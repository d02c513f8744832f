//! Explicit Euler-Maruyama integration of drift-plus-noise dynamics.
//!
//! The scheme is the left-endpoint update
//! `x_{k+1} = x_k - h * drift(x_k) + sigma(t_k, x_k) * dW_k`
//! on the dyadic grid of a [`BrownianPath`]. Running averages use
//! left-Riemann sums, which are exact for the piecewise-constant
//! interpolant of the iterates.

use serde::Serialize;

use crate::error::SgfError;
use crate::operators::CocoerciveOperator;
use crate::potentials::SmoothPotential;
use crate::sde::brownian::BrownianPath;
use crate::sde::volatility::VolatilitySchedule;
use crate::smoothing::CompositeSmoothed;
use crate::Result;

/// State-norm guard: anything past this is reported as divergence.
pub const DIVERGENCE_GUARD: f64 = 1e12;

/// What drives the dynamics.
#[derive(Debug, Clone)]
pub enum Problem {
    /// `dX = -grad f(X) dt + sigma dW`
    Smooth(SmoothPotential),
    /// `dX = -grad (f + g_theta)(X) dt + sigma dW`
    Composite(CompositeSmoothed),
    /// `dX = -M(X) dt + sigma dW`
    Operator(CocoerciveOperator),
}

impl Problem {
    pub fn dim(&self) -> usize {
        match self {
            Problem::Smooth(f) => f.dim,
            Problem::Composite(c) => c.dim(),
            Problem::Operator(m) => m.dim,
        }
    }

    /// Drift direction (the update subtracts `h * drift`).
    pub fn drift_into(&self, x: &[f64], out: &mut [f64], scratch: &mut [f64]) {
        match self {
            Problem::Smooth(f) => f.gradient_into(x, out),
            Problem::Composite(c) => c.gradient_into(x, out, scratch),
            Problem::Operator(m) => m.apply_into(x, out),
        }
    }

    /// Scalar recorded alongside the states: the driving objective for
    /// potential flows, the squared operator norm for operator flows.
    pub fn record_scalar(&self, x: &[f64], scratch: &mut [f64]) -> f64 {
        match self {
            Problem::Smooth(f) => f.value(x),
            Problem::Composite(c) => c.value(x),
            Problem::Operator(m) => {
                m.apply_into(x, scratch);
                scratch.iter().map(|v| v * v).sum()
            }
        }
    }

    /// Floor subtracted from the recorded scalar to form the gap column.
    /// For composite flows `min f + min g` is used, a lower bound on the
    /// smoothed minimum, so the column stays nonnegative.
    pub fn record_floor(&self) -> f64 {
        match self {
            Problem::Smooth(f) => f.min_value,
            Problem::Composite(c) => c.smooth.min_value + c.envelope.base.min_value,
            Problem::Operator(_) => 0.0,
        }
    }
}

/// Interpolation mode tag carried by recorded trajectories.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Interpolation {
    PiecewiseConstant,
    PiecewiseLinear,
}

/// A recorded trajectory. States, running state averages and the running
/// average of the recorded scalar are stored at every `record_stride`-th grid
/// node plus the final node.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub dim: usize,
    pub horizon: f64,
    pub level: u32,
    pub record_stride: usize,
    pub mode: Interpolation,
    /// Recorded times (multiples of the stride, then the horizon).
    pub times: Vec<f64>,
    /// Row-major states, one row of `dim` per recorded time.
    pub states: Vec<f64>,
    /// Row-major running averages `(1/t) int_0^t X`, left-Riemann.
    pub running_average: Vec<f64>,
    /// Running average of the recorded scalar `(1/t) int_0^t phi(X)`.
    pub running_objective_average: Vec<f64>,
    /// Recorded scalar `phi(x_k)` at each recorded node.
    pub objective: Vec<f64>,
    /// Floor for the gap column.
    pub objective_floor: f64,
    /// Largest Frobenius norm squared of sigma seen along the path.
    pub max_sigma_frobenius_sq: f64,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn state(&self, i: usize) -> &[f64] {
        &self.states[i * self.dim..(i + 1) * self.dim]
    }

    pub fn average(&self, i: usize) -> &[f64] {
        &self.running_average[i * self.dim..(i + 1) * self.dim]
    }

    pub fn gap(&self, i: usize) -> f64 {
        self.objective[i] - self.objective_floor
    }
}

/// One explicit step `x - h * drift + sigma_action(dW)`.
///
/// `step` only labels the error; the state update itself is pure.
pub fn em_step(
    x: &[f64],
    grad_drift: &[f64],
    h: f64,
    sigma_action: impl FnOnce(&[f64]) -> Vec<f64>,
    dw: &[f64],
    step: usize,
) -> Result<Vec<f64>> {
    if !(h > 0.0) {
        return Err(SgfError::InvalidParameter(format!(
            "step size must be positive, got {h}"
        )));
    }
    let noise = sigma_action(dw);
    let mut out = Vec::with_capacity(x.len());
    for i in 0..x.len() {
        let v = x[i] - h * grad_drift[i] + noise[i];
        if !v.is_finite() {
            return Err(SgfError::NumericFailure {
                step,
                detail: format!("coordinate {i} became non-finite"),
            });
        }
        out.push(v);
    }
    Ok(out)
}

/// Full Euler-Maruyama sweep over the path grid.
///
/// `level` selects the integration grid `h = T * 2^-level`; the path must be
/// at the same or a finer level, and its increments are consumed at the
/// matching stride so coarse and fine runs of the same path are exactly
/// coupled.
pub fn simulate(
    problem: &Problem,
    vol: &VolatilitySchedule,
    x0: &[f64],
    horizon: f64,
    level: u32,
    path: &BrownianPath,
    record_stride: usize,
) -> Result<Trajectory> {
    let dim = problem.dim();
    if x0.len() != dim || vol.dim != dim || path.dim() != dim {
        return Err(SgfError::InvalidParameter(format!(
            "dimension mismatch: problem {dim}, x0 {}, vol {}, path {}",
            x0.len(),
            vol.dim,
            path.dim()
        )));
    }
    if path.horizon() != horizon {
        return Err(SgfError::InvalidParameter(format!(
            "path horizon {} differs from requested {horizon}",
            path.horizon()
        )));
    }
    if path.level() < level {
        return Err(SgfError::InvalidParameter(format!(
            "path level {} coarser than requested {level}",
            path.level()
        )));
    }
    if record_stride == 0 {
        return Err(SgfError::InvalidParameter("record_stride must be >= 1".into()));
    }

    let n = 1usize << level;
    let h = horizon / n as f64;
    let path_stride = 1usize << (path.level() - level);

    let mut x = x0.to_vec();
    let mut drift = vec![0.0; dim];
    let mut scratch = vec![0.0; dim];
    let mut dw = vec![0.0; dim];
    let mut cum_state = vec![0.0; dim];
    let mut cum_obj = 0.0;

    let reserve = n / record_stride + 2;
    let mut traj = Trajectory {
        dim,
        horizon,
        level,
        record_stride,
        mode: Interpolation::PiecewiseConstant,
        times: Vec::with_capacity(reserve),
        states: Vec::with_capacity(reserve * dim),
        running_average: Vec::with_capacity(reserve * dim),
        running_objective_average: Vec::with_capacity(reserve),
        objective: Vec::with_capacity(reserve),
        objective_floor: problem.record_floor(),
        max_sigma_frobenius_sq: 0.0,
    };

    for k in 0..n {
        let t = k as f64 * h;
        problem.drift_into(&x, &mut drift, &mut scratch);

        // left-Riemann accumulation over [t_k, t_k + h)
        let phi = problem.record_scalar(&x, &mut scratch);
        for (acc, xi) in cum_state.iter_mut().zip(&x) {
            *acc += xi * h;
        }
        cum_obj += phi * h;

        path.increment_into(k, path_stride, &mut dw);
        let s = vol.scalar_at(t, &x);
        traj.max_sigma_frobenius_sq = traj.max_sigma_frobenius_sq.max(dim as f64 * s * s);

        let mut norm_sq = 0.0;
        for j in 0..dim {
            let v = x[j] - h * drift[j] + s * dw[j];
            if !v.is_finite() {
                return Err(SgfError::NumericFailure {
                    step: k,
                    detail: format!("coordinate {j} became non-finite"),
                });
            }
            x[j] = v;
            norm_sq += v * v;
        }
        if norm_sq > DIVERGENCE_GUARD * DIVERGENCE_GUARD {
            return Err(SgfError::Divergence {
                step: k,
                norm: norm_sq.sqrt(),
            });
        }

        let k1 = k + 1;
        if k1 % record_stride == 0 || k1 == n {
            let t1 = k1 as f64 * h;
            traj.times.push(t1);
            traj.states.extend_from_slice(&x);
            traj.running_average.extend(cum_state.iter().map(|c| c / t1));
            traj.running_objective_average.push(cum_obj / t1);
            traj.objective.push(problem.record_scalar(&x, &mut scratch));
        }
    }

    Ok(traj)
}

/// Piecewise-constant and drift-plus-noise piecewise-linear views of a
/// trajectory recorded on the full grid (`record_stride = 1`).
///
/// The linear view on `[t_k, t_k + h)` is
/// `x_k - (t - t_k) grad(x_k) + sigma(t_k, x_k) (W(t) - W(t_k))`,
/// with `W` read from the (possibly finer) driving path, so both views can
/// be evaluated on a refined common grid.
pub struct PathInterpolant<'a> {
    problem: &'a Problem,
    vol: &'a VolatilitySchedule,
    traj: &'a Trajectory,
    path: &'a BrownianPath,
    x0: Vec<f64>,
}

impl<'a> PathInterpolant<'a> {
    pub fn new(
        problem: &'a Problem,
        vol: &'a VolatilitySchedule,
        traj: &'a Trajectory,
        path: &'a BrownianPath,
        x0: &[f64],
    ) -> Result<Self> {
        if traj.record_stride != 1 {
            return Err(SgfError::Unsupported(
                "interpolants need a trajectory recorded on the full grid".into(),
            ));
        }
        if path.horizon() != traj.horizon || path.level() < traj.level {
            return Err(SgfError::InvalidParameter(
                "driving path must cover the trajectory grid".into(),
            ));
        }
        Ok(PathInterpolant {
            problem,
            vol,
            traj,
            path,
            x0: x0.to_vec(),
        })
    }

    fn grid_state(&self, k: usize) -> &[f64] {
        if k == 0 {
            &self.x0
        } else {
            self.traj.state(k - 1)
        }
    }

    /// Evaluates `(x_hat, x_tilde)` at `t`. Brownian values are read at the
    /// nearest node of the path's finest grid.
    pub fn at(&self, t: f64) -> Result<(Vec<f64>, Vec<f64>)> {
        let horizon = self.traj.horizon;
        if !(0.0..=horizon).contains(&t) {
            return Err(SgfError::OutOfRange(format!(
                "t = {t} outside [0, {horizon}]"
            )));
        }
        let n = 1usize << self.traj.level;
        let h = horizon / n as f64;
        // clamp to n so the right endpoint maps onto the final iterate
        let k = ((t / h).floor() as usize).min(n);
        let t_k = k as f64 * h;

        let x_hat = self.grid_state(k).to_vec();

        let dim = self.traj.dim;
        let mut drift = vec![0.0; dim];
        let mut scratch = vec![0.0; dim];
        self.problem.drift_into(&x_hat, &mut drift, &mut scratch);
        let s = self.vol.scalar_at(t_k, &x_hat);

        // W(t) at the nearest fine node, W(t_k) exactly at a shared node
        let fine_n = self.path.steps();
        let fine_h = horizon / fine_n as f64;
        let node_t = ((t / fine_h).round() as usize).min(fine_n);
        let stride = 1usize << (self.path.level() - self.traj.level);
        let w_t = self.path.node(node_t);
        let w_k = self.path.node(k * stride);

        let dt = t - t_k;
        let mut x_tilde = Vec::with_capacity(dim);
        for j in 0..dim {
            x_tilde.push(x_hat[j] - dt * drift[j] + s * (w_t[j] - w_k[j]));
        }
        Ok((x_hat, x_tilde))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potentials::{NonsmoothTerm, SmoothPotential};
    use crate::smoothing::{CompositeSmoothed, MoreauEnvelope};

    fn half_x_sq() -> SmoothPotential {
        SmoothPotential::quadratic(&[1.0], &[0.0]).unwrap()
    }

    #[test]
    fn em_step_examples() {
        // sigma = 0: deterministic Euler on f = x^2/2
        let out = em_step(&[1.0], &[1.0], 0.1, |_| vec![0.0], &[0.0], 0).unwrap();
        assert!((out[0] - 0.9).abs() < 1e-15);
        // scalar sigma = 0.5, dW = 0.2 adds 0.1
        let out = em_step(&[1.0], &[1.0], 0.1, |dw| vec![0.5 * dw[0]], &[0.2], 0).unwrap();
        assert!((out[0] - 1.0).abs() < 1e-15);
        // h -> 0 with no noise leaves x unchanged (up to the h * drift term)
        let out = em_step(&[1.0], &[1.0], 1e-300, |_| vec![0.0], &[0.0], 0).unwrap();
        assert_eq!(out[0], 1.0);
        // errors
        assert!(em_step(&[1.0], &[1.0], 0.0, |_| vec![0.0], &[0.0], 0).is_err());
        let bad = em_step(&[f64::NAN], &[1.0], 0.1, |_| vec![0.0], &[0.0], 7);
        assert!(matches!(bad, Err(SgfError::NumericFailure { step: 7, .. })));
    }

    #[test]
    fn noiseless_run_matches_exact_gradient_flow() {
        // x(t) = x0 e^-t for f = x^2/2; Euler error is O(h)
        let f = Problem::Smooth(half_x_sq());
        let vol = VolatilitySchedule::zero(1);
        for level in [6u32, 8, 10] {
            let path = BrownianPath::sample(0, 0, 2.0, level, 1).unwrap();
            let traj = simulate(&f, &vol, &[1.0], 2.0, level, &path, 1).unwrap();
            let last = traj.state(traj.len() - 1)[0];
            let h = 2.0 / (1 << level) as f64;
            assert!(
                (last - (-2.0f64).exp()).abs() < 2.0 * h,
                "level {level}: {last}"
            );
        }
    }

    #[test]
    fn operator_drift_equals_gradient_drift_when_g_is_zero() {
        use crate::potentials::CompositeProblem;
        // with mu = 1 and g = 0 the forward-backward operator is grad f
        let pair = CompositeProblem {
            f: half_x_sq(),
            g: NonsmoothTerm::zero(1),
            min_value: 0.0,
            minimizer: vec![0.0],
            coercivity: None,
        };
        let op = CocoerciveOperator::forward_backward(&pair, 1.0).unwrap();
        let vol = VolatilitySchedule::constant(1, 0.4).unwrap();
        let path = BrownianPath::sample(5, 3, 1.0, 7, 1).unwrap();
        let a = simulate(&Problem::Smooth(half_x_sq()), &vol, &[1.0], 1.0, 7, &path, 1).unwrap();
        let b = simulate(&Problem::Operator(op), &vol, &[1.0], 1.0, 7, &path, 1).unwrap();
        assert_eq!(a.states, b.states); // bitwise: same path, same drift values
    }

    #[test]
    fn running_average_is_left_riemann() {
        let f = Problem::Smooth(half_x_sq());
        let vol = VolatilitySchedule::constant(1, 0.3).unwrap();
        let path = BrownianPath::sample(11, 0, 1.0, 5, 1).unwrap();
        let traj = simulate(&f, &vol, &[2.0], 1.0, 5, &path, 1).unwrap();
        let h = 1.0 / 32.0;
        // reconstruct the average at index i from the recorded states
        let mut acc = 2.0 * h; // x0 over the first cell
        for i in 0..traj.len() - 1 {
            let t = traj.times[i + 1];
            acc += traj.state(i)[0] * h;
            let avg = traj.average(i + 1)[0];
            assert!((avg - acc / t).abs() < 1e-13);
        }
    }

    #[test]
    fn average_norm_inequality_chain_holds_per_path() {
        // |avg X|^2 <= (avg |X|)^2 <= avg |X|^2 along recorded paths
        let f = Problem::Smooth(SmoothPotential::quadratic(&[1.0, 2.0], &[0.0, 0.0]).unwrap());
        let vol = VolatilitySchedule::constant(2, 0.5).unwrap();
        for p in 0..20 {
            let path = BrownianPath::sample(21, p, 2.0, 7, 2).unwrap();
            let traj = simulate(&f, &vol, &[1.0, -1.0], 2.0, 7, &path, 1).unwrap();
            let h = 2.0 / 128.0;
            let mut cum_norm = 1.0f64.hypot(1.0) * h;
            let mut cum_norm_sq = 2.0 * h;
            for i in 0..traj.len() - 1 {
                let t = traj.times[i + 1];
                let x = traj.state(i);
                let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
                cum_norm += norm * h;
                cum_norm_sq += norm * norm * h;
                let avg = traj.average(i + 1);
                let avg_sq: f64 = avg.iter().map(|v| v * v).sum();
                let mean_norm = cum_norm / t;
                let mean_norm_sq = cum_norm_sq / t;
                assert!(avg_sq <= mean_norm * mean_norm + 1e-12);
                assert!(mean_norm * mean_norm <= mean_norm_sq + 1e-12);
            }
        }
    }

    #[test]
    fn sigma_envelope_never_exceeded_on_recorded_runs() {
        let f = Problem::Smooth(half_x_sq());
        let vol = VolatilitySchedule::multiplicative(1, 0.6, 0.3).unwrap();
        let path = BrownianPath::sample(2, 9, 2.0, 8, 1).unwrap();
        let traj = simulate(&f, &vol, &[0.7], 2.0, 8, &path, 1).unwrap();
        assert!(traj.max_sigma_frobenius_sq <= vol.sigma_star_sq() + 1e-15);
    }

    #[test]
    fn composite_drift_consistency() {
        // simulating F_theta must equal simulating a smooth potential whose
        // gradient is grad f + grad g_theta evaluated the same way
        let f = half_x_sq();
        let env = MoreauEnvelope::new(NonsmoothTerm::abs_l1(1).unwrap(), 0.5).unwrap();
        let comp = CompositeSmoothed::new(f.clone(), env.clone()).unwrap();
        let vol = VolatilitySchedule::constant(1, 0.2).unwrap();
        let path = BrownianPath::sample(8, 1, 1.0, 6, 1).unwrap();
        let traj = simulate(&Problem::Composite(comp), &vol, &[2.0], 1.0, 6, &path, 1).unwrap();
        // manual replay
        let mut x = 2.0;
        let h = 1.0 / 64.0;
        let mut dw = vec![0.0];
        for k in 0..64 {
            path.increment_into(k, 1, &mut dw);
            let drift = f.gradient(&[x])[0] + env.gradient(&[x])[0];
            x = x - h * drift + 0.2 * dw[0];
        }
        let last = traj.state(traj.len() - 1)[0];
        assert!((last - x).abs() < 1e-14);
    }

    #[test]
    fn divergence_guard_trips() {
        // unstable step: h * L = 2^2 * 50 >> 2 blows up deterministically
        let f = Problem::Smooth(SmoothPotential::quadratic(&[50.0], &[0.0]).unwrap());
        let vol = VolatilitySchedule::zero(1);
        let path = BrownianPath::sample(0, 0, 64.0, 4, 1).unwrap();
        let err = simulate(&f, &vol, &[1.0], 64.0, 4, &path, 1).unwrap_err();
        assert!(matches!(err, SgfError::Divergence { .. }));
    }

    #[test]
    fn interpolants_at_grid_and_midpoints() {
        let f = Problem::Smooth(half_x_sq());
        let vol = VolatilitySchedule::zero(1);
        let mut path = BrownianPath::sample(4, 2, 1.0, 5, 1).unwrap();
        path.refine(); // make midpoints available
        let traj = simulate(&f, &vol, &[1.0], 1.0, 5, &path, 1).unwrap();
        let interp = PathInterpolant::new(&f, &vol, &traj, &path, &[1.0]).unwrap();

        let h = 1.0 / 32.0;
        // at grid nodes both views agree with the iterate
        for k in [0usize, 7, 31] {
            let (hat, tilde) = interp.at(k as f64 * h).unwrap();
            let x_k = if k == 0 { 1.0 } else { traj.state(k - 1)[0] };
            assert!((hat[0] - x_k).abs() < 1e-15);
            assert!((tilde[0] - x_k).abs() < 1e-15);
        }
        // sigma = 0 midway: x_tilde = x_k - (t - t_k) grad f(x_k)
        let k = 3;
        let t = (k as f64 + 0.5) * h;
        let x_k = traj.state(k - 1)[0];
        let (hat, tilde) = interp.at(t).unwrap();
        assert_eq!(hat[0], x_k);
        assert!((tilde[0] - (x_k - 0.5 * h * x_k)).abs() < 1e-14);

        assert!(interp.at(-0.1).is_err());
        assert!(interp.at(1.1).is_err());
    }

    #[test]
    fn constant_gap_between_views_shrinks_with_h() {
        // E sup |x_hat - x_tilde|^2 over the grid scales like h
        let vol = VolatilitySchedule::constant(1, 0.5).unwrap();
        let f = Problem::Smooth(half_x_sq());
        let mut sups = Vec::new();
        for level in [4u32, 6, 8] {
            let mut acc = 0.0;
            let n_paths = 200;
            for p in 0..n_paths {
                let mut path = BrownianPath::sample(77, p, 1.0, level, 1).unwrap();
                path.refine();
                let traj = simulate(&f, &vol, &[1.0], 1.0, level, &path, 1).unwrap();
                let interp = PathInterpolant::new(&f, &vol, &traj, &path, &[1.0]).unwrap();
                let fine_n = 2usize << level;
                let fine_h = 1.0 / fine_n as f64;
                let mut sup = 0.0f64;
                for j in 0..=fine_n {
                    let (hat, tilde) = interp.at(j as f64 * fine_h).unwrap();
                    sup = sup.max((hat[0] - tilde[0]).powi(2));
                }
                acc += sup;
            }
            sups.push(acc / n_paths as f64);
        }
        // halving h four times should cut the sup gap roughly 4x each stage;
        // accept anything clearly decreasing at near-linear rate
        assert!(sups[1] < 0.5 * sups[0], "{sups:?}");
        assert!(sups[2] < 0.5 * sups[1], "{sups:?}");
    }
}
