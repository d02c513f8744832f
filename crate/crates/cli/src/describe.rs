//! Text descriptions of studies and problems: parameters, defaults, and the
//! guarantee each study checks, with its bound formula.

use crate::CliError;

const DESCRIPTIONS: &[(&str, &str)] = &[
    (
        "simulate",
        "simulate - integrate one or more seeded sample paths and export them.

Dynamics: dX = -drift(X) dt + sigma(t, X) dW, explicit left-endpoint update
x_{k+1} = x_k - h drift(x_k) + sigma(t_k, x_k) dW_k on the grid h = T 2^-level.
Problems: quadratic | power (gradient drift), composite (smoothed gradient
drift at --theta, default 0.1).
Keys: problem.*, vol.*, x0, T (10), level (9), paths (1), stride (8).
Output: path_NNNN.csv with columns t,x_0..x_{d-1},favg,gap.",
    ),
    (
        "estimate",
        "estimate - Monte-Carlo estimate of an expected quantity with 95% CIs,
optionally checked against a closed-form bound and fitted for its decay rate.

Quantities (--quantity): ergodic-gap (default), gap, dist2.
Bounds (--bound, default auto):
  ergodic-convex        dist0^2/(2t) + sigma*^2/2         [time-averaged gap]
  strongly-convex       dist0^2 e^{-2 mu t} + sigma*^2/(2 mu)
  strongly-convex-split dist0^2 e^{-2 mu t} + (sigma*^2/2mu) e^{-2 mu (1-lambda) t}
                        + sigma_inf(lambda t)^2           [--lambda, default 0.5]
  pointwise-beta        dist0^2/(2t) + (K max(1,L)/2) t^{beta-1}
                        [needs a decreasing square-integrable envelope]
sigma*^2 is the squared Frobenius envelope of the volatility (dimension folded in).
Violations are counted one-sidedly: mean - ci > bound.
Keys: estimate.quantity, estimate.bound, bound.lambda, fit.model (none|power|exp),
fit.lo, fit.hi, plus problem.*, vol.*, x0, T, level, paths (1000), stride.
Output: series.csv with columns t,mean,ci,bound.",
    ),
    (
        "order",
        "order - strong discretization-order study with coupled Brownian paths.

Each coarse level is integrated on the same refined path as the finest level;
reports E sup_k |X_L - X_fine|^2 over shared nodes and the objective-gap
error |f(avg X_L(T)) - f(avg X_fine(T))|, with log-log slope fits.
Expected state-error orders: ~1/2 with multiplicative (state-dependent) noise,
~1 with additive noise (superconvergence of the explicit scheme); the
objective-gap error shrinks like h^{1/2} and must decrease level to level.
Keys: order.levels (6,7,8,9,10,13; the largest is the reference grid and
should sit a few levels below the measured ones), vol.kind
(multiplicative recommended), paths (2000).
Output: order.csv with columns level,h,state_err_sq,gap_err.",
    ),
    (
        "theta-sweep",
        "theta-sweep - smoothing-parameter sweep on a composite problem F = f + g.

For each theta the smoothed dynamics (drift -grad f - grad g_theta) runs to T
and the TRUE objective gap F(avg X(t)) - min F is checked against
    C0^2/(2t) + sigma*^2/2 + theta L0^2/2,
where C0 = |x0| + C bounds the initial distance to every smoothed solution
set (C from the coercivity certificate) and L0 is the Lipschitz constant of
g. Also reports the epsilon-schedule recommendation
theta = min(sigma*^2, eps)/L0^2, t >= C0^2/(2 eps).
Keys: sweep.thetas (0.5,0.1,0.02), sweep.epsilon (0.01), problem.g = l1
(indicator terms carry no finite L0 and are rejected), paths (2000).
Output: sweep.csv summary plus sweep_theta_N.csv series.",
    ),
    (
        "coco",
        "coco - cocoercive-operator dynamics dX = -M(X) dt + sigma dW, where M is
the forward-backward operator of the composite pair at step --mu:
    M(x) = (x - prox_{mu g}(x - mu grad f(x))) / mu,  0 < mu < 2/L.
M is rho-cocoercive with rho = mu (1 - mu/(4 lambda)), lambda = 1/L, and its
zeros are exactly the composite minimizers. Tracks the time-averaged squared
operator norm against
    dist(X0, M^{-1}(0))^2/(2 rho t) + sigma*^2/(2 rho).
Keys: coco.mu (1.0), estimate.quantity (ergodic-opnorm2 | opnorm2),
problem.* (composite), vol.*, paths (1000).
Output: series.csv.",
    ),
    (
        "conjecture",
        "conjecture - EXPLORATORY tail-decay experiment on f = |x|^r, r > 2.

With gradient-inequality exponent q = 1 - 1/r and noise matched as
sigma_inf^2 = O((t+1)^{-b/(b-1)}), b = 2q, the pointwise objective gap is
conjectured to decay like t^{-1/(2q-1)}. The study fits the tail exponent and
reports its distance to the conjectured value; r = 4 targets exponent -2.
r = 2 redirects to an exponential fit (quadratic curvature regime).
This study never gates acceptance.
Keys: problem.r (4), vol.sigma0 (0.3), T (200), level (12), paths (200).",
    ),
    (
        "check",
        "check - runs the invariant suites and prints a pass/fail table.

Potentials: gradient vs centered finite differences (1e-5 relative),
gradient Lipschitz, strong-convexity lower bound, |grad f|^2 <= 2L(f - min),
gradient inequality mu (f-min)^q <= |grad f| with the equivalent Holderian
error bound, and the declared error-bound coefficient.
Prox/envelope: variational characterization of the prox, envelope
under-approximation, (theta/2) D^2 gap, monotonicity in theta, gradient
identity. Operators: empirical cocoercivity at mu in {lambda/2, lambda,
3 lambda/2} on 10^4 pairs and zero-consistency at the composite minimizer.
Keys: check.samples (1000), problem.*.
Output: check.json. Any failing check exits with code 3.",
    ),
    (
        "quadratic",
        "quadratic - f(x) = 1/2 sum_i lambda_i (x_i - c_i)^2, all lambda_i > 0.

Constants: L = max lambda, mu = min lambda, min f = 0, argmin = {c}.
Certificates: error bound f - min >= (mu/2) dist^2 (p = 2, gamma = mu/2);
gradient inequality sqrt(2 mu) (f - min)^{1/2} <= |grad f| (q = 1/2).
Keys: problem.eigenvalues (1), problem.center (zeros).",
    ),
    (
        "power",
        "power - f(x) = |x|^r with r >= 2.

Gradient r |x|^{r-2} x; exact certificates with coefficient 1/r-free forms:
gradient inequality with q = 1 - 1/r and mu = r, error bound with p = r and
gamma = 1. For r > 2 the gradient is only locally Lipschitz: L is taken on
the unit ball and experiments start inside it.
Keys: problem.r (4), problem.dim (1).",
    ),
    (
        "composite",
        "composite - F(x) = 1/2 sum lambda_i (x_i - c_i)^2 + g(x).

g = l1 (weight w): minimizer soft(c_i, w/lambda_i) coordinatewise, known
min F, coercivity certificate F >= w |x|; L0 = D = w sqrt(d).
g = box indicator: minimizer clamps the center; no finite L0/D, so studies
requiring them (theta-sweep) reject it with a typed error.
Keys: problem.eigenvalues (1), problem.center (1), problem.g (l1),
problem.l1_weight (1), problem.box_lo/box_hi (-1/1).",
    ),
];

pub fn describe(name: &str) -> Result<String, CliError> {
    match DESCRIPTIONS.iter().find(|(n, _)| *n == name) {
        Some((_, text)) => Ok(format!("{text}\n")),
        None => {
            let names: Vec<&str> = DESCRIPTIONS.iter().map(|(n, _)| *n).collect();
            Err(CliError::Validation(format!(
                "unknown name '{name}'; describable: {}",
                names.join(", ")
            )))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn describes_carry_the_formulas() {
        assert!(describe("theta-sweep").unwrap().contains("theta L0^2/2"));
        let order = describe("order").unwrap();
        assert!(order.contains("~1/2") && order.contains("~1"));
        let quad = describe("quadratic").unwrap();
        assert!(quad.contains("q = 1/2") && quad.contains("p = 2"));
        assert!(describe("nope").is_err());
    }
}
