//! Catalog of convex test problems with analytically known constants.
//!
//! Every instance carries its Lipschitz constant, strong-convexity modulus,
//! minimum, closed-form distance to the solution set, and (when they hold)
//! the exponents of the Holderian error bound `f - min f >= gamma dist^p`
//! and the gradient-domination inequality `mu (f - min f)^q <= |grad f|`.
//! That metadata is what makes the rate experiments checkable: the bound
//! evaluators read their constants from here instead of estimating them.

use std::sync::Arc;

use crate::error::SgfError;
use crate::report::BooleanReport;
use crate::sde::rng;
use crate::Result;

pub type ValueFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
pub type GradFn = Arc<dyn Fn(&[f64], &mut [f64]) + Send + Sync>;
pub type DistFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
pub type ProxFn = Arc<dyn Fn(&[f64], f64, &mut [f64]) + Send + Sync>;

/// A smooth convex potential with certified constants.
#[derive(Clone)]
pub struct SmoothPotential {
    pub name: String,
    pub dim: usize,
    value: ValueFn,
    grad: GradFn,
    dist: DistFn,
    /// Lipschitz constant of the gradient (local one on the ball of
    /// `eb_radius` for potentials whose gradient is only locally Lipschitz).
    pub lipschitz_l: f64,
    pub strong_mu: Option<f64>,
    pub min_value: f64,
    /// A representative minimizer, used as the sampling center for checks.
    pub argmin_point: Vec<f64>,
    /// Error-bound exponent p >= 2 and coefficient gamma, when certified.
    pub eb_exponent_p: Option<f64>,
    pub eb_gamma: Option<f64>,
    /// Gradient-inequality exponent q in [1/2, 1) and coefficient mu.
    pub loja_q: Option<f64>,
    pub loja_mu: Option<f64>,
    /// Radius around the minimizer on which the local certificates hold.
    pub eb_radius: Option<f64>,
}

impl std::fmt::Debug for SmoothPotential {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SmoothPotential")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .field("lipschitz_l", &self.lipschitz_l)
            .field("strong_mu", &self.strong_mu)
            .finish()
    }
}

impl SmoothPotential {
    pub fn value(&self, x: &[f64]) -> f64 {
        (self.value)(x)
    }

    pub fn gradient_into(&self, x: &[f64], out: &mut [f64]) {
        (self.grad)(x, out)
    }

    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        self.gradient_into(x, &mut out);
        out
    }

    pub fn dist_to_argmin(&self, x: &[f64]) -> f64 {
        (self.dist)(x)
    }

    pub fn gap(&self, x: &[f64]) -> f64 {
        self.value(x) - self.min_value
    }

    /// `f(x) = 1/2 sum_i lambda_i (x_i - c_i)^2` with all `lambda_i > 0`.
    ///
    /// Constants: `L = max lambda`, `mu = min lambda`, `min = 0`,
    /// `p = 2` with `gamma = mu/2`, `q = 1/2` with `mu_loja = sqrt(2 mu)`.
    pub fn quadratic(eigenvalues: &[f64], center: &[f64]) -> Result<Self> {
        if eigenvalues.is_empty() || eigenvalues.len() != center.len() {
            return Err(SgfError::InvalidProblem(format!(
                "quadratic needs matching eigenvalue/center lengths, got {} and {}",
                eigenvalues.len(),
                center.len()
            )));
        }
        if let Some(bad) = eigenvalues.iter().find(|&&l| !(l > 0.0) || !l.is_finite()) {
            return Err(SgfError::InvalidProblem(format!(
                "quadratic eigenvalues must be positive, got {bad}"
            )));
        }
        let dim = eigenvalues.len();
        let lmax = eigenvalues.iter().cloned().fold(f64::MIN, f64::max);
        let lmin = eigenvalues.iter().cloned().fold(f64::MAX, f64::min);
        let eigs: Arc<[f64]> = eigenvalues.into();
        let c: Arc<[f64]> = center.into();
        let (e1, c1) = (eigs.clone(), c.clone());
        let (e2, c2) = (eigs.clone(), c.clone());
        let c3 = c.clone();
        Ok(SmoothPotential {
            name: format!("quadratic(d={dim})"),
            dim,
            value: Arc::new(move |x| {
                0.5 * x
                    .iter()
                    .zip(e1.iter())
                    .zip(c1.iter())
                    .map(|((xi, li), ci)| li * (xi - ci) * (xi - ci))
                    .sum::<f64>()
            }),
            grad: Arc::new(move |x, out| {
                for i in 0..x.len() {
                    out[i] = e2[i] * (x[i] - c2[i]);
                }
            }),
            dist: Arc::new(move |x| {
                x.iter()
                    .zip(c3.iter())
                    .map(|(xi, ci)| (xi - ci) * (xi - ci))
                    .sum::<f64>()
                    .sqrt()
            }),
            lipschitz_l: lmax,
            strong_mu: Some(lmin),
            min_value: 0.0,
            argmin_point: center.to_vec(),
            eb_exponent_p: Some(2.0),
            eb_gamma: Some(lmin / 2.0),
            loja_q: Some(0.5),
            loja_mu: Some((2.0 * lmin).sqrt()),
            eb_radius: None,
        })
    }

    /// `f(x) = |x|^r` with `r >= 2`.
    ///
    /// Gradient `r |x|^{r-2} x`; `q = 1 - 1/r`, `p = r`, both with
    /// coefficient exactly matching the formula (`mu_loja = r`, `gamma = 1`).
    /// For r > 2 the gradient is only locally Lipschitz: `lipschitz_l` is the
    /// constant on the ball of radius `eb_radius` (default 1), and every
    /// experiment confines its initial condition there.
    pub fn power_norm(dim: usize, r: f64) -> Result<Self> {
        if dim == 0 {
            return Err(SgfError::InvalidProblem("dim must be positive".into()));
        }
        if !(r >= 2.0) || !r.is_finite() {
            return Err(SgfError::InvalidProblem(format!(
                "power exponent must satisfy r >= 2, got {r}"
            )));
        }
        let radius = 1.0f64;
        // |Hess f| <= r(r-1) |x|^{r-2} on the ball
        let local_l = r * (r - 1.0) * radius.powf(r - 2.0);
        let r2 = r;
        let r3 = r;
        Ok(SmoothPotential {
            name: format!("power(r={r}, d={dim})"),
            dim,
            value: Arc::new(move |x| {
                x.iter()
                    .map(|v| v * v)
                    .sum::<f64>()
                    .sqrt()
                    .powf(r2)
            }),
            grad: Arc::new(move |x, out| {
                let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
                if norm == 0.0 {
                    out.fill(0.0);
                } else {
                    let scale = r3 * norm.powf(r3 - 2.0);
                    for i in 0..x.len() {
                        out[i] = scale * x[i];
                    }
                }
            }),
            dist: Arc::new(move |x| x.iter().map(|v| v * v).sum::<f64>().sqrt()),
            lipschitz_l: local_l,
            strong_mu: if r == 2.0 { Some(2.0) } else { None },
            min_value: 0.0,
            argmin_point: vec![0.0; dim],
            eb_exponent_p: Some(r),
            eb_gamma: Some(1.0),
            loja_q: Some(1.0 - 1.0 / r),
            loja_mu: Some(r),
            eb_radius: Some(radius),
        })
    }
}

/// A nonsmooth convex term with an exact proximal map.
#[derive(Clone)]
pub struct NonsmoothTerm {
    pub name: String,
    pub dim: usize,
    value: ValueFn,
    prox: ProxFn,
    /// Global Lipschitz constant; `None` marks it not finite (indicator
    /// terms), and operations needing a finite constant reject such terms.
    pub lipschitz_l0: Option<f64>,
    /// Supremum of minimal-norm subgradients; `None` when not finite.
    pub subgrad_bound_d: Option<f64>,
    pub min_value: f64,
    pub argmin_known: Option<Vec<Vec<f64>>>,
}

impl std::fmt::Debug for NonsmoothTerm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("NonsmoothTerm")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .field("lipschitz_l0", &self.lipschitz_l0)
            .finish()
    }
}

impl NonsmoothTerm {
    pub fn value(&self, x: &[f64]) -> f64 {
        (self.value)(x)
    }

    pub fn prox_into(&self, x: &[f64], theta: f64, out: &mut [f64]) {
        (self.prox)(x, theta, out)
    }

    pub fn prox(&self, x: &[f64], theta: f64) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        self.prox_into(x, theta, &mut out);
        out
    }

    /// `g(x) = sum |x_i|`; prox is coordinatewise soft-thresholding.
    /// `L0 = D = sqrt(dim)`.
    pub fn abs_l1(dim: usize) -> Result<Self> {
        Self::weighted_abs(dim, 1.0)
    }

    /// `g(x) = w sum |x_i|` for `w > 0`.
    pub fn weighted_abs(dim: usize, w: f64) -> Result<Self> {
        if dim == 0 {
            return Err(SgfError::InvalidProblem("dim must be positive".into()));
        }
        if !(w > 0.0) || !w.is_finite() {
            return Err(SgfError::InvalidProblem(format!(
                "l1 weight must be positive, got {w}"
            )));
        }
        let bound = w * (dim as f64).sqrt();
        Ok(NonsmoothTerm {
            name: if w == 1.0 {
                format!("l1(d={dim})")
            } else {
                format!("l1(d={dim}, w={w})")
            },
            dim,
            value: Arc::new(move |x| w * x.iter().map(|v| v.abs()).sum::<f64>()),
            prox: Arc::new(move |x, theta, out| {
                for i in 0..x.len() {
                    out[i] = soft_threshold(x[i], w * theta);
                }
            }),
            lipschitz_l0: Some(bound),
            subgrad_bound_d: Some(bound),
            min_value: 0.0,
            argmin_known: Some(vec![vec![0.0; dim]]),
        })
    }

    /// Indicator of the box `[lo, hi]`; prox is the componentwise clamp.
    /// No finite Lipschitz constant or subgradient bound.
    pub fn indicator_box(lo: &[f64], hi: &[f64]) -> Result<Self> {
        if lo.is_empty() || lo.len() != hi.len() {
            return Err(SgfError::InvalidProblem(
                "box bounds must be nonempty and of equal length".into(),
            ));
        }
        if let Some(i) = (0..lo.len()).find(|&i| lo[i] > hi[i]) {
            return Err(SgfError::InvalidProblem(format!(
                "box has lo > hi in coordinate {i}: {} > {}",
                lo[i], hi[i]
            )));
        }
        let dim = lo.len();
        let lo1: Arc<[f64]> = lo.into();
        let hi1: Arc<[f64]> = hi.into();
        let (lo2, hi2) = (lo1.clone(), hi1.clone());
        let mid: Vec<f64> = lo.iter().zip(hi).map(|(a, b)| 0.5 * (a + b)).collect();
        Ok(NonsmoothTerm {
            name: format!("box(d={dim})"),
            dim,
            value: Arc::new(move |x| {
                let inside = x
                    .iter()
                    .zip(lo1.iter().zip(hi1.iter()))
                    .all(|(xi, (a, b))| *xi >= *a && *xi <= *b);
                if inside {
                    0.0
                } else {
                    f64::INFINITY
                }
            }),
            prox: Arc::new(move |x, _theta, out| {
                for i in 0..x.len() {
                    out[i] = x[i].clamp(lo2[i], hi2[i]);
                }
            }),
            lipschitz_l0: None,
            subgrad_bound_d: None,
            min_value: 0.0,
            argmin_known: Some(vec![mid]),
        })
    }

    /// `g(x) = (c/2) |x|^2` for `c > 0`; prox is `x / (1 + theta c)`.
    /// Smooth, but useful as a term with exactly known envelope.
    /// Unbounded gradient, so no finite `L0`/`D`.
    pub fn quadratic_term(dim: usize, c: f64) -> Result<Self> {
        if dim == 0 {
            return Err(SgfError::InvalidProblem("dim must be positive".into()));
        }
        if !(c > 0.0) || !c.is_finite() {
            return Err(SgfError::InvalidProblem(format!(
                "curvature must be positive, got {c}"
            )));
        }
        Ok(NonsmoothTerm {
            name: format!("quad_term(c={c}, d={dim})"),
            dim,
            value: Arc::new(move |x| 0.5 * c * x.iter().map(|v| v * v).sum::<f64>()),
            prox: Arc::new(move |x, theta, out| {
                let scale = 1.0 / (1.0 + theta * c);
                for i in 0..x.len() {
                    out[i] = scale * x[i];
                }
            }),
            lipschitz_l0: None,
            subgrad_bound_d: None,
            min_value: 0.0,
            argmin_known: Some(vec![vec![0.0; dim]]),
        })
    }

    /// `g = 0`; prox is the identity.
    pub fn zero(dim: usize) -> Self {
        NonsmoothTerm {
            name: "zero".into(),
            dim,
            value: Arc::new(|_| 0.0),
            prox: Arc::new(|x, _theta, out| out.copy_from_slice(x)),
            lipschitz_l0: Some(0.0),
            subgrad_bound_d: Some(0.0),
            min_value: 0.0,
            argmin_known: None,
        }
    }
}

#[inline]
pub fn soft_threshold(x: f64, t: f64) -> f64 {
    if x > t {
        x - t
    } else if x < -t {
        x + t
    } else {
        0.0
    }
}

/// A composite pair `F = f + g` with a known minimizer, so operator and
/// smoothing experiments can measure true gaps.
#[derive(Debug, Clone)]
pub struct CompositeProblem {
    pub f: SmoothPotential,
    pub g: NonsmoothTerm,
    pub min_value: f64,
    pub minimizer: Vec<f64>,
    /// Linear coercivity certificate `(a, b)` with `a |x| + b <= F(x)`.
    pub coercivity: Option<(f64, f64)>,
}

impl CompositeProblem {
    /// `F(x) = 1/2 sum lambda_i (x_i - c_i)^2 + w sum |x_i|`.
    ///
    /// Minimizer: `x*_i = soft(c_i, w / lambda_i)` coordinatewise (exact
    /// first-order condition of the separable problem).
    pub fn quadratic_plus_l1(eigenvalues: &[f64], center: &[f64], w: f64) -> Result<Self> {
        let f = SmoothPotential::quadratic(eigenvalues, center)?;
        let g = NonsmoothTerm::weighted_abs(eigenvalues.len(), w)?;
        let minimizer: Vec<f64> = center
            .iter()
            .zip(eigenvalues)
            .map(|(c, l)| soft_threshold(*c, w / l))
            .collect();
        let min_value = f.value(&minimizer) + g.value(&minimizer);
        Ok(CompositeProblem {
            f,
            g,
            min_value,
            minimizer,
            // F >= w * l1-norm >= w * l2-norm
            coercivity: Some((w, 0.0)),
        })
    }

    /// `F(x) = 1/2 sum lambda_i (x_i - c_i)^2 + indicator_[lo,hi](x)`.
    /// Minimizer: the clamp of the center onto the box (separable).
    pub fn quadratic_plus_box(
        eigenvalues: &[f64],
        center: &[f64],
        lo: &[f64],
        hi: &[f64],
    ) -> Result<Self> {
        let f = SmoothPotential::quadratic(eigenvalues, center)?;
        let g = NonsmoothTerm::indicator_box(lo, hi)?;
        let minimizer: Vec<f64> = center
            .iter()
            .zip(lo.iter().zip(hi))
            .map(|(c, (a, b))| c.clamp(*a, *b))
            .collect();
        let min_value = f.value(&minimizer);
        Ok(CompositeProblem {
            f,
            g,
            min_value,
            minimizer,
            coercivity: None,
        })
    }

    pub fn dim(&self) -> usize {
        self.f.dim
    }

    pub fn objective(&self, x: &[f64]) -> f64 {
        self.f.value(x) + self.g.value(x)
    }

    pub fn gap(&self, x: &[f64]) -> f64 {
        self.objective(x) - self.min_value
    }

    pub fn dist_to_minimizer(&self, x: &[f64]) -> f64 {
        x.iter()
            .zip(&self.minimizer)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }
}

// stream ids for the check samplers, disjoint from path indices by the high bit
const CHECK_STREAM: u64 = 1 << 63;

/// Samples a point uniformly in the ball of radius `r` around `center`.
pub fn sample_in_ball(center: &[f64], r: f64, seed: u64, index: u64) -> Vec<f64> {
    let d = center.len();
    let mut dir: Vec<f64> = (0..d)
        .map(|j| rng::draw_normal(seed, CHECK_STREAM | index, j as u64))
        .collect();
    let norm: f64 = dir.iter().map(|v| v * v).sum::<f64>().sqrt();
    let u = rng::draw_uniform(seed, CHECK_STREAM | index, d as u64);
    let radius = r * u.powf(1.0 / d as f64);
    if norm > 0.0 {
        for v in dir.iter_mut() {
            *v *= radius / norm;
        }
    }
    dir.iter_mut().zip(center).for_each(|(v, c)| *v += c);
    dir
}

/// Verifies `f(x) - min f >= gamma dist(x, S)^p` on points sampled within
/// `radius` of the minimizer. Passes iff every sample satisfies it.
pub fn check_error_bound(
    p: &SmoothPotential,
    radius: f64,
    samples: usize,
    gamma_candidate: f64,
    seed: u64,
) -> Result<BooleanReport> {
    let exponent = p.eb_exponent_p.ok_or_else(|| {
        SgfError::Unsupported(format!("{} carries no error-bound exponent", p.name))
    })?;
    if samples == 0 {
        return Err(SgfError::InvalidParameter("samples must be >= 1".into()));
    }
    let mut violations = 0;
    for i in 0..samples {
        let x = sample_in_ball(&p.argmin_point, radius, seed, i as u64);
        let gap = p.gap(&x);
        let rhs = gamma_candidate * p.dist_to_argmin(&x).powf(exponent);
        if gap + 1e-12 * (1.0 + rhs.abs()) < rhs {
            violations += 1;
        }
    }
    Ok(BooleanReport::new(
        format!("error_bound({}, gamma={gamma_candidate})", p.name),
        samples,
        violations,
    ))
}

/// Verifies the gradient inequality `mu (f - min f)^q <= |grad f|` on samples
/// within `radius` of the minimizer that lie strictly above the minimum, and
/// cross-checks the equivalent error bound with `p = 1/(1-q)` and
/// `gamma = (mu (1-q))^{1/(1-q)}` on the same samples.
pub fn check_lojasiewicz(
    p: &SmoothPotential,
    radius: f64,
    samples: usize,
    seed: u64,
) -> Result<BooleanReport> {
    let (q, mu) = match (p.loja_q, p.loja_mu) {
        (Some(q), Some(mu)) => (q, mu),
        _ => {
            return Err(SgfError::Unsupported(format!(
                "{} carries no gradient-inequality metadata",
                p.name
            )))
        }
    };
    if samples == 0 {
        return Err(SgfError::InvalidParameter("samples must be >= 1".into()));
    }
    let pe = 1.0 / (1.0 - q);
    let gamma = (mu * (1.0 - q)).powf(pe);
    let mut violations = 0;
    let mut checked = 0;
    let mut grad = vec![0.0; p.dim];
    for i in 0..samples {
        let x = sample_in_ball(&p.argmin_point, radius, seed, i as u64);
        let gap = p.gap(&x);
        if gap <= 1e-14 {
            // the inequality is quantified strictly above the minimum
            continue;
        }
        checked += 1;
        p.gradient_into(&x, &mut grad);
        let gnorm: f64 = grad.iter().map(|v| v * v).sum::<f64>().sqrt();
        let slack = 1e-9;
        if mu * gap.powf(q) > gnorm * (1.0 + slack) {
            violations += 1;
            continue;
        }
        // equivalence cross-check: the Holderian bound with matched constants
        let rhs = gamma * p.dist_to_argmin(&x).powf(pe);
        if gap * (1.0 + slack) < rhs {
            violations += 1;
        }
    }
    Ok(BooleanReport::new(
        format!("lojasiewicz({}, q={q}, mu={mu})", p.name),
        checked,
        violations,
    ))
}

/// Runs the four structural checks of a smooth potential on `n` seeded
/// samples: gradient vs. centered finite differences, gradient Lipschitz
/// continuity, the strong-convexity lower bound, and the descent-lemma
/// consequence `|grad f|^2 <= 2 L (f - min f)`.
pub fn validate_smooth(p: &SmoothPotential, n: usize, seed: u64) -> Vec<BooleanReport> {
    let radius = p.eb_radius.unwrap_or(5.0);
    let mut fd_viol = 0;
    let mut lip_viol = 0;
    let mut sc_viol = 0;
    let mut twol_viol = 0;
    let mut grad = vec![0.0; p.dim];
    let mut grad_b = vec![0.0; p.dim];
    for i in 0..n {
        let x = sample_in_ball(&p.argmin_point, radius, seed, 2 * i as u64);
        let y = sample_in_ball(&p.argmin_point, radius, seed, 2 * i as u64 + 1);

        p.gradient_into(&x, &mut grad);
        let gnorm_sq: f64 = grad.iter().map(|v| v * v).sum();

        // centered finite differences, relative tolerance 1e-5
        let mut xp = x.clone();
        for j in 0..p.dim {
            let h = 1e-6 * (1.0 + x[j].abs());
            xp[j] = x[j] + h;
            let fp = p.value(&xp);
            xp[j] = x[j] - h;
            let fm = p.value(&xp);
            xp[j] = x[j];
            let fd = (fp - fm) / (2.0 * h);
            if (fd - grad[j]).abs() > 1e-5 * (1.0 + grad[j].abs()) {
                fd_viol += 1;
                break;
            }
        }

        // gradient Lipschitz on the pair
        p.gradient_into(&y, &mut grad_b);
        let dg: f64 = grad
            .iter()
            .zip(&grad_b)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        let dx: f64 = x
            .iter()
            .zip(&y)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        if dg > p.lipschitz_l * dx * (1.0 + 1e-9) + 1e-12 {
            lip_viol += 1;
        }

        // strong convexity lower bound
        if let Some(mu) = p.strong_mu {
            let lower = p.min_value + 0.5 * mu * p.dist_to_argmin(&x).powi(2);
            if p.value(&x) + 1e-9 * (1.0 + lower.abs()) < lower {
                sc_viol += 1;
            }
        }

        // |grad|^2 <= 2 L (f - min)
        if gnorm_sq > 2.0 * p.lipschitz_l * p.gap(&x) * (1.0 + 1e-9) + 1e-12 {
            twol_viol += 1;
        }
    }
    vec![
        BooleanReport::new(format!("{}: gradient vs finite differences", p.name), n, fd_viol),
        BooleanReport::new(format!("{}: gradient Lipschitz", p.name), n, lip_viol),
        BooleanReport::new(format!("{}: strong convexity", p.name), n, sc_viol),
        BooleanReport::new(format!("{}: |grad|^2 <= 2L(f - min)", p.name), n, twol_viol),
    ]
}

/// Checks the variational characterization of the prox on seeded samples:
/// `g(prox) + |x - prox|^2 / 2 theta <= g(y) + |x - y|^2 / 2 theta`.
pub fn validate_prox(term: &NonsmoothTerm, n: usize, seed: u64) -> BooleanReport {
    let center = vec![0.0; term.dim];
    let mut violations = 0;
    for i in 0..n {
        let x = sample_in_ball(&center, 4.0, seed, 3 * i as u64);
        let y = sample_in_ball(&center, 4.0, seed, 3 * i as u64 + 1);
        let theta = 10f64.powf(rng::draw_uniform(seed, CHECK_STREAM | (3 * i as u64 + 2), 0) * 2.0 - 1.0);
        let p = term.prox(&x, theta);
        let obj = |z: &[f64]| -> f64 {
            term.value(z)
                + x.iter()
                    .zip(z)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    / (2.0 * theta)
        };
        let at_prox = obj(&p);
        if at_prox > obj(&y) + 1e-9 * (1.0 + at_prox.abs()) {
            violations += 1;
        }
    }
    BooleanReport::new(format!("{}: prox variational inequality", term.name), n, violations)
}
