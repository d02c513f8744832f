//! Closed-form right-hand sides of the convergence guarantees.
//!
//! Conventions shared by every evaluator:
//! * `sigma_star_sq` is the supremum of the squared Frobenius norm of the
//!   volatility, so the dimension factor is already folded in and every
//!   noise floor reads `sigma_star_sq / 2` (or `/ 2 mu`, `/ 2 rho`, ...).
//! * smoothing-gap terms use the tight constant `(theta/2) D^2`
//!   (respectively `(theta/2) L0^2`).

use crate::error::SgfError;
use crate::smoothing::envelope_strong_convexity;
use crate::Result;

/// Ergodic convex bound `dist0^2 / (2t) + sigma*^2 / 2` on the expected
/// time-averaged objective gap.
pub fn bound_ergodic_convex(dist0_sq: f64, sigma_star_sq: f64, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(SgfError::InvalidParameter(format!(
            "time must be positive, got {t}"
        )));
    }
    Ok(dist0_sq / (2.0 * t) + 0.5 * sigma_star_sq)
}

/// Strongly convex squared-distance bound.
///
/// Without a split: `dist0^2 e^{-2 mu t} + sigma*^2 / (2 mu)`.
/// With `lambda in (0,1)` and a decreasing envelope `sigma_inf`:
/// `dist0^2 e^{-2 mu t} + (sigma*^2 / 2 mu) e^{-2 mu (1-lambda) t} + sigma_inf(lambda t)^2`.
pub fn bound_strongly_convex(
    dist0_sq: f64,
    mu: f64,
    sigma_star_sq: f64,
    t: f64,
    lambda_split: Option<f64>,
    sigma_inf_sq: Option<&dyn Fn(f64) -> f64>,
) -> Result<f64> {
    if !(mu > 0.0) {
        return Err(SgfError::InvalidParameter(format!(
            "strong-convexity modulus must be positive, got {mu}"
        )));
    }
    match lambda_split {
        None => Ok(dist0_sq * (-2.0 * mu * t).exp() + sigma_star_sq / (2.0 * mu)),
        Some(lambda) => {
            if !(0.0 < lambda && lambda < 1.0) {
                return Err(SgfError::InvalidParameter(format!(
                    "split must lie in (0,1), got {lambda}"
                )));
            }
            let sig = sigma_inf_sq.ok_or_else(|| {
                SgfError::InvalidParameter(
                    "split form needs the decreasing envelope sigma_inf^2".into(),
                )
            })?;
            Ok(dist0_sq * (-2.0 * mu * t).exp()
                + sigma_star_sq / (2.0 * mu) * (-2.0 * mu * (1.0 - lambda) * t).exp()
                + sig(lambda * t))
        }
    }
}

/// Pointwise bound `dist0^2 / (2t) + (K max(1, L) / 2) t^{beta - 1}` under
/// the weighted noise-energy condition with certificate `(K, beta)`.
pub fn bound_pointwise_beta(dist0_sq: f64, k: f64, beta: f64, l: f64, t: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&beta) {
        return Err(SgfError::InvalidParameter(format!(
            "beta must lie in [0, 1), got {beta}"
        )));
    }
    if !(t > 0.0) {
        return Err(SgfError::InvalidParameter(format!(
            "time must be positive, got {t}"
        )));
    }
    Ok(dist0_sq / (2.0 * t) + 0.5 * k * l.max(1.0) * t.powf(beta - 1.0))
}

/// Which smoothed-dynamics guarantee to evaluate.
///
/// The `Direct*` variants cover the flow driven by the envelope of a single
/// nonsmooth objective (subgradient bound `D`); the `Composite*` variants
/// cover `f + g_theta` with `g` Lipschitz (`L0`) and carry the `(L + 1/theta)`
/// unsmoothing factor on pointwise objective bounds. Strong convexity enters
/// either through the term's transferred modulus `mu = c/(1 + theta c)`,
/// through the smooth part's own modulus `mu'`, or through their sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MoreauBound {
    /// Ergodic gap: `dist0^2/(2t) + sigma*^2/2 + (theta/2) D^2`.
    DirectErgodic,
    /// Squared half-distance: `(dist0^2/2) e^{-mu t} + sigma*^2/(2 mu)`.
    DirectDistance,
    /// Pointwise gap: `(1/theta)((dist0^2/2) e^{-mu t} + sigma*^2/(2 mu)) + (theta/2) D^2`.
    DirectValue,
    /// Ergodic composite gap: `C0^2/(2t) + sigma*^2/2 + (theta/2) L0^2`.
    CompositeErgodic,
    /// Squared half-distance under the smooth part's modulus `mu'`.
    CompositeDistanceSmooth,
    /// Pointwise composite gap with the `(L + 1/theta)` factor, modulus `mu'`.
    CompositeValueSmooth,
    /// Squared half-distance under the term's transferred modulus.
    CompositeDistanceTerm,
    /// Pointwise composite gap, term modulus.
    CompositeValueTerm,
    /// Squared half-distance under the combined modulus `mu + mu'`.
    CompositeDistanceBoth,
    /// Pointwise composite gap, combined modulus.
    CompositeValueBoth,
}

/// Parameters for [`bound_moreau`]. `dist0_sq` is the squared initial
/// distance to the relevant solution set (the uniform bound `C0^2` in the
/// composite case); `subgrad_d` doubles as `D` or `L0`.
#[derive(Debug, Clone, Copy)]
pub struct MoreauBoundParams {
    pub dist0_sq: f64,
    pub sigma_star_sq: f64,
    pub theta: f64,
    pub subgrad_d: f64,
    /// Strong-convexity modulus `c` of the nonsmooth term, if any.
    pub curvature_c: Option<f64>,
    /// Strong-convexity modulus `mu'` of the smooth part, if any.
    pub mu_smooth: Option<f64>,
    /// Gradient Lipschitz constant of the smooth part.
    pub lipschitz_l: f64,
}

pub fn bound_moreau(variant: MoreauBound, p: &MoreauBoundParams, t: f64) -> Result<f64> {
    if !(p.theta > 0.0) {
        return Err(SgfError::InvalidParameter(format!(
            "smoothing parameter must be positive, got {}",
            p.theta
        )));
    }
    if !p.subgrad_d.is_finite() {
        return Err(SgfError::Unsupported(
            "bound needs a finite subgradient/Lipschitz constant".into(),
        ));
    }
    let gap_term = 0.5 * p.theta * p.subgrad_d * p.subgrad_d;
    let term_mu = || -> Result<f64> {
        let c = p.curvature_c.ok_or_else(|| {
            SgfError::InvalidParameter("variant needs the term curvature c".into())
        })?;
        envelope_strong_convexity(c, p.theta)
    };
    let smooth_mu = || -> Result<f64> {
        p.mu_smooth.ok_or_else(|| {
            SgfError::InvalidParameter("variant needs the smooth modulus mu'".into())
        })
    };
    let dist_half = 0.5 * p.dist0_sq;
    let decay = |mu: f64| dist_half * (-mu * t).exp() + p.sigma_star_sq / (2.0 * mu);
    let unsmooth = p.lipschitz_l + 1.0 / p.theta;

    let v = match variant {
        MoreauBound::DirectErgodic | MoreauBound::CompositeErgodic => {
            if !(t > 0.0) {
                return Err(SgfError::InvalidParameter(format!(
                    "time must be positive, got {t}"
                )));
            }
            p.dist0_sq / (2.0 * t) + 0.5 * p.sigma_star_sq + gap_term
        }
        MoreauBound::DirectDistance => decay(term_mu()?),
        MoreauBound::DirectValue => decay(term_mu()?) / p.theta + gap_term,
        MoreauBound::CompositeDistanceSmooth => decay(smooth_mu()?),
        MoreauBound::CompositeValueSmooth => unsmooth * decay(smooth_mu()?) + gap_term,
        MoreauBound::CompositeDistanceTerm => decay(term_mu()?),
        MoreauBound::CompositeValueTerm => unsmooth * decay(term_mu()?) + gap_term,
        MoreauBound::CompositeDistanceBoth => decay(term_mu()? + smooth_mu()?),
        MoreauBound::CompositeValueBoth => unsmooth * decay(term_mu()? + smooth_mu()?) + gap_term,
    };
    Ok(v)
}

/// Cocoercive bounds: ergodic `dist0^2 / (2 rho t) + sigma*^2 / (2 rho)` on
/// the time-averaged squared operator norm, or the strongly monotone
/// half-distance bound `(dist0^2 / 2) e^{-2 gamma t} + sigma*^2 / (4 gamma)`.
pub fn bound_cocoercive(
    dist0_sq: f64,
    rho: f64,
    sigma_star_sq: f64,
    t: f64,
    ergodic: bool,
    gamma_strong: Option<f64>,
) -> Result<f64> {
    if !(rho > 0.0) {
        return Err(SgfError::InvalidParameter(format!(
            "cocoercivity modulus must be positive, got {rho}"
        )));
    }
    if ergodic {
        if !(t > 0.0) {
            return Err(SgfError::InvalidParameter(format!(
                "time must be positive, got {t}"
            )));
        }
        Ok(dist0_sq / (2.0 * rho * t) + sigma_star_sq / (2.0 * rho))
    } else {
        let gamma = gamma_strong.ok_or_else(|| {
            SgfError::InvalidParameter("strong branch needs the monotonicity modulus".into())
        })?;
        if !(gamma > 0.0) {
            return Err(SgfError::InvalidParameter(format!(
                "monotonicity modulus must be positive, got {gamma}"
            )));
        }
        Ok(0.5 * dist0_sq * (-2.0 * gamma * t).exp() + sigma_star_sq / (4.0 * gamma))
    }
}

/// Ergodic distance under a Holderian error bound:
/// `(dist0^2 / (2 gamma))^{1/p} t^{-1/p} + (sigma*^2 / (2 gamma))^{1/p}`.
pub fn bound_ergodic_distance_eb(
    dist0_sq: f64,
    gamma_eb: f64,
    p: f64,
    sigma_star_sq: f64,
    t: f64,
) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(SgfError::InvalidParameter(format!(
            "error-bound exponent must be >= 1, got {p}"
        )));
    }
    if !(gamma_eb > 0.0) {
        return Err(SgfError::InvalidParameter(format!(
            "error-bound coefficient must be positive, got {gamma_eb}"
        )));
    }
    if !(t > 0.0) {
        return Err(SgfError::InvalidParameter(format!(
            "time must be positive, got {t}"
        )));
    }
    let inv_p = 1.0 / p;
    Ok((dist0_sq / (2.0 * gamma_eb)).powf(inv_p) * t.powf(-inv_p)
        + (sigma_star_sq / (2.0 * gamma_eb)).powf(inv_p))
}
