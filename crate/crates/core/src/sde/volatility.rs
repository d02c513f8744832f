//! Volatility schedules `sigma(t, x)`.
//!
//! The catalog uses diagonal matrices `sigma(t,x) = s(t) * phi(x) * I_d`
//! acting componentwise on the Brownian increment, with
//! `s(t) = sigma0 * (1+t)^-alpha` and an optional state factor
//! `phi(x) = min(1, |x|)` for multiplicative noise. The Frobenius envelopes
//! drive every noise floor:
//!
//! * `sigma_star_sq = sup_{t,x} |sigma(t,x)|_F^2 = d * sigma0^2`
//! * `sigma_inf(t)  = sup_x |sigma(t,x)|_F = sqrt(d) * sigma0 * (1+t)^-alpha`
//!
//! All bound evaluators take the Frobenius convention: the dimension factor
//! is already folded into `sigma_star_sq`.

use serde::Serialize;

use crate::error::SgfError;
use crate::Result;

/// Shape of the diagonal schedule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum VolKind {
    /// `sigma0 * I_d`, constant in time and state.
    ConstantDiagonal,
    /// `sigma0 (1+t)^-alpha * I_d`.
    DecreasingPower,
    /// `sigma0 (1+t)^-alpha * min(1, |x|) * I_d` (state-dependent).
    CustomMultiplicative,
}

#[derive(Debug, Clone, Serialize)]
pub struct VolatilitySchedule {
    pub kind: VolKind,
    pub sigma0: f64,
    pub alpha: f64,
    /// State dimension d (the Brownian dimension m equals d here).
    pub dim: usize,
}

impl VolatilitySchedule {
    pub fn constant(dim: usize, sigma0: f64) -> Result<Self> {
        Self::new(VolKind::ConstantDiagonal, dim, sigma0, 0.0)
    }

    pub fn decreasing(dim: usize, sigma0: f64, alpha: f64) -> Result<Self> {
        Self::new(VolKind::DecreasingPower, dim, sigma0, alpha)
    }

    pub fn multiplicative(dim: usize, sigma0: f64, alpha: f64) -> Result<Self> {
        Self::new(VolKind::CustomMultiplicative, dim, sigma0, alpha)
    }

    pub fn zero(dim: usize) -> Self {
        VolatilitySchedule {
            kind: VolKind::ConstantDiagonal,
            sigma0: 0.0,
            alpha: 0.0,
            dim,
        }
    }

    fn new(kind: VolKind, dim: usize, sigma0: f64, alpha: f64) -> Result<Self> {
        if sigma0 < 0.0 || !sigma0.is_finite() {
            return Err(SgfError::InvalidParameter(format!(
                "sigma0 must be finite and nonnegative, got {sigma0}"
            )));
        }
        if alpha < 0.0 || !alpha.is_finite() {
            return Err(SgfError::InvalidParameter(format!(
                "alpha must be finite and nonnegative, got {alpha}"
            )));
        }
        if dim == 0 {
            return Err(SgfError::InvalidParameter("dim must be positive".into()));
        }
        Ok(VolatilitySchedule {
            kind,
            sigma0,
            alpha,
            dim,
        })
    }

    /// Scalar diagonal entry of `sigma(t, x)`.
    #[inline]
    pub fn scalar_at(&self, t: f64, x: &[f64]) -> f64 {
        let time_part = if self.alpha == 0.0 {
            self.sigma0
        } else {
            self.sigma0 * (1.0 + t).powf(-self.alpha)
        };
        match self.kind {
            VolKind::CustomMultiplicative => time_part * state_factor(x),
            _ => time_part,
        }
    }

    /// Frobenius norm squared of `sigma(t, x)`.
    #[inline]
    pub fn frobenius_sq_at(&self, t: f64, x: &[f64]) -> f64 {
        let s = self.scalar_at(t, x);
        self.dim as f64 * s * s
    }

    /// `sigma_star_sq = sup_{t,x} |sigma|_F^2 = d * sigma0^2`.
    pub fn sigma_star_sq(&self) -> f64 {
        self.dim as f64 * self.sigma0 * self.sigma0
    }

    /// `sigma_inf(t) = sup_x |sigma(t,x)|_F` (multiplicative factors are in
    /// [0,1], so the sup over x drops them).
    pub fn sigma_inf(&self, t: f64) -> f64 {
        (self.dim as f64).sqrt() * self.sigma0 * (1.0 + t).powf(-self.alpha)
    }

    pub fn sigma_inf_sq(&self, t: f64) -> f64 {
        let s = self.sigma_inf(t);
        s * s
    }

    /// True when `sigma_inf` is square-integrable on the half-line
    /// (power decay with alpha > 1/2, or identically zero).
    pub fn is_square_integrable(&self) -> bool {
        self.sigma0 == 0.0 || self.alpha > 0.5
    }

    /// True when `sigma_inf` is (weakly) decreasing in time.
    pub fn is_decreasing(&self) -> bool {
        self.alpha > 0.0 || self.sigma0 == 0.0
    }

    /// Lipschitz constant of the entries in the state variable.
    pub fn lipschitz_l0(&self) -> f64 {
        match self.kind {
            VolKind::CustomMultiplicative => self.sigma0,
            _ => 0.0,
        }
    }

    /// Certificate `(K, beta)` for the weighted noise-energy growth condition
    /// `int_0^t (s+1) sigma_inf(s)^2 ds <= K t^beta` with `beta in [0, 1)`.
    ///
    /// Derivable whenever `alpha > 1/2`:
    /// * `1/2 < alpha < 1`: `beta = 2 - 2 alpha`, `K = d sigma0^2 max(2^beta / beta, 1)`
    /// * `alpha >= 1`: `beta = 1/2`, `K = d sigma0^2 max(1, 1/(2 alpha - 2))`
    ///   (the integral is `O(log t)` at `alpha = 1` and bounded for `alpha > 1`,
    ///   both dominated by `sqrt(t)` with these constants).
    pub fn beta_certificate(&self) -> Option<(f64, f64)> {
        let base = self.sigma_star_sq();
        if base == 0.0 {
            return Some((0.0, 0.0));
        }
        if self.alpha <= 0.5 {
            return None;
        }
        if self.alpha < 1.0 {
            let beta = 2.0 - 2.0 * self.alpha;
            let k = base * (2f64.powf(beta) / beta).max(1.0);
            Some((k, beta))
        } else if self.alpha == 1.0 {
            // int (s+1)^-1 = ln(1+t) <= 0.81 sqrt(t); round up to 1
            Some((base, 0.5))
        } else {
            let k = base * (1.0f64).max(1.0 / (2.0 * self.alpha - 2.0));
            Some((k, 0.5))
        }
    }
}

/// Bounded 1-Lipschitz state factor in [0, 1] for multiplicative noise.
#[inline]
pub fn state_factor(x: &[f64]) -> f64 {
    let norm: f64 = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    norm.min(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frobenius_envelope_never_exceeded() {
        let vol = VolatilitySchedule::multiplicative(3, 0.7, 0.4).unwrap();
        let star = vol.sigma_star_sq();
        let mut worst = 0.0f64;
        for i in 0..500 {
            let t = i as f64 * 0.1;
            let x = vec![(i as f64 * 0.37).sin() * 5.0; 3];
            let f = vol.frobenius_sq_at(t, &x);
            assert!(f <= star + 1e-12);
            worst = worst.max(f);
        }
        assert!(worst > 0.0);
    }

    #[test]
    fn entries_lipschitz_in_state() {
        let vol = VolatilitySchedule::multiplicative(2, 0.5, 0.0).unwrap();
        let l0 = vol.lipschitz_l0();
        for i in 0..200 {
            let a = i as f64 * 0.013 - 1.3;
            let x = [a, -0.4 * a];
            let y = [a + 0.31, 0.2];
            let dx: f64 = x
                .iter()
                .zip(&y)
                .map(|(u, v)| (u - v) * (u - v))
                .sum::<f64>()
                .sqrt();
            let ds = (vol.scalar_at(1.0, &x) - vol.scalar_at(1.0, &y)).abs();
            assert!(ds <= l0 * dx + 1e-12);
        }
    }

    #[test]
    fn square_integrability_tag_matches_numeric_integral() {
        let l2 = VolatilitySchedule::decreasing(1, 1.0, 1.0).unwrap();
        let not_l2 = VolatilitySchedule::decreasing(1, 1.0, 0.25).unwrap();
        assert!(l2.is_square_integrable());
        assert!(!not_l2.is_square_integrable());
        // numeric check: the tail integral of sigma_inf^2 keeps shrinking in
        // the L2 case and does not in the slow-decay case
        let tail = |v: &VolatilitySchedule, from: f64| -> f64 {
            let mut acc = 0.0;
            let dt = 0.01;
            let mut t = from;
            while t < from + 200.0 {
                acc += v.sigma_inf_sq(t) * dt;
                t += dt;
            }
            acc
        };
        assert!(tail(&l2, 100.0) < 0.25 * tail(&l2, 0.0));
        assert!(tail(&not_l2, 100.0) > 0.5 * tail(&not_l2, 0.0));
    }

    #[test]
    fn beta_certificate_bounds_the_weighted_integral() {
        for &alpha in &[0.6, 0.75, 0.9, 1.0, 1.5] {
            let vol = VolatilitySchedule::decreasing(2, 0.8, alpha).unwrap();
            let (k, beta) = vol.beta_certificate().unwrap();
            assert!((0.0..1.0).contains(&beta));
            // trapezoid integral of (s+1) sigma_inf^2(s)
            let mut acc = 0.0;
            let dt = 0.005;
            let mut t = 0.0;
            while t < 50.0 {
                let f0 = (t + 1.0) * vol.sigma_inf_sq(t);
                let f1 = (t + dt + 1.0) * vol.sigma_inf_sq(t + dt);
                acc += 0.5 * (f0 + f1) * dt;
                t += dt;
                if t > dt {
                    assert!(acc <= k * t.powf(beta) + 1e-9, "alpha={alpha} t={t}");
                }
            }
        }
        assert!(VolatilitySchedule::decreasing(1, 1.0, 0.3)
            .unwrap()
            .beta_certificate()
            .is_none());
    }
}
