//! Gaussian orbital probe `ξ_λ(z) ∝ exp(−λz²)` and the collimator model that
//! prepares it.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{check_finite, check_positive, check_range, Error, Result};

/// Second moments of a centred Gaussian probe.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Moments {
    /// `⟨Z²⟩` (m²).
    pub var_z: f64,
    /// `⟨P²⟩` ((kg·m/s)²).
    pub var_p: f64,
    /// `⟨{Z, P}⟩` (J·s).
    pub anticom: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianProbe {
    lambda: Complex64,
    hbar: f64,
    mass: f64,
}

impl GaussianProbe {
    pub fn new(lambda: Complex64, hbar: f64, mass: f64) -> Result<Self> {
        check_finite("Im λ", lambda.im)?;
        if !(lambda.re.is_finite() && lambda.re > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "Re λ must be positive for a normalizable probe, got {}",
                lambda.re
            )));
        }
        check_positive("hbar", hbar)?;
        check_positive("mass", mass)?;
        Ok(GaussianProbe { lambda, hbar, mass })
    }

    pub fn lambda(&self) -> Complex64 {
        self.lambda
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// `⟨Z²⟩ = 1/(4 Re λ)`, `⟨P²⟩ = ħ²|λ|²/Re λ`, `⟨{Z,P}⟩ = −ħ Im λ/Re λ`.
    pub fn moments(&self) -> Moments {
        let re = self.lambda.re;
        Moments {
            var_z: 0.25 / re,
            var_p: self.hbar * self.hbar * self.lambda.norm_sqr() / re,
            anticom: -self.hbar * self.lambda.im / re,
        }
    }

    /// Ballistic spread `σ(t) = ⟨(Z + tP/m)²⟩^{1/2}`; `t` may be negative.
    pub fn sigma_t(&self, t: f64) -> f64 {
        self.sigma_t_sq(t).sqrt()
    }

    /// Evaluated as `|1 + 2iħλt/m|²/(4 Re λ)`, which avoids the cancellation
    /// of the expanded quadratic near a focus.
    pub fn sigma_t_sq(&self, t: f64) -> f64 {
        let s = 2.0 * self.hbar * t / self.mass;
        let a = 1.0 - s * self.lambda.im;
        let b = s * self.lambda.re;
        (a * a + b * b) * 0.25 / self.lambda.re
    }
}

/// Hole-and-slit collimator; `D_p = 1.25·K·δP` and `D_z = 1.25·K·δZ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CollimatorModel {
    /// Hole diameter of the first plate (m).
    pub d1: f64,
    /// Slit width of the second plate (m).
    pub d2: f64,
    /// Plate separation (m).
    pub l1: f64,
    /// Longitudinal speed (m/s).
    pub v_y: f64,
    pub mass: f64,
    pub hbar: f64,
    /// Bracketing factor in `[0.6, 1]`.
    pub k: f64,
}

impl CollimatorModel {
    pub fn new(d1: f64, d2: f64, l1: f64, v_y: f64, mass: f64, hbar: f64, k: f64) -> Result<Self> {
        check_positive("d1", d1)?;
        check_positive("d2", d2)?;
        check_positive("L1", l1)?;
        check_positive("v_y", v_y)?;
        check_positive("mass", mass)?;
        check_positive("hbar", hbar)?;
        check_range("K", k, 0.6, 1.0)?;
        Ok(CollimatorModel {
            d1,
            d2,
            l1,
            v_y,
            mass,
            hbar,
            k,
        })
    }

    /// Half width of the classical transverse momentum after both plates.
    pub fn delta_p(&self) -> f64 {
        (self.d1 + self.d2) / (2.0 * self.l1) * self.mass * self.v_y
    }

    /// Half width of the classical position after the slit.
    pub fn delta_z(&self) -> f64 {
        self.d2 / 2.0
    }

    pub fn d_p(&self) -> f64 {
        1.25 * self.k * self.delta_p()
    }

    pub fn d_z(&self) -> f64 {
        1.25 * self.k * self.delta_z()
    }

    /// `λ = D_p²/ħ² + 1/(4D_z²)` (m⁻²).
    pub fn lambda(&self) -> f64 {
        let (dp, dz) = (self.d_p(), self.d_z());
        dp * dp / (self.hbar * self.hbar) + 0.25 / (dz * dz)
    }
}

/// Posterior probe after the collimator, in the broad-prior limit.
pub fn collimator_posterior(cm: &CollimatorModel) -> Result<GaussianProbe> {
    GaussianProbe::new(Complex64::new(cm.lambda(), 0.0), cm.hbar, cm.mass)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Trapezoid quadrature of the moments of `exp(−λz²)` with the derivative
    /// taken by a sixth-order central difference of the sampled wavefunction.
    /// The trapezoid rule is spectrally accurate for these decaying integrands.
    fn quadrature_moments(lambda: Complex64, hbar: f64) -> Moments {
        let width = (0.25 / lambda.re).sqrt();
        let half = 14.0 * width;
        // resolve the chirp exp(−i Im λ z²) at the window edge
        let k_max = 2.0 * lambda.im.abs() * half + 1.0 / width;
        let h = (width / 40.0).min(0.2 / k_max);
        let n = (2.0 * half / h).ceil() as usize;
        let xi = |z: f64| (-lambda * z * z).exp();
        let fd = h * 1e-2;
        let dxi = |z: f64| {
            (xi(z + 3.0 * fd) - 9.0 * xi(z + 2.0 * fd) + 45.0 * xi(z + fd) - 45.0 * xi(z - fd)
                + 9.0 * xi(z - 2.0 * fd)
                - xi(z - 3.0 * fd))
                / (60.0 * fd)
        };
        let (mut norm, mut z2, mut p2, mut zp) = (0.0, 0.0, 0.0, 0.0);
        for i in 0..=n {
            let z = -half + i as f64 * h;
            let w = if i == 0 || i == n { 0.5 * h } else { h };
            let (f, df) = (xi(z), dxi(z));
            norm += w * f.norm_sqr();
            z2 += w * z * z * f.norm_sqr();
            p2 += w * hbar * hbar * df.norm_sqr();
            // ⟨{Z,P}⟩ = 2 Re⟨ξ|Z P|ξ⟩ with P = −iħ d/dz
            zp += w * 2.0 * (f.conj() * z * Complex64::new(0.0, -hbar) * df).re;
        }
        Moments {
            var_z: z2 / norm,
            var_p: p2 / norm,
            anticom: zp / norm,
        }
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn unit_lambda_moments() {
        let q = quadrature_moments(Complex64::new(1.0, 0.0), 1.0);
        assert!(rel(q.var_z, 0.25) < 1e-10 && rel(q.var_p, 1.0) < 1e-8 && q.anticom.abs() < 1e-10);
        let m = GaussianProbe::new(Complex64::new(1.0, 0.0), 1.0, 1.0).unwrap().moments();
        assert_eq!((m.var_z, m.var_p, m.anticom), (0.25, 1.0, 0.0));
    }

    #[test]
    fn closed_forms_match_quadrature() {
        for &(re, im, hbar) in &[(1.0, 0.5, 1.0), (3.0, -7.0, 0.7), (0.2, 20.0, 2.0), (1.0, 100.0, 1.0), (1.0, -100.0, 1.0)] {
            let lambda = Complex64::new(re, im);
            let q = quadrature_moments(lambda, hbar);
            let m = GaussianProbe::new(lambda, hbar, 1.0).unwrap().moments();
            assert!(rel(m.var_z, q.var_z) < 1e-8, "varZ {lambda}");
            assert!(rel(m.var_p, q.var_p) < 1e-8, "varP {lambda}");
            assert!(rel(m.anticom, q.anticom) < 1e-8, "anticom {lambda}");
        }
    }

    #[test]
    fn invalid_probes_rejected() {
        assert!(GaussianProbe::new(Complex64::new(0.0, 1.0), 1.0, 1.0).is_err());
        assert!(GaussianProbe::new(Complex64::new(-1.0, 0.0), 1.0, 1.0).is_err());
        assert!(GaussianProbe::new(Complex64::new(1.0, f64::NAN), 1.0, 1.0).is_err());
        assert!(GaussianProbe::new(Complex64::new(1.0, 0.0), 0.0, 1.0).is_err());
    }

    #[test]
    fn sigma_t_examples() {
        let p = GaussianProbe::new(Complex64::new(2.0, 0.0), 1.0, 3.0).unwrap();
        let m = p.moments();
        assert_eq!(p.sigma_t(0.0), m.var_z.sqrt());
        let t: f64 = 1.7;
        assert!((p.sigma_t(t) - (m.var_z + (t / 3.0).powi(2) * m.var_p).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn collimator_rejects_out_of_range_k() {
        assert!(CollimatorModel::new(1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 0.5).is_err());
        assert!(CollimatorModel::new(1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.01).is_err());
        assert!(CollimatorModel::new(-1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 0.8).is_err());
    }

    #[test]
    fn wide_slit_is_momentum_dominated() {
        let cm = CollimatorModel::new(1e-5, 10.0, 1e-2, 500.0, 1e-25, 1e-34, 1.0).unwrap();
        let dp_term = (cm.d_p() / cm.hbar).powi(2);
        assert!((cm.lambda() - dp_term) / dp_term < 1e-12);
    }

    proptest! {
        #[test]
        fn minimum_uncertainty(log_re in -3.0..3.0f64, ratio in -100.0..100.0f64, hbar in 0.1..10.0f64) {
            // cancellation grows as (Im λ/Re λ)², hence the bounded ratio
            let re = 10f64.powf(log_re);
            let m = GaussianProbe::new(Complex64::new(re, re * ratio), hbar, 1.0).unwrap().moments();
            let det = m.var_z * m.var_p - 0.25 * m.anticom * m.anticom;
            prop_assert!(rel(det, 0.25 * hbar * hbar) < 1e-10);
        }

        #[test]
        fn uncertainty_tradeoff(re in 1e-2..1e2f64, im in -1e2..1e2f64, mass in 0.1..10.0f64, dt in 1e-3..10.0f64, tau in 0.0..10.0f64) {
            let p = GaussianProbe::new(Complex64::new(re, im), 1.0, mass).unwrap();
            let lhs = p.sigma_t(dt / 2.0) * p.sigma_t(dt + tau);
            let rhs = 0.5 / mass * (dt / 2.0 + tau);
            prop_assert!(lhs >= rhs * (1.0 - 1e-12));
        }

        #[test]
        fn sigma_sq_is_convex_quadratic(re in 1e-2..1e2f64, im in -1e2..1e2f64, t in -5.0..5.0f64, h in 0.01..1.0f64) {
            let p = GaussianProbe::new(Complex64::new(re, im), 1.0, 2.0).unwrap();
            let second = p.sigma_t_sq(t + h) - 2.0 * p.sigma_t_sq(t) + p.sigma_t_sq(t - h);
            let expected = 2.0 * h * h * p.moments().var_p / 4.0;
            prop_assert!(second > 0.0);
            prop_assert!((second - expected).abs() <= 1e-9 * (1.0 + expected.abs() + p.sigma_t_sq(t)));
        }
    }
}
