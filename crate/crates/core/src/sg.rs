//! Closed-form error and disturbance of a Stern–Gerlach measurement with a
//! Gaussian orbital probe.
//!
//! During the magnet transit `0 ≤ t ≤ Δt` the Hamiltonian is
//! `μσ_z⊗(B₀ + B₁Z) + P²/2m`, followed by free flight for `τ`. The meter reads
//! `f(Z) = −1` for `Z ≥ 0` and `+1` otherwise. With `g₀ = μB₁Δt(Δt/2 + τ)/m`:
//!
//! ```text
//! ε(σ_z)² = 2 erfc(|g₀| / (√2 σ(Δt + τ)))
//! η(σ_x)² = 2 − 2 exp[−(2μ²B₁²Δt²/ħ²) σ(Δt/2)²] cos(2μΔtB₀/ħ)
//! ```

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::SQRT_2;

use crate::error::{check_finite, check_positive, check_range, Error, Result};
use crate::probe::GaussianProbe;
use crate::special::{erfc, erfc_inv};
use crate::spin::EdPoint;

/// Free-flight time after the magnet.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum FreeFlight {
    Finite(f64),
    Infinite,
}

impl FreeFlight {
    pub fn finite(self) -> Option<f64> {
        match self {
            FreeFlight::Finite(t) => Some(t),
            FreeFlight::Infinite => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SgParams {
    /// Magnetic moment (J/T); may be negative.
    pub mu: f64,
    /// Uniform field (T).
    pub b0: f64,
    /// Field gradient (T/m); may be negative.
    pub b1: f64,
    pub mass: f64,
    pub hbar: f64,
    /// Magnet transit time `Δt` (s).
    pub dt: f64,
    pub tau: FreeFlight,
}

impl SgParams {
    pub fn new(mu: f64, b0: f64, b1: f64, mass: f64, hbar: f64, dt: f64, tau: FreeFlight) -> Result<Self> {
        check_finite("mu", mu)?;
        check_finite("B0", b0)?;
        check_finite("B1", b1)?;
        check_positive("mass", mass)?;
        check_positive("hbar", hbar)?;
        check_positive("dt", dt)?;
        if let FreeFlight::Finite(t) = tau {
            if !(t.is_finite() && t >= 0.0) {
                return Err(Error::InvalidParameter(format!("tau must be finite and non-negative, got {t}")));
            }
        }
        Ok(SgParams {
            mu,
            b0,
            b1,
            mass,
            hbar,
            dt,
            tau,
        })
    }

    pub fn with_tau(&self, tau: FreeFlight) -> Result<Self> {
        SgParams::new(self.mu, self.b0, self.b1, self.mass, self.hbar, self.dt, tau)
    }

    pub fn with_b0(&self, b0: f64) -> Result<Self> {
        SgParams::new(self.mu, b0, self.b1, self.mass, self.hbar, self.dt, self.tau)
    }

    fn finite_tau(&self) -> Result<f64> {
        self.tau.finite().ok_or(Error::InfiniteTau)
    }

    /// Probe and magnet must describe the same particle.
    pub fn check_probe(&self, probe: &GaussianProbe) -> Result<()> {
        let same = |a: f64, b: f64| ((a - b) / b).abs() <= 1e-12;
        if same(probe.mass(), self.mass) && same(probe.hbar(), self.hbar) {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "probe (m = {}, ħ = {}) does not match magnet parameters (m = {}, ħ = {})",
                probe.mass(),
                probe.hbar(),
                self.mass,
                self.hbar
            )))
        }
    }
}

/// Spin-dependent displacement of the packet centres at the screen.
pub fn g0(p: &SgParams) -> Result<f64> {
    let tau = p.finite_tau()?;
    Ok(p.mu * p.b1 * p.dt * (p.dt / 2.0 + tau) / p.mass)
}

/// `|g₀| / (√2 σ(Δt + τ))`.
pub fn erfc_argument(p: &SgParams, probe: &GaussianProbe) -> Result<f64> {
    p.check_probe(probe)?;
    let tau = p.finite_tau()?;
    Ok(g0(p)?.abs() / (SQRT_2 * probe.sigma_t(p.dt + tau)))
}

/// `ε(σ_z)²`; an infinite free flight is routed to [`error_sq_limit`].
pub fn error_sq(p: &SgParams, probe: &GaussianProbe) -> Result<f64> {
    match p.tau {
        FreeFlight::Infinite => error_sq_limit(p, probe),
        FreeFlight::Finite(_) => Ok(2.0 * erfc(erfc_argument(p, probe)?)),
    }
}

/// `lim_{τ→∞} ε(σ_z)² = 2 erfc(|μB₁Δt| / (√2 √⟨P²⟩))`.
pub fn error_sq_limit(p: &SgParams, probe: &GaussianProbe) -> Result<f64> {
    p.check_probe(probe)?;
    let var_p = probe.moments().var_p;
    Ok(2.0 * erfc((p.mu * p.b1 * p.dt).abs() / (SQRT_2 * var_p.sqrt())))
}

/// Exponent `(2μ²B₁²Δt²/ħ²) σ(Δt/2)²` of the disturbance damping factor.
pub fn damping_exponent(p: &SgParams, probe: &GaussianProbe) -> Result<f64> {
    p.check_probe(probe)?;
    let k = p.mu * p.b1 * p.dt / p.hbar;
    Ok(2.0 * k * k * probe.sigma_t_sq(p.dt / 2.0))
}

/// `η(σ_x)²`, independent of the free-flight time.
pub fn disturbance_sq(p: &SgParams, probe: &GaussianProbe) -> Result<f64> {
    let damping = (-damping_exponent(p, probe)?).exp();
    let precession = (2.0 * p.mu * p.dt * p.b0 / p.hbar).cos();
    Ok((2.0 - 2.0 * damping * precession).clamp(0.0, 4.0))
}

/// `m⟨{Z,P}⟩ + ⟨P²⟩Δt < 0`: a finite free flight minimizes the error.
pub fn tau_condition(p: &SgParams, probe: &GaussianProbe) -> bool {
    let m = probe.moments();
    p.mass * m.anticom + m.var_p * p.dt < 0.0
}

/// Free-flight time minimizing the error.
///
/// When the condition of [`tau_condition`] holds the unique stationary point
/// of the error in `τ` is
/// `τ₀ = −[4m²⟨Z²⟩ + 3m⟨{Z,P}⟩Δt + 2⟨P²⟩Δt²] / [2(m⟨{Z,P}⟩ + ⟨P²⟩Δt)]`.
/// A negative `τ₀` means the error increases over all `τ ≥ 0`, so `0` is
/// returned. Otherwise the error decreases monotonically and the optimum is
/// at infinity.
pub fn optimal_tau(p: &SgParams, probe: &GaussianProbe) -> FreeFlight {
    if !tau_condition(p, probe) {
        return FreeFlight::Infinite;
    }
    let m = probe.moments();
    let (mass, dt) = (p.mass, p.dt);
    let num = 4.0 * mass * mass * m.var_z + 3.0 * mass * m.anticom * dt + 2.0 * m.var_p * dt * dt;
    let den = 2.0 * (mass * m.anticom + m.var_p * dt);
    FreeFlight::Finite((-num / den).max(0.0))
}

/// Largest `|2 − η²|/2` reachable at error `ε²`:
/// `exp(−[erf⁻¹((2 − ε²)/2)]²)`.
pub fn region_bound(eps_sq: f64) -> Result<f64> {
    check_range("eps_sq", eps_sq, 0.0, 4.0)?;
    // erf⁻¹(1 − y) = erfc⁻¹(y) keeps precision near ε² = 0
    let x = erfc_inv(eps_sq / 2.0);
    if x.is_infinite() {
        return Ok(0.0);
    }
    Ok((-x * x).exp())
}

pub fn in_region(point: &EdPoint) -> bool {
    let lhs = (2.0 - point.eta_sq()).abs() / 2.0;
    region_bound(point.eps_sq()).is_ok_and(|b| lhs <= b + 1e-12)
}

/// Linear sampling of one parameter; `steps == 1` samples `min` only.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl Axis {
    pub fn new(min: f64, max: f64, steps: usize) -> Result<Self> {
        check_finite("axis min", min)?;
        check_finite("axis max", max)?;
        if steps == 0 || max < min {
            return Err(Error::InvalidParameter(format!(
                "axis needs steps ≥ 1 and max ≥ min, got [{min}, {max}] × {steps}"
            )));
        }
        Ok(Axis { min, max, steps })
    }

    pub fn point(min: f64) -> Self {
        Axis { min, max: min, steps: 1 }
    }

    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.min];
        }
        (0..self.steps)
            .map(|i| self.min + (self.max - self.min) * i as f64 / (self.steps - 1) as f64)
            .collect()
    }
}

/// Grid over `(Re λ, Im λ, B₀, τ)` with the remaining magnet parameters fixed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionGrid {
    /// `b0` and `tau` of the base are overridden by the axes.
    pub base: SgParams,
    pub lambda_re: Axis,
    pub lambda_im: Axis,
    pub b0: Axis,
    pub tau: Axis,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionSample {
    pub lambda: Complex64,
    pub b0: f64,
    pub tau: f64,
    pub point: EdPoint,
}

/// Evaluates `(ε², η²)` over the grid in row-major axis order
/// (`Re λ` slowest, `τ` fastest).
pub fn sweep_region(grid: &RegionGrid) -> Result<Vec<RegionSample>> {
    if grid.lambda_re.min <= 0.0 {
        return Err(Error::InvalidParameter("Re λ axis must stay positive".into()));
    }
    if grid.tau.min < 0.0 {
        return Err(Error::InvalidParameter("τ axis must be non-negative".into()));
    }
    let mut jobs = Vec::new();
    for re in grid.lambda_re.values() {
        for im in grid.lambda_im.values() {
            for b0 in grid.b0.values() {
                for tau in grid.tau.values() {
                    jobs.push((Complex64::new(re, im), b0, tau));
                }
            }
        }
    }
    jobs.into_par_iter()
        .map(|(lambda, b0, tau)| {
            let p = SgParams {
                b0,
                tau: FreeFlight::Finite(tau),
                ..grid.base
            };
            let probe = GaussianProbe::new(lambda, p.hbar, p.mass)?;
            let point = EdPoint::new(error_sq(&p, &probe)?, disturbance_sq(&p, &probe)?)?;
            Ok(RegionSample { lambda, b0, tau, point })
        })
        .collect()
}
