//! Strang-split propagation under `μσ_z(B₀ + B₁Z) + P²/2m` followed by exact
//! free flight.

use std::f64::consts::FRAC_PI_4;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use sgedr::SgParams;

use crate::error::{GridError, Result};
use crate::grid::{Grid1D, SpinorField};

/// Largest potential phase `max_z |μ(B₀ + B₁z)|·δt/ħ` accumulated in one
/// step of size `δt = Δt/steps`.
pub fn step_phase(grid: &Grid1D, p: &SgParams, steps: usize) -> f64 {
    let v = |z: f64| (p.mu * (p.b0 + p.b1 * z)).abs();
    let v_max = v(grid.z(0)).max(v(grid.z(grid.n() - 1)));
    v_max * (p.dt / steps as f64) / p.hbar
}

/// Fewest steps keeping the per-step potential phase below `π/4`.
pub fn min_steps(grid: &Grid1D, p: &SgParams) -> usize {
    let total = step_phase(grid, p, 1);
    (total / FRAC_PI_4).floor() as usize + 1
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolutionStats {
    pub steps: usize,
    /// Largest boundary-layer probability seen during the forward run.
    pub max_boundary_probability: f64,
    pub norm_drift: f64,
}

struct Spectral {
    fft: Arc<dyn Fft<f64>>,
    ifft: Arc<dyn Fft<f64>>,
    scratch: Vec<Complex64>,
}

impl Spectral {
    /// Multiplies by `phase` in momentum space.
    fn apply(&mut self, v: &mut [Complex64], phase: &[Complex64], backward: bool) {
        self.fft.process_with_scratch(v, &mut self.scratch);
        multiply(v, phase, backward);
        self.ifft.process_with_scratch(v, &mut self.scratch);
    }
}

/// Pointwise product; `conjugate` inverts unit-modulus phases (the `1/n`
/// normalization is real and survives conjugation).
fn multiply(v: &mut [Complex64], phase: &[Complex64], conjugate: bool) {
    if conjugate {
        v.iter_mut().zip(phase).for_each(|(a, f)| *a *= f.conj());
    } else {
        v.iter_mut().zip(phase).for_each(|(a, f)| *a *= f);
    }
}

pub struct Propagator {
    steps: usize,
    spectral: Spectral,
    /// Half-step potential phases for the up and down components.
    half_potential: [Vec<Complex64>; 2],
    /// Full-step kinetic phase, with the inverse-FFT `1/n` folded in.
    kinetic: Vec<Complex64>,
    /// Free flight over `τ`, with `1/n` folded in.
    free_flight: Vec<Complex64>,
}

impl Propagator {
    pub fn new(grid: &Grid1D, p: &SgParams, steps: usize) -> Result<Self> {
        let tau = p.tau.finite().ok_or(GridError::InfiniteTau)?;
        let need = min_steps(grid, p);
        if steps < need {
            return Err(GridError::TooFewSteps {
                steps,
                min_steps: need,
                phase: step_phase(grid, p, steps.max(1)),
            });
        }
        let h = p.dt / steps as f64;
        let mut planner = FftPlanner::new();
        let spectral = Spectral {
            fft: planner.plan_fft_forward(grid.n()),
            ifft: planner.plan_fft_inverse(grid.n()),
            scratch: vec![Complex64::default(); grid.n()],
        };
        let half_potential = [1.0, -1.0].map(|s: f64| {
            grid.points()
                .iter()
                .map(|&z| Complex64::from_polar(1.0, -s * p.mu * (p.b0 + p.b1 * z) * h / (2.0 * p.hbar)))
                .collect()
        });
        let inv_n = 1.0 / grid.n() as f64;
        let kinetic_phase = |t: f64| -> Vec<Complex64> {
            grid.wavenumbers()
                .iter()
                .map(|&k| Complex64::from_polar(inv_n, -p.hbar * k * k * t / (2.0 * p.mass)))
                .collect()
        };
        Ok(Propagator {
            steps,
            spectral,
            half_potential,
            kinetic: kinetic_phase(h),
            free_flight: kinetic_phase(tau),
        })
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    fn magnet_step(&mut self, field: &mut SpinorField, backward: bool) {
        for (v, half) in [&mut field.up, &mut field.down].into_iter().zip(&self.half_potential) {
            multiply(v, half, backward);
            self.spectral.apply(v, &self.kinetic, backward);
            multiply(v, half, backward);
        }
    }

    /// Magnet stage only, for snapshots at the magnet exit.
    pub fn through_magnet(&mut self, field: &mut SpinorField) {
        for _ in 0..self.steps {
            self.magnet_step(field, false);
        }
    }

    /// Free-flight stage only.
    pub fn free_flight(&mut self, field: &mut SpinorField) {
        self.spectral.apply(&mut field.up, &self.free_flight, false);
        self.spectral.apply(&mut field.down, &self.free_flight, false);
    }

    /// Evolves through the magnet and the free flight, tracking boundary
    /// leakage and norm drift.
    pub fn forward(&mut self, field: &mut SpinorField) -> Result<EvolutionStats> {
        let initial = field.norm_sq();
        let mut leak = field.boundary_probability();
        for _ in 0..self.steps {
            self.magnet_step(field, false);
            leak = leak.max(field.boundary_probability());
        }
        self.free_flight(field);
        leak = leak.max(field.boundary_probability());
        let drift = (field.norm_sq() - initial).abs();
        if leak > 1e-10 {
            return Err(GridError::Leakage(leak));
        }
        if drift > 1e-10 {
            return Err(GridError::NormDrift(drift));
        }
        Ok(EvolutionStats {
            steps: self.steps,
            max_boundary_probability: leak,
            norm_drift: drift,
        })
    }

    /// Exact inverse of [`Propagator::forward`] on the grid.
    pub fn backward(&mut self, field: &mut SpinorField) {
        self.spectral.apply(&mut field.up, &self.free_flight, true);
        self.spectral.apply(&mut field.down, &self.free_flight, true);
        for _ in 0..self.steps {
            self.magnet_step(field, true);
        }
    }
}

/// Forward evolution of a copy of `field`; `steps = None` uses [`min_steps`].
pub fn evolve(grid: &Grid1D, field: &SpinorField, p: &SgParams, steps: Option<usize>) -> Result<(SpinorField, EvolutionStats)> {
    let steps = steps.unwrap_or_else(|| min_steps(grid, p));
    let mut prop = Propagator::new(grid, p, steps)?;
    let mut out = field.clone();
    let stats = prop.forward(&mut out)?;
    Ok((out, stats))
}
