//! Error and disturbance computed directly from their operator definitions on
//! the grid.

use num_complex::Complex64;
use sgedr::{FreeFlight, GaussianProbe, QubitState, SgParams};

use crate::error::{GridError, Result};
use crate::grid::{check_resolution, init_state, Grid1D, SpinorField};
use crate::propagator::{min_steps, EvolutionStats, Propagator};

/// Meter reading at the screen: `−1` for `z ≥ 0`, `+1` for `z < 0`.
pub fn meter(z: f64) -> f64 {
    if z >= 0.0 {
        -1.0
    } else {
        1.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridMeasurement {
    pub eps_sq: f64,
    pub eta_sq: f64,
    pub steps: usize,
    pub max_boundary_probability: f64,
    pub max_norm_drift: f64,
}

struct Run {
    grid: Grid1D,
    prop: Propagator,
    initial: SpinorField,
    evolved: SpinorField,
    stats: EvolutionStats,
}

fn prepare(grid: &Grid1D, p: &SgParams, spinor: [Complex64; 2], probe: &GaussianProbe, steps: Option<usize>) -> Result<Run> {
    p.check_probe(probe)?;
    check_resolution(grid, p, probe)?;
    let initial = init_state(grid, spinor, probe)?;
    let mut prop = Propagator::new(grid, p, steps.unwrap_or_else(|| min_steps(grid, p)))?;
    let mut evolved = initial.clone();
    let stats = prop.forward(&mut evolved)?;
    Ok(Run {
        grid: *grid,
        prop,
        initial,
        evolved,
        stats,
    })
}

impl Run {
    /// `‖(U†(f(Z))U − σ_z)Ψ‖²`.
    fn error_sq(&mut self) -> f64 {
        let mut v = self.evolved.clone();
        for (j, (u, d)) in v.up.iter_mut().zip(v.down.iter_mut()).enumerate() {
            let f = meter(self.grid.z(j));
            *u *= f;
            *d *= f;
        }
        self.prop.backward(&mut v);
        let mut target = self.initial.clone();
        target.down.iter_mut().for_each(|a| *a = -*a);
        v.distance_sq(&target)
    }

    /// `‖(U†σ_xU − σ_x)Ψ‖²`.
    fn disturbance_sq(&mut self) -> f64 {
        let mut v = self.evolved.clone();
        v.flip();
        self.prop.backward(&mut v);
        let mut target = self.initial.clone();
        target.flip();
        v.distance_sq(&target)
    }
}

/// Weighted sum over the eigen-decomposition of `ρ`.
fn over_ensemble(state: &QubitState, mut per_state: impl FnMut([Complex64; 2]) -> Result<f64>) -> Result<f64> {
    let mut total = 0.0;
    for (w, psi) in state.ensemble() {
        if w > 0.0 {
            total += w * per_state(psi)?;
        }
    }
    Ok(total)
}

/// `ε(σ_z)` with the sign meter at the screen.
pub fn measure_error(grid: &Grid1D, p: &SgParams, state: &QubitState, probe: &GaussianProbe, steps: Option<usize>) -> Result<f64> {
    Ok(over_ensemble(state, |psi| Ok(prepare(grid, p, psi, probe, steps)?.error_sq()))?.sqrt())
}

/// `η(σ_x)`. Also recomputed with the free flight removed; the two must agree
/// to `1e-9`.
pub fn measure_disturbance(grid: &Grid1D, p: &SgParams, state: &QubitState, probe: &GaussianProbe, steps: Option<usize>) -> Result<f64> {
    let eta = over_ensemble(state, |psi| Ok(prepare(grid, p, psi, probe, steps)?.disturbance_sq()))?.sqrt();
    check_tau_invariance(grid, p, state, probe, steps, eta)?;
    Ok(eta)
}

fn check_tau_invariance(grid: &Grid1D, p: &SgParams, state: &QubitState, probe: &GaussianProbe, steps: Option<usize>, eta: f64) -> Result<()> {
    if p.tau == FreeFlight::Finite(0.0) {
        return Ok(());
    }
    let p0 = p.with_tau(FreeFlight::Finite(0.0))?;
    let eta0 = over_ensemble(state, |psi| Ok(prepare(grid, &p0, psi, probe, steps)?.disturbance_sq()))?.sqrt();
    let shift = (eta - eta0).abs();
    if shift > 1e-9 {
        return Err(GridError::TauDependence(shift));
    }
    Ok(())
}

/// Both quantities from a shared forward evolution per ensemble member.
pub fn measure(grid: &Grid1D, p: &SgParams, state: &QubitState, probe: &GaussianProbe, steps: Option<usize>) -> Result<GridMeasurement> {
    let mut out = GridMeasurement {
        eps_sq: 0.0,
        eta_sq: 0.0,
        steps: 0,
        max_boundary_probability: 0.0,
        max_norm_drift: 0.0,
    };
    for (w, psi) in state.ensemble() {
        if w <= 0.0 {
            continue;
        }
        let mut run = prepare(grid, p, psi, probe, steps)?;
        out.eps_sq += w * run.error_sq();
        out.eta_sq += w * run.disturbance_sq();
        out.steps = run.stats.steps;
        out.max_boundary_probability = out.max_boundary_probability.max(run.stats.max_boundary_probability);
        out.max_norm_drift = out.max_norm_drift.max(run.stats.norm_drift);
    }
    check_tau_invariance(grid, p, state, probe, steps, out.eta_sq.sqrt())?;
    Ok(out)
}
