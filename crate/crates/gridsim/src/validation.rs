//! Closed-form versus grid comparison on a dimensionless test set.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use sgedr::{sg, FreeFlight, GaussianProbe, QubitState, SgParams};

use crate::error::Result;
use crate::grid::Grid1D;
use crate::measure::{measure, GridMeasurement};
use crate::propagator::min_steps;

/// Relative agreement demanded between grid and closed form, and between
/// the base and refined grids.
pub const TOLERANCE: f64 = 1e-2;

/// Units in which `ħ = m = Δt = 1` and `μ = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Scales {
    pub length: f64,
    pub time: f64,
    pub mass: f64,
}

/// Rescales a process and probe to units with `ħ = m = Δt = μ = 1`. Length is
/// measured in `√(ħΔt/m)`, so `λ`, `μB₀` and `μB₁` absorb the conversion.
/// `ε²` and `η²` are unchanged.
pub fn nondimensionalize(p: &SgParams, probe: &GaussianProbe) -> Result<(SgParams, GaussianProbe, Scales)> {
    p.check_probe(probe)?;
    let scales = Scales {
        length: (p.hbar * p.dt / p.mass).sqrt(),
        time: p.dt,
        mass: p.mass,
    };
    let energy = p.hbar / p.dt;
    let tau = match p.tau {
        FreeFlight::Finite(t) => FreeFlight::Finite(t / p.dt),
        FreeFlight::Infinite => FreeFlight::Infinite,
    };
    let q = SgParams::new(
        1.0,
        p.mu * p.b0 / energy,
        p.mu * p.b1 * scales.length / energy,
        1.0,
        1.0,
        1.0,
        tau,
    )?;
    let lambda = probe.lambda() * scales.length * scales.length;
    Ok((q, GaussianProbe::new(lambda, 1.0, 1.0)?, scales))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TestCase {
    pub lambda: Complex64,
    /// `μB₁` with `μ = 1`.
    pub b1: f64,
    pub b0: f64,
    pub tau: f64,
}

impl TestCase {
    pub fn params(&self) -> Result<(SgParams, GaussianProbe)> {
        let p = SgParams::new(1.0, self.b0, self.b1, 1.0, 1.0, 1.0, FreeFlight::Finite(self.tau))?;
        Ok((p, GaussianProbe::new(self.lambda, 1.0, 1.0)?))
    }
}

/// All sixteen combinations of `λ ∈ {1, 1+0.5i}`, `μB₁ ∈ {1, 3}`,
/// `τ ∈ {0, 1}`, `B₀ ∈ {0, 0.4}`.
pub fn dimensionless_test_set() -> Vec<TestCase> {
    let mut cases = Vec::new();
    for lambda in [Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.5)] {
        for b1 in [1.0, 3.0] {
            for tau in [0.0, 1.0] {
                for b0 in [0.0, 0.4] {
                    cases.push(TestCase { lambda, b1, b0, tau });
                }
            }
        }
    }
    cases
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GridOptions {
    pub n: usize,
    /// Magnet steps; `None` picks the fewest allowed by the phase rule.
    pub steps: Option<usize>,
}

impl Default for GridOptions {
    fn default() -> Self {
        GridOptions { n: 4096, steps: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CaseReport {
    pub case: TestCase,
    pub n: usize,
    pub steps: usize,
    pub eps_sq_model: f64,
    pub eta_sq_model: f64,
    pub eps_sq_grid: f64,
    pub eta_sq_grid: f64,
    /// Relative grid-versus-model differences.
    pub eps_rel_err: f64,
    pub eta_rel_err: f64,
    /// Relative change after doubling both `n` and the step count.
    pub eps_refine_change: f64,
    pub eta_refine_change: f64,
    pub max_boundary_probability: f64,
    pub max_norm_drift: f64,
}

impl CaseReport {
    pub fn passed(&self) -> bool {
        [self.eps_rel_err, self.eta_rel_err, self.eps_refine_change, self.eta_refine_change]
            .iter()
            .all(|&e| e <= TOLERANCE)
    }
}

/// Relative difference, falling back to absolute when the reference is at
/// round-off level.
fn rel(a: f64, b: f64) -> f64 {
    if b.abs() < 1e-8 {
        (a - b).abs()
    } else {
        ((a - b) / b).abs()
    }
}

/// Runs one case on the base grid and on a grid refined by two in both
/// space and time, for `ρ = |σ_y = +1⟩`.
pub fn run_case(case: &TestCase, opts: GridOptions) -> Result<CaseReport> {
    let (p, probe) = case.params()?;
    let state = QubitState::sigma_y_plus();
    let grid = Grid1D::for_process(opts.n, &p, &probe)?;
    let steps = opts.steps.unwrap_or_else(|| min_steps(&grid, &p));
    let base: GridMeasurement = measure(&grid, &p, &state, &probe, Some(steps))?;
    let fine_grid = Grid1D::for_process(2 * opts.n, &p, &probe)?;
    let fine = measure(&fine_grid, &p, &state, &probe, Some(2 * steps))?;
    let eps_sq_model = sg::error_sq(&p, &probe)?;
    let eta_sq_model = sg::disturbance_sq(&p, &probe)?;
    Ok(CaseReport {
        case: *case,
        n: opts.n,
        steps,
        eps_sq_model,
        eta_sq_model,
        eps_sq_grid: base.eps_sq,
        eta_sq_grid: base.eta_sq,
        eps_rel_err: rel(base.eps_sq, eps_sq_model),
        eta_rel_err: rel(base.eta_sq, eta_sq_model),
        eps_refine_change: rel(fine.eps_sq, base.eps_sq),
        eta_refine_change: rel(fine.eta_sq, base.eta_sq),
        max_boundary_probability: base.max_boundary_probability.max(fine.max_boundary_probability),
        max_norm_drift: base.max_norm_drift.max(fine.max_norm_drift),
    })
}

/// Runs `cases` in parallel; reports come back in input order.
pub fn run_cases(cases: &[TestCase], opts: GridOptions) -> Vec<Result<CaseReport>> {
    cases.par_iter().map(|c| run_case(c, opts)).collect()
}

/// Cases with no field gradient, where the meter carries no spin
/// information and `ε² = 2`.
pub fn sanity_cases() -> Vec<TestCase> {
    vec![
        TestCase {
            lambda: Complex64::new(1.0, 0.0),
            b1: 0.0,
            b0: 0.0,
            tau: 1.0,
        },
        TestCase {
            lambda: Complex64::new(1.0, 0.5),
            b1: 0.0,
            b0: 0.4,
            tau: 0.0,
        },
    ]
}
