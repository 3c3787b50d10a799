//! Cell-centred periodic grid and the two-component spinor field on it.

use std::f64::consts::PI;

use num_complex::Complex64;
use sgedr::{GaussianProbe, SgParams};

use crate::error::{GridError, Result};

/// Number of cells on each side counted as the boundary layer.
pub(crate) fn edge_cells(n: usize) -> usize {
    n / 32
}

/// Points sit at cell centres `z_min + (j + ½)·dz`, so a symmetric domain
/// puts `z = 0` on a cell edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    n: usize,
    z_min: f64,
    z_max: f64,
}

impl Grid1D {
    pub fn new(n: usize, z_min: f64, z_max: f64) -> Result<Self> {
        if n < 256 || !n.is_power_of_two() {
            return Err(GridError::PointCount(n));
        }
        if !(z_min.is_finite() && z_max.is_finite() && z_max > z_min) {
            return Err(GridError::Domain { z_min, z_max });
        }
        Ok(Grid1D { n, z_min, z_max })
    }

    /// Symmetric grid of the width demanded by [`required_width`].
    pub fn for_process(n: usize, p: &SgParams, probe: &GaussianProbe) -> Result<Self> {
        let half = 0.5 * required_width(p, probe)?;
        Grid1D::new(n, -half, half)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn z_min(&self) -> f64 {
        self.z_min
    }

    pub fn z_max(&self) -> f64 {
        self.z_max
    }

    pub fn width(&self) -> f64 {
        self.z_max - self.z_min
    }

    pub fn dz(&self) -> f64 {
        self.width() / self.n as f64
    }

    pub fn z(&self, j: usize) -> f64 {
        self.z_min + (j as f64 + 0.5) * self.dz()
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.z(j)).collect()
    }

    /// Angular wavenumbers in FFT order.
    pub fn wavenumbers(&self) -> Vec<f64> {
        let base = 2.0 * PI / self.width();
        (0..self.n)
            .map(|j| {
                let m = if j < self.n / 2 { j as f64 } else { j as f64 - self.n as f64 };
                base * m
            })
            .collect()
    }

    /// Largest representable wavenumber `π/dz`.
    pub fn k_max(&self) -> f64 {
        PI / self.dz()
    }
}

/// Spatial extent bound `√⟨Z²⟩ + |g₀| + √⟨P²⟩·t_f/m`; it dominates both the
/// packet displacement and `σ(t)` for every `t ≤ t_f`.
pub fn packet_extent(p: &SgParams, probe: &GaussianProbe) -> Result<f64> {
    let tau = p.tau.finite().ok_or(GridError::InfiniteTau)?;
    let m = probe.moments();
    let g0 = sgedr::sg::g0(p)?;
    Ok(m.var_z.sqrt() + g0.abs() + m.var_p.sqrt() * (p.dt + tau) / p.mass)
}

/// Domain width: sixteen packet extents, and never less than sixteen initial
/// widths.
pub fn required_width(p: &SgParams, probe: &GaussianProbe) -> Result<f64> {
    let extent = packet_extent(p, probe)?;
    Ok((16.0 * extent).max(16.0 * probe.moments().var_z.sqrt()))
}

/// Checks the domain, position resolution and momentum window for a run.
pub fn check_resolution(grid: &Grid1D, p: &SgParams, probe: &GaussianProbe) -> Result<()> {
    let extent = packet_extent(p, probe)?;
    let minimum = 8.0 * extent;
    if grid.width() < minimum {
        return Err(GridError::DomainTooNarrow {
            width: grid.width(),
            required: minimum,
        });
    }
    let m = probe.moments();
    let sigma = m.var_z.sqrt();
    let (lo, hi) = (4.0 * grid.dz(), grid.width() / 16.0);
    if !(lo <= sigma && sigma <= hi) {
        return Err(GridError::Unresolved { sigma, lo, hi });
    }
    let required = 8.0 * ((p.mu * p.b1 * p.dt).abs() + m.var_p.sqrt()) / p.hbar;
    if grid.k_max() < required {
        return Err(GridError::MomentumWindow {
            window: grid.k_max(),
            required,
        });
    }
    Ok(())
}

/// Amplitudes of the `σ_z = +1` and `σ_z = −1` components at the grid points.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinorField {
    pub up: Vec<Complex64>,
    pub down: Vec<Complex64>,
    dz: f64,
}

impl SpinorField {
    pub fn new(up: Vec<Complex64>, down: Vec<Complex64>, dz: f64) -> Self {
        assert_eq!(up.len(), down.len(), "spinor components must share the grid");
        SpinorField { up, down, dz }
    }

    pub fn dz(&self) -> f64 {
        self.dz
    }

    pub fn norm_sq(&self) -> f64 {
        self.branch_norm_sq(0) + self.branch_norm_sq(1)
    }

    /// `0` is the up component, `1` the down component.
    pub fn branch_norm_sq(&self, branch: usize) -> f64 {
        let v = if branch == 0 { &self.up } else { &self.down };
        v.iter().map(|a| a.norm_sqr()).sum::<f64>() * self.dz
    }

    /// `⟨φ|ψ⟩` summed over both components.
    pub fn inner(&self, other: &SpinorField) -> Complex64 {
        let dot = |a: &[Complex64], b: &[Complex64]| a.iter().zip(b).map(|(x, y)| x.conj() * y).sum::<Complex64>();
        (dot(&self.up, &other.up) + dot(&self.down, &other.down)) * self.dz
    }

    pub fn distance_sq(&self, other: &SpinorField) -> f64 {
        let diff = |a: &[Complex64], b: &[Complex64]| a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>();
        (diff(&self.up, &other.up) + diff(&self.down, &other.down)) * self.dz
    }

    /// Swaps the components, i.e. applies `σ_x`.
    pub fn flip(&mut self) {
        std::mem::swap(&mut self.up, &mut self.down);
    }

    /// `⟨σ_x⟩ = 2 Re Σ up*·down·dz`.
    pub fn sigma_x(&self) -> f64 {
        let s: Complex64 = self.up.iter().zip(&self.down).map(|(u, d)| u.conj() * d).sum();
        2.0 * s.re * self.dz
    }

    /// Probability in the outer boundary layer of the grid.
    pub fn boundary_probability(&self) -> f64 {
        let n = self.up.len();
        let e = edge_cells(n);
        let layer = |v: &[Complex64]| {
            v[..e].iter().chain(&v[n - e..]).map(|a| a.norm_sqr()).sum::<f64>()
        };
        (layer(&self.up) + layer(&self.down)) * self.dz
    }

    /// Position mean of one component, normalized by its own weight.
    pub fn branch_mean_z(&self, grid: &Grid1D, branch: usize) -> f64 {
        let v = if branch == 0 { &self.up } else { &self.down };
        let w: f64 = v.iter().map(|a| a.norm_sqr()).sum();
        v.iter().enumerate().map(|(j, a)| grid.z(j) * a.norm_sqr()).sum::<f64>() / w
    }

    /// `⟨Z²⟩` over both components.
    pub fn second_moment_z(&self, grid: &Grid1D) -> f64 {
        (0..self.up.len())
            .map(|j| grid.z(j).powi(2) * (self.up[j].norm_sqr() + self.down[j].norm_sqr()))
            .sum::<f64>()
            * self.dz
    }
}

/// Product state `spinor ⊗ ξ_λ` with the sampled probe normalized on the grid.
pub fn init_state(grid: &Grid1D, spinor: [Complex64; 2], probe: &GaussianProbe) -> Result<SpinorField> {
    let spin_norm = spinor[0].norm_sqr() + spinor[1].norm_sqr();
    if (spin_norm - 1.0).abs() > 1e-12 {
        return Err(GridError::SpinorNorm(spin_norm));
    }
    let sigma = probe.moments().var_z.sqrt();
    let (lo, hi) = (4.0 * grid.dz(), grid.width() / 16.0);
    if !(lo <= sigma && sigma <= hi) {
        return Err(GridError::Unresolved { sigma, lo, hi });
    }
    let lambda = probe.lambda();
    let xi: Vec<Complex64> = grid.points().iter().map(|&z| (-lambda * z * z).exp()).collect();
    let norm = (xi.iter().map(|a| a.norm_sqr()).sum::<f64>() * grid.dz()).sqrt();
    let up = xi.iter().map(|a| spinor[0] * a / norm).collect();
    let down = xi.iter().map(|a| spinor[1] * a / norm).collect();
    Ok(SpinorField::new(up, down, grid.dz()))
}
