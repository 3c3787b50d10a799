//! Error/disturbance estimate for the 1922 silver-atom Stern–Gerlach run.
//!
//! The chain: silver mass → rms beam speed → transit time `Δt = L₂/v_y` →
//! collimator widths `D_p`, `D_z` for each bracketing factor `K` → Gaussian
//! probe → closed-form `ε²`, `η²` → relation verdicts for `ρ = |σ_y = +1⟩`.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{check_positive, check_range, Error, Result};
use crate::probe::{collimator_posterior, CollimatorModel};
use crate::sg::{self, FreeFlight, SgParams};
use crate::spin::{evaluate_edrs, EdPoint, EdrReport, PauliObservable, QubitState};

/// CODATA 2018 values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    /// Boltzmann constant (J/K).
    pub k_b: f64,
    /// Avogadro constant (mol⁻¹).
    pub n_a: f64,
    /// Electron magnetic moment (J/T).
    pub mu_electron: f64,
    /// Reduced Planck constant (J·s).
    pub hbar: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        PhysicalConstants {
            k_b: 1.380_649e-23,
            n_a: 6.022_140_76e23,
            mu_electron: -9.284_764_704_3e-24,
            hbar: 1.054_571_817e-34,
        }
    }
}

/// Apparatus data, SI units. Defaults are the 1922 values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    /// Oven temperature (K).
    pub temperature: f64,
    /// Field gradient (T/m).
    pub b1: f64,
    /// Collimator plate separation (m).
    pub l1: f64,
    /// Magnet length (m).
    pub l2: f64,
    /// Magnet-to-screen distance (m).
    pub l3: f64,
    /// Hole diameter of plate 1 (m).
    pub d1: f64,
    /// Slit width of plate 2 (m).
    pub d2: f64,
    /// Standard atomic weight (g/mol).
    pub atomic_weight: f64,
    /// Uniform field (T); not recorded for the original run.
    pub b0: f64,
    pub k_min: f64,
    pub k_max: f64,
    pub k_steps: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            temperature: 1500.0,
            b1: -1.35e3,
            l1: 3.3e-2,
            l2: 3.5e-2,
            l3: 0.0,
            d1: 6.2e-5,
            d2: 4.0e-5,
            atomic_weight: 107.868_22,
            b0: 0.0,
            k_min: 0.6,
            k_max: 1.0,
            k_steps: 5,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        check_positive("T", self.temperature)?;
        crate::error::check_finite("B1", self.b1)?;
        crate::error::check_finite("B0", self.b0)?;
        check_positive("L1", self.l1)?;
        check_positive("L2", self.l2)?;
        if !(self.l3.is_finite() && self.l3 >= 0.0) {
            return Err(Error::InvalidParameter(format!("L3 must be non-negative, got {}", self.l3)));
        }
        check_positive("d1", self.d1)?;
        check_positive("d2", self.d2)?;
        check_positive("atomic_weight", self.atomic_weight)?;
        self.k_values().map(|_| ())
    }

    /// `k_steps` equally spaced factors over `[k_min, k_max]`.
    pub fn k_values(&self) -> Result<Vec<f64>> {
        check_range("K_min", self.k_min, 0.6, 1.0)?;
        check_range("K_max", self.k_max, 0.6, 1.0)?;
        if self.k_steps == 0 || self.k_max < self.k_min {
            return Err(Error::InvalidParameter(format!(
                "need K_steps ≥ 1 and K_max ≥ K_min, got [{}, {}] × {}",
                self.k_min, self.k_max, self.k_steps
            )));
        }
        if self.k_steps == 1 {
            return Ok(vec![self.k_min]);
        }
        Ok((0..self.k_steps)
            .map(|i| self.k_min + (self.k_max - self.k_min) * i as f64 / (self.k_steps - 1) as f64)
            .collect())
    }

    /// True when the apparatus fields equal the 1922 values, i.e. when the
    /// printed reference numbers apply. K range and `B0` are not compared.
    pub fn is_original_apparatus(&self) -> bool {
        let d = ExperimentConfig::default();
        (self.temperature, self.b1, self.l1, self.l2, self.l3, self.d1, self.d2, self.atomic_weight)
            == (d.temperature, d.b1, d.l1, d.l2, d.l3, d.d1, d.d2, d.atomic_weight)
    }
}

/// Parses `key = value` lines; `#` starts a comment. Keys: `T`, `B1`, `L1`,
/// `L2`, `L3`, `d1`, `d2`, `atomic_weight`, `B0`, `K_min`, `K_max`,
/// `K_steps`. Missing keys keep their defaults.
impl FromStr for ExperimentConfig {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut cfg = ExperimentConfig::default();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| Error::Config { line: line_no, msg };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected `key = value`, got `{line}`")))?;
            let (key, value) = (key.trim(), value.trim());
            if key == "K_steps" {
                cfg.k_steps = value
                    .parse()
                    .map_err(|_| err(format!("K_steps must be a positive integer, got `{value}`")))?;
                continue;
            }
            let v: f64 = value
                .parse()
                .map_err(|_| err(format!("`{key}` has non-numeric value `{value}`")))?;
            let slot = match key {
                "T" => &mut cfg.temperature,
                "B1" => &mut cfg.b1,
                "L1" => &mut cfg.l1,
                "L2" => &mut cfg.l2,
                "L3" => &mut cfg.l3,
                "d1" => &mut cfg.d1,
                "d2" => &mut cfg.d2,
                "atomic_weight" => &mut cfg.atomic_weight,
                "B0" => &mut cfg.b0,
                "K_min" => &mut cfg.k_min,
                "K_max" => &mut cfg.k_max,
                _ => return Err(err(format!("unknown key `{key}`"))),
            };
            *slot = v;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Atomic mass in kg from the molar mass in g/mol.
pub fn silver_mass(atomic_weight: f64, c: &PhysicalConstants) -> f64 {
    atomic_weight / 1000.0 / c.n_a
}

/// Effusive-beam speed density `m²/(2k_B²T²) · v³ exp(−mv²/2k_BT)`, normalized
/// on `[0, ∞)`.
pub fn flux_pdf(v: f64, temperature: f64, mass: f64, c: &PhysicalConstants) -> f64 {
    if v < 0.0 {
        return 0.0;
    }
    let kt = c.k_b * temperature;
    mass * mass / (2.0 * kt * kt) * v.powi(3) * (-mass * v * v / (2.0 * kt)).exp()
}

/// `v_y = √(4k_BT/m)`.
pub fn rms_velocity(temperature: f64, mass: f64, c: &PhysicalConstants) -> f64 {
    (4.0 * c.k_b * temperature / mass).sqrt()
}

/// Per-`K` slice of the chain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KRow {
    pub k: f64,
    pub d_p: f64,
    pub d_z: f64,
    /// Real width parameter of the posterior probe (m⁻²).
    pub lambda: f64,
    pub var_z: f64,
    /// `(Δt²/m²)·Var(P)` (m²).
    pub var_p_term: f64,
    /// `σ(Δt + τ)²` (m²).
    pub sigma_screen_sq: f64,
    /// `σ(Δt/2)²` (m²).
    pub sigma_half_sq: f64,
    pub erfc_arg: f64,
    pub damping_exponent: f64,
    pub eps_sq: f64,
    pub eta_sq: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainReport {
    pub config: ExperimentConfig,
    pub constants: PhysicalConstants,
    pub mass: f64,
    pub v_y: f64,
    pub dt: f64,
    pub tau: f64,
    pub delta_p: f64,
    pub delta_z: f64,
    /// `1.25·δP`, the `K = 1` momentum width.
    pub delta_p_125: f64,
    /// `1.25·δZ`, the `K = 1` position width.
    pub delta_z_125: f64,
    pub g0: f64,
    /// `μB₁Δt/ħ` (m⁻¹).
    pub kick_wavenumber: f64,
    pub rows: Vec<KRow>,
    pub eps_sq_min: f64,
    pub eps_sq_max: f64,
    pub eta_sq: f64,
    /// Upper bound `max ε² / 4` on the probability of a wrong reading.
    pub error_probability: f64,
    /// Relation verdicts at `(min ε², η²)` and `(max ε², η²)`.
    pub edr_low: EdrReport,
    pub edr_high: EdrReport,
}

pub fn run_chain(cfg: &ExperimentConfig, c: &PhysicalConstants, k_values: &[f64]) -> Result<ChainReport> {
    cfg.validate()?;
    if k_values.is_empty() {
        return Err(Error::InvalidParameter("at least one K value is required".into()));
    }
    let mass = silver_mass(cfg.atomic_weight, c);
    let v_y = rms_velocity(cfg.temperature, mass, c);
    let dt = cfg.l2 / v_y;
    let tau = cfg.l3 / v_y;
    let params = SgParams::new(c.mu_electron, cfg.b0, cfg.b1, mass, c.hbar, dt, FreeFlight::Finite(tau))?;
    let g0 = sg::g0(&params)?;

    let rows = k_values
        .iter()
        .map(|&k| {
            let cm = CollimatorModel::new(cfg.d1, cfg.d2, cfg.l1, v_y, mass, c.hbar, k)?;
            let probe = collimator_posterior(&cm)?;
            let m = probe.moments();
            Ok(KRow {
                k,
                d_p: cm.d_p(),
                d_z: cm.d_z(),
                lambda: cm.lambda(),
                var_z: m.var_z,
                var_p_term: dt * dt / (mass * mass) * m.var_p,
                sigma_screen_sq: probe.sigma_t_sq(dt + tau),
                sigma_half_sq: probe.sigma_t_sq(dt / 2.0),
                erfc_arg: sg::erfc_argument(&params, &probe)?,
                damping_exponent: sg::damping_exponent(&params, &probe)?,
                eps_sq: sg::error_sq(&params, &probe)?,
                eta_sq: sg::disturbance_sq(&params, &probe)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let eps_sq_min = rows.iter().map(|r| r.eps_sq).fold(f64::INFINITY, f64::min);
    let eps_sq_max = rows.iter().map(|r| r.eps_sq).fold(f64::NEG_INFINITY, f64::max);
    // η² is K independent whenever the damping underflows; report the worst case
    let eta_sq = rows.iter().map(|r| r.eta_sq).fold(f64::INFINITY, f64::min);

    let state = QubitState::sigma_y_plus();
    let (x, z) = (PauliObservable::x(), PauliObservable::z());
    let edr_low = evaluate_edrs(&EdPoint::new(eps_sq_min, eta_sq)?, &state, &z, &x);
    let edr_high = evaluate_edrs(&EdPoint::new(eps_sq_max, eta_sq)?, &state, &z, &x);

    let probe_k1 = CollimatorModel::new(cfg.d1, cfg.d2, cfg.l1, v_y, mass, c.hbar, 1.0)?;
    Ok(ChainReport {
        config: *cfg,
        constants: *c,
        mass,
        v_y,
        dt,
        tau,
        delta_p: probe_k1.delta_p(),
        delta_z: probe_k1.delta_z(),
        delta_p_125: probe_k1.d_p(),
        delta_z_125: probe_k1.d_z(),
        g0,
        kick_wavenumber: c.mu_electron * cfg.b1 * dt / c.hbar,
        rows,
        eps_sq_min,
        eps_sq_max,
        eta_sq,
        error_probability: eps_sq_max / 4.0,
        edr_low,
        edr_high,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeisenbergVerdict {
    /// `√(max ε²)·√η²`.
    pub product_max: f64,
    /// `D_{σ_z σ_x}` for `ρ = |σ_y = +1⟩`, i.e. 1.
    pub bound: f64,
    pub violated: bool,
}

/// Heisenberg's relation at the worst-case (largest-error) end of the interval.
pub fn heisenberg_verdict(report: &ChainReport) -> HeisenbergVerdict {
    let product_max = report.eps_sq_max.sqrt() * report.eta_sq.sqrt();
    let bound = report.edr_high.d;
    HeisenbergVerdict {
        product_max,
        bound,
        violated: product_max < bound,
    }
}

/// One computed quantity compared against its printed value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossCheck {
    pub name: String,
    pub computed: f64,
    pub printed: f64,
    pub rel_err: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CrossCheck {
    pub fn new(name: impl Into<String>, computed: f64, printed: f64, tolerance: f64) -> Self {
        let rel_err = ((computed - printed) / printed).abs();
        CrossCheck {
            name: name.into(),
            computed,
            printed,
            rel_err,
            tolerance,
            pass: rel_err <= tolerance,
        }
    }
}

/// Relative slack for the 3-significant-figure published intermediates.
pub const PRINTED_TOL: f64 = 5e-3;

/// Published values of the 1922 estimate. `K`-scaled quantities are stored
/// at `K = 1`.
pub mod printed {
    pub const MASS: f64 = 1.791_193_9e-25;
    pub const V_Y: f64 = 6.80e2;
    pub const DT: f64 = 5.14e-5;
    pub const DELTA_Z_125: f64 = 2.50e-6;
    pub const DELTA_P_125: f64 = 2.35e-25;
    pub const VAR_Z: f64 = 5.03e-20;
    pub const VAR_P_TERM: f64 = 4.54e-9;
    pub const SIGMA_DT_SQ: f64 = 4.54e-9;
    pub const G0: f64 = 9.26e-5;
    pub const ERFC_ARG: f64 = 0.972;
    pub const KICK_WAVENUMBER: f64 = 6.10e9;
    pub const DAMPING_EXPONENT: f64 = 8.44e10;
    pub const EPS_SQ_MIN: f64 = 4.38e-2;
    pub const EPS_SQ_MAX: f64 = 3.38e-1;
    pub const ERROR_PROBABILITY: f64 = 0.085;
}

/// Compares every intermediate of the chain against the published numbers at
/// [`PRINTED_TOL`]. `K`-dependent rows are rescaled by the published power of
/// `K` and checked at every `K` in the report.
pub fn appendix_checks(report: &ChainReport) -> Vec<CrossCheck> {
    let tol = PRINTED_TOL;
    let mut out = vec![
        CrossCheck::new("m [kg]", report.mass, printed::MASS, tol),
        CrossCheck::new("v_y [m/s]", report.v_y, printed::V_Y, tol),
        CrossCheck::new("Δt [s]", report.dt, printed::DT, tol),
        CrossCheck::new("1.25·δZ [m]", report.delta_z_125, printed::DELTA_Z_125, tol),
        CrossCheck::new("1.25·δP [kg·m/s]", report.delta_p_125, printed::DELTA_P_125, tol),
        CrossCheck::new("g₀ [m]", report.g0, printed::G0, tol),
        CrossCheck::new("μB₁Δt/ħ [1/m]", report.kick_wavenumber, printed::KICK_WAVENUMBER, tol),
    ];
    for r in &report.rows {
        let k = r.k;
        out.push(CrossCheck::new(format!("Var(Z)·K² @K={k:.3} [m²]"), r.var_z * k * k, printed::VAR_Z, tol));
        out.push(CrossCheck::new(
            format!("(Δt/m)²Var(P)/K² @K={k:.3} [m²]"),
            r.var_p_term / (k * k),
            printed::VAR_P_TERM,
            tol,
        ));
        out.push(CrossCheck::new(
            format!("σ(Δt)²/K² @K={k:.3} [m²]"),
            r.sigma_screen_sq / (k * k),
            printed::SIGMA_DT_SQ,
            tol,
        ));
        out.push(CrossCheck::new(format!("erfc arg·K @K={k:.3}"), r.erfc_arg * k, printed::ERFC_ARG, tol));
    }
    out
}

/// Human-readable report: apparatus table followed by the computed chain.
pub fn render_table(report: &ChainReport) -> String {
    let c = &report.config;
    let mut s = String::new();
    let _ = writeln!(s, "Apparatus");
    let _ = writeln!(s, "  {:<28} {:>14}", "parameter", "value");
    for (name, v) in [
        ("oven temperature T [K]", c.temperature),
        ("field gradient B1 [T/m]", c.b1),
        ("L1 [m]", c.l1),
        ("L2 [m]", c.l2),
        ("L3 [m]", c.l3),
        ("hole diameter d1 [m]", c.d1),
        ("slit width d2 [m]", c.d2),
        ("atomic weight [g/mol]", c.atomic_weight),
        ("uniform field B0 [T]", c.b0),
    ] {
        let _ = writeln!(s, "  {name:<28} {v:>14.6e}");
    }
    let _ = writeln!(s, "\nCalculation chain");
    for (name, v) in [
        ("m [kg]", report.mass),
        ("v_y [m/s]", report.v_y),
        ("Δt [s]", report.dt),
        ("τ [s]", report.tau),
        ("1.25·δZ [m]", report.delta_z_125),
        ("1.25·δP [kg·m/s]", report.delta_p_125),
        ("g₀ [m]", report.g0),
        ("μB₁Δt/ħ [1/m]", report.kick_wavenumber),
    ] {
        let _ = writeln!(s, "  {name:<28} {v:>14.6e}");
    }
    let _ = writeln!(
        s,
        "\n  {:>6} {:>12} {:>12} {:>12} {:>10} {:>12} {:>12} {:>8}",
        "K", "Var(Z)", "σ(Δt+τ)²", "σ(Δt/2)²", "erfc arg", "damping", "ε²", "η²"
    );
    for r in &report.rows {
        let _ = writeln!(
            s,
            "  {:>6.3} {:>12.4e} {:>12.4e} {:>12.4e} {:>10.4} {:>12.4e} {:>12.4e} {:>8.4}",
            r.k, r.var_z, r.sigma_screen_sq, r.sigma_half_sq, r.erfc_arg, r.damping_exponent, r.eps_sq, r.eta_sq
        );
    }
    let v = heisenberg_verdict(report);
    let _ = writeln!(s, "\nResult");
    let _ = writeln!(s, "  ε² ∈ [{:.3e}, {:.3e}]", report.eps_sq_min, report.eps_sq_max);
    let _ = writeln!(s, "  η² = {}", report.eta_sq);
    let _ = writeln!(s, "  error probability ≤ {:.2}%", 100.0 * report.error_probability);
    let _ = writeln!(
        s,
        "  max ε·η = {:.4} vs D = {:.4}  Heisenberg EDR: {}",
        v.product_max,
        v.bound,
        if v.violated { "VIOLATED" } else { "satisfied" }
    );
    let _ = writeln!(
        s,
        "  Ozawa: {}  Branciard: {}  tight: {}  (at max ε²)",
        report.edr_high.ozawa, report.edr_high.branciard, report.edr_high.tight
    );
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::erfc;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    fn default_report() -> ChainReport {
        let cfg = ExperimentConfig::default();
        run_chain(&cfg, &PhysicalConstants::default(), &cfg.k_values().unwrap()).unwrap()
    }

    #[test]
    fn silver_mass_examples() {
        let c = PhysicalConstants::default();
        assert!(rel(silver_mass(107.868_22, &c), 1.791_193_9e-25) < 1e-7);
        assert_eq!(silver_mass(2.0 * 107.868_22, &c), 2.0 * silver_mass(107.868_22, &c));
        assert_eq!(silver_mass(1.0, &c), 1e-3 / c.n_a);
    }

    #[test]
    fn flux_pdf_normalized_with_eq16_second_moment() {
        let c = PhysicalConstants::default();
        let m = silver_mass(107.868_22, &c);
        let t = 1500.0;
        assert_eq!(flux_pdf(0.0, t, m, &c), 0.0);
        let scale = (c.k_b * t / m).sqrt();
        let (h, n) = (scale * 1e-3, 30_000);
        let (mut norm, mut second) = (0.0, 0.0);
        for i in 0..=n {
            let v = i as f64 * h;
            let w = if i == 0 || i == n { 0.5 * h } else { h };
            let f = flux_pdf(v, t, m, &c);
            norm += w * f;
            second += w * v * v * f;
        }
        assert!((norm - 1.0).abs() < 1e-10);
        let vy = rms_velocity(t, m, &c);
        assert!(rel(second.sqrt(), vy) < 1e-9);
    }

    #[test]
    fn rms_velocity_examples() {
        let c = PhysicalConstants::default();
        let m = silver_mass(107.868_22, &c);
        assert!(rel(rms_velocity(1500.0, m, &c), 6.80e2) < 5e-3);
        assert!(rel(rms_velocity(6000.0, m, &c), 2.0 * rms_velocity(1500.0, m, &c)) < 1e-15);
        assert_eq!(rms_velocity(0.0, m, &c), 0.0);
    }

    #[test]
    fn chain_shape() {
        let r = default_report();
        assert_eq!(r.tau, 0.0);
        assert!(r.g0 > 0.0);
        // τ = 0: g₀ = μB₁Δt²/(2m)
        assert!(rel(r.g0, r.constants.mu_electron * r.config.b1 * r.dt * r.dt / (2.0 * r.mass)) < 1e-15);
        for w in r.rows.windows(2) {
            assert!(w[1].eps_sq > w[0].eps_sq, "ε² increases with K");
        }
        for row in &r.rows {
            assert!(row.eps_sq > 0.0 && row.eps_sq < 2.0);
            assert_eq!(row.eta_sq, 2.0);
            assert!(row.damping_exponent > 700.0);
            // Var(Z) is negligible at the screen
            assert!(row.var_z / row.sigma_screen_sq < 1e-8);
            assert!(rel(row.eps_sq, 2.0 * erfc(row.erfc_arg)) < 1e-15);
        }
        assert_eq!(r.rows[0].k, 0.6);
        assert_eq!(r.rows.last().unwrap().k, 1.0);
    }

    #[test]
    fn verdict_examples() {
        let r = default_report();
        let v = heisenberg_verdict(&r);
        assert!((v.bound - 1.0).abs() < 1e-12);
        assert!(v.violated);
        assert!((v.product_max - (r.eps_sq_max * 2.0).sqrt()).abs() < 1e-15);

        let mut hypothetical = r.clone();
        hypothetical.eps_sq_max = 2.0;
        let v = heisenberg_verdict(&hypothetical);
        assert!((v.product_max - 2.0).abs() < 1e-15 && !v.violated);
    }

    #[test]
    fn headline_point_inside_region_and_disk() {
        let r = default_report();
        let p = EdPoint::new(r.eps_sq_max, r.eta_sq).unwrap();
        assert!(crate::sg::in_region(&p));
        assert!(p.tight_lhs() <= 4.0);
        assert_eq!(r.edr_high.tight, crate::spin::Verdict::Satisfied);
    }

    #[test]
    fn config_parsing() {
        let cfg: ExperimentConfig = "# 1922\nT = 1500\nB1=-1.35e3\n\nK_steps = 3 # three\nB0 = 0.1".parse().unwrap();
        assert_eq!(cfg.k_steps, 3);
        assert_eq!(cfg.b0, 0.1);
        assert!(cfg.is_original_apparatus());
        assert_eq!(cfg.k_values().unwrap(), vec![0.6, 0.8, 1.0]);

        assert!(matches!("T 1500".parse::<ExperimentConfig>(), Err(Error::Config { line: 1, .. })));
        assert!(matches!("\nfoo = 1".parse::<ExperimentConfig>(), Err(Error::Config { line: 2, .. })));
        assert!(matches!("T = hot".parse::<ExperimentConfig>(), Err(Error::Config { .. })));
        assert!("K_min = 0.5".parse::<ExperimentConfig>().is_err());
        assert!("K_steps = 0".parse::<ExperimentConfig>().is_err());
        assert!("T = -1".parse::<ExperimentConfig>().is_err());
        let modified: ExperimentConfig = "L2 = 0.07".parse().unwrap();
        assert!(!modified.is_original_apparatus());
    }

    #[test]
    fn single_k_and_empty_k() {
        let cfg = ExperimentConfig::default();
        let c = PhysicalConstants::default();
        let r = run_chain(&cfg, &c, &[0.8]).unwrap();
        assert_eq!(r.eps_sq_min, r.eps_sq_max);
        assert!(run_chain(&cfg, &c, &[]).is_err());
        assert!(run_chain(&cfg, &c, &[0.5]).is_err());
    }

    #[test]
    fn report_serializes() {
        let r = default_report();
        let json = serde_json::to_string(&r).unwrap();
        let back: ChainReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back.rows.len(), r.rows.len());
        assert!(render_table(&r).contains("VIOLATED"));
    }
}
