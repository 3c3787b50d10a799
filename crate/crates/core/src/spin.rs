//! Qubit states, Pauli observables and the error–disturbance relations.

use serde::{Deserialize, Serialize};

use crate::error::{check_range, Error, Result};
use crate::linalg::{Mat2, C, ONE, ZERO};

/// Entrywise tolerance for Hermiticity and trace checks.
pub const STATE_TOL: f64 = 1e-12;
/// Slack used when comparing the two sides of a relation.
pub const RELATION_TOL: f64 = 1e-12;
/// How close `⟨A⟩` and `⟨B⟩` must be to zero for the tight relation to apply.
pub const ZERO_MEAN_TOL: f64 = 1e-9;

/// Density matrix of a spin-1/2 system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QubitState {
    rho: Mat2,
}

impl QubitState {
    /// Validates Hermiticity, unit trace and positivity (eigenvalue floor
    /// `-1e-12`). Invalid matrices are rejected rather than repaired.
    pub fn new(rho: Mat2) -> Result<Self> {
        let defect = rho.hermiticity_defect();
        if defect > STATE_TOL {
            return Err(Error::NotHermitian(defect));
        }
        let tr = rho.trace();
        if (tr - ONE).norm() > STATE_TOL {
            return Err(Error::BadTrace(tr.re));
        }
        let lowest = rho.hermitian_eigen().values[0];
        if lowest < -STATE_TOL {
            return Err(Error::NotPositive(lowest));
        }
        Ok(QubitState { rho })
    }

    /// `(I + r·σ)/2`; requires `|r| ≤ 1`.
    pub fn from_bloch(r: [f64; 3]) -> Result<Self> {
        QubitState::new(Mat2::from_pauli_components(0.5, [0.5 * r[0], 0.5 * r[1], 0.5 * r[2]]))
    }

    /// Pure state `|ψ⟩⟨ψ|`; the vector is normalized first.
    pub fn pure(psi: [C; 2]) -> Result<Self> {
        let norm = (psi[0].norm_sqr() + psi[1].norm_sqr()).sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::NotNormalized(norm));
        }
        let v = [psi[0] / norm, psi[1] / norm];
        QubitState::new(Mat2::outer(v))
    }

    /// `|0⟩`, the `σ_z = +1` eigenstate.
    pub fn up() -> Self {
        QubitState {
            rho: Mat2::new(ONE, ZERO, ZERO, ZERO),
        }
    }

    /// `|σ_y = +1⟩ = (|0⟩ + i|1⟩)/√2`.
    pub fn sigma_y_plus() -> Self {
        QubitState {
            rho: Mat2::from_pauli_components(0.5, [0.0, 0.5, 0.0]),
        }
    }

    pub fn maximally_mixed() -> Self {
        QubitState {
            rho: Mat2::from_pauli_components(0.5, [0.0, 0.0, 0.0]),
        }
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.rho
    }

    pub fn bloch_vector(&self) -> [f64; 3] {
        let (_, r) = self.rho.pauli_components();
        [2.0 * r[0], 2.0 * r[1], 2.0 * r[2]]
    }

    /// Eigen-decomposition `ρ = Σ pᵢ |ψᵢ⟩⟨ψᵢ|` with weights clamped at zero.
    pub fn ensemble(&self) -> [(f64, [C; 2]); 2] {
        let e = self.rho.hermitian_eigen();
        [
            (e.values[0].max(0.0), e.vectors[0]),
            (e.values[1].max(0.0), e.vectors[1]),
        ]
    }

    /// `√ρ` from the spectrum with eigenvalues clamped at zero.
    pub fn sqrt(&self) -> Mat2 {
        self.rho.hermitian_map(|v| v.max(0.0).sqrt())
    }

    /// Convex mixture `p·self + (1 − p)·other`.
    pub fn mix(&self, other: &QubitState, p: f64) -> Result<Self> {
        check_range("mixing weight", p, 0.0, 1.0)?;
        QubitState::new(self.rho.scale(C::new(p, 0.0)) + other.rho.scale(C::new(1.0 - p, 0.0)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PauliLabel {
    X,
    Y,
    Z,
    Custom,
}

/// Hermitian single-qubit observable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PauliObservable {
    matrix: Mat2,
    label: PauliLabel,
}

impl PauliObservable {
    pub fn x() -> Self {
        PauliObservable {
            matrix: Mat2::pauli_x(),
            label: PauliLabel::X,
        }
    }

    pub fn y() -> Self {
        PauliObservable {
            matrix: Mat2::pauli_y(),
            label: PauliLabel::Y,
        }
    }

    pub fn z() -> Self {
        PauliObservable {
            matrix: Mat2::pauli_z(),
            label: PauliLabel::Z,
        }
    }

    pub fn custom(matrix: Mat2) -> Result<Self> {
        let defect = matrix.hermiticity_defect();
        if defect > STATE_TOL {
            return Err(Error::NotHermitian(defect));
        }
        Ok(PauliObservable {
            matrix,
            label: PauliLabel::Custom,
        })
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.matrix
    }

    pub fn label(&self) -> PauliLabel {
        self.label
    }
}

/// `Tr(ρ·A)`.
pub fn expectation(state: &QubitState, obs: &PauliObservable) -> f64 {
    let v = (*state.matrix() * *obs.matrix()).trace();
    debug_assert!(v.im.abs() <= 1e-12, "imaginary expectation residue {}", v.im);
    v.re
}

/// `sqrt(⟨A²⟩ − ⟨A⟩²)`, with round-off negatives clamped to zero.
pub fn std_dev(state: &QubitState, obs: &PauliObservable) -> f64 {
    let a = *obs.matrix();
    let second = (*state.matrix() * a * a).trace().re;
    let mean = expectation(state, obs);
    let var = second - mean * mean;
    debug_assert!(var >= -1e-12, "negative variance {var}");
    var.max(0.0).sqrt()
}

/// `½|⟨[A, B]⟩|`, the common right-hand side of the Robertson, Heisenberg
/// and Ozawa relations.
pub fn commutator_bound(state: &QubitState, a: &PauliObservable, b: &PauliObservable) -> f64 {
    let comm = a.matrix().commutator(b.matrix());
    0.5 * (*state.matrix() * comm).trace().norm()
}

/// `D_AB = ½ Tr|√ρ [A, B] √ρ|`.
pub fn d_quantity(state: &QubitState, a: &PauliObservable, b: &PauliObservable) -> f64 {
    let root = state.sqrt();
    let comm = a.matrix().commutator(b.matrix());
    0.5 * (root * comm * root).trace_norm()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RobertsonCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// `σ(A)σ(B) ≥ ½|⟨[A, B]⟩|`.
pub fn robertson_check(state: &QubitState, a: &PauliObservable, b: &PauliObservable) -> RobertsonCheck {
    let lhs = std_dev(state, a) * std_dev(state, b);
    let rhs = commutator_bound(state, a, b);
    RobertsonCheck {
        lhs,
        rhs,
        holds: lhs >= rhs - RELATION_TOL,
    }
}

/// `v·sqrt(1 − v²/4)` for `v ∈ [0, 2]`.
pub fn hat_transform(v: f64) -> Result<f64> {
    let v = clamp_within(v, 0.0, 2.0, RELATION_TOL);
    check_range("hat argument", v, 0.0, 2.0)?;
    Ok(v * (1.0 - v * v / 4.0).max(0.0).sqrt())
}

fn clamp_within(v: f64, lo: f64, hi: f64, slack: f64) -> f64 {
    if v < lo && v >= lo - slack {
        lo
    } else if v > hi && v <= hi + slack {
        hi
    } else {
        v
    }
}

/// Squared q-rms error and disturbance of a `±1`-valued observable pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EdPoint {
    eps_sq: f64,
    eta_sq: f64,
}

impl EdPoint {
    /// Both components must lie in `[0, 4]`; round-off overshoot up to
    /// `1e-12` is clamped.
    pub fn new(eps_sq: f64, eta_sq: f64) -> Result<Self> {
        let eps_sq = check_range("eps_sq", clamp_within(eps_sq, 0.0, 4.0, RELATION_TOL), 0.0, 4.0)?;
        let eta_sq = check_range("eta_sq", clamp_within(eta_sq, 0.0, 4.0, RELATION_TOL), 0.0, 4.0)?;
        Ok(EdPoint { eps_sq, eta_sq })
    }

    pub fn from_rms(eps: f64, eta: f64) -> Result<Self> {
        EdPoint::new(eps * eps, eta * eta)
    }

    pub fn eps_sq(&self) -> f64 {
        self.eps_sq
    }

    pub fn eta_sq(&self) -> f64 {
        self.eta_sq
    }

    pub fn eps(&self) -> f64 {
        self.eps_sq.sqrt()
    }

    pub fn eta(&self) -> f64 {
        self.eta_sq.sqrt()
    }

    /// `(ε² − 2)² + (η² − 2)²`.
    pub fn tight_lhs(&self) -> f64 {
        (self.eps_sq - 2.0).powi(2) + (self.eta_sq - 2.0).powi(2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Satisfied,
    Violated,
    /// The relation was only derived under assumptions the state does not meet.
    NotApplicable,
}

impl Verdict {
    fn from_test(ok: bool) -> Self {
        if ok {
            Verdict::Satisfied
        } else {
            Verdict::Violated
        }
    }

    pub fn is_violated(self) -> bool {
        self == Verdict::Violated
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Satisfied => "satisfied",
            Verdict::Violated => "VIOLATED",
            Verdict::NotApplicable => "not applicable",
        })
    }
}

/// Both sides of each error–disturbance relation for one `(ε², η²)` pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EdrReport {
    pub heisenberg_lhs: f64,
    pub heisenberg_rhs: f64,
    pub heisenberg: Verdict,
    pub ozawa_lhs: f64,
    pub ozawa_rhs: f64,
    pub ozawa: Verdict,
    pub branciard_lhs: f64,
    pub branciard_rhs: f64,
    pub branciard: Verdict,
    /// `(ε² − 2)² + (η² − 2)²`, bounded by 4.
    pub tight_lhs: f64,
    pub tight: Verdict,
    pub d: f64,
}

/// Evaluates the Heisenberg, Ozawa, Branciard and tight relations.
///
/// The tight disk is only reported as satisfied/violated when
/// `⟨A⟩ = ⟨B⟩ = 0` (within `1e-9`); otherwise it is `NotApplicable`.
pub fn evaluate_edrs(
    point: &EdPoint,
    state: &QubitState,
    a: &PauliObservable,
    b: &PauliObservable,
) -> EdrReport {
    let (eps, eta) = (point.eps(), point.eta());
    let rhs = commutator_bound(state, a, b);
    let heisenberg_lhs = eps * eta;
    let ozawa_lhs = eps * eta + eps * std_dev(state, b) + eta * std_dev(state, a);

    let d = d_quantity(state, a, b);
    // EdPoint guarantees ε, η ∈ [0, 2]
    let eps_hat = hat_transform(eps).unwrap_or(0.0);
    let eta_hat = hat_transform(eta).unwrap_or(0.0);
    let branciard_lhs = eps_hat * eps_hat
        + eta_hat * eta_hat
        + 2.0 * eps_hat * eta_hat * (1.0 - d * d).max(0.0).sqrt();
    let branciard_rhs = d * d;

    let tight_lhs = point.tight_lhs();
    let zero_mean =
        expectation(state, a).abs() <= ZERO_MEAN_TOL && expectation(state, b).abs() <= ZERO_MEAN_TOL;
    let tight = if zero_mean {
        Verdict::from_test(tight_lhs <= 4.0 + RELATION_TOL)
    } else {
        Verdict::NotApplicable
    };

    EdrReport {
        heisenberg_lhs,
        heisenberg_rhs: rhs,
        heisenberg: Verdict::from_test(heisenberg_lhs >= rhs - RELATION_TOL),
        ozawa_lhs,
        ozawa_rhs: rhs,
        ozawa: Verdict::from_test(ozawa_lhs >= rhs - RELATION_TOL),
        branciard_lhs,
        branciard_rhs,
        branciard: Verdict::from_test(branciard_lhs >= branciard_rhs - RELATION_TOL),
        tight_lhs,
        tight,
        d,
    }
}
