//! Exact q-rms error and disturbance for finite-dimensional probes.
//!
//! A measuring process couples the qubit (system) to a `d`-level probe through
//! a unitary on `C² ⊗ C^d`; composite vectors are indexed `s·d + k`. The error
//! of a measurement of `A` is
//!
//! ```text
//! ε(A)² = Tr[(U†(I⊗M)U − A⊗I)² ρ⊗|ξ⟩⟨ξ|]
//! ```
//!
//! and the disturbance of `B` replaces `I⊗M` by `B⊗I`. Both are computed as
//! vector norms: for each eigenvector `ψᵢ` of `ρ` the residual
//! `(X(τ) − X(0))|ψᵢ⊗ξ⟩` is formed by evolving forward, applying the
//! operator and evolving back, and the squared norms are averaged with the
//! eigenvalue weights.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Mat2, C, ONE, ZERO};
use crate::spin::{EdPoint, PauliObservable, QubitState};

const UNITARY_TOL: f64 = 1e-10;
const NORM_TOL: f64 = 1e-12;
const HERMITIAN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasuringProcess {
    probe_dim: usize,
    probe_state: Vec<C>,
    /// Row-major `(2d)×(2d)`.
    unitary: Vec<C>,
    /// Row-major `d×d`.
    meter: Vec<C>,
}

impl MeasuringProcess {
    pub fn new(probe_dim: usize, probe_state: Vec<C>, unitary: Vec<C>, meter: Vec<C>) -> Result<Self> {
        if probe_dim == 0 {
            return Err(Error::InvalidParameter("probe dimension must be positive".into()));
        }
        let n = 2 * probe_dim;
        if probe_state.len() != probe_dim {
            return Err(Error::DimensionMismatch {
                expected: probe_dim,
                got: probe_state.len(),
            });
        }
        if unitary.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                got: unitary.len(),
            });
        }
        if meter.len() != probe_dim * probe_dim {
            return Err(Error::DimensionMismatch {
                expected: probe_dim * probe_dim,
                got: meter.len(),
            });
        }

        let norm = probe_state.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }

        let mut defect: f64 = 0.0;
        for i in 0..probe_dim {
            for j in 0..probe_dim {
                let d = meter[i * probe_dim + j] - meter[j * probe_dim + i].conj();
                defect = defect.max(d.norm());
            }
        }
        if defect > HERMITIAN_TOL {
            return Err(Error::NotHermitian(defect));
        }

        // U†U = I
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let dot: C = (0..n).map(|k| unitary[k * n + i].conj() * unitary[k * n + j]).sum();
                let target = if i == j { ONE } else { ZERO };
                worst = worst.max((dot - target).norm());
            }
        }
        if worst > UNITARY_TOL {
            return Err(Error::NotUnitary(worst));
        }

        Ok(MeasuringProcess {
            probe_dim,
            probe_state,
            unitary,
            meter,
        })
    }

    /// No interaction: `U = I`.
    pub fn identity(probe_dim: usize, probe_state: Vec<C>, meter: Vec<C>) -> Result<Self> {
        let n = 2 * probe_dim;
        let mut u = vec![ZERO; n * n];
        for i in 0..n {
            u[i * n + i] = ONE;
        }
        MeasuringProcess::new(probe_dim, probe_state, u, meter)
    }

    pub fn probe_dim(&self) -> usize {
        self.probe_dim
    }

    pub fn probe_state(&self) -> &[C] {
        &self.probe_state
    }

    fn dim(&self) -> usize {
        2 * self.probe_dim
    }

    /// `|ψ⟩ ⊗ |ξ⟩`.
    pub fn product_state(&self, psi: [C; 2]) -> Vec<C> {
        psi.iter()
            .flat_map(|&s| self.probe_state.iter().map(move |&k| s * k))
            .collect()
    }

    /// `U|v⟩`.
    pub fn evolve(&self, v: &[C]) -> Vec<C> {
        let n = self.dim();
        (0..n)
            .map(|i| (0..n).map(|j| self.unitary[i * n + j] * v[j]).sum())
            .collect()
    }

    /// `U†|v⟩`.
    pub fn evolve_back(&self, v: &[C]) -> Vec<C> {
        let n = self.dim();
        (0..n)
            .map(|i| (0..n).map(|j| self.unitary[j * n + i].conj() * v[j]).sum())
            .collect()
    }

    fn apply_system(&self, op: &Mat2, v: &[C]) -> Vec<C> {
        let d = self.probe_dim;
        let mut out = vec![ZERO; 2 * d];
        for k in 0..d {
            let [a, b] = op.apply([v[k], v[d + k]]);
            out[k] = a;
            out[d + k] = b;
        }
        out
    }

    fn apply_meter(&self, v: &[C]) -> Vec<C> {
        let d = self.probe_dim;
        let mut out = vec![ZERO; 2 * d];
        for s in 0..2 {
            for i in 0..d {
                out[s * d + i] = (0..d).map(|j| self.meter[i * d + j] * v[s * d + j]).sum();
            }
        }
        out
    }

    /// `‖(U† X_after U − X_before)|ψ⊗ξ⟩‖²` averaged over the spectrum of `ρ`.
    fn mean_square_residual(&self, state: &QubitState, before: &Mat2, after: impl Fn(&[C]) -> Vec<C>) -> f64 {
        state
            .ensemble()
            .iter()
            .filter(|(p, _)| *p > 0.0)
            .map(|&(p, psi)| {
                let v = self.product_state(psi);
                let evolved_back = self.evolve_back(&after(&self.evolve(&v)));
                let reference = self.apply_system(before, &v);
                let sq: f64 = evolved_back
                    .iter()
                    .zip(&reference)
                    .map(|(a, b)| (a - b).norm_sqr())
                    .sum();
                p * sq
            })
            .sum()
    }
}

/// `ε(A) = Tr[(M(τ) − A(0))² ρ⊗|ξ⟩⟨ξ|]^{1/2}`.
pub fn qrms_error(mp: &MeasuringProcess, state: &QubitState, measured: &PauliObservable) -> f64 {
    mp.mean_square_residual(state, measured.matrix(), |v| mp.apply_meter(v))
        .max(0.0)
        .sqrt()
}

/// `η(B) = Tr[(B(τ) − B(0))² ρ⊗|ξ⟩⟨ξ|]^{1/2}`.
pub fn qrms_disturbance(mp: &MeasuringProcess, state: &QubitState, disturbed: &PauliObservable) -> f64 {
    let b = *disturbed.matrix();
    mp.mean_square_residual(state, &b, |v| mp.apply_system(&b, v))
        .max(0.0)
        .sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LwParams {
    pub theta: f64,
}

/// CNOT measurement of `σ_z`: control on the system, probe prepared in
/// `cos θ|0⟩ + sin θ|1⟩`, meter `σ_z` on the probe.
pub fn lund_wiseman(params: LwParams) -> MeasuringProcess {
    let (s, c) = params.theta.sin_cos();
    // |0⟩⟨0| ⊗ I + |1⟩⟨1| ⊗ σ_x in the (s·2 + k) basis
    #[rustfmt::skip]
    let unitary = vec![
        ONE, ZERO, ZERO, ZERO,
        ZERO, ONE, ZERO, ZERO,
        ZERO, ZERO, ZERO, ONE,
        ZERO, ZERO, ONE, ZERO,
    ];
    let meter = Mat2::pauli_z().0.iter().flatten().copied().collect();
    MeasuringProcess {
        probe_dim: 2,
        probe_state: vec![C::new(c, 0.0), C::new(s, 0.0)],
        unitary,
        meter,
    }
}

/// `n` equally spaced angles covering `[0, π/2]`.
pub fn sweep_angles(n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![0.0];
    }
    (0..n)
        .map(|k| FRAC_PI_2 * k as f64 / (n - 1) as f64)
        .collect()
}

/// Error/disturbance of the CNOT family at [`sweep_angles`], evaluated
/// through [`qrms_error`] and [`qrms_disturbance`] with `ρ = |σ_y = +1⟩`.
pub fn lw_sweep(n: usize) -> Result<Vec<EdPoint>> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("sweep needs at least 2 points, got {n}")));
    }
    let state = QubitState::sigma_y_plus();
    let (x, z) = (PauliObservable::x(), PauliObservable::z());
    sweep_angles(n)
        .into_iter()
        .map(|theta| {
            let mp = lund_wiseman(LwParams { theta });
            EdPoint::from_rms(qrms_error(&mp, &state, &z), qrms_disturbance(&mp, &state, &x))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_4, FRAC_PI_6, FRAC_PI_8, PI, SQRT_2};

    fn lw_closed_form(theta: f64) -> (f64, f64) {
        let (s, c) = theta.sin_cos();
        (2.0 * s.abs(), SQRT_2 * (c - s).abs())
    }

    fn random_state() -> impl Strategy<Value = QubitState> {
        (0.0..1.0f64, -1.0..1.0f64, 0.0..std::f64::consts::TAU).prop_map(|(r, cos_t, phi)| {
            let sin_t = (1.0 - cos_t * cos_t).sqrt();
            QubitState::from_bloch([r * sin_t * phi.cos(), r * sin_t * phi.sin(), r * cos_t]).unwrap()
        })
    }

    /// Builds the 4×4 operators explicitly and evaluates the trace formula
    /// `Tr[(X(τ) − X(0))² ρ⊗|ξ⟩⟨ξ|]` by dense matrix products.
    fn dense_trace_oracle(mp: &MeasuringProcess, state: &QubitState, before: &Mat2, after_on_probe: bool, after: &[C]) -> f64 {
        let n = 4;
        let mul = |a: &[C], b: &[C]| -> Vec<C> {
            let mut out = vec![ZERO; n * n];
            for i in 0..n {
                for j in 0..n {
                    out[i * n + j] = (0..n).map(|k| a[i * n + k] * b[k * n + j]).sum();
                }
            }
            out
        };
        let kron = |a: &[C], b: &[C]| -> Vec<C> {
            let mut out = vec![ZERO; n * n];
            for i in 0..2 {
                for j in 0..2 {
                    for k in 0..2 {
                        for l in 0..2 {
                            out[(i * 2 + k) * n + j * 2 + l] = a[i * 2 + j] * b[k * 2 + l];
                        }
                    }
                }
            }
            out
        };
        let id: Vec<C> = Mat2::identity().0.iter().flatten().copied().collect();
        let flat = |m: &Mat2| -> Vec<C> { m.0.iter().flatten().copied().collect() };
        let u = &mp.unitary;
        let u_dag: Vec<C> = (0..n * n).map(|idx| u[(idx % n) * n + idx / n].conj()).collect();
        let x_after = if after_on_probe { kron(&id, after) } else { kron(after, &id) };
        let heis = mul(&mul(&u_dag, &x_after), u);
        let x0 = kron(&flat(before), &id);
        let diff: Vec<C> = heis.iter().zip(&x0).map(|(a, b)| a - b).collect();
        let sq = mul(&diff, &diff);
        let xi = &mp.probe_state;
        let probe_proj: Vec<C> = (0..4).map(|idx| xi[idx / 2] * xi[idx % 2].conj()).collect();
        let joint = kron(&flat(state.matrix()), &probe_proj);
        let prod = mul(&sq, &joint);
        (0..n).map(|i| prod[i * n + i]).sum::<C>().re
    }

    #[test]
    fn error_examples() {
        let z = PauliObservable::z();
        for state in [QubitState::up(), QubitState::sigma_y_plus(), QubitState::maximally_mixed()] {
            assert!(qrms_error(&lund_wiseman(LwParams { theta: 0.0 }), &state, &z) < 1e-15);
            let e = qrms_error(&lund_wiseman(LwParams { theta: FRAC_PI_2 }), &state, &z);
            assert!((e - 2.0).abs() < 1e-12);
        }
        let mp = lund_wiseman(LwParams { theta: FRAC_PI_6 });
        let y = QubitState::sigma_y_plus();
        let meter: Vec<C> = mp.meter.clone();
        let oracle = dense_trace_oracle(&mp, &y, z.matrix(), true, &meter).sqrt();
        assert!((oracle - 2.0 * FRAC_PI_6.sin()).abs() < 1e-12);
        assert!((qrms_error(&mp, &y, &z) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn disturbance_examples() {
        let x = PauliObservable::x();
        let y = QubitState::sigma_y_plus();
        assert!(qrms_disturbance(&lund_wiseman(LwParams { theta: FRAC_PI_4 }), &y, &x) < 1e-12);
        let d = qrms_disturbance(&lund_wiseman(LwParams { theta: 0.0 }), &y, &x);
        assert!((d - SQRT_2).abs() < 1e-12);

        let mp = lund_wiseman(LwParams { theta: 0.3 });
        let flat_x: Vec<C> = Mat2::pauli_x().0.iter().flatten().copied().collect();
        let oracle = dense_trace_oracle(&mp, &y, x.matrix(), false, &flat_x).sqrt();
        assert!((qrms_disturbance(&mp, &y, &x) - oracle).abs() < 1e-12);

        let id = MeasuringProcess::identity(2, vec![ONE, ZERO], mp.meter.clone()).unwrap();
        let rho = QubitState::from_bloch([0.1, 0.2, 0.3]).unwrap();
        for b in [PauliObservable::x(), PauliObservable::y(), PauliObservable::z()] {
            assert_eq!(qrms_disturbance(&id, &rho, &b), 0.0);
        }
    }

    #[test]
    fn lund_wiseman_saturates_tight_relation() {
        let (x, z) = (PauliObservable::x(), PauliObservable::z());
        let mp = lund_wiseman(LwParams { theta: FRAC_PI_8 });
        let y = QubitState::sigma_y_plus();
        let p = EdPoint::from_rms(qrms_error(&mp, &y, &z), qrms_disturbance(&mp, &y, &x)).unwrap();
        assert!((p.tight_lhs() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn sweep_examples() {
        let two = lw_sweep(2).unwrap();
        assert!(two[0].eps_sq().abs() < 1e-15 && (two[0].eta_sq() - 2.0).abs() < 1e-12);
        assert!((two[1].eps_sq() - 4.0).abs() < 1e-12 && (two[1].eta_sq() - 2.0).abs() < 1e-12);
        let three = lw_sweep(3).unwrap();
        assert!((three[1].eps_sq() - 2.0).abs() < 1e-12 && three[1].eta_sq().abs() < 1e-12);
        for p in lw_sweep(37).unwrap() {
            assert!((p.tight_lhs() - 4.0).abs() < 1e-10);
        }
        assert!(lw_sweep(1).is_err());
    }

    #[test]
    fn construction_validation() {
        let meter = vec![ONE, ZERO, ZERO, C::new(-1.0, 0.0)];
        assert!(matches!(
            MeasuringProcess::identity(2, vec![ONE, ONE], meter.clone()),
            Err(Error::NotNormalized(_))
        ));
        assert!(matches!(
            MeasuringProcess::identity(2, vec![ONE], meter.clone()),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            MeasuringProcess::identity(2, vec![ONE, ZERO], vec![ZERO, ONE, ZERO, ZERO]),
            Err(Error::NotHermitian(_))
        ));
        let mut u = vec![ZERO; 16];
        u[0] = C::new(2.0, 0.0);
        assert!(matches!(
            MeasuringProcess::new(2, vec![ONE, ZERO], u, meter),
            Err(Error::NotUnitary(_))
        ));
    }

    #[test]
    fn error_vanishes_only_at_zero_or_pi() {
        let z = PauliObservable::z();
        let y = QubitState::sigma_y_plus();
        for k in 0..=360 {
            let theta = PI * k as f64 / 360.0;
            let e = qrms_error(&lund_wiseman(LwParams { theta }), &y, &z);
            if k == 0 || k == 360 {
                assert!(e < 1e-12);
            } else {
                assert!(e > 1e-3, "theta = {theta}");
            }
        }
    }

    proptest! {
        #[test]
        fn matches_closed_forms_for_any_state(theta in -PI..PI, state in random_state()) {
            let (x, z) = (PauliObservable::x(), PauliObservable::z());
            let mp = lund_wiseman(LwParams { theta });
            let (eps, eta) = lw_closed_form(theta);
            prop_assert!((qrms_error(&mp, &state, &z) - eps).abs() < 1e-12);
            prop_assert!((qrms_disturbance(&mp, &state, &x) - eta).abs() < 1e-12);
        }

        #[test]
        fn squared_error_is_linear_in_rho(theta in 0.0..FRAC_PI_2, a in random_state(), b in random_state(), p in 0.0..1.0f64) {
            // a generic unitary makes the error genuinely state dependent
            let (s, c) = theta.sin_cos();
            let u = vec![
                C::new(c, 0.0), C::new(0.0, s), ZERO, ZERO,
                C::new(0.0, s), C::new(c, 0.0), ZERO, ZERO,
                ZERO, ZERO, C::new(s, 0.0), C::new(c, 0.0),
                ZERO, ZERO, C::new(c, 0.0), C::new(-s, 0.0),
            ];
            let mp = MeasuringProcess::new(2, vec![ONE, ZERO], u, vec![ONE, ZERO, ZERO, C::new(-1.0, 0.0)]).unwrap();
            let z = PauliObservable::z();
            let mixed = a.mix(&b, p).unwrap();
            let lhs = qrms_error(&mp, &mixed, &z).powi(2);
            let rhs = p * qrms_error(&mp, &a, &z).powi(2) + (1.0 - p) * qrms_error(&mp, &b, &z).powi(2);
            prop_assert!((lhs - rhs).abs() < 1e-12);
        }

        #[test]
        fn evolution_preserves_norm(theta in -PI..PI, re in -1.0..1.0f64, im in -1.0..1.0f64) {
            let mp = lund_wiseman(LwParams { theta });
            let n = (1.0 + re * re + im * im).sqrt();
            let v = mp.product_state([C::new(1.0 / n, 0.0), C::new(re, im) / n]);
            let norm: f64 = mp.evolve(&v).iter().map(|z| z.norm_sqr()).sum();
            prop_assert!((norm - 1.0).abs() < 1e-12);
        }
    }
}
