//! Quantum root-mean-square (q-rms) error and disturbance for spin-1/2
//! measurements.
//!
//! The crate covers two measurement models of `σ_z` that disturb `σ_x`:
//!
//! - the two-qubit CNOT model ([`qrms::lund_wiseman`]), evaluated exactly from
//!   the operator definitions of error and disturbance, and
//! - the Stern–Gerlach model with a Gaussian orbital probe, evaluated through
//!   closed forms ([`sg`]) built on the probe moments ([`probe`]).
//!
//! [`spin`] holds the qubit states and observables and evaluates Heisenberg's,
//! Ozawa's, Branciard's and the tight error–disturbance relations against any
//! `(ε², η²)` pair. [`experiment`] runs the full estimate for the 1922
//! silver-atom experiment.

pub mod error;
pub mod experiment;
pub mod linalg;
pub mod probe;
pub mod qrms;
pub mod sg;
pub mod special;
pub mod spin;

pub use error::{Error, Result};
pub use probe::{CollimatorModel, GaussianProbe, Moments};
pub use qrms::{LwParams, MeasuringProcess};
pub use sg::{FreeFlight, SgParams};
pub use spin::{EdPoint, EdrReport, PauliObservable, QubitState, Verdict};
