//! Split-operator simulation of a spin-1/2 particle crossing a Stern–Gerlach
//! magnet, used as an independent check of the closed-form error and
//! disturbance.

pub mod error;
pub mod grid;
pub mod measure;
pub mod profile;
pub mod propagator;
pub mod validation;

pub use error::{GridError, Result};
pub use grid::{init_state, Grid1D, SpinorField};
pub use measure::{measure, measure_disturbance, measure_error, GridMeasurement};
pub use propagator::{evolve, min_steps, EvolutionStats, Propagator};
pub use validation::{dimensionless_test_set, run_case, run_cases, CaseReport, GridOptions, TestCase};
