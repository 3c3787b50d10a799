use thiserror::Error;

#[derive(Debug, Error)]
pub enum GridError {
    #[error("grid needs a power-of-two point count ≥ 256, got {0}")]
    PointCount(usize),
    #[error("invalid domain [{z_min}, {z_max}]")]
    Domain { z_min: f64, z_max: f64 },
    #[error("domain width {width:.6e} is below the required {required:.6e}")]
    DomainTooNarrow { width: f64, required: f64 },
    #[error("probe width {sigma:.6e} is not resolvable: need {lo:.6e} ≤ width ≤ {hi:.6e}")]
    Unresolved { sigma: f64, lo: f64, hi: f64 },
    #[error("momentum window ±{window:.6e} does not cover the required ±{required:.6e}")]
    MomentumWindow { window: f64, required: f64 },
    #[error("{steps} steps give a potential phase of {phase:.4} rad per step; at least {min_steps} are needed")]
    TooFewSteps { steps: usize, min_steps: usize, phase: f64 },
    #[error("spinor amplitudes have norm {0}, expected 1")]
    SpinorNorm(f64),
    #[error("boundary probability {0:.3e} exceeds 1e-10; widen the domain")]
    Leakage(f64),
    #[error("norm drifted by {0:.3e} during evolution")]
    NormDrift(f64),
    #[error("disturbance depends on the free flight: |Δη| = {0:.3e}")]
    TauDependence(f64),
    #[error("grid simulation needs a finite free-flight time")]
    InfiniteTau,
    #[error(transparent)]
    Model(#[from] sgedr::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, GridError>;
