use thiserror::Error;

/// Errors raised by the holonomy toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: String, got: String },

    #[error("matrix is not Hermitian (asymmetry {0:e})")]
    NonHermitianInput(f64),

    #[error("matrix is not anti-Hermitian (defect {0:e})")]
    NonAntiHermitianInput(f64),

    #[error("matrix has non-finite entries")]
    NonFinite,

    #[error("family `{family}` expects {expected} parameters, got {got}")]
    ArityMismatch {
        family: String,
        expected: usize,
        got: usize,
    },

    #[error("family `{family}` produced a non-Hermitian matrix (asymmetry {asymmetry:e})")]
    NonHermitianEvaluation { family: String, asymmetry: f64 },

    #[error("eigenvalue cluster near {target} has multiplicity {found}, expected {expected}")]
    DegeneracyMismatch { target: f64, expected: usize, found: usize },

    #[error("spectral gap {gap:e} around the selected cluster is below {threshold:e}")]
    GapCollapse { gap: f64, threshold: f64 },

    #[error("frame overlap is rank deficient (smallest singular value {0:e})")]
    GaugeDiscontinuity(f64),

    #[error("path `{label}` is not closed (endpoint mismatch {mismatch:e})")]
    OpenPath { label: String, mismatch: f64 },

    #[error("holonomy unitarity defect {0:e} exceeds tolerance")]
    UnitarityLoss(f64),

    #[error("{name} = {value} is outside {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("state norm drifted by {0:e}")]
    NormDrift(f64),

    #[error("propagation step {0} produced non-finite amplitudes")]
    StepUnstable(usize),

    #[error("leakage {leakage:e} exceeds adiabaticity budget {budget:e}")]
    ExcessLeakage { leakage: f64, budget: f64 },

    #[error("cone angle undefined: detuning and drive amplitude both vanish")]
    UndefinedCone,

    #[error("no interior maximum of the conditional phase difference")]
    NoInteriorMaximum,
}

pub type Result<T> = std::result::Result<T, Error>;
