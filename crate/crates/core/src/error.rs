use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("operation requires a nonzero polynomial")]
    ZeroPolynomial,

    #[error("polynomial degree {degree} is below the required minimum {required}")]
    DegreeTooLow { degree: usize, required: usize },

    #[error("affine substitution with c = 0 is degenerate")]
    DegenerateAffine,

    #[error("root finder did not converge after {iterations} iterations (max residual {max_residual:e})")]
    RootsNotConverged {
        iterations: usize,
        residuals: Vec<f64>,
        max_residual: f64,
    },

    #[error("root finder failed at phase index {phase}: {source}")]
    PhaseSolve {
        phase: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("cannot parse {what} from {input:?}: {reason}")]
    Parse {
        what: &'static str,
        input: String,
        reason: String,
    },

    #[error("level set {{|f| <= {level}}} is disconnected (critical value {critical_value} has modulus > level)")]
    Disconnected { level: f64, critical_value: Complex64 },

    #[error("polynomial is not monic: leading coefficient {leading}")]
    NotMonic { leading: Complex64 },

    #[error("degenerate level set: critical value {critical_value} has modulus {modulus} at level {level}")]
    DegenerateLevelSet {
        critical_value: Complex64,
        modulus: f64,
        level: f64,
    },

    #[error("no level set component contains a zero near {marker}")]
    ComponentNotFound { marker: Complex64 },

    #[error("need {needed} distinct candidate points, found {found}")]
    TooFewCandidates { needed: usize, found: usize },

    #[error("all {trials} sweep trials failed")]
    SweepFailed { trials: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
