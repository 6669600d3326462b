use thiserror::Error;

pub type Result<T> = std::result::Result<T, BeamError>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BeamError {
    #[error("invalid boundary at t = {t}: {reason}")]
    InvalidBoundary { t: f64, reason: String },

    #[error("singular mapping at t = {t}: K(t) = {k}")]
    SingularMapping { t: f64, k: f64 },

    #[error("coordinate {coord:?} lies outside the reference cell")]
    OutOfCell { coord: [f64; 2] },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("source evaluated to a non-finite value at y = {y:?}, t = {t}")]
    SourceEvaluation { y: [f64; 2], t: f64 },

    #[error("singular Jacobian (pivot {pivot} at row {row})")]
    SingularJacobian { row: usize, pivot: f64 },

    #[error("Newton did not converge after {iterations} iterations (residual {residual:e})")]
    NewtonNoConvergence { iterations: usize, residual: f64 },

    #[error("non-finite entry in Newton iterate")]
    NonFinite,

    #[error("step {step}: {source}")]
    AtStep {
        step: usize,
        #[source]
        source: Box<BeamError>,
    },

    #[error("trajectory diverged at step {0}")]
    Diverged(usize),

    #[error("fit domain error: {0}")]
    FitDomain(String),
}

impl BeamError {
    pub fn at_step(self, step: usize) -> Self {
        BeamError::AtStep {
            step,
            source: Box::new(self),
        }
    }

    /// Innermost error, stripping step wrappers.
    pub fn root(&self) -> &BeamError {
        match self {
            BeamError::AtStep { source, .. } => source.root(),
            other => other,
        }
    }
}
