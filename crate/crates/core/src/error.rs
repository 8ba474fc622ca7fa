//! Error type shared by every layer of the engine.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParacycError {
    #[error("singular matrix: rank {rank} < size {size}")]
    SingularMatrix { size: usize, rank: usize },

    #[error("valid degree window exhausted ({context})")]
    WindowExhausted { context: String },

    #[error("shift mismatch: {left} vs {right}")]
    ShiftMismatch { left: i32, right: i32 },

    #[error("splitting ker(1-T) + ran(1-T) is not direct in degree {degree}: {detail}")]
    NotQuasi { degree: usize, detail: String },

    #[error("homotopy is not contracting on ran(1-T) in degree {degree}")]
    HomotopyNotContracting { degree: usize },

    #[error("no degeneracies and no contracting homotopy supplied")]
    MissingHomotopy,

    #[error("hypothesis failed: {name} (degree {degree})")]
    HypothesisFailed { name: String, degree: usize },

    #[error("perturbation series did not terminate within {bound} terms in degree {degree}")]
    SeriesDiverges { degree: usize, bound: usize },

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("map does not descend to the quotient in degree {degree}; witness {witness}")]
    DescentObstruction { degree: usize, witness: String },

    #[error("degree {degree} is below the minimum {min}")]
    DegreeTooLow { degree: usize, min: usize },

    #[error("chain is not a cycle modulo ran(1-tau) in degree {degree}")]
    NotACycleModTau { degree: usize },

    #[error("cochain is not a cocycle: {component}")]
    NotACocycle { component: String },

    #[error("map is not a chain map in degree {degree}")]
    NotAChainMap { degree: usize },

    #[error("unknown example '{0}'")]
    UnknownExample(String),

    #[error("not a parachain complex: {0}")]
    NotParachain(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, ParacycError>;
