use thiserror::Error;

/// Errors raised by the material, section and beam computations.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("non-invertible compliance")]
    NonInvertibleCompliance,

    #[error("inconsistent constants: {0}")]
    InconsistentConstants(String),

    #[error("degenerate thickness stiffness (c33 = {0})")]
    DegenerateThicknessStiffness(f64),

    #[error("malformed database: {0}")]
    MalformedDatabase(String),

    #[error("invalid material {name}: {reason}")]
    InvalidMaterial { name: String, reason: String },

    #[error("duplicate material {0}")]
    DuplicateMaterial(String),

    #[error("unknown material {0}")]
    UnknownMaterial(String),

    #[error("malformed layup: {0}")]
    MalformedLayup(String),

    #[error("section has no layers")]
    NoLayers,

    #[error("invalid layer {index}: {reason}")]
    InvalidLayer { index: usize, reason: String },

    #[error("invalid section: {0}")]
    InvalidSection(String),

    #[error("closure solve singular")]
    SingularClosure,

    #[error("degenerate section")]
    DegenerateSection,

    #[error("no terminal {index} (section has {count})")]
    NoSuchTerminal { index: usize, count: usize },

    #[error("expected {expected} voltages, got {got}")]
    VoltageCount { expected: usize, got: usize },

    #[error("invalid beam: {0}")]
    InvalidBeam(String),

    #[error("mode {index} out of range (1..={count})")]
    NoSuchMode { index: usize, count: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
