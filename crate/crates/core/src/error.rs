use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("unknown constant name `{0}`")]
    UnknownConstant(String),

    #[error("mismatched variable sets: {left} vs {right}")]
    RingMismatch { left: String, right: String },

    #[error("series `{op}` requires {requirement}; constant term is {constant_term}")]
    SeriesPrecondition {
        op: &'static str,
        requirement: &'static str,
        constant_term: String,
    },

    #[error("series variable mismatch: {left} vs {right}")]
    SeriesVarMismatch { left: String, right: String },

    #[error("internal consistency failure: {0}")]
    InternalConsistency(String),

    #[error("singular linear system: {0}")]
    SingularSystem(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("degree cap {cap} exceeded while computing a Groebner basis (degree {reached})")]
    DegreeCapExceeded { cap: u32, reached: u32 },

    #[error("census window exhausted at window {window}: bound not yet tight; increase window")]
    WindowExhausted { window: u32 },

    #[error("class {0:?} is not characteristic for the given intersection form")]
    NonCharacteristic(Vec<i64>),

    #[error("polynomial is not symmetric: coefficient at {at} differs from {mirror}")]
    Asymmetric { at: i64, mirror: i64 },
}

pub type Result<T> = std::result::Result<T, Error>;
