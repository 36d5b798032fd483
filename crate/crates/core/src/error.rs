use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// The config document could not be parsed, or a key is unknown or
    /// carries a value of the wrong type.
    #[error("config key `{key}`: {message}")]
    Schema { key: String, message: String },

    /// A value parsed but violates a range constraint.
    #[error("invalid {field}: {message}")]
    Validation { field: &'static str, message: String },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("scheduling infeasible: {required} pilots required, {available} available")]
    Capacity { required: usize, available: usize },

    #[error("class {class_n} outside [1, {max_class}]")]
    ClassBound { class_n: u32, max_class: u32 },

    #[error("slot infeasible: {active} simultaneous pilots exceed {available} orthogonal sequences")]
    SlotInfeasible { active: usize, available: usize },

    #[error("similarity undefined for a zero vector")]
    ZeroVector,

    #[error("unknown pilot id {0}")]
    UnknownPilot(usize),

    #[error("estimate supplied for user {0}, which did not transmit a pilot")]
    CacheConsistency(usize),

    #[error("user {0} has never been estimated")]
    ColdStart(usize),

    #[error("result table is empty")]
    EmptyTable,

    #[error("malformed table: {0}")]
    Table(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Capacity { .. } | Error::ClassBound { .. } | Error::SlotInfeasible { .. } => 2,
            Error::Io(_) => 3,
            _ => 1,
        }
    }
}
