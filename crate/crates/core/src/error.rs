use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A function descriptor failed construction; the message names the field.
    #[error("invalid descriptor field `{field}`: {reason}")]
    InvalidDescriptor { field: String, reason: String },

    #[error("item {item} out of range (extended ground set has {limit} items)")]
    ItemOutOfRange { item: usize, limit: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid instance: {0}")]
    Validation(String),

    #[error("malformed instance JSON: {0}")]
    MalformedJson(#[from] serde_json::Error),

    /// An exact enumeration would exceed its call ceiling.
    #[error("{what} too large for exact evaluation ({cost} oracle calls > limit {limit}); use greedy evaluation")]
    GuardExceeded {
        what: &'static str,
        cost: u128,
        limit: u128,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidDescriptor { .. }
            | Error::ItemOutOfRange { .. }
            | Error::Validation(_)
            | Error::MalformedJson(_) => 2,
            Error::GuardExceeded { .. } => 3,
            Error::Precondition(_) | Error::Io(_) => 1,
        }
    }

    pub(crate) fn descriptor(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidDescriptor {
            field: field.into(),
            reason: reason.into(),
        }
    }
}
