use thiserror::Error;

#[derive(Debug, Error)]
pub enum NcError {
    /// Malformed or inconsistent input data.
    #[error("input error: {0}")]
    Input(String),
    /// A structural identity failed; `property` names it.
    #[error("{property} violated: {detail}")]
    Property { property: String, detail: String },
    #[error("size limit exceeded: {0}")]
    TooLarge(String),
}

impl NcError {
    pub fn input(msg: impl Into<String>) -> Self {
        NcError::Input(msg.into())
    }

    pub fn property(property: impl Into<String>, detail: impl Into<String>) -> Self {
        NcError::Property { property: property.into(), detail: detail.into() }
    }

    pub fn is_input(&self) -> bool {
        matches!(self, NcError::Input(_) | NcError::TooLarge(_))
    }
}

pub type Result<T> = std::result::Result<T, NcError>;
