use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// The known p-adic digits do not determine the requested quantity.
    #[error("precision error: {0}")]
    Precision(String),
    /// A regularization cell holds exactly half of its points.
    #[error("ambiguous cell: {center} mod p^{level} holds exactly {count} of {capacity} points")]
    AmbiguousCell {
        level: u32,
        center: u64,
        count: u64,
        capacity: u64,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn precision(msg: impl Into<String>) -> Self {
        Error::Precision(msg.into())
    }

    /// Stable machine-readable tag for the error kind.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Precision(_) => "precision",
            Error::AmbiguousCell { .. } => "ambiguous-cell",
        }
    }

    /// The message without the kind prefix.
    pub fn detail(&self) -> String {
        match self {
            Error::Domain(msg) | Error::Precision(msg) => msg.clone(),
            Error::AmbiguousCell {
                level,
                center,
                count,
                capacity,
            } => format!("{center} mod p^{level} holds exactly {count} of {capacity} points"),
        }
    }
}
