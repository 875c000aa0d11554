use thiserror::Error;

/// Errors raised by the geometric and analytic layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("element is not regular semisimple (a^2 + bc = {discriminant:e})")]
    NotRegularSemisimple { discriminant: f64 },

    #[error("point lies at infinity of the requested chart")]
    ChartOverflow,

    #[error("covector is not regular: the coadjoint orbit map has rank < 2")]
    NotRegular,

    #[error("vector is not tangent to the coadjoint orbit (residual {residual:e})")]
    NotTangent { residual: f64 },

    #[error("weight is not regular (lambda(H) = 0)")]
    SingularWeight,

    #[error("invalid config: {field}: {message}")]
    InvalidConfig { field: String, message: String },

    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::InvalidConfig {
            field: field.into(),
            message: message.into(),
        }
    }
}
