use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("non-finite input `{name}` = {value}")]
    NonFinite { name: &'static str, value: f64 },

    #[error("pole: shifted frequency m*omega + Omega is exactly zero for m = {m}")]
    Pole { m: i64 },

    #[error("wavenumber must be positive, got q = {0}")]
    NonPositiveWavenumber(f64),

    #[error("frequency Omega must be non-zero")]
    ZeroFrequency,

    #[error("degenerate Landau denominator sum J_m^2 / lambda_m^3 = {0:e}")]
    DegenerateDenominator(f64),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn finite(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite { name, value })
    }
}

impl Error {
    /// Short machine-readable tag, used as a row status in sweep output.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidParameter { .. } => "invalid_parameter",
            Error::NonFinite { .. } => "non_finite",
            Error::Pole { .. } => "pole",
            Error::NonPositiveWavenumber(_) => "non_positive_q",
            Error::ZeroFrequency => "zero_frequency",
            Error::DegenerateDenominator(_) => "degenerate_denominator",
        }
    }
}
