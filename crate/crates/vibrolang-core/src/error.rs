use alloc::string::String;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter `{field}`: {reason}")]
    Parameter { field: &'static str, reason: String },
    #[error("wrong bath variant: {0}")]
    Variant(&'static str),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("regime error: {0}")]
    Regime(String),
    #[error("divergent integral: {0}")]
    Divergent(String),
    #[error("quadrature did not converge: achieved {achieved:e}, requested {requested:e}")]
    Quadrature { achieved: f64, requested: f64 },
    #[error("truncation error: tail weight {tail:e} exceeds {limit:e} at n_max = {n_max}")]
    Truncation { tail: f64, limit: f64, n_max: usize },
    #[error("resolution error: {0}")]
    Resolution(String),
    #[error("integration unstable at t = {t}: energy {energy:e} exceeds 10x initial {initial:e}")]
    Unstable { t: f64, energy: f64, initial: f64 },
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn param(field: &'static str, reason: impl Into<String>) -> Error {
    Error::Parameter { field, reason: reason.into() }
}

pub(crate) fn check_positive(field: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && !v.is_nan() {
        Ok(())
    } else {
        Err(param(field, alloc::format!("must be > 0, got {v}")))
    }
}

pub(crate) fn check_nonneg(field: &'static str, v: f64) -> Result<()> {
    if v >= 0.0 {
        Ok(())
    } else {
        Err(param(field, alloc::format!("must be >= 0, got {v}")))
    }
}

pub(crate) fn check_finite(field: &'static str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(param(field, alloc::format!("must be finite, got {v}")))
    }
}
