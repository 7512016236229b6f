//! Values carrying a standard (1-sigma) uncertainty.
//!
//! Every uncertainty in this crate is a standard uncertainty, never an
//! expanded one. Inputs are treated as mutually uncorrelated; there is no
//! correlation field.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MeasurementError {
    #[error("negative standard uncertainty {0}")]
    NegativeUncertainty(f64),
    #[error("non-finite {field}: {value}")]
    NonFinite { field: &'static str, value: f64 },
    #[error("relative uncertainty is undefined for a zero value")]
    ZeroValue,
}

/// A value `x ± Δ(x)` where `Δ(x)` is a standard uncertainty in the same
/// units as the value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Measurement {
    value: f64,
    std_uncertainty: f64,
}

impl Measurement {
    pub fn new(value: f64, std_uncertainty: f64) -> Result<Self, MeasurementError> {
        if !value.is_finite() {
            return Err(MeasurementError::NonFinite {
                field: "value",
                value,
            });
        }
        if !std_uncertainty.is_finite() {
            return Err(MeasurementError::NonFinite {
                field: "std_uncertainty",
                value: std_uncertainty,
            });
        }
        if std_uncertainty < 0.0 {
            return Err(MeasurementError::NegativeUncertainty(std_uncertainty));
        }
        Ok(Self {
            value,
            std_uncertainty,
        })
    }

    /// A value known without uncertainty.
    pub fn exact(value: f64) -> Result<Self, MeasurementError> {
        Self::new(value, 0.0)
    }

    /// Builds a measurement from a relative uncertainty, `Δ(x) = ratio·|x|`.
    pub fn with_relative(value: f64, ratio: f64) -> Result<Self, MeasurementError> {
        Self::new(value, ratio * value.abs())
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn std_uncertainty(&self) -> f64 {
        self.std_uncertainty
    }

    /// `Δ(x)/|x|`. Fails with [`MeasurementError::ZeroValue`] when `x = 0`.
    pub fn relative(&self) -> Result<RelativeUncertainty, MeasurementError> {
        if self.value == 0.0 {
            return Err(MeasurementError::ZeroValue);
        }
        Ok(RelativeUncertainty(self.std_uncertainty / self.value.abs()))
    }

    /// Unit change: the value is multiplied by `k`, the uncertainty by `|k|`.
    pub fn scale(&self, k: f64) -> Result<Self, MeasurementError> {
        Self::new(self.value * k, self.std_uncertainty * k.abs())
    }

    /// Same value with the uncertainty replaced.
    pub fn with_uncertainty(&self, std_uncertainty: f64) -> Result<Self, MeasurementError> {
        Self::new(self.value, std_uncertainty)
    }
}

impl fmt::Display for Measurement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ± {}", self.value, self.std_uncertainty)
    }
}

/// Dimensionless ratio `Δ(x)/|x|`, always non-negative.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct RelativeUncertainty(f64);

impl RelativeUncertainty {
    pub fn new(ratio: f64) -> Result<Self, MeasurementError> {
        if !ratio.is_finite() {
            return Err(MeasurementError::NonFinite {
                field: "ratio",
                value: ratio,
            });
        }
        if ratio < 0.0 {
            return Err(MeasurementError::NegativeUncertainty(ratio));
        }
        Ok(Self(ratio))
    }

    pub fn ratio(&self) -> f64 {
        self.0
    }

    pub fn percent(&self) -> f64 {
        self.0 * 100.0
    }
}
