//! Internal-standard quantification for total-reflection X-ray fluorescence.
//!
//! In the linear regime the net intensity of a line is `N = C·S`. Spiking a
//! sample with a standard element `p` of known concentration gives
//!
//! ```text
//! C_y = C_p · N_y · S_p / (N_p · S_y)
//! ```
//!
//! and sensitivities are calibrated against a reference element from a
//! calibration sample with known concentrations:
//!
//! ```text
//! S = S'_ref · N' · C'_ref / (N'_ref · C')
//! ```
//!
//! Every uncertainty goes through the generic propagation engine. The
//! reference sensitivity is conventionally 1, but its uncertainty is not
//! zero; [`BudgetPolicy::Truncated`] reproduces budgets that nevertheless
//! drop the `(Δ(S'_ref)/S'_ref)²` term, so the two can be compared.
//!
//! All five calibration terms are read as calibration-sample quantities.

use std::fmt;
use std::sync::OnceLock;

use thiserror::Error;

use crate::measurement::{Measurement, MeasurementError, RelativeUncertainty};
use crate::model::Model;
use crate::propagation::{
    combine_relative, propagate, Inputs, PropagationError, UncertaintyBudget,
};

pub const QUANTIFY_MODEL: &str = "Cp * Ny * Sp / (Np * Sy)";
pub const CALIBRATION_MODEL: &str = "S_ref * N_el * C_ref / (N_ref * C_el)";

/// Name of the reference-sensitivity input in calibration budgets.
pub const REF_SENSITIVITY: &str = "S_ref";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TxrfError {
    #[error("{field} must be positive, got {value}")]
    NonPositiveInput { field: &'static str, value: f64 },
    #[error(transparent)]
    Propagation(#[from] PropagationError),
    #[error(transparent)]
    Measurement(#[from] MeasurementError),
    #[error("budgets were not computed from the same calibration inputs: {0}")]
    MismatchedInputs(String),
    #[error("need at least two replicates, got {0}")]
    TooFewReplicates(usize),
    #[error("replicate value {0} is not finite")]
    NonFiniteReplicate(f64),
}

fn positive(field: &'static str, m: &Measurement) -> Result<(), TxrfError> {
    if m.value() > 0.0 {
        Ok(())
    } else {
        Err(TxrfError::NonPositiveInput {
            field,
            value: m.value(),
        })
    }
}

fn quantify_model() -> &'static Model {
    static MODEL: OnceLock<Model> = OnceLock::new();
    MODEL.get_or_init(|| Model::parse(QUANTIFY_MODEL).expect("built-in model parses"))
}

fn calibration_model() -> &'static Model {
    static MODEL: OnceLock<Model> = OnceLock::new();
    MODEL.get_or_init(|| Model::parse(CALIBRATION_MODEL).expect("built-in model parses"))
}

/// Whether the reference-sensitivity term enters a sensitivity budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BudgetPolicy {
    /// All five relative terms, including `Δ(S'_ref)/S'_ref`.
    Complete,
    /// Reference sensitivity treated as exact; its term is zeroed.
    Truncated,
}

impl BudgetPolicy {
    pub fn as_str(self) -> &'static str {
        match self {
            BudgetPolicy::Complete => "complete",
            BudgetPolicy::Truncated => "truncated",
        }
    }
}

impl fmt::Display for BudgetPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// An analysed sample spiked with an internal standard.
#[derive(Debug, Clone, PartialEq)]
pub struct TxrfSample {
    pub analyte_name: String,
    pub analyte_intensity: Measurement,
    pub standard_name: String,
    pub standard_intensity: Measurement,
    pub standard_concentration: Measurement,
}

impl TxrfSample {
    pub fn new(
        analyte_name: impl Into<String>,
        analyte_intensity: Measurement,
        standard_name: impl Into<String>,
        standard_intensity: Measurement,
        standard_concentration: Measurement,
    ) -> Result<Self, TxrfError> {
        let sample = Self {
            analyte_name: analyte_name.into(),
            analyte_intensity,
            standard_name: standard_name.into(),
            standard_intensity,
            standard_concentration,
        };
        sample.validate()?;
        Ok(sample)
    }

    fn validate(&self) -> Result<(), TxrfError> {
        positive("analyte intensity", &self.analyte_intensity)?;
        positive("standard intensity", &self.standard_intensity)?;
        positive("standard concentration", &self.standard_concentration)
    }
}

/// Measured quantities of a calibration sample.
#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationInputs {
    pub element: String,
    /// `S'_ref`, conventionally 1.
    pub ref_sensitivity: Measurement,
    pub ref_intensity: Measurement,
    pub ref_concentration: Measurement,
    pub element_intensity: Measurement,
    pub element_concentration: Measurement,
}

impl CalibrationInputs {
    pub fn validate(&self) -> Result<(), TxrfError> {
        positive("reference sensitivity", &self.ref_sensitivity)?;
        positive("reference intensity", &self.ref_intensity)?;
        positive("reference concentration", &self.ref_concentration)?;
        positive("element intensity", &self.element_intensity)?;
        positive("element concentration", &self.element_concentration)
    }

    /// Unit reference sensitivity with an explicitly stated uncertainty.
    pub fn unit_reference_sensitivity(std_uncertainty: f64) -> Result<Measurement, TxrfError> {
        Ok(Measurement::new(1.0, std_uncertainty)?)
    }

    fn model_inputs(&self, policy: BudgetPolicy) -> Result<Inputs, TxrfError> {
        let s_ref = match policy {
            BudgetPolicy::Complete => self.ref_sensitivity,
            BudgetPolicy::Truncated => self.ref_sensitivity.with_uncertainty(0.0)?,
        };
        Ok([
            (REF_SENSITIVITY, s_ref),
            ("N_el", self.element_intensity),
            ("C_ref", self.ref_concentration),
            ("N_ref", self.ref_intensity),
            ("C_el", self.element_concentration),
        ]
        .into_iter()
        .map(|(n, m)| (n.to_owned(), m))
        .collect())
    }
}

/// A calibrated sensitivity and the budget behind its uncertainty.
#[derive(Debug, Clone, PartialEq)]
pub struct SensitivityRecord {
    pub element: String,
    pub sensitivity: Measurement,
    pub policy: BudgetPolicy,
    pub budget: UncertaintyBudget,
}

impl SensitivityRecord {
    pub fn relative(&self) -> f64 {
        self.budget.combined / self.sensitivity.value()
    }
}

pub fn calibrate_sensitivity(
    inputs: &CalibrationInputs,
    policy: BudgetPolicy,
) -> Result<SensitivityRecord, TxrfError> {
    inputs.validate()?;
    let budget = propagate(calibration_model(), &inputs.model_inputs(policy)?)?;
    positive("calibrated sensitivity", &budget.as_measurement())?;
    Ok(SensitivityRecord {
        element: inputs.element.clone(),
        sensitivity: budget.as_measurement(),
        policy,
        budget,
    })
}

/// How much the complete budget exceeds the truncated one, in sensitivity
/// units. Zero exactly when `Δ(S'_ref) = 0`.
pub fn budget_gap(
    complete: &SensitivityRecord,
    truncated: &SensitivityRecord,
) -> Result<f64, TxrfError> {
    if complete.policy != BudgetPolicy::Complete || truncated.policy != BudgetPolicy::Truncated {
        return Err(TxrfError::MismatchedInputs(format!(
            "expected a complete and a truncated record, got {} and {}",
            complete.policy, truncated.policy
        )));
    }
    if complete.element != truncated.element || complete.budget.value != truncated.budget.value {
        return Err(TxrfError::MismatchedInputs(
            "sensitivity values differ".into(),
        ));
    }
    let others = |r: &SensitivityRecord| -> Vec<_> {
        r.budget
            .contributions
            .iter()
            .filter(|c| c.input != REF_SENSITIVITY)
            .map(|c| (c.input.clone(), c.measurement, c.partial, c.term))
            .collect()
    };
    if others(complete) != others(truncated) {
        return Err(TxrfError::MismatchedInputs(
            "contributions other than the reference sensitivity differ".into(),
        ));
    }
    Ok(complete.budget.combined - truncated.budget.combined)
}

/// Analyte concentration with supplied sensitivities for the analyte
/// (`s_y`) and the internal standard (`s_p`).
pub fn quantify_with(
    sample: &TxrfSample,
    s_y: Measurement,
    s_p: Measurement,
) -> Result<(Measurement, UncertaintyBudget), TxrfError> {
    sample.validate()?;
    positive("analyte sensitivity", &s_y)?;
    positive("standard sensitivity", &s_p)?;
    let inputs: Inputs = [
        ("Cp", sample.standard_concentration),
        ("Ny", sample.analyte_intensity),
        ("Sp", s_p),
        ("Np", sample.standard_intensity),
        ("Sy", s_y),
    ]
    .into_iter()
    .map(|(n, m)| (n.to_owned(), m))
    .collect();
    let budget = propagate(quantify_model(), &inputs)?;
    Ok((budget.as_measurement(), budget))
}

pub fn quantify(
    sample: &TxrfSample,
    s_y: &SensitivityRecord,
    s_p: &SensitivityRecord,
) -> Result<(Measurement, UncertaintyBudget), TxrfError> {
    quantify_with(sample, s_y.sensitivity, s_p.sensitivity)
}

/// Relative combined uncertainty of `C_y` from the explicit five-term
/// quadrature of relative uncertainties, independent of the generic engine.
pub fn quantify_relative_closed_form(
    sample: &TxrfSample,
    s_y: Measurement,
    s_p: Measurement,
) -> Result<RelativeUncertainty, TxrfError> {
    sample.validate()?;
    let rels = [
        sample.standard_concentration.relative()?,
        sample.analyte_intensity.relative()?,
        sample.standard_intensity.relative()?,
        s_p.relative()?,
        s_y.relative()?,
    ];
    Ok(combine_relative(&rels)?)
}

/// Location and spread of repeated measurements of one quantity.
#[derive(Debug, Clone, PartialEq)]
pub struct ReplicateReport {
    pub n: usize,
    pub mean: f64,
    /// `mean − reference`, present only when a reference was given.
    pub bias: Option<f64>,
    /// Sample standard deviation with the `n − 1` denominator.
    pub dispersion: f64,
}

pub fn replicate_stats(
    values: &[f64],
    reference: Option<f64>,
) -> Result<ReplicateReport, TxrfError> {
    if values.len() < 2 {
        return Err(TxrfError::TooFewReplicates(values.len()));
    }
    if let Some(&bad) = values.iter().find(|v| !v.is_finite()) {
        return Err(TxrfError::NonFiniteReplicate(bad));
    }
    let n = values.len();
    let mean = values.iter().sum::<f64>() / n as f64;
    let ss: f64 = values.iter().map(|v| (v - mean).powi(2)).sum();
    Ok(ReplicateReport {
        n,
        mean,
        bias: reference.map(|r| mean - r),
        dispersion: (ss / (n - 1) as f64).sqrt(),
    })
}
