//! First-order propagation of uncorrelated standard uncertainties:
//!
//! ```text
//! Δc(G) = sqrt( Σ_i (∂G/∂x_i)² · Δ²(x_i) )
//! ```
//!
//! Partials come from one forward-mode pass ([`crate::dual`]). Inputs are
//! assumed mutually independent; there is no covariance term.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::dual::Dual;
use crate::measurement::{Measurement, RelativeUncertainty};
use crate::model::{EvalError, Model};

/// Named model inputs.
pub type Inputs = BTreeMap<String, Measurement>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PropagationError {
    #[error("missing input(s): {}", .0.join(", "))]
    MissingInput(Vec<String>),
    #[error("input(s) not used by the model: {}", .0.join(", "))]
    UnusedInput(Vec<String>),
    #[error("input `{0}` declared more than once")]
    DuplicateInput(String),
    #[error("division by zero while evaluating the model")]
    DivisionByZero,
    #[error("model evaluation produced a non-finite value")]
    NonFiniteResult,
    #[error("cannot combine an empty list of uncertainties")]
    EmptyList,
}

impl From<EvalError> for PropagationError {
    fn from(e: EvalError) -> Self {
        match e {
            EvalError::DivisionByZero => PropagationError::DivisionByZero,
            EvalError::NonFinite => PropagationError::NonFiniteResult,
        }
    }
}

/// Builds an input map, rejecting names that occur more than once.
pub fn collect_inputs<I>(pairs: I) -> Result<Inputs, PropagationError>
where
    I: IntoIterator<Item = (String, Measurement)>,
{
    let mut out = Inputs::new();
    for (name, m) in pairs {
        if out.contains_key(&name) {
            return Err(PropagationError::DuplicateInput(name));
        }
        out.insert(name, m);
    }
    Ok(out)
}

/// Inputs in the model's positional order. Fails if the map and the model's
/// variables differ in either direction.
pub fn resolve_inputs(
    model: &Model,
    inputs: &Inputs,
) -> Result<Vec<Measurement>, PropagationError> {
    let missing: Vec<String> = model
        .inputs()
        .iter()
        .filter(|n| !inputs.contains_key(*n))
        .cloned()
        .collect();
    if !missing.is_empty() {
        return Err(PropagationError::MissingInput(missing));
    }
    let unused: Vec<String> = inputs
        .keys()
        .filter(|k| !model.inputs().contains(k))
        .cloned()
        .collect();
    if !unused.is_empty() {
        return Err(PropagationError::UnusedInput(unused));
    }
    Ok(model.inputs().iter().map(|n| inputs[n]).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub value: f64,
    /// `(input, ∂G/∂input)` in model order.
    pub partials: Vec<(String, f64)>,
}

impl Evaluation {
    pub fn partial(&self, name: &str) -> Option<f64> {
        self.partials
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, d)| *d)
    }
}

pub fn evaluate_with_partials(
    model: &Model,
    inputs: &Inputs,
) -> Result<Evaluation, PropagationError> {
    let resolved = resolve_inputs(model, inputs)?;
    let values: Vec<f64> = resolved.iter().map(Measurement::value).collect();
    let out = model.eval(&Dual::variables(&values))?;
    Ok(Evaluation {
        value: out.value,
        partials: model.inputs().iter().cloned().zip(out.grad).collect(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Contribution {
    pub input: String,
    pub measurement: Measurement,
    pub partial: f64,
    /// `(∂G/∂x_i · Δ(x_i))²`
    pub term: f64,
}

/// Combined standard uncertainty of a model output together with the
/// per-input terms that make it up.
#[derive(Debug, Clone, PartialEq)]
pub struct UncertaintyBudget {
    pub value: f64,
    pub combined: f64,
    pub contributions: Vec<Contribution>,
}

impl UncertaintyBudget {
    fn from_contributions(value: f64, contributions: Vec<Contribution>) -> Self {
        let variance: f64 = contributions.iter().map(|c| c.term).sum();
        Self {
            value,
            combined: variance.sqrt(),
            contributions,
        }
    }

    pub fn variance(&self) -> f64 {
        self.contributions.iter().map(|c| c.term).sum()
    }

    pub fn contribution(&self, input: &str) -> Option<&Contribution> {
        self.contributions.iter().find(|c| c.input == input)
    }

    /// `combined/|value|`, or `None` for a zero output.
    pub fn relative(&self) -> Option<f64> {
        (self.value != 0.0).then(|| self.combined / self.value.abs())
    }

    /// Percentage of the variance carried by `input`; zero when the budget
    /// has no variance at all.
    pub fn share_percent(&self, input: &str) -> Option<f64> {
        let term = self.contribution(input)?.term;
        let variance = self.variance();
        Some(if variance > 0.0 {
            100.0 * term / variance
        } else {
            0.0
        })
    }

    pub fn as_measurement(&self) -> Measurement {
        Measurement::new(self.value, self.combined)
            .expect("budget values are finite and non-negative")
    }

    /// Same budget with one more independent term appended.
    pub fn with_term(
        &self,
        input: impl Into<String>,
        measurement: Measurement,
        partial: f64,
    ) -> Self {
        let mut contributions = self.contributions.clone();
        let term = (partial * measurement.std_uncertainty()).powi(2);
        contributions.push(Contribution {
            input: input.into(),
            measurement,
            partial,
            term,
        });
        Self::from_contributions(self.value, contributions)
    }
}

pub fn propagate(model: &Model, inputs: &Inputs) -> Result<UncertaintyBudget, PropagationError> {
    let eval = evaluate_with_partials(model, inputs)?;
    let contributions: Vec<Contribution> = eval
        .partials
        .into_iter()
        .map(|(input, partial)| {
            let measurement = inputs[&input];
            let term = (partial * measurement.std_uncertainty()).powi(2);
            Contribution {
                input,
                measurement,
                partial,
                term,
            }
        })
        .collect();
    let budget = UncertaintyBudget::from_contributions(eval.value, contributions);
    if !budget.combined.is_finite() {
        return Err(PropagationError::NonFiniteResult);
    }
    Ok(budget)
}

/// Root-sum-square of relative uncertainties, the closed form of
/// [`propagate`] for pure products and quotients of the inputs.
pub fn combine_relative(
    rels: &[RelativeUncertainty],
) -> Result<RelativeUncertainty, PropagationError> {
    if rels.is_empty() {
        return Err(PropagationError::EmptyList);
    }
    let sum: f64 = rels.iter().map(|r| r.ratio() * r.ratio()).sum();
    RelativeUncertainty::new(sum.sqrt()).map_err(|_| PropagationError::NonFiniteResult)
}
