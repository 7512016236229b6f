//! Measurement uncertainty toolkit.
//!
//! - [`measurement`]: values with standard uncertainties.
//! - [`model`]: the expression language for measurement models.
//! - [`propagation`]: first-order combined uncertainty and budgets.
//! - [`montecarlo`]: sampling check of linearized budgets.
//! - [`txrf`]: internal-standard quantification and sensitivity calibration.
//! - [`coinflip`]: frequency-with-uncertainty demonstration for a fair coin.

pub mod coinflip;
pub mod dual;
pub mod measurement;
pub mod model;
pub mod montecarlo;
pub mod propagation;
pub mod txrf;

pub use measurement::{Measurement, MeasurementError, RelativeUncertainty};
pub use model::{Expr, Model, SyntaxError};
pub use propagation::{propagate, Inputs, PropagationError, UncertaintyBudget};
