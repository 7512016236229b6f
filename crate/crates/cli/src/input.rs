//! Input files: JSON (canonical) or the key = value text form, decoded into
//! typed requests. Unknown keys are rejected; every diagnostic names the
//! file, the line when known, and the key path.

use std::fmt;
use std::path::Path;

use serde::de::{Deserializer, MapAccess, Visitor};
use serde::Deserialize;
use txunc_core::measurement::{Measurement, MeasurementError};
use txunc_core::propagation::{collect_inputs, Inputs, PropagationError};
use txunc_core::Model;

use crate::error::{CliError, Location};
use crate::text_format;

/// `{"value": …, "unc": …}` as written in the file.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawMeasurement {
    pub value: f64,
    pub unc: Option<f64>,
}

/// Map entries in file order, duplicates preserved so they can be reported.
#[derive(Debug, Clone)]
pub struct NamedInputs(pub Vec<(String, RawMeasurement)>);

impl<'de> Deserialize<'de> for NamedInputs {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct EntriesVisitor;

        impl<'de> Visitor<'de> for EntriesVisitor {
            type Value = NamedInputs;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a map from input name to {\"value\", \"unc\"}")
            }

            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<NamedInputs, A::Error> {
                let mut out = Vec::new();
                while let Some((k, v)) = map.next_entry::<String, RawMeasurement>()? {
                    out.push((k, v));
                }
                Ok(NamedInputs(out))
            }
        }

        deserializer.deserialize_map(EntriesVisitor)
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PropagateFile {
    pub model: String,
    pub inputs: NamedInputs,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StandardBlock {
    pub name: String,
    pub concentration: RawMeasurement,
    pub intensity: RawMeasurement,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalyteBlock {
    pub name: String,
    pub intensity: RawMeasurement,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SensitivitiesBlock {
    pub analyte: RawMeasurement,
    pub standard: RawMeasurement,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuantifyFile {
    pub standard: StandardBlock,
    pub analyte: AnalyteBlock,
    pub sensitivities: SensitivitiesBlock,
}

/// Reference sensitivity: the value defaults to 1 but the uncertainty must
/// always be stated.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RefSensitivity {
    pub value: Option<f64>,
    pub unc: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RefBlock {
    pub sensitivity: RefSensitivity,
    pub intensity: RawMeasurement,
    pub concentration: RawMeasurement,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementBlock {
    pub intensity: RawMeasurement,
    pub concentration: RawMeasurement,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CalibrateFile {
    #[serde(rename = "ref")]
    pub reference: RefBlock,
    pub element: ElementBlock,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReplicatesFile {
    pub values: Vec<f64>,
    pub reference: Option<f64>,
}

/// Decoding context for one input file: turns key paths into locations and
/// raw values into validated measurements.
#[derive(Debug)]
pub struct Source {
    file: String,
    text: Option<text_format::TextDocument>,
    /// Uncertainties defaulted to √N, by key path.
    pub poisson_defaults: Vec<String>,
}

impl Source {
    pub fn at(&self, key: &str) -> Location {
        Location {
            file: self.file.clone(),
            line: self.text.as_ref().and_then(|t| t.line_of(key)),
            column: None,
            key: Some(key.to_owned()),
        }
    }

    fn measurement_error(&self, key: &str, e: MeasurementError) -> CliError {
        let message = match e {
            MeasurementError::NegativeUncertainty(u) => format!("NegativeUncertainty: {u}"),
            other => other.to_string(),
        };
        CliError::input(self.at(key), message)
    }

    /// A measurement whose uncertainty must be given explicitly.
    pub fn measurement(&self, key: &str, raw: &RawMeasurement) -> Result<Measurement, CliError> {
        let unc = raw.unc.ok_or_else(|| {
            CliError::input(self.at(&format!("{key}.unc")), "missing uncertainty")
        })?;
        Measurement::new(raw.value, unc).map_err(|e| self.measurement_error(key, e))
    }

    /// A count-rate intensity; a missing uncertainty defaults to √N and is
    /// recorded as a flag.
    pub fn intensity(&mut self, key: &str, raw: &RawMeasurement) -> Result<Measurement, CliError> {
        if raw.unc.is_some() {
            return self.measurement(key, raw);
        }
        if raw.value.is_nan() || raw.value <= 0.0 {
            return Err(CliError::input(
                self.at(key),
                format!("intensity must be positive, got {}", raw.value),
            ));
        }
        self.poisson_defaults.push(key.to_owned());
        Measurement::new(raw.value, raw.value.sqrt()).map_err(|e| self.measurement_error(key, e))
    }

    pub fn model(&self, key: &str, source: &str) -> Result<Model, CliError> {
        Model::parse(source).map_err(|e| CliError::input(self.at(key), e.to_string()))
    }

    pub fn inputs(&self, key: &str, raw: &NamedInputs) -> Result<Inputs, CliError> {
        let pairs = raw
            .0
            .iter()
            .map(|(name, m)| Ok((name.clone(), self.measurement(&format!("{key}.{name}"), m)?)))
            .collect::<Result<Vec<_>, CliError>>()?;
        collect_inputs(pairs).map_err(|e| match e {
            PropagationError::DuplicateInput(name) => CliError::input(
                self.at(&format!("{key}.{name}")),
                format!("DuplicateInput: `{name}` declared more than once"),
            ),
            other => CliError::input(self.at(key), other.to_string()),
        })
    }
}

fn decode<T: for<'de> Deserialize<'de>>(file: &str, source: &str) -> Result<(T, Source), CliError> {
    let at = |line, column, key: Option<String>| Location {
        file: file.to_owned(),
        line,
        column,
        key: key.map(|k| {
            if k == "." {
                "(top level)".to_owned()
            } else {
                k
            }
        }),
    };
    if source.trim_start().starts_with('[') {
        return Err(CliError::input(
            at(Some(1), None, None),
            "expected a JSON object at the top level",
        ));
    }
    if source.trim_start().starts_with('{') {
        let mut de = serde_json::Deserializer::from_str(source);
        let parsed: T = serde_path_to_error::deserialize(&mut de).map_err(|e| {
            let key = e.path().to_string();
            let inner = e.inner();
            CliError::input(
                at(Some(inner.line()), Some(inner.column()), Some(key)),
                strip_position(inner),
            )
        })?;
        de.end().map_err(|e| {
            CliError::input(
                at(Some(e.line()), Some(e.column()), None),
                strip_position(&e),
            )
        })?;
        return Ok((
            parsed,
            Source {
                file: file.to_owned(),
                text: None,
                poisson_defaults: Vec::new(),
            },
        ));
    }
    let doc = text_format::parse(file, source)?;
    let parsed: T = serde_path_to_error::deserialize(doc.value.clone()).map_err(|e| {
        let key = e.path().to_string();
        let line = doc.line_of(&key);
        CliError::input(at(line, None, Some(key)), e.inner().to_string())
    })?;
    Ok((
        parsed,
        Source {
            file: file.to_owned(),
            text: Some(doc),
            poisson_defaults: Vec::new(),
        },
    ))
}

/// serde_json appends " at line L column C"; the location is reported
/// separately.
fn strip_position(e: &serde_json::Error) -> String {
    let msg = e.to_string();
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_owned(),
        None => msg,
    }
}

pub fn load<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<(T, Source), CliError> {
    let file = path.display().to_string();
    let source = std::fs::read_to_string(path).map_err(|e| {
        CliError::input(
            Location {
                file: file.clone(),
                ..Location::default()
            },
            format!("cannot read input: {e}"),
        )
    })?;
    decode(&file, &source)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn err<T: for<'de> Deserialize<'de> + fmt::Debug>(src: &str) -> String {
        decode::<T>("in.json", src).unwrap_err().to_string()
    }

    #[test]
    fn missing_key_is_named() {
        let msg = err::<QuantifyFile>(
            r#"{"standard": {"name": "Ga", "intensity": {"value": 1000}},
               "analyte": {"name": "Fe", "intensity": {"value": 2000}},
               "sensitivities": {"analyte": {"value": 2, "unc": 0.02}, "standard": {"value": 1, "unc": 0.01}}}"#,
        );
        assert!(msg.contains("standard"), "{msg}");
        assert!(msg.contains("missing field `concentration`"), "{msg}");
    }

    #[test]
    fn unknown_key_is_rejected() {
        let msg = err::<ReplicatesFile>(r#"{"values": [1, 2], "colour": "red"}"#);
        assert!(msg.contains("unknown field `colour`"), "{msg}");
        assert!(msg.starts_with("in.json:1:"), "{msg}");
    }

    #[test]
    fn duplicate_inputs_are_reported() {
        let (file, src) = decode::<PropagateFile>(
            "in.json",
            r#"{"model": "x", "inputs": {"x": {"value": 1, "unc": 0}, "x": {"value": 2, "unc": 0}}}"#,
        )
        .unwrap();
        let msg = src.inputs("inputs", &file.inputs).unwrap_err().to_string();
        assert!(
            msg.contains("inputs.x") && msg.contains("DuplicateInput"),
            "{msg}"
        );
    }

    #[test]
    fn negative_uncertainty_has_key_path() {
        let (file, src) = decode::<PropagateFile>(
            "in.json",
            r#"{"model": "x", "inputs": {"x": {"value": 1, "unc": -0.5}}}"#,
        )
        .unwrap();
        let msg = src.inputs("inputs", &file.inputs).unwrap_err().to_string();
        assert_eq!(msg, "in.json: inputs.x: NegativeUncertainty: -0.5");
    }

    #[test]
    fn text_form_reports_lines() {
        let msg = decode::<ReplicatesFile>("in.txt", "values = 1, 2\nreference = abc\n")
            .unwrap_err()
            .to_string();
        assert!(msg.starts_with("in.txt:2: reference"), "{msg}");
    }

    #[test]
    fn poisson_default_for_intensity() {
        let (file, mut src) = decode::<QuantifyFile>(
            "in.txt",
            "standard.name = Ga\nstandard.concentration = 10 +- 0.1\nstandard.intensity.value = 1600\n\
             analyte.name = Fe\nanalyte.intensity = 2000 +- 40\n\
             sensitivities.analyte = 2 +- 0.02\nsensitivities.standard = 1 +- 0.01\n",
        )
        .unwrap();
        let n = src
            .intensity("standard.intensity", &file.standard.intensity)
            .unwrap();
        assert_eq!(n.std_uncertainty(), 40.0);
        assert_eq!(src.poisson_defaults, ["standard.intensity"]);
        let c = src
            .measurement("standard.concentration", &file.standard.concentration)
            .unwrap();
        assert_eq!(c.std_uncertainty(), 0.1);
    }

    #[test]
    fn trailing_garbage_after_json() {
        let msg = err::<ReplicatesFile>("{\"values\": [1, 2]} x");
        assert!(msg.contains("trailing characters"), "{msg}");
    }
}
