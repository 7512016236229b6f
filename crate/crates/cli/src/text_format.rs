//! Line-oriented bench format, an alternative spelling of the JSON inputs.
//!
//! ```text
//! # comment
//! standard.name = Ga
//! standard.concentration = 10 +- 0.1
//! standard.intensity.value = 1000
//! values = 9.9, 10.1, 10.0
//! ```
//!
//! Dotted keys address nested objects. `v +- u` (or `v ± u`) expands to
//! `{"value": v, "unc": u}`; comma-separated numbers become an array; other
//! values are numbers when they parse as one and strings otherwise
//! (double quotes force a string).

use std::collections::BTreeMap;

use serde_json::{Map, Number, Value};

use crate::error::{CliError, Location};

/// Parsed document plus the line each dotted key was defined on.
#[derive(Debug)]
pub struct TextDocument {
    pub value: Value,
    pub lines: BTreeMap<String, usize>,
}

impl TextDocument {
    /// Line of the longest defined key that prefixes `path`.
    pub fn line_of(&self, path: &str) -> Option<usize> {
        let mut probe = path.to_owned();
        loop {
            if let Some(&line) = self.lines.get(&probe) {
                return Some(line);
            }
            let cut = probe.rfind(['.', '['])?;
            probe.truncate(cut);
        }
    }
}

fn number(text: &str) -> Option<Number> {
    let x: f64 = text.trim().parse().ok()?;
    Number::from_f64(x)
}

fn parse_value(raw: &str) -> Result<Value, String> {
    let raw = raw.trim();
    if raw.len() >= 2 && raw.starts_with('"') && raw.ends_with('"') {
        return Ok(Value::String(raw[1..raw.len() - 1].to_owned()));
    }
    for sep in ["+-", "±"] {
        if let Some((v, u)) = raw.split_once(sep) {
            let value = number(v).ok_or_else(|| format!("`{}` is not a number", v.trim()))?;
            let unc = number(u).ok_or_else(|| format!("`{}` is not a number", u.trim()))?;
            let mut obj = Map::new();
            obj.insert("value".into(), Value::Number(value));
            obj.insert("unc".into(), Value::Number(unc));
            return Ok(Value::Object(obj));
        }
    }
    if raw.contains(',') {
        return raw
            .split(',')
            .map(|item| {
                number(item)
                    .map(Value::Number)
                    .ok_or_else(|| format!("list item `{}` is not a number", item.trim()))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Value::Array);
    }
    Ok(number(raw)
        .map(Value::Number)
        .unwrap_or_else(|| Value::String(raw.to_owned())))
}

fn valid_key(key: &str) -> bool {
    !key.is_empty()
        && key.split('.').all(|seg| {
            !seg.is_empty() && seg.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
        })
}

pub fn parse(file: &str, source: &str) -> Result<TextDocument, CliError> {
    let mut root = Map::new();
    let mut lines = BTreeMap::new();
    for (idx, raw_line) in source.lines().enumerate() {
        let line_no = idx + 1;
        let at = |key: Option<&str>| Location {
            file: file.to_owned(),
            line: Some(line_no),
            column: None,
            key: key.map(str::to_owned),
        };
        let line = raw_line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, raw)) = line.split_once('=') else {
            return Err(CliError::input(at(None), "expected `key = value`"));
        };
        let key = key.trim();
        if !valid_key(key) {
            return Err(CliError::input(at(None), format!("invalid key `{key}`")));
        }
        let value = parse_value(raw).map_err(|m| CliError::input(at(Some(key)), m))?;
        if let Some(prev) = lines.get(key) {
            return Err(CliError::input(
                at(Some(key)),
                format!("duplicate key (first defined on line {prev})"),
            ));
        }
        insert(&mut root, key, value).map_err(|m| CliError::input(at(Some(key)), m))?;
        lines.insert(key.to_owned(), line_no);
    }
    Ok(TextDocument {
        value: Value::Object(root),
        lines,
    })
}

fn insert(root: &mut Map<String, Value>, key: &str, value: Value) -> Result<(), String> {
    let segments: Vec<&str> = key.split('.').collect();
    let (last, parents) = segments.split_last().expect("keys are non-empty");
    let mut node = root;
    for seg in parents {
        let entry = node
            .entry(seg.to_string())
            .or_insert_with(|| Value::Object(Map::new()));
        node = entry
            .as_object_mut()
            .ok_or_else(|| format!("`{seg}` already holds a value and cannot have sub-keys"))?;
    }
    match (node.get_mut(*last), value) {
        (None, value) => {
            node.insert(last.to_string(), value);
            Ok(())
        }
        // `x = 1 +- 0.1` followed by nothing else is the common case; merging
        // lets `x.value` / `x.unc` lines coexist with other `x.*` lines.
        (Some(Value::Object(existing)), Value::Object(new)) => {
            for (k, v) in new {
                if existing.contains_key(&k) {
                    return Err(format!("`{key}.{k}` is defined twice"));
                }
                existing.insert(k, v);
            }
            Ok(())
        }
        (Some(_), _) => Err(format!("`{key}` conflicts with an earlier definition")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn nested_keys_and_shorthand() {
        let doc = parse(
            "f",
            "# demo\nstandard.name = Ga\nstandard.concentration = 10 +- 0.1\nstandard.intensity.value = 1000\nvalues = 1, 2.5\nlabel = \"42\"\n",
        )
        .unwrap();
        assert_eq!(
            doc.value,
            json!({
                "standard": {
                    "name": "Ga",
                    "concentration": {"value": 10.0, "unc": 0.1},
                    "intensity": {"value": 1000.0}
                },
                "values": [1.0, 2.5],
                "label": "42"
            })
        );
        assert_eq!(doc.line_of("standard.intensity.value"), Some(4));
        assert_eq!(doc.line_of("standard.intensity.unc"), None);
        assert_eq!(doc.line_of("standard.concentration.unc"), Some(3));
    }

    #[test]
    fn plus_minus_sign() {
        let doc = parse("f", "x = 2 ± 0.5").unwrap();
        assert_eq!(doc.value, json!({"x": {"value": 2.0, "unc": 0.5}}));
    }

    #[test]
    fn errors_carry_lines() {
        let err = parse("f", "a = 1\na = 2").unwrap_err();
        assert!(
            err.to_string().starts_with("f:2: a: duplicate key"),
            "{err}"
        );
        let err = parse("f", "\n\nno equals sign").unwrap_err();
        assert!(err.to_string().starts_with("f:3:"), "{err}");
        let err = parse("f", "a = 1\na.b = 2").unwrap_err();
        assert!(err.to_string().contains("already holds a value"), "{err}");
        let err = parse("f", "x = 1 +- abc").unwrap_err();
        assert!(err.to_string().contains("not a number"), "{err}");
        assert!(parse("f", "bad key = 1").is_err());
    }
}
