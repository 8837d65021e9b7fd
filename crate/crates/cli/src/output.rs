//! Rendering of results as JSON, CSV or aligned text.

use anyhow::Result;
use clap::ValueEnum;
use latinpat::LatinSquare;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

/// One JSON object per line, or grids separated by blank lines, or one CSV
/// record of row-major entries per square.
pub fn squares(list: &[LatinSquare], format: Format) -> Result<String> {
    Ok(match format {
        Format::Json => list.iter().map(|s| s.to_json() + "\n").collect(),
        Format::Table => list
            .iter()
            .map(LatinSquare::to_text)
            .collect::<Vec<_>>()
            .join("\n"),
        Format::Csv => {
            let mut w = csv::WriterBuilder::new()
                .flexible(true)
                .from_writer(Vec::new());
            for s in list {
                w.write_record(s.grid().iter().map(|v| v.to_string()))?;
            }
            String::from_utf8(w.into_inner()?)?
        }
    })
}

/// Header row of field names and one record of values. Nested values are
/// written as compact JSON.
pub fn csv_record(fields: &[(&str, Value)]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(fields.iter().map(|(k, _)| *k))?;
    w.write_record(fields.iter().map(|(_, v)| scalar(v)))?;
    Ok(String::from_utf8(w.into_inner()?)?)
}

/// Top-level fields of a JSON object as `key  value` lines.
pub fn table(value: &Value) -> String {
    let Value::Object(map) = value else {
        return scalar(value) + "\n";
    };
    let width = map.keys().map(String::len).max().unwrap_or(0);
    map.iter()
        .map(|(k, v)| format!("{k:<width$}  {}\n", scalar(v)))
        .collect()
}

/// Fields of a JSON object in their serialized order, for [`csv_record`].
pub fn fields(value: &Value) -> Vec<(&str, Value)> {
    match value {
        Value::Object(map) => map.iter().map(|(k, v)| (k.as_str(), v.clone())).collect(),
        _ => vec![("value", value.clone())],
    }
}

pub fn scalar(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

pub fn json_line(value: &Value) -> String {
    value.to_string() + "\n"
}
