//! Output rendering: a stable JSON envelope, RFC-4180 CSV, and a
//! human-readable table form.
//!
//! JSON envelopes carry the keys {command, inputs, results,
//! library_version}; every floating-point field is serialized with 17
//! significant digits so equal runs produce byte-identical files.

use std::io::{self, Write};

use beamsim::claims::ClaimRow;
use serde_json::{json, Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
    Pretty,
}

impl OutputFormat {
    pub fn parse(text: &str) -> Option<Self> {
        match text {
            "json" => Some(OutputFormat::Json),
            "csv" => Some(OutputFormat::Csv),
            "pretty" => Some(OutputFormat::Pretty),
            _ => None,
        }
    }
}

/// A fully computed command result, ready to render in any format.
pub struct Rendering {
    pub command: &'static str,
    pub inputs: Map<String, Value>,
    pub results: Map<String, Value>,
    /// key/value pairs for generic CSV output, in emission order
    pub csv_rows: Vec<(String, String)>,
    pub pretty: String,
    /// reproduce rows render as a dedicated CSV table instead
    pub claim_rows: Option<Vec<ClaimRow>>,
}

impl Rendering {
    pub fn render(&self, format: OutputFormat) -> io::Result<Vec<u8>> {
        match format {
            OutputFormat::Json => {
                let envelope = json!({
                    "command": self.command,
                    "inputs": Value::Object(self.inputs.clone()),
                    "results": Value::Object(self.results.clone()),
                    "library_version": beamsim::VERSION,
                });
                let mut bytes = to_json_17(&envelope)?;
                bytes.push(b'\n');
                Ok(bytes)
            }
            OutputFormat::Csv => match &self.claim_rows {
                Some(rows) => claim_rows_csv(rows),
                None => {
                    let mut writer = csv::Writer::from_writer(Vec::new());
                    writer.write_record(["key", "value"]).map_err(csv_io)?;
                    for (key, value) in &self.csv_rows {
                        writer.write_record([key, value]).map_err(csv_io)?;
                    }
                    writer
                        .into_inner()
                        .map_err(|e| io::Error::other(e.to_string()))
                }
            },
            OutputFormat::Pretty => Ok(self.pretty.clone().into_bytes()),
        }
    }
}

/// Serializes JSON with every f64 printed as `{:.16e}` (17 significant
/// digits).
pub fn to_json_17(value: &Value) -> io::Result<Vec<u8>> {
    struct Precision17;
    impl serde_json::ser::Formatter for Precision17 {
        fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
        where
            W: ?Sized + Write,
        {
            write!(writer, "{value:.16e}")
        }
    }
    let mut bytes = Vec::new();
    let mut serializer = serde_json::Serializer::with_formatter(&mut bytes, Precision17);
    serde::Serialize::serialize(value, &mut serializer)
        .map_err(|e| io::Error::other(e.to_string()))?;
    Ok(bytes)
}

/// 17-significant-digit text form used in CSV cells.
pub fn float_17(value: f64) -> String {
    format!("{value:.16e}")
}

pub const CLAIM_CSV_HEADER: [&str; 8] = [
    "claim_id",
    "n",
    "method",
    "quantity",
    "paper_value",
    "computed_value",
    "abs_error",
    "source",
];

fn claim_rows_csv(rows: &[ClaimRow]) -> io::Result<Vec<u8>> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(CLAIM_CSV_HEADER).map_err(csv_io)?;
    for row in rows {
        writer
            .write_record([
                row.claim_id.as_str(),
                &row.n.to_string(),
                row.method.as_str(),
                row.quantity.as_str(),
                &float_17(row.paper_value),
                &float_17(row.computed_value),
                &float_17(row.abs_error),
                row.source.as_str(),
            ])
            .map_err(csv_io)?;
    }
    writer
        .into_inner()
        .map_err(|e| io::Error::other(e.to_string()))
}

fn csv_io(error: csv::Error) -> io::Error {
    io::Error::other(error.to_string())
}

/// Pretty table of claim rows, with the closed-form reference value shown
/// next to its decimal expansion.
pub fn claim_rows_pretty(rows: &[ClaimRow], max_abs_error: f64) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{:<28} {:>3} {:>6} {:<12} {:>22} {:>22} {:>12}\n",
        "claim", "n", "method", "quantity", "reference", "computed", "abs error"
    ));
    for row in rows {
        let reference = if row.paper_form == format!("{:.0}", row.paper_value) {
            row.paper_form.clone()
        } else {
            format!("{} = {:.6}", row.paper_form, row.paper_value)
        };
        out.push_str(&format!(
            "{:<28} {:>3} {:>6} {:<12} {:>22} {:>22.16} {:>12.3e}\n",
            row.claim_id,
            row.n,
            row.method,
            row.quantity,
            reference,
            row.computed_value,
            row.abs_error
        ));
    }
    out.push_str(&format!(
        "{} rows, max abs error {max_abs_error:.3e}\n",
        rows.len()
    ));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_carry_seventeen_digits() {
        let value = json!({"x": 3.0f64.sqrt(), "n": 7});
        let text = String::from_utf8(to_json_17(&value).unwrap()).unwrap();
        assert!(text.contains("1.7320508075688772e0"), "{text}");
        assert!(text.contains("\"n\":7"));
    }

    #[test]
    fn format_names_parse() {
        assert_eq!(OutputFormat::parse("json"), Some(OutputFormat::Json));
        assert_eq!(OutputFormat::parse("csv"), Some(OutputFormat::Csv));
        assert_eq!(OutputFormat::parse("pretty"), Some(OutputFormat::Pretty));
        assert_eq!(OutputFormat::parse("yaml"), None);
    }
}
