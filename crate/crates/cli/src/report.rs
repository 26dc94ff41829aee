use std::io::Write;

use serde::Serialize;
use serde_json::Value;

use crate::config::{Format, RunConfig, SCHEMA};
use crate::error::CliError;

/// A CSV table.
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        let header = header.into_iter().map(Into::into).collect();
        Self { header, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

/// What a command produced: a JSON result, an optional table, and whether
/// its checks passed.
pub struct Outcome {
    pub result: Value,
    pub table: Option<Table>,
    pub passed: Option<bool>,
    /// Extra `# ` lines in the CSV header.
    pub notes: Vec<String>,
}

impl Outcome {
    pub fn json<T: Serialize>(result: &T) -> Self {
        Self {
            result: serde_json::to_value(result).expect("serializable result"),
            table: None,
            passed: None,
            notes: Vec::new(),
        }
    }

    pub fn with_table(mut self, table: Table) -> Self {
        self.table = Some(table);
        self
    }

    pub fn with_verdict(mut self, passed: bool) -> Self {
        self.passed = Some(passed);
        self
    }
}

#[derive(Serialize)]
struct Envelope<'a> {
    schema: &'static str,
    command: &'a str,
    config: &'a RunConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    passed: Option<bool>,
    result: &'a Value,
}

pub fn emit(command: &str, config: &RunConfig, out: &Outcome) -> Result<(), CliError> {
    let mut text = String::new();
    match config.format {
        Format::Json => {
            let env = Envelope {
                schema: SCHEMA,
                command,
                config,
                passed: out.passed,
                result: &out.result,
            };
            text.push_str(&serde_json::to_string_pretty(&env).expect("serializable report"));
            text.push('\n');
        }
        Format::Csv => {
            let table = out
                .table
                .as_ref()
                .ok_or_else(|| CliError::Usage(format!("`{command}` has no CSV form; use --format json")))?;
            text.push_str(&format!("# schema: {SCHEMA}\n# command: {command}\n"));
            text.push_str(&format!(
                "# config: {}\n",
                serde_json::to_string(config).expect("serializable config")
            ));
            if let Some(p) = out.passed {
                text.push_str(&format!("# passed: {p}\n"));
            }
            for n in &out.notes {
                text.push_str(&format!("# {n}\n"));
            }
            text.push_str(&csv_text(table)?);
        }
    }
    match &config.output {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn csv_text(table: &Table) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&table.header).and_then(|_| table.rows.iter().try_for_each(|r| w.write_record(r))).map_err(csv_error)?;
    let bytes = w.into_inner().map_err(|e| CliError::Output(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("utf-8 fields"))
}

fn csv_error(e: csv::Error) -> CliError {
    CliError::Output(std::io::Error::other(e))
}

/// Shortest round-trip form, as in the JSON output.
pub fn num(x: f64) -> String {
    if x.is_finite() {
        serde_json::to_string(&x).expect("finite float")
    } else {
        format!("{x}")
    }
}
