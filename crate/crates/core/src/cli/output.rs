use std::io::Write;
use std::path::Path;

use clap::ValueEnum;
use serde_json::Value;

use crate::calogero::CalogeroError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// One command result in all three output forms.
pub struct Rendered {
    pub json: Value,
    pub text: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Rendered {
    pub fn new(json: Value, text: String) -> Rendered {
        Rendered { json, text, header: Vec::new(), rows: Vec::new() }
    }

    pub fn table(mut self, header: &[&str], rows: Vec<Vec<String>>) -> Rendered {
        self.header = header.iter().map(|s| s.to_string()).collect();
        self.rows = rows;
        self
    }

    pub fn render(&self, format: Format, banner: Option<&str>) -> Result<String, CalogeroError> {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json)
                    .map_err(|e| CalogeroError::Internal(format!("json encoding failed: {e}")))?;
                s.push('\n');
                Ok(s)
            }
            Format::Text => {
                let mut s = String::new();
                if let Some(b) = banner {
                    s.push_str(&format!("# {b}\n"));
                }
                s.push_str(&self.text);
                if !s.ends_with('\n') {
                    s.push('\n');
                }
                Ok(s)
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                let fail = |e: csv::Error| CalogeroError::Internal(format!("csv encoding failed: {e}"));
                w.write_record(&self.header).map_err(fail)?;
                for row in &self.rows {
                    w.write_record(row).map_err(fail)?;
                }
                let bytes = w.into_inner().map_err(|e| CalogeroError::Internal(e.to_string()))?;
                String::from_utf8(bytes).map_err(|e| CalogeroError::Internal(e.to_string()))
            }
        }
    }
}

pub fn emit(content: &str, out: Option<&Path>) -> Result<(), CalogeroError> {
    match out {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| CalogeroError::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            // a closed pipe is not worth an error code
            let _ = stdout.write_all(content.as_bytes());
            let _ = stdout.flush();
            Ok(())
        }
    }
}
