use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use crate::config::Format;
use crate::scenarios::Outcome;
use crate::CliError;

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone)]
pub struct Report {
    json: Value,
    csv: String,
    output: PathBuf,
    format: Format,
}

impl Report {
    pub fn new(
        scenario: &str,
        mut used: BTreeMap<&'static str, Value>,
        output: PathBuf,
        format: Format,
        outcome: Outcome,
    ) -> Self {
        used.insert("scenario", json!(scenario));
        used.insert("output", json!(output.display().to_string()));
        used.insert("format", json!(format.to_string()));
        let json = json!({
            "schema": SCHEMA,
            "scenario": scenario,
            "version": env!("CARGO_PKG_VERSION"),
            "config": used,
            "payload": outcome.payload,
        });
        Report {
            json,
            csv: outcome.csv,
            output,
            format,
        }
    }

    pub fn json(&self) -> &Value {
        &self.json
    }

    pub fn payload(&self) -> &Value {
        &self.json["payload"]
    }

    pub fn csv(&self) -> &str {
        &self.csv
    }

    pub fn csv_path(&self) -> Option<PathBuf> {
        match self.format {
            Format::Csv => Some(self.output.with_extension("csv")),
            Format::Json => None,
        }
    }

    pub fn to_json_string(&self) -> Result<String, CliError> {
        let mut text = serde_json::to_string_pretty(&self.json)?;
        text.push('\n');
        Ok(text)
    }

    /// Writes the JSON report and, for `format=csv`, the table next to it.
    /// Files go through a temporary name so a failed run leaves nothing behind.
    pub fn write(&self) -> Result<Vec<PathBuf>, CliError> {
        let mut files = vec![(self.output.clone(), self.to_json_string()?)];
        if let Some(path) = self.csv_path() {
            if path == self.output {
                return Err(CliError::Config(
                    "output must not end in .csv when format=csv".into(),
                ));
            }
            files.push((path, self.csv.clone()));
        }
        let mut staged = Vec::new();
        for (path, text) in &files {
            let tmp = temp_name(path);
            if let Err(e) = fs::write(&tmp, text) {
                for t in &staged {
                    let _ = fs::remove_file(t);
                }
                return Err(e.into());
            }
            staged.push(tmp);
        }
        for (tmp, (path, _)) in staged.iter().zip(&files) {
            fs::rename(tmp, path)?;
        }
        Ok(files.into_iter().map(|(p, _)| p).collect())
    }
}

fn temp_name(path: &Path) -> PathBuf {
    let mut name = path.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".partial");
    path.with_file_name(name)
}
