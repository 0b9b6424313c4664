//! Scenario runner for `timeop-core`: config parsing, the scenario registry
//! and deterministic JSON/CSV reports.

pub mod config;
pub mod report;
pub mod scenarios;

use std::path::PathBuf;

use thiserror::Error;

pub use config::{CoeffSpec, Format, RunConfig};
pub use report::Report;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error("unknown scenario '{0}' (try `timeop scenarios`)")]
    UnknownScenario(String),
    #[error(transparent)]
    Core(#[from] timeop_core::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// 2 for bad input, 1 for failures while running.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::UnknownScenario(_) => 2,
            _ => 1,
        }
    }
}

pub const DEFAULT_OUTPUT: &str = "report.json";

/// Runs the configured scenario without touching the filesystem.
pub fn evaluate(cfg: &RunConfig) -> Result<Report, CliError> {
    let name = cfg
        .scenario
        .as_deref()
        .ok_or_else(|| CliError::Config("no scenario given".into()))?;
    let scenario =
        scenarios::find(name).ok_or_else(|| CliError::UnknownScenario(name.to_string()))?;
    let mut resolver = config::Resolver::new(cfg);
    let outcome = (scenario.run)(&mut resolver)?;
    let output = cfg.output.clone().unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT));
    let format = cfg.format.unwrap_or_default();
    Ok(Report::new(
        scenario.name,
        resolver.into_used(),
        output,
        format,
        outcome,
    ))
}

/// Evaluates and then writes the report files. Returns the written paths.
pub fn run(cfg: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let report = evaluate(cfg)?;
    report.write()
}
