//! Batch front end: configuration files, pipeline dispatch and JSON
//! reports.

mod config;
mod pipelines;

pub use config::{
    CertifySection, ConfigFile, CoverSection, DecksSection, FactorSection, GeneratorSection, HopfSection, Overrides,
    RunConfig, ShilovSection, ToroidalSection, TorsionSection,
};

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::scalar::Mode;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

/// Environment variable that overrides `--threads`.
pub const THREADS_ENV: &str = "GERMLIN_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    ToroidalValidate,
    DiophScan,
    Linearize,
    Certify,
    HopfClassify,
    HopfPrecheck,
    HopfCover,
    Shilov,
}

impl Command {
    pub const ALL: [Command; 8] = [
        Command::ToroidalValidate,
        Command::DiophScan,
        Command::Linearize,
        Command::Certify,
        Command::HopfClassify,
        Command::HopfPrecheck,
        Command::HopfCover,
        Command::Shilov,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Command::ToroidalValidate => "toroidal-validate",
            Command::DiophScan => "dioph-scan",
            Command::Linearize => "linearize",
            Command::Certify => "certify",
            Command::HopfClassify => "hopf-classify",
            Command::HopfPrecheck => "hopf-precheck",
            Command::HopfCover => "hopf-cover",
            Command::Shilov => "shilov",
        }
    }
}

impl std::str::FromStr for Command {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        Command::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| CliError::Input(format!("unknown command {s:?}")))
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Input(String),
    #[error("cannot write report: {0}")]
    Output(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// One line of the summary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            pass,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub tool: String,
    pub version: String,
    pub command: Command,
    pub mode: Mode,
    /// Effective configuration as TOML.
    pub config: String,
    pub input_digest: String,
    pub status: Status,
    pub checks: Vec<Check>,
    /// Embedded module reports keyed by stage.
    pub stages: serde_json::Map<String, serde_json::Value>,
    /// Wall time in milliseconds; absent in exact mode so reports are
    /// reproducible byte for byte.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl RunReport {
    pub fn empty(command: Command, mode: Mode) -> Self {
        RunReport {
            tool: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command,
            mode,
            config: String::new(),
            input_digest: String::new(),
            status: Status::Pass,
            checks: Vec::new(),
            stages: serde_json::Map::new(),
            elapsed_ms: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Pass => EXIT_PASS,
            Status::Fail => EXIT_FAIL,
        }
    }
}

/// Stages and checks collected by a pipeline.
#[derive(Debug, Default)]
pub(crate) struct Outcome {
    pub checks: Vec<Check>,
    pub stages: serde_json::Map<String, serde_json::Value>,
}

impl Outcome {
    pub fn check(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.checks.push(Check::new(name, pass, detail));
    }

    pub fn stage<T: Serialize>(&mut self, name: &str, value: &T) {
        let v = serde_json::to_value(value).expect("stage serializes");
        self.stages.insert(name.to_string(), v);
    }
}

/// Thread count from `GERMLIN_THREADS`, falling back to the flag.
pub fn resolve_threads(flag: Option<usize>) -> Result<Option<usize>, CliError> {
    match std::env::var(THREADS_ENV) {
        Ok(v) if !v.trim().is_empty() => {
            let n: usize = config::parse_num(THREADS_ENV, &v)?;
            if n == 0 {
                return Err(CliError::Input(format!("{THREADS_ENV} must be positive")));
            }
            Ok(Some(n))
        }
        _ => Ok(flag),
    }
}

/// Runs the configured pipeline. Input problems are errors; certified
/// failures come back as a report with `status = fail`.
pub fn run(config: &RunConfig) -> Result<RunReport, CliError> {
    let start = Instant::now();
    let work = || pipelines::dispatch(config);
    let outcome = match config.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Input(e.to_string()))?
            .install(work)?,
        None => work()?,
    };
    let mut report = RunReport::empty(config.command, config.mode);
    report.config = config.echo();
    report.input_digest = config.input_digest.clone();
    report.status = if outcome.checks.iter().all(|c| c.pass) {
        Status::Pass
    } else {
        Status::Fail
    };
    report.checks = outcome.checks;
    report.stages = outcome.stages;
    if config.mode == Mode::Float {
        report.elapsed_ms = Some(start.elapsed().as_millis() as u64);
    }
    Ok(report)
}

/// Writes the JSON report to the configured path (or returns it for stdout).
pub fn write_report(config: &RunConfig, report: &RunReport) -> Result<Option<String>, CliError> {
    let text = report.to_json();
    match &config.out {
        Some(p) => {
            std::fs::write(p, text + "\n").map_err(|e| CliError::Output(format!("{}: {e}", p.display())))?;
            Ok(None)
        }
        None => Ok(Some(text)),
    }
}

/// Header plus one line per check, in pipeline order.
pub fn render_summary(report: &RunReport) -> String {
    let mut out = format!(
        "{} {} {} [{}]\n",
        report.tool,
        report.version,
        report.command.as_str(),
        report.mode.as_str()
    );
    for c in &report.checks {
        let tag = if c.pass { "PASS" } else { "FAIL" };
        if c.detail.is_empty() {
            out.push_str(&format!("{tag} {}\n", c.name));
        } else {
            out.push_str(&format!("{tag} {}: {}\n", c.name, c.detail));
        }
    }
    out
}
