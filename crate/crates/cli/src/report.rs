//! Report emission: `report.json` and one CSV per tabular scenario.
//!
//! Floats are written as shortest round-trip decimals. The timestamp is the
//! only run-dependent field and sits alone on the second line of the JSON.

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use geophase::gates::{GateKind, SPIN_TO_BIT};
use serde::Serialize;

use crate::config::Config;
use crate::run::{ScenarioOutcome, Status, Table};

pub const EXIT_OK: u8 = 0;
pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_SCENARIO: u8 = 3;
pub const EXIT_THRESHOLD: u8 = 4;

pub const REPORT_FILE: &str = "report.json";

/// Scenario failures win over threshold failures.
pub fn exit_code(outcomes: &[ScenarioOutcome]) -> u8 {
    if outcomes.iter().any(|o| o.status == Status::Failed) {
        EXIT_SCENARIO
    } else if outcomes.iter().any(|o| o.status == Status::ThresholdFailed) {
        EXIT_THRESHOLD
    } else {
        EXIT_OK
    }
}

#[derive(Debug, Serialize)]
pub struct ReportConventions {
    pub hbar: f64,
    pub frequency_units: &'static str,
    pub orientation: &'static str,
    pub holonomy_index: &'static str,
    pub distance: &'static str,
    pub basis_order: BTreeMap<&'static str, &'static [&'static str]>,
    pub spin_to_bit: &'static str,
    pub floats: &'static str,
    pub csv_cells: &'static str,
}

impl ReportConventions {
    pub fn new() -> Self {
        let base = GateKind::Phase.conventions();
        ReportConventions {
            hbar: base.hbar,
            frequency_units: base.frequency_units,
            orientation: base.orientation,
            holonomy_index: base.holonomy_index,
            distance: base.distance,
            basis_order: BTreeMap::from([
                ("phase_gate", GateKind::Phase.basis()),
                ("cphase", GateKind::ConditionalPhase.basis()),
                ("hadamard", GateKind::Hadamard.basis()),
            ]),
            spin_to_bit: SPIN_TO_BIT,
            floats: "shortest round-trip decimal; matrices as rows of [re, im] pairs",
            csv_cells: "empty cells mark undefined values or error rows; the error column holds the message",
        }
    }
}

impl Default for ReportConventions {
    fn default() -> Self {
        Self::new()
    }
}

#[derive(Serialize)]
struct ScenarioEntry<'a> {
    #[serde(flatten)]
    outcome: &'a ScenarioOutcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    csv: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rows: Option<usize>,
}

#[derive(Serialize)]
struct Report<'a> {
    timestamp: String,
    generator: String,
    exit_code: u8,
    conventions: ReportConventions,
    config: &'a Config,
    scenarios: Vec<ScenarioEntry<'a>>,
}

/// `03_my_scenario.csv` for scenario index 3 named "My scenario".
pub fn csv_name(index: usize, name: &str) -> String {
    let slug: String = name
        .chars()
        .map(|ch| {
            if ch.is_ascii_alphanumeric() {
                ch.to_ascii_lowercase()
            } else {
                '_'
            }
        })
        .collect();
    format!("{index:02}_{slug}.csv")
}

fn number(v: f64) -> String {
    serde_json::to_string(&v).expect("floats always serialize")
}

pub fn write_csv(path: &Path, table: &Table) -> io::Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    let mut header = table.columns.clone();
    header.push("error".into());
    w.write_record(&header)?;
    for row in &table.rows {
        let mut cells: Vec<String> = row.values.iter().map(|v| v.map(number).unwrap_or_default()).collect();
        cells.push(row.error.clone().unwrap_or_default());
        w.write_record(&cells)?;
    }
    w.flush()
}

pub fn render(config: &Config, outcomes: &[ScenarioOutcome], code: u8, timestamp: String) -> String {
    let scenarios = outcomes
        .iter()
        .enumerate()
        .map(|(i, o)| ScenarioEntry {
            outcome: o,
            csv: o.table.as_ref().map(|_| csv_name(i, &o.name)),
            rows: o.table.as_ref().map(|t| t.rows.len()),
        })
        .collect();
    let report = Report {
        timestamp,
        generator: format!("geophase {}", env!("CARGO_PKG_VERSION")),
        exit_code: code,
        conventions: ReportConventions::new(),
        config,
        scenarios,
    };
    let mut text = serde_json::to_string_pretty(&report).expect("report serializes");
    text.push('\n');
    text
}

/// Writes every CSV and then `report.json`, returning the report path.
pub fn emit(dir: &Path, config: &Config, outcomes: &[ScenarioOutcome], code: u8) -> io::Result<PathBuf> {
    fs::create_dir_all(dir)?;
    for (i, o) in outcomes.iter().enumerate() {
        if let Some(t) = &o.table {
            write_csv(&dir.join(csv_name(i, &o.name)), t)?;
        }
    }
    let timestamp = chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true);
    let path = dir.join(REPORT_FILE);
    fs::write(&path, render(config, outcomes, code, timestamp))?;
    Ok(path)
}
