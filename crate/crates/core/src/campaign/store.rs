//! On-disk result store.
//!
//! ```text
//! <out>/manifest.toml   name, code version, config hash, seed, runs, cells
//! <out>/config.toml     resolved campaign config (hashed into the manifest)
//! <out>/runs.csv        one row per run
//! <out>/summary.csv     one row per cell
//! <out>/timing.csv      wall time per cell (not reproducible, kept apart)
//! <out>/events/         cell<id>-run<k>.jsonl when events are recorded
//! ```
//!
//! `runs.csv` columns: `cell_id, cell, policy, scenario, n_uavs,
//! step_fraction_1, run, seed, targets_confirmed, real_targets,
//! completion_time, censored, end_time, confirmations, error`.
//! `completion_time` is empty for censored runs, `error` is empty unless the
//! run panicked.
//!
//! `summary.csv` columns: `cell_id, cell, policy, scenario, n_uavs,
//! step_fraction_1, runs, failed, mean_tnc, sd_tnc, min_tnc, q1_tnc,
//! median_tnc, q3_tnc, max_tnc, completed, censored, mean_ts, sd_ts`.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::campaign::config::{CampaignConfig, Cell};
use crate::engine::RunRecord;
use crate::error::CampaignError;
use crate::metrics::{aggregate_outcomes, five_number_summary, Outcome};
use crate::scenario::ScenarioKind;

pub const MANIFEST_FILE: &str = "manifest.toml";
pub const CONFIG_FILE: &str = "config.toml";
pub const RUNS_FILE: &str = "runs.csv";
pub const SUMMARY_FILE: &str = "summary.csv";
pub const TIMING_FILE: &str = "timing.csv";
pub const EVENTS_DIR: &str = "events";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRow {
    pub cell_id: usize,
    pub cell: String,
    pub policy: String,
    pub scenario: ScenarioKind,
    pub n_uavs: usize,
    pub step_fraction_1: Option<f64>,
    pub run: usize,
    pub seed: u64,
    pub targets_confirmed: usize,
    pub real_targets: usize,
    pub completion_time: Option<f64>,
    pub censored: bool,
    pub end_time: f64,
    pub confirmations: usize,
    pub error: Option<String>,
}

impl RunRow {
    pub fn new(cell: &Cell, run: usize, seed: u64, result: &Result<RunRecord, String>) -> Self {
        let mut row = Self {
            cell_id: cell.id,
            cell: cell.key.clone(),
            policy: cell.policy.clone(),
            scenario: cell.scenario,
            n_uavs: cell.n_uavs,
            step_fraction_1: cell.step_fraction_1,
            run,
            seed,
            targets_confirmed: 0,
            real_targets: 0,
            completion_time: None,
            censored: true,
            end_time: 0.0,
            confirmations: 0,
            error: None,
        };
        match result {
            Ok(r) => {
                row.targets_confirmed = r.targets_confirmed;
                row.real_targets = r.real_targets;
                row.completion_time = r.completion_time;
                row.censored = r.censored;
                row.end_time = r.end_time;
                row.confirmations = r.confirmations.len();
            }
            Err(e) => row.error = Some(e.clone()),
        }
        row
    }

    pub fn outcome(&self) -> Outcome {
        Outcome { targets_confirmed: self.targets_confirmed, completion_time: self.completion_time }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub cell_id: usize,
    pub cell: String,
    pub policy: String,
    pub scenario: ScenarioKind,
    pub n_uavs: usize,
    pub step_fraction_1: Option<f64>,
    pub runs: usize,
    pub failed: usize,
    pub mean_tnc: f64,
    pub sd_tnc: f64,
    pub min_tnc: f64,
    pub q1_tnc: f64,
    pub median_tnc: f64,
    pub q3_tnc: f64,
    pub max_tnc: f64,
    pub completed: usize,
    pub censored: usize,
    pub mean_ts: Option<f64>,
    pub sd_ts: Option<f64>,
}

/// Per-cell summaries from per-run rows, in cell order. Failed runs are
/// counted but excluded from the statistics.
pub fn summarize_rows(rows: &[RunRow]) -> Result<Vec<SummaryRow>, CampaignError> {
    let mut ids: Vec<usize> = rows.iter().map(|r| r.cell_id).collect();
    ids.sort_unstable();
    ids.dedup();
    let mut out = Vec::with_capacity(ids.len());
    for id in ids {
        let cell: Vec<&RunRow> = rows.iter().filter(|r| r.cell_id == id).collect();
        let ok: Vec<&RunRow> = cell.iter().copied().filter(|r| r.error.is_none()).collect();
        let first = cell[0];
        let outcomes: Vec<Outcome> = ok.iter().map(|r| r.outcome()).collect();
        let s = aggregate_outcomes(&outcomes)
            .map_err(|e| CampaignError::Cell { cell: id, label: first.cell.clone(), message: e.to_string() })?;
        let tnc: Vec<f64> = outcomes.iter().map(|o| o.targets_confirmed as f64).collect();
        let [min, q1, median, q3, max] = five_number_summary(&tnc)?;
        out.push(SummaryRow {
            cell_id: id,
            cell: first.cell.clone(),
            policy: first.policy.clone(),
            scenario: first.scenario,
            n_uavs: first.n_uavs,
            step_fraction_1: first.step_fraction_1,
            runs: s.runs,
            failed: cell.len() - ok.len(),
            mean_tnc: s.mean_tnc,
            sd_tnc: s.sd_tnc,
            min_tnc: min,
            q1_tnc: q1,
            median_tnc: median,
            q3_tnc: q3,
            max_tnc: max,
            completed: s.completed,
            censored: s.censored,
            mean_ts: s.mean_ts,
            sd_ts: s.sd_ts,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestCell {
    pub id: usize,
    pub key: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub name: String,
    pub code_version: String,
    /// SHA-256 of `config.toml`.
    pub config_sha256: String,
    pub seed: u64,
    pub runs: usize,
    pub record_events: bool,
    pub cells: Vec<ManifestCell>,
}

impl Manifest {
    pub fn new(cfg: &CampaignConfig, cells: &[Cell]) -> Self {
        Self {
            name: cfg.name.clone(),
            code_version: env!("CARGO_PKG_VERSION").to_string(),
            config_sha256: cfg.sha256(),
            seed: cfg.seed,
            runs: cfg.runs,
            record_events: cfg.record_events,
            cells: cells.iter().map(|c| ManifestCell { id: c.id, key: c.key.clone() }).collect(),
        }
    }
}

/// Serialize rows as CSV bytes with a header.
pub fn csv_bytes<T: Serialize>(rows: &[T]) -> Result<Vec<u8>, CampaignError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    w.into_inner().map_err(|e| CampaignError::Store(e.to_string()))
}

pub fn read_csv<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<Vec<T>, CampaignError> {
    let mut r = csv::Reader::from_path(path).map_err(|e| match e.kind() {
        csv::ErrorKind::Io(_) => CampaignError::Store(format!("{}: {e}", path.display())),
        _ => CampaignError::Csv(e),
    })?;
    r.deserialize().collect::<Result<Vec<T>, _>>().map_err(CampaignError::from)
}

pub(crate) fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CampaignError> {
    fs::write(path, bytes).map_err(|e| CampaignError::io(path, e))
}

/// Write one run's event log as JSON lines.
pub fn write_events(path: &Path, record: &RunRecord) -> Result<(), CampaignError> {
    let mut buf = Vec::new();
    for e in &record.events {
        serde_json::to_writer(&mut buf, e).map_err(|e| CampaignError::Store(e.to_string()))?;
        buf.push(b'\n');
    }
    write_file(path, &buf)
}

pub fn events_path(dir: &Path, cell: usize, run: usize) -> PathBuf {
    dir.join(EVENTS_DIR).join(format!("cell{cell}-run{run}.jsonl"))
}

/// A finished campaign on disk.
#[derive(Debug, Clone)]
pub struct ResultStore {
    pub dir: PathBuf,
    pub manifest: Manifest,
    pub config: CampaignConfig,
    pub runs: Vec<RunRow>,
    pub summaries: Vec<SummaryRow>,
}

impl ResultStore {
    /// Open a store and check that its config matches the manifest hash.
    pub fn open(dir: &Path) -> Result<Self, CampaignError> {
        let manifest_path = dir.join(MANIFEST_FILE);
        let text = fs::read_to_string(&manifest_path).map_err(|e| CampaignError::io(&manifest_path, e))?;
        let manifest: Manifest = toml::from_str(&text)
            .map_err(|e| CampaignError::Parse { path: manifest_path.clone(), message: e.to_string() })?;
        let config_path = dir.join(CONFIG_FILE);
        let config = CampaignConfig::load(&config_path)?;
        if config.sha256() != manifest.config_sha256 {
            return Err(CampaignError::Store(format!(
                "{}: config hash {} does not match manifest {}",
                config_path.display(),
                config.sha256(),
                manifest.config_sha256
            )));
        }
        let runs: Vec<RunRow> = read_csv(&dir.join(RUNS_FILE))?;
        if runs.is_empty() {
            return Err(CampaignError::Store(format!("{}: no runs recorded", dir.display())));
        }
        let summaries = read_csv(&dir.join(SUMMARY_FILE))?;
        Ok(Self { dir: dir.to_path_buf(), manifest, config, runs, summaries })
    }

    /// Recompute every summary from `runs.csv` and compare it with
    /// `summary.csv`.
    pub fn verify_summaries(&self) -> Result<Vec<SummaryRow>, CampaignError> {
        let recomputed = summarize_rows(&self.runs)?;
        if recomputed != self.summaries {
            return Err(CampaignError::Store("summary.csv does not match the per-run rows".into()));
        }
        Ok(recomputed)
    }
}

pub(crate) fn write_store(
    dir: &Path,
    cfg: &CampaignConfig,
    manifest: &Manifest,
    runs: &[RunRow],
    summaries: &[SummaryRow],
    timing: &[(usize, String, f64)],
) -> Result<(), CampaignError> {
    fs::create_dir_all(dir).map_err(|e| CampaignError::io(dir, e))?;
    write_file(&dir.join(CONFIG_FILE), cfg.canonical_toml().as_bytes())?;
    let manifest_text = toml::to_string(manifest).map_err(|e| CampaignError::Store(e.to_string()))?;
    write_file(&dir.join(MANIFEST_FILE), manifest_text.as_bytes())?;
    write_file(&dir.join(RUNS_FILE), &csv_bytes(runs)?)?;
    write_file(&dir.join(SUMMARY_FILE), &csv_bytes(summaries)?)?;
    let mut t = Vec::new();
    writeln!(t, "cell_id,cell,wall_seconds").expect("write to Vec");
    for (id, key, secs) in timing {
        writeln!(t, "{id},{key},{secs:.3}").expect("write to Vec");
    }
    write_file(&dir.join(TIMING_FILE), &t)
}
