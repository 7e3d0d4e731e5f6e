//! Monte-Carlo campaigns.
//!
//! A [`CampaignConfig`] expands into [`Cell`]s; every cell is run `runs`
//! times with seeds derived from the base seed, the cell key and the run
//! index. Results are bit-identical for any worker count.

pub mod config;
pub mod figures;
pub mod store;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::time::Duration;

use rayon::prelude::*;

pub use config::{CampaignConfig, Cell, MissionSection, Sweep};
pub use figures::{emit_figure_data, FigureId};
pub use store::{summarize_rows, Manifest, ResultStore, RunRow, SummaryRow};

use crate::engine::{run_mission, RunRecord};
use crate::error::CampaignError;

/// Environment variable read by the command-line tool for the worker count.
pub const WORKERS_ENV: &str = "UAV_SEARCH_WORKERS";

/// Everything a campaign produced, in cell and run order.
#[derive(Debug, Clone)]
pub struct CampaignResult {
    pub manifest: Manifest,
    pub cells: Vec<Cell>,
    pub runs: Vec<RunRow>,
    pub summaries: Vec<SummaryRow>,
    /// Wall time summed over each cell's runs.
    pub timing: Vec<Duration>,
}

impl CampaignResult {
    pub fn failed_runs(&self) -> usize {
        self.runs.iter().filter(|r| r.error.is_some()).count()
    }
}

/// Run one mission, turning a panic or config error into a message.
fn guarded(cell: &Cell, base: u64, run: usize, record_events: bool) -> Result<RunRecord, String> {
    let mission = cell.mission_for(base, run, record_events);
    match catch_unwind(AssertUnwindSafe(|| run_mission(&mission))) {
        Ok(Ok(r)) => Ok(r),
        Ok(Err(e)) => Err(e.to_string()),
        Err(panic) => Err(panic
            .downcast_ref::<&str>()
            .map(|s| s.to_string())
            .or_else(|| panic.downcast_ref::<String>().cloned())
            .unwrap_or_else(|| "run panicked".into())),
    }
}

/// Run `runs` missions of one cell on the current rayon pool.
pub fn run_cell(cell: &Cell, base: u64, runs: usize) -> Result<Vec<RunRecord>, CampaignError> {
    (0..runs)
        .into_par_iter()
        .map(|k| {
            guarded(cell, base, k, false).map_err(|message| CampaignError::Cell {
                cell: cell.id,
                label: cell.key.clone(),
                message: format!("run {k}: {message}"),
            })
        })
        .collect()
}

fn pool(workers: usize) -> Result<rayon::ThreadPool, CampaignError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| CampaignError::Store(format!("thread pool: {e}")))
}

/// Run a whole campaign in memory. Failed runs are reported as rows with an
/// error message; they do not stop the other runs.
pub fn run_campaign(cfg: &CampaignConfig) -> Result<CampaignResult, CampaignError> {
    run_inner(cfg, None)
}

/// Run a campaign and write its result store to `out`. Returns an error
/// after writing if any run failed.
pub fn run_campaign_to(cfg: &CampaignConfig, out: &Path) -> Result<CampaignResult, CampaignError> {
    let result = run_inner(cfg, Some(out))?;
    let failed = result.failed_runs();
    if failed > 0 {
        return Err(CampaignError::Store(format!(
            "{failed} run(s) failed; see the error column of {}",
            out.join(store::RUNS_FILE).display()
        )));
    }
    Ok(result)
}

fn run_inner(cfg: &CampaignConfig, out: Option<&Path>) -> Result<CampaignResult, CampaignError> {
    cfg.validate()?;
    let cells = cfg.cells()?;
    let jobs: Vec<(usize, usize)> = (0..cells.len()).flat_map(|c| (0..cfg.runs).map(move |k| (c, k))).collect();
    let keep_events = cfg.record_events && out.is_some();
    let results: Vec<Result<RunRecord, String>> = pool(cfg.workers)?.install(|| {
        jobs.par_iter().map(|&(c, k)| guarded(&cells[c], cfg.seed, k, keep_events)).collect()
    });

    let mut runs = Vec::with_capacity(jobs.len());
    let mut timing = vec![Duration::ZERO; cells.len()];
    for (&(c, k), r) in jobs.iter().zip(&results) {
        let cell = &cells[c];
        runs.push(RunRow::new(cell, k, cell.run_seed(cfg.seed, k), r));
        if let Ok(rec) = r {
            timing[c] += rec.wall_time;
        }
    }
    let summaries = summarize_rows(&runs)?;
    let manifest = Manifest::new(cfg, &cells);

    if let Some(dir) = out {
        let t: Vec<(usize, String, f64)> =
            cells.iter().zip(&timing).map(|(c, d)| (c.id, c.key.clone(), d.as_secs_f64())).collect();
        store::write_store(dir, cfg, &manifest, &runs, &summaries, &t)?;
        if keep_events {
            let events = dir.join(store::EVENTS_DIR);
            std::fs::create_dir_all(&events).map_err(|e| CampaignError::io(&events, e))?;
            for (&(c, k), r) in jobs.iter().zip(&results) {
                if let Ok(rec) = r {
                    store::write_events(&store::events_path(dir, c, k), rec)?;
                }
            }
        }
    }
    Ok(CampaignResult { manifest, cells, runs, summaries, timing })
}

/// Re-run one recorded run of a stored campaign with its event log on.
/// Fails if the re-run disagrees with the stored row.
pub fn replay(store: &ResultStore, cell: usize, run: usize) -> Result<RunRecord, CampaignError> {
    let cells = store.config.cells()?;
    let c = cells
        .get(cell)
        .ok_or_else(|| CampaignError::Store(format!("no cell {cell}; the store has {}", cells.len())))?;
    if run >= store.config.runs {
        return Err(CampaignError::Store(format!("no run {run}; the store has {} per cell", store.config.runs)));
    }
    let record = guarded(c, store.config.seed, run, true)
        .map_err(|message| CampaignError::Cell { cell, label: c.key.clone(), message })?;
    let stored = store
        .runs
        .iter()
        .find(|r| r.cell_id == cell && r.run == run)
        .ok_or_else(|| CampaignError::Store(format!("runs.csv has no row for cell {cell} run {run}")))?;
    let fresh = RunRow::new(c, run, record.seed, &Ok(record.clone()));
    if &fresh != stored {
        return Err(CampaignError::Store(format!("replay of cell {cell} run {run} differs from runs.csv")));
    }
    Ok(record)
}
