//! Table and box-plot data from a result store.
//!
//! | id       | content                                                  | needs                          |
//! |----------|----------------------------------------------------------|--------------------------------|
//! | `fig4`   | T_nc five-number summary, fixed targets                  | fixed cells                    |
//! | `fig5`   | T_S five-number summary, fixed targets                   | fixed cells, completeness mode |
//! | `fig6`   | T_nc, pop-up targets                                     | popup cells                    |
//! | `fig7`   | T_S, pop-up targets                                      | popup cells, completeness mode |
//! | `fig8`   | T_nc, dynamic targets                                    | dynamic cells                  |
//! | `fig9`   | T_S, dynamic targets                                     | dynamic cells, completeness    |
//! | `table3` | step-length sweep of the MDM cells                       | `sweep.step_fraction_1`        |
//! | `table4` | level-1 × level-2 process grid, every scenario           | `sweep.processes`              |
//! | `table5` | MDM against single-sensor baselines                      | MDM and SSS cells              |
//! | `table6` | process grid, dynamic targets only                       | `sweep.processes`, dynamic     |
//! | `table7` | as `table5`, with false targets                          | `mission.false_targets`        |
//! | `table8` | MDM against particle-swarm baselines                     | MDM and PSO cells              |
//!
//! Box-plot CSV columns: `scenario, policy, n_uavs, metric, count, censored,
//! min, q1, median, q3, max`. Grid and sweep CSV columns: `scenario, policy,
//! level1, level2, step_fraction_1, n_uavs, runs, mean_tnc, sd_tnc, completed,
//! mean_ts, sd_ts`. Comparison CSV columns: `scenario, n_uavs, mdm, baseline,
//! mean_tnc_mdm, mean_tnc_baseline, aise, aise_alt, mean_ts_mdm,
//! mean_ts_baseline, aisc`. Empty fields mean "not defined" (no completed
//! runs, zero denominator).

use std::fmt;
use std::str::FromStr;

use crate::campaign::config::Cell;
use crate::campaign::store::{ResultStore, SummaryRow};
use crate::engine::MissionMode;
use crate::error::CampaignError;
use crate::metrics::{aise, aise_alt, aisc, five_number_summary};
use crate::policy::PolicyConfig;
use crate::scenario::ScenarioKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigureId {
    Fig4,
    Fig5,
    Fig6,
    Fig7,
    Fig8,
    Fig9,
    Table3,
    Table4,
    Table5,
    Table6,
    Table7,
    Table8,
}

impl FigureId {
    pub const ALL: [FigureId; 12] = [
        FigureId::Fig4,
        FigureId::Fig5,
        FigureId::Fig6,
        FigureId::Fig7,
        FigureId::Fig8,
        FigureId::Fig9,
        FigureId::Table3,
        FigureId::Table4,
        FigureId::Table5,
        FigureId::Table6,
        FigureId::Table7,
        FigureId::Table8,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            FigureId::Fig4 => "fig4",
            FigureId::Fig5 => "fig5",
            FigureId::Fig6 => "fig6",
            FigureId::Fig7 => "fig7",
            FigureId::Fig8 => "fig8",
            FigureId::Fig9 => "fig9",
            FigureId::Table3 => "table3",
            FigureId::Table4 => "table4",
            FigureId::Table5 => "table5",
            FigureId::Table6 => "table6",
            FigureId::Table7 => "table7",
            FigureId::Table8 => "table8",
        }
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FigureId {
    type Err = CampaignError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.to_ascii_lowercase();
        FigureId::ALL.into_iter().find(|f| f.name() == lower).ok_or_else(|| {
            let names: Vec<_> = FigureId::ALL.iter().map(|f| f.name()).collect();
            CampaignError::Store(format!("unknown figure {s:?}; expected one of {}", names.join(", ")))
        })
    }
}

#[derive(Clone, Copy)]
enum Metric {
    Tnc,
    Ts,
}

fn missing(fig: FigureId, need: &str) -> CampaignError {
    CampaignError::Store(format!("{fig} needs {need}; the store has none"))
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

struct Table {
    header: &'static [&'static str],
    rows: Vec<Vec<String>>,
}

impl Table {
    fn to_csv(&self) -> Result<String, CampaignError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        let bytes = w.into_inner().map_err(|e| CampaignError::Store(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv of utf-8 fields"))
    }
}

/// CSV text for one figure or table.
pub fn emit_figure_data(store: &ResultStore, fig: FigureId) -> Result<String, CampaignError> {
    let cells = store.config.cells()?;
    let table = match fig {
        FigureId::Fig4 => boxplot(store, &cells, fig, ScenarioKind::Fixed, Metric::Tnc)?,
        FigureId::Fig5 => boxplot(store, &cells, fig, ScenarioKind::Fixed, Metric::Ts)?,
        FigureId::Fig6 => boxplot(store, &cells, fig, ScenarioKind::Popup, Metric::Tnc)?,
        FigureId::Fig7 => boxplot(store, &cells, fig, ScenarioKind::Popup, Metric::Ts)?,
        FigureId::Fig8 => boxplot(store, &cells, fig, ScenarioKind::Dynamic, Metric::Tnc)?,
        FigureId::Fig9 => boxplot(store, &cells, fig, ScenarioKind::Dynamic, Metric::Ts)?,
        FigureId::Table3 => {
            if store.config.sweep.step_fraction_1.is_empty() {
                return Err(missing(fig, "a step_fraction_1 sweep"));
            }
            grid(store, &cells, fig, |c| c.step_fraction_1.is_some(), "MDM cells with a step sweep")?
        }
        FigureId::Table4 | FigureId::Table6 => {
            if store.config.sweep.processes.is_empty() {
                return Err(missing(fig, "a processes sweep"));
            }
            let dynamic_only = fig == FigureId::Table6;
            grid(store, &cells, fig, |c| !dynamic_only || c.scenario == ScenarioKind::Dynamic, "dynamic MDM cells")?
        }
        FigureId::Table5 => {
            if !store.config.mission.false_targets.is_empty() {
                return Err(CampaignError::Store(format!("{fig} is for stores without false targets; use table7")));
            }
            comparison(store, &cells, fig, "sss")?
        }
        FigureId::Table7 => {
            if store.config.mission.false_targets.is_empty() {
                return Err(missing(fig, "mission.false_targets"));
            }
            comparison(store, &cells, fig, "sss")?
        }
        FigureId::Table8 => comparison(store, &cells, fig, "pso")?,
    };
    table.to_csv()
}

fn boxplot(
    store: &ResultStore,
    cells: &[Cell],
    fig: FigureId,
    scenario: ScenarioKind,
    metric: Metric,
) -> Result<Table, CampaignError> {
    if matches!(metric, Metric::Ts) && store.config.mission.mode != MissionMode::Completeness {
        return Err(missing(fig, "completeness-mode runs"));
    }
    let mut rows = Vec::new();
    for cell in cells.iter().filter(|c| c.scenario == scenario) {
        let runs: Vec<_> = store.runs.iter().filter(|r| r.cell_id == cell.id && r.error.is_none()).collect();
        let values: Vec<f64> = match metric {
            Metric::Tnc => runs.iter().map(|r| r.targets_confirmed as f64).collect(),
            Metric::Ts => runs.iter().filter_map(|r| r.completion_time).collect(),
        };
        let censored = runs.len() - values.len();
        let five = if values.is_empty() { None } else { Some(five_number_summary(&values)?) };
        let mut row = vec![
            scenario.name().to_string(),
            cell.policy.clone(),
            cell.n_uavs.to_string(),
            match metric {
                Metric::Tnc => "tnc".into(),
                Metric::Ts => "ts".into(),
            },
            values.len().to_string(),
            censored.to_string(),
        ];
        row.extend((0..5).map(|i| opt(five.map(|f| f[i]))));
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(missing(fig, &format!("{} cells", scenario.name())));
    }
    Ok(Table {
        header: &["scenario", "policy", "n_uavs", "metric", "count", "censored", "min", "q1", "median", "q3", "max"],
        rows,
    })
}

fn summary_of<'a>(store: &'a ResultStore, cell: &Cell) -> Result<&'a SummaryRow, CampaignError> {
    store
        .summaries
        .iter()
        .find(|s| s.cell_id == cell.id)
        .ok_or_else(|| CampaignError::Store(format!("summary.csv has no row for cell {}", cell.id)))
}

fn grid(
    store: &ResultStore,
    cells: &[Cell],
    fig: FigureId,
    keep: impl Fn(&Cell) -> bool,
    need: &str,
) -> Result<Table, CampaignError> {
    let mut rows = Vec::new();
    for cell in cells.iter().filter(|c| keep(c)) {
        let PolicyConfig::Mdm(m) = &cell.mission.policy else { continue };
        let s = summary_of(store, cell)?;
        let level = |i: usize| m.levels.get(i).map(|l| l.process.label().to_string()).unwrap_or_default();
        rows.push(vec![
            cell.scenario.name().to_string(),
            cell.policy.clone(),
            level(0),
            level(1),
            m.levels[0].step_fraction.to_string(),
            cell.n_uavs.to_string(),
            s.runs.to_string(),
            s.mean_tnc.to_string(),
            s.sd_tnc.to_string(),
            s.completed.to_string(),
            opt(s.mean_ts),
            opt(s.sd_ts),
        ]);
    }
    if rows.is_empty() {
        return Err(missing(fig, need));
    }
    Ok(Table {
        header: &[
            "scenario",
            "policy",
            "level1",
            "level2",
            "step_fraction_1",
            "n_uavs",
            "runs",
            "mean_tnc",
            "sd_tnc",
            "completed",
            "mean_ts",
            "sd_ts",
        ],
        rows,
    })
}

/// Each baseline cell against the first MDM cell with the same scenario and
/// UAV count.
fn comparison(store: &ResultStore, cells: &[Cell], fig: FigureId, family: &str) -> Result<Table, CampaignError> {
    let mut rows = Vec::new();
    for base in cells.iter().filter(|c| c.mission.policy.family() == family) {
        let Some(mdm) = cells
            .iter()
            .find(|c| c.mission.policy.family() == "mdm" && c.scenario == base.scenario && c.n_uavs == base.n_uavs)
        else {
            continue;
        };
        let (sm, sb) = (summary_of(store, mdm)?, summary_of(store, base)?);
        let ts_ratio = match (sm.mean_ts, sb.mean_ts) {
            (Some(m), Some(b)) => aisc(b, m).ok(),
            _ => None,
        };
        rows.push(vec![
            base.scenario.name().to_string(),
            base.n_uavs.to_string(),
            mdm.policy.clone(),
            base.policy.clone(),
            sm.mean_tnc.to_string(),
            sb.mean_tnc.to_string(),
            opt(aise(sm.mean_tnc, sb.mean_tnc).ok()),
            opt(aise_alt(sm.mean_tnc, sb.mean_tnc).ok()),
            opt(sm.mean_ts),
            opt(sb.mean_ts),
            opt(ts_ratio),
        ]);
    }
    if rows.is_empty() {
        return Err(missing(fig, &format!("an MDM cell and {family} cells with matching scenario and UAV count")));
    }
    Ok(Table {
        header: &[
            "scenario",
            "n_uavs",
            "mdm",
            "baseline",
            "mean_tnc_mdm",
            "mean_tnc_baseline",
            "aise",
            "aise_alt",
            "mean_ts_mdm",
            "mean_ts_baseline",
            "aisc",
        ],
        rows,
    })
}
