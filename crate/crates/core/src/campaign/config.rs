//! Campaign configuration: a TOML file with optional includes, expanded
//! into a list of cells (one mission setup each).
//!
//! ```toml
//! include = ["fragments/fixed.toml"]   # merged first, relative paths
//! name = "step-sweep"
//! runs = 200
//! seed = 2021
//!
//! [mission]
//! scenario = "fixed"
//! n_uavs = 12
//!
//! [[policies]]
//! kind = "mdm"
//! levels = [
//!   { process = { kind = "levy" }, step_fraction = 0.2, sensor_fraction = 0.1 },
//!   { process = { kind = "brownian" }, step_fraction = 0.1, sensor_fraction = 0.02 },
//! ]
//!
//! [sweep]
//! step_fraction_1 = [0.1, 0.2, 0.3, 0.4, 0.5]
//! ```
//!
//! Included files are deep-merged in order, then the including file is
//! merged on top. Unknown keys are rejected.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::engine::{MissionConfig, MissionMode};
use crate::error::{CampaignError, ConfigError};
use crate::policy::PolicyConfig;
use crate::samplers::{mix64, StochasticProcess};
use crate::scenario::{with_false_targets, ScenarioKind};
use crate::vehicle::VehicleParams;
use crate::world::{DynamicDrawMode, Region, TargetSpec};

const MAX_INCLUDE_DEPTH: usize = 16;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CampaignConfig {
    pub name: String,
    #[serde(default = "default_runs")]
    pub runs: usize,
    #[serde(default)]
    pub seed: u64,
    /// Worker threads; 0 uses every available core.
    #[serde(default)]
    pub workers: usize,
    /// Keep a per-run event log (JSON lines) next to the CSV files.
    #[serde(default)]
    pub record_events: bool,
    #[serde(default)]
    pub mission: MissionSection,
    pub policies: Vec<PolicyConfig>,
    #[serde(default)]
    pub sweep: Sweep,
}

fn default_runs() -> usize {
    200
}

/// Mission settings shared by every cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MissionSection {
    #[serde(default = "default_scenario")]
    pub scenario: ScenarioKind,
    #[serde(default = "default_n_uavs")]
    pub n_uavs: usize,
    /// Overrides the scenario horizon.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<f64>,
    #[serde(default)]
    pub mode: MissionMode,
    #[serde(default = "default_cap")]
    pub completion_cap: f64,
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default = "default_dt")]
    pub target_sample_time: f64,
    #[serde(default)]
    pub dynamic_draw_mode: DynamicDrawMode,
    #[serde(default)]
    pub region: Region,
    #[serde(default)]
    pub vehicle: VehicleParams,
    /// Indices of targets that are false (detectable, never confirmable).
    #[serde(default)]
    pub false_targets: Vec<usize>,
    /// Explicit target list; replaces the scenario layout when present.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub targets: Option<Vec<TargetSpec>>,
}

fn default_scenario() -> ScenarioKind {
    ScenarioKind::Fixed
}
fn default_n_uavs() -> usize {
    12
}
fn default_cap() -> f64 {
    MissionConfig::DEFAULT_CAP
}
fn default_dt() -> f64 {
    MissionConfig::DEFAULT_DT
}

impl Default for MissionSection {
    fn default() -> Self {
        Self {
            scenario: default_scenario(),
            n_uavs: default_n_uavs(),
            horizon: None,
            mode: MissionMode::default(),
            completion_cap: default_cap(),
            dt: default_dt(),
            target_sample_time: default_dt(),
            dynamic_draw_mode: DynamicDrawMode::default(),
            region: Region::default(),
            vehicle: VehicleParams::default(),
            false_targets: Vec::new(),
            targets: None,
        }
    }
}

/// Sweep axes. Every non-empty axis multiplies the cell count.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub scenario: Vec<ScenarioKind>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub n_uavs: Vec<usize>,
    /// Level-1 step of MDM policies and the step of single-sensor policies,
    /// as a fraction of L. Swarm policies ignore it.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub step_fraction_1: Vec<f64>,
    /// Per-level process assignments for MDM policies.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub processes: Vec<Vec<StochasticProcess>>,
}

/// One point of the sweep: a fully specified mission template.
#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub id: usize,
    /// Unique, stable name; also feeds the run seeds.
    pub key: String,
    pub policy: String,
    pub scenario: ScenarioKind,
    pub n_uavs: usize,
    pub step_fraction_1: Option<f64>,
    pub mission: MissionConfig,
}

impl Cell {
    /// Seed of run `run`. Depends on the base seed, the cell key and the run
    /// index only, so adding cells does not perturb existing ones.
    pub fn run_seed(&self, base: u64, run: usize) -> u64 {
        let digest = Sha256::digest(self.key.as_bytes());
        let key = u64::from_le_bytes(digest[..8].try_into().expect("digest has 32 bytes"));
        mix64(mix64(base ^ key) ^ run as u64)
    }

    /// Mission for one run.
    pub fn mission_for(&self, base: u64, run: usize, record_events: bool) -> MissionConfig {
        let mut m = self.mission.clone();
        m.seed = self.run_seed(base, run);
        m.record_events = record_events;
        m
    }
}

impl CampaignConfig {
    pub fn from_toml_str(text: &str) -> Result<Self, CampaignError> {
        toml::from_str(text).map_err(|e| CampaignError::Parse { path: PathBuf::from("<inline>"), message: e.to_string() })
    }

    /// Load a config file, resolving includes.
    pub fn load(path: &Path) -> Result<Self, CampaignError> {
        let table = resolve_includes(path, 0)?;
        let text = toml::to_string(&table).map_err(|e| CampaignError::Parse { path: path.into(), message: e.to_string() })?;
        toml::from_str(&text).map_err(|e| CampaignError::Parse { path: path.into(), message: e.to_string() })
    }

    /// Canonical TOML of the resolved config, as hashed into the manifest.
    /// The worker count is zeroed: it cannot change any result.
    pub fn canonical_toml(&self) -> String {
        let mut c = self.clone();
        c.workers = 0;
        toml::to_string(&c).expect("campaign config always serializes")
    }

    pub fn sha256(&self) -> String {
        hex(&Sha256::digest(self.canonical_toml().as_bytes()))
    }

    pub fn validate(&self) -> Result<(), CampaignError> {
        if self.runs == 0 {
            return Err(ConfigError::new("runs", "must be at least 1").into());
        }
        if self.policies.is_empty() {
            return Err(ConfigError::new("policies", "at least one policy is required").into());
        }
        for cell in self.cells()? {
            cell.mission.validate().map_err(|e| CampaignError::Cell {
                cell: cell.id,
                label: cell.key.clone(),
                message: e.to_string(),
            })?;
        }
        Ok(())
    }

    /// Expand the sweep into cells, in a fixed order: scenario, UAV count,
    /// policy, process assignment, step.
    pub fn cells(&self) -> Result<Vec<Cell>, CampaignError> {
        let m = &self.mission;
        let scenarios = or_single(&self.sweep.scenario, m.scenario);
        let counts = or_single(&self.sweep.n_uavs, m.n_uavs);
        let labels: Vec<String> = self.policies.iter().map(PolicyConfig::label).collect();
        let mut cells = Vec::new();
        let mut keys = BTreeSet::new();
        for &scenario in &scenarios {
            for &n_uavs in &counts {
                for (pi, base_policy) in self.policies.iter().enumerate() {
                    let process_axis: Vec<Option<&Vec<StochasticProcess>>> =
                        match (base_policy, self.sweep.processes.is_empty()) {
                            (PolicyConfig::Mdm(_), false) => self.sweep.processes.iter().map(Some).collect(),
                            _ => vec![None],
                        };
                    let step_axis: Vec<Option<f64>> = match (base_policy, self.sweep.step_fraction_1.is_empty()) {
                        (PolicyConfig::Pso(_), _) | (_, true) => vec![None],
                        _ => self.sweep.step_fraction_1.iter().copied().map(Some).collect(),
                    };
                    for processes in &process_axis {
                        for &step in &step_axis {
                            let policy = specialize(base_policy, *processes, step).map_err(|e| CampaignError::Cell {
                                cell: cells.len(),
                                label: labels[pi].clone(),
                                message: e.to_string(),
                            })?;
                            let mut label = policy.label();
                            if labels.iter().filter(|l| **l == labels[pi]).count() > 1 {
                                label = format!("{label}#{pi}");
                            }
                            let mut key = format!("{}/{}/n{}", scenario.name(), label, n_uavs);
                            if let Some(s) = step {
                                key.push_str(&format!("/step{s}"));
                            }
                            if !m.false_targets.is_empty() {
                                key.push_str("/false");
                            }
                            if !keys.insert(key.clone()) {
                                return Err(ConfigError::new("sweep", format!("duplicate cell {key}")).into());
                            }
                            cells.push(Cell {
                                id: cells.len(),
                                key,
                                policy: label,
                                scenario,
                                n_uavs,
                                step_fraction_1: step,
                                mission: self.mission_template(scenario, n_uavs, policy),
                            });
                        }
                    }
                }
            }
        }
        Ok(cells)
    }

    fn mission_template(&self, scenario: ScenarioKind, n_uavs: usize, policy: PolicyConfig) -> MissionConfig {
        let m = &self.mission;
        let targets = m.targets.clone().unwrap_or_else(|| scenario.targets());
        MissionConfig {
            region: m.region,
            targets: with_false_targets(targets, &m.false_targets),
            n_uavs,
            vehicle: m.vehicle,
            policy,
            horizon: m.horizon.unwrap_or_else(|| scenario.horizon()),
            mode: m.mode,
            completion_cap: m.completion_cap,
            dt: m.dt,
            target_sample_time: m.target_sample_time,
            dynamic_draw_mode: m.dynamic_draw_mode,
            seed: 0,
            record_events: false,
        }
    }
}

fn or_single<T: Copy>(axis: &[T], fallback: T) -> Vec<T> {
    if axis.is_empty() {
        vec![fallback]
    } else {
        axis.to_vec()
    }
}

fn specialize(
    policy: &PolicyConfig,
    processes: Option<&Vec<StochasticProcess>>,
    step: Option<f64>,
) -> Result<PolicyConfig, ConfigError> {
    let mut p = policy.clone();
    match &mut p {
        PolicyConfig::Mdm(m) => {
            if let Some(ps) = processes {
                if ps.len() != m.levels.len() {
                    return Err(ConfigError::new(
                        "sweep.processes",
                        format!("{} processes given for {} levels", ps.len(), m.levels.len()),
                    ));
                }
                for (level, &process) in m.levels.iter_mut().zip(ps) {
                    level.process = process;
                }
            }
            if let Some(s) = step {
                m.levels[0].step_fraction = s;
            }
        }
        PolicyConfig::Sss(s) => {
            if let Some(f) = step {
                s.step_fraction = f;
            }
        }
        PolicyConfig::Pso(_) => {}
    }
    Ok(p)
}

/// Read `path` and merge its includes underneath it.
fn resolve_includes(path: &Path, depth: usize) -> Result<toml::Table, CampaignError> {
    if depth > MAX_INCLUDE_DEPTH {
        return Err(CampaignError::Parse { path: path.into(), message: "include nesting too deep (cycle?)".into() });
    }
    let text = std::fs::read_to_string(path).map_err(|e| CampaignError::io(path, e))?;
    let mut table: toml::Table =
        text.parse().map_err(|e: toml::de::Error| CampaignError::Parse { path: path.into(), message: e.to_string() })?;
    let includes = match table.remove("include") {
        None => Vec::new(),
        Some(toml::Value::Array(items)) => items
            .into_iter()
            .map(|v| match v {
                toml::Value::String(s) => Ok(s),
                other => Err(CampaignError::Parse {
                    path: path.into(),
                    message: format!("include entries must be strings, got {other}"),
                }),
            })
            .collect::<Result<_, _>>()?,
        Some(other) => {
            return Err(CampaignError::Parse {
                path: path.into(),
                message: format!("include must be an array of paths, got {other}"),
            })
        }
    };
    let dir = path.parent().unwrap_or(Path::new("."));
    let mut merged = toml::Table::new();
    for inc in includes {
        let sub = resolve_includes(&dir.join(inc), depth + 1)?;
        deep_merge(&mut merged, sub);
    }
    deep_merge(&mut merged, table);
    Ok(merged)
}

/// Tables merge key by key; any other value in `over` replaces the one in
/// `base`.
pub fn deep_merge(base: &mut toml::Table, over: toml::Table) {
    for (k, v) in over {
        match (base.get_mut(&k), v) {
            (Some(toml::Value::Table(b)), toml::Value::Table(o)) => deep_merge(b, o),
            (_, v) => {
                base.insert(k, v);
            }
        }
    }
}

pub(crate) fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}
