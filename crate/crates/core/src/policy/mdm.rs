//! Metacognitive multi-sensor search.
//!
//! Each agent carries `n` sensors ordered by decreasing range. The
//! metacognitive layer keeps a knowledge base (sensor repository and, per
//! level, a stochastic process and step length) and runs the level state
//! machine:
//!
//! * at level `k < n` the agent flies stochastic waypoints with sensor
//!   `S_k`; a detection localizes the search to a disk of radius `r_k`
//!   around the current position and moves the agent to level `k + 1`;
//! * at level `n` the agent searches the disk with the confirmation sensor;
//!   a confirmation sends it back to level 1;
//! * at every level `k >= 2` an index decays as
//!   `Gamma + (C_max - C_min) exp(-t_s / kappa)`; once it falls below
//!   `C_min` the level is abandoned and level 1 resumes.

use serde::{Deserialize, Serialize};

use crate::error::ConfigError;
use crate::events::{Disk, EventKind, EventLog, SwitchReason};
use crate::geometry::Vec2;
use crate::policy::{Observation, Reading};
use crate::samplers::{sample_heading, RngStream, StochasticProcess, UniformDirectionMode};
use crate::sensing::{SensorSpec, SensorSuite};
use crate::vehicle::{next_waypoint, WAYPOINT_REDRAWS};
use crate::world::Region;

/// Relative slack when testing disk membership, absorbs rounding in the
/// projection.
const DISK_TOL: f64 = 1e-9;

/// One search level as configured: process, step length and sensor radius,
/// the latter two as fractions of the region length `L`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevelConfig {
    pub process: StochasticProcess,
    pub step_fraction: f64,
    pub sensor_fraction: f64,
}

/// Constants of the decaying confirmation / detection index.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IndexConstants {
    #[serde(default = "IndexConstants::default_c_max")]
    pub c_max: f64,
    #[serde(default = "IndexConstants::default_c_min")]
    pub c_min: f64,
    #[serde(default = "IndexConstants::default_gamma")]
    pub gamma: f64,
    /// Decay time constant, seconds.
    #[serde(default = "IndexConstants::default_kappa")]
    pub kappa: f64,
}

impl Default for IndexConstants {
    fn default() -> Self {
        Self { c_max: 0.95, c_min: 0.10, gamma: 0.05, kappa: 100.0 }
    }
}

impl IndexConstants {
    fn default_c_max() -> f64 {
        Self::default().c_max
    }
    fn default_c_min() -> f64 {
        Self::default().c_min
    }
    fn default_gamma() -> f64 {
        Self::default().gamma
    }
    fn default_kappa() -> f64 {
        Self::default().kappa
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let Self { c_max, c_min, gamma, kappa } = *self;
        if !(0.0 < gamma && gamma < c_min && c_min < c_max && c_max <= 1.0) {
            return Err(ConfigError::new("index", "need 0 < gamma < c_min < c_max <= 1"));
        }
        if !(kappa > 0.0 && kappa.is_finite()) {
            return Err(ConfigError::new("index.kappa", "must be positive"));
        }
        if self.decay(0.0) < c_min {
            return Err(ConfigError::new("index", "entry value gamma + c_max - c_min is already below c_min"));
        }
        Ok(())
    }

    /// Index value after `t_s` seconds on a level.
    pub fn decay(&self, t_s: f64) -> f64 {
        self.gamma + (self.c_max - self.c_min) * (-t_s / self.kappa).exp()
    }

    /// Dwell time at which the index crosses `c_min`.
    pub fn max_dwell(&self) -> f64 {
        self.kappa * ((self.c_max - self.c_min) / (self.c_min - self.gamma)).ln()
    }
}

/// Free-standing form of [`IndexConstants::decay`].
pub fn decay_index(t_s: f64, constants: &IndexConstants) -> f64 {
    constants.decay(t_s)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MdmConfig {
    pub levels: Vec<LevelConfig>,
    #[serde(default)]
    pub index: IndexConstants,
    #[serde(default)]
    pub uniform_direction: UniformDirectionMode,
}

impl MdmConfig {
    /// Two-level configuration with the reference geometry: `r_1 = 10% L`,
    /// `r_2 = 2% L`, `delta_1 = step_fraction_1 * L`, `delta_2 = r_1`.
    pub fn two_level(level1: StochasticProcess, level2: StochasticProcess, step_fraction_1: f64) -> Self {
        Self {
            levels: vec![
                LevelConfig { process: level1, step_fraction: step_fraction_1, sensor_fraction: 0.1 },
                LevelConfig { process: level2, step_fraction: 0.1, sensor_fraction: 0.02 },
            ],
            index: IndexConstants::default(),
            uniform_direction: UniformDirectionMode::default(),
        }
    }

    /// Lévy at level 1, Brownian at level 2, `delta_1 = 20% L`.
    pub fn levy_brownian() -> Self {
        Self::two_level(StochasticProcess::LEVY, StochasticProcess::BROWNIAN, 0.2)
    }

    /// Uniform at both levels, `delta_1 = 20% L`.
    pub fn uniform_uniform() -> Self {
        Self::two_level(StochasticProcess::UNIFORM, StochasticProcess::UNIFORM, 0.2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelPlan {
    pub process: StochasticProcess,
    pub step_length: f64,
}

/// Sensor repository plus search-algorithm repository, resolved to meters.
#[derive(Debug, Clone, PartialEq)]
pub struct KnowledgeBase {
    pub sensors: SensorSuite,
    pub levels: Vec<LevelPlan>,
    pub index: IndexConstants,
    pub uniform_direction: UniformDirectionMode,
}

impl KnowledgeBase {
    /// Resolve fractions against `region` and check the step-length rules
    /// `delta_1 > delta_2 > ... > delta_n` and `delta_{k+1} <= r_k`.
    pub fn build(cfg: &MdmConfig, region: &Region) -> Result<Self, ConfigError> {
        if cfg.levels.is_empty() {
            return Err(ConfigError::new("levels", "at least one level is required"));
        }
        let l = region.length;
        let radii: Vec<f64> = cfg.levels.iter().map(|lv| lv.sensor_fraction * l).collect();
        let sensors = SensorSuite::from_radii(&radii)?;
        let mut levels = Vec::with_capacity(cfg.levels.len());
        for (k, lv) in cfg.levels.iter().enumerate() {
            lv.process.validate().map_err(|e| ConfigError::new(format!("levels[{k}].process"), e.to_string()))?;
            let step = lv.step_fraction * l;
            if !(step > 0.0 && step.is_finite()) {
                return Err(ConfigError::new(format!("levels[{k}].step_fraction"), "must be positive"));
            }
            if let Some(prev) = levels.last().map(|p: &LevelPlan| p.step_length) {
                // Equal steps are allowed: the reference step sweep pairs
                // delta_1 = 10% L with delta_2 = r_1 = 10% L.
                if step > prev {
                    return Err(ConfigError::new(
                        format!("levels[{k}].step_fraction"),
                        "step lengths must not increase with level",
                    ));
                }
                // Compare in fractions so that 0.1 * L vs r_1 = 0.1 * L is exact.
                if lv.step_fraction > cfg.levels[k - 1].sensor_fraction {
                    return Err(ConfigError::new(
                        format!("levels[{k}].step_fraction"),
                        "step length may not exceed the previous level's sensor radius",
                    ));
                }
            }
            levels.push(LevelPlan { process: lv.process, step_length: step });
        }
        cfg.index.validate()?;
        Ok(Self { sensors, levels, index: cfg.index, uniform_direction: cfg.uniform_direction })
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    fn heading(&self, level: usize, rng: &mut RngStream) -> Vec2 {
        sample_heading(rng, &self.levels[level].process, self.uniform_direction)
            .expect("validated process produced no usable heading")
    }
}

/// Keep a waypoint inside `disk` and `region`.
///
/// A candidate outside is replaced by up to [`WAYPOINT_REDRAWS`] fresh
/// candidates from `redraw`; if none lands inside, the last one is pulled
/// back along the ray from the disk center until it lies in both sets.
pub fn constrain_to_disk<F>(candidate: Vec2, disk: Disk, region: &Region, mut redraw: F) -> Vec2
where
    F: FnMut() -> Vec2,
{
    let admissible = |p: Vec2| disk.contains(p, disk.radius * DISK_TOL) && region.contains(p);
    let mut c = candidate;
    if admissible(c) {
        return c;
    }
    for _ in 0..WAYPOINT_REDRAWS {
        c = redraw();
        if admissible(c) {
            return c;
        }
    }
    project_into(c, disk, region)
}

fn project_into(p: Vec2, disk: Disk, region: &Region) -> Vec2 {
    let center = region.clamp(disk.center);
    let u = p - center;
    let len = u.norm();
    if len == 0.0 {
        return center;
    }
    let mut s = (disk.radius / len).min(1.0);
    // Largest s keeping center + s u inside the rectangle.
    for (c, d, hi) in [(center.x, u.x, region.length), (center.y, u.y, region.width)] {
        if d > 0.0 {
            s = s.min((hi - c) / d);
        } else if d < 0.0 {
            s = s.min(-c / d);
        }
    }
    region.clamp(center + u * s.max(0.0))
}

/// What an [`MdmAgent::step`] did.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MdmAction {
    /// Keep tracking the current waypoint.
    Continue,
    /// Reached the waypoint; a new one was drawn at the same level.
    NewWaypoint,
    /// Detection: localized and moved one level up.
    LevelUp,
    /// Confirmation: reported the target and went back to level 1.
    Confirmed,
    /// Index fell below its floor: abandoned the level, back to level 1.
    IndexExpired,
}

/// Per-agent state of the level machine.
#[derive(Debug, Clone, PartialEq)]
pub struct MdmAgent {
    id: usize,
    level: usize,
    entered_at: f64,
    index: Option<f64>,
    disk: Option<Disk>,
    anchor: Vec2,
    waypoint: Vec2,
    capture_radius: f64,
}

impl MdmAgent {
    /// Agent at level 1 with a first waypoint drawn from `start`.
    pub fn new(
        id: usize,
        start: Vec2,
        capture_radius: f64,
        kb: &KnowledgeBase,
        region: &Region,
        rng: &mut RngStream,
        log: &mut EventLog,
    ) -> Self {
        let mut agent = Self {
            id,
            level: 0,
            entered_at: 0.0,
            index: None,
            disk: None,
            anchor: start,
            waypoint: start,
            capture_radius,
        };
        agent.plan(0.0, start, kb, region, rng, log);
        agent
    }

    pub fn id(&self) -> usize {
        self.id
    }

    /// 0-based level.
    pub fn level(&self) -> usize {
        self.level
    }

    pub fn waypoint(&self) -> Vec2 {
        self.waypoint
    }

    pub fn disk(&self) -> Option<Disk> {
        self.disk
    }

    /// Current index value, `None` at level 1.
    pub fn index(&self) -> Option<f64> {
        self.index
    }

    /// Sensor switched on at the current level.
    pub fn active_sensor<'a>(&self, kb: &'a KnowledgeBase) -> &'a SensorSpec {
        kb.sensors.level(self.level)
    }

    pub fn step_length(&self, kb: &KnowledgeBase) -> f64 {
        kb.levels[self.level].step_length
    }

    /// One decision cycle. Sensor readings take precedence over the index
    /// check, which takes precedence over waypoint capture.
    pub fn step(
        &mut self,
        obs: &Observation,
        kb: &KnowledgeBase,
        region: &Region,
        rng: &mut RngStream,
        log: &mut EventLog,
    ) -> MdmAction {
        let t = obs.time;
        let last = kb.depth() - 1;
        match obs.reading {
            Reading::Confirmed { target, position } if self.level == last => {
                let radius = self.active_sensor(kb).radius;
                log.push(t, self.id, || EventKind::Confirmation {
                    target,
                    uav_position: obs.position,
                    target_position: position,
                    sensor_radius: radius,
                });
                self.reset(t, obs.position, SwitchReason::Confirmation, kb, region, rng, log);
                return MdmAction::Confirmed;
            }
            Reading::Detected if self.level < last => {
                let radius = self.active_sensor(kb).radius;
                let disk = Disk { center: region.clamp(obs.position), radius };
                let from = self.level;
                log.push(t, self.id, || EventKind::Detection { level: from + 1, position: obs.position, radius });
                self.level += 1;
                self.entered_at = t;
                self.index = Some(kb.index.decay(0.0));
                self.disk = Some(disk);
                log.push(t, self.id, || EventKind::LevelSwitch {
                    from: from + 1,
                    to: from + 2,
                    reason: SwitchReason::Detection,
                    disk: Some(disk),
                });
                self.plan(t, obs.position, kb, region, rng, log);
                return MdmAction::LevelUp;
            }
            _ => {}
        }

        if self.level > 0 {
            let dwell = t - self.entered_at;
            let index = kb.index.decay(dwell);
            self.index = Some(index);
            if index < kb.index.c_min {
                let level = self.level + 1;
                log.push(t, self.id, || EventKind::IndexReset { level, index, dwell });
                self.reset(t, obs.position, SwitchReason::IndexExpired, kb, region, rng, log);
                return MdmAction::IndexExpired;
            }
        }

        if obs.position.distance_squared(self.waypoint) < self.capture_radius * self.capture_radius {
            let from = self.waypoint;
            self.plan(t, from, kb, region, rng, log);
            return MdmAction::NewWaypoint;
        }
        MdmAction::Continue
    }

    #[allow(clippy::too_many_arguments)]
    fn reset(
        &mut self,
        t: f64,
        position: Vec2,
        reason: SwitchReason,
        kb: &KnowledgeBase,
        region: &Region,
        rng: &mut RngStream,
        log: &mut EventLog,
    ) {
        let from = self.level + 1;
        self.level = 0;
        self.entered_at = t;
        self.index = None;
        self.disk = None;
        log.push(t, self.id, || EventKind::LevelSwitch { from, to: 1, reason, disk: None });
        self.plan(t, position, kb, region, rng, log);
    }

    /// Draw the next waypoint `from + delta_k * D(S_t)` for the current
    /// level, confined to the localization disk above level 1.
    fn plan(&mut self, t: f64, from: Vec2, kb: &KnowledgeBase, region: &Region, rng: &mut RngStream, log: &mut EventLog) {
        let level = self.level;
        let delta = kb.levels[level].step_length;
        let dir = kb.heading(level, rng);
        let wp = match self.disk {
            None => next_waypoint(from, delta, dir, region, || kb.heading(level, rng)),
            Some(disk) => constrain_to_disk(from + dir * delta, disk, region, || from + kb.heading(level, rng) * delta),
        };
        self.anchor = from;
        self.waypoint = wp;
        let sensor_radius = kb.sensors.level(level).radius;
        let disk = self.disk;
        log.push(t, self.id, || EventKind::Waypoint {
            level: level + 1,
            sensor_radius,
            step_length: delta,
            from,
            waypoint: wp,
            disk,
        });
    }
}
