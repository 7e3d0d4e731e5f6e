//! Mission loop: steps the world, every agent's sensing and policy, and the
//! vehicle dynamics at a fixed `dt`, and records the outcome.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::ConfigError;
use crate::events::{Event, EventKind, EventLog};
use crate::geometry::Vec2;
use crate::policy::{
    KnowledgeBase, MdmAgent, Observation, PolicyConfig, PsoSwarm, Reading, SssAgent, SssConfig, SwarmObservation,
};
use crate::samplers::RngStream;
use crate::scenario::ScenarioKind;
use crate::sensing::{confirm, detect, SensorRole, SensorSpec};
use crate::vehicle::{pursuit_command, UavKinematics, VehicleParams};
use crate::world::{Confirmation, DynamicDrawMode, Region, TargetSpec, World};

/// Stream id of the dynamic-target random walk.
pub const TARGET_STREAM: u64 = u64::MAX;
/// Stream id of the shared PSO swarm draws.
pub const SWARM_STREAM: u64 = u64::MAX - 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MissionMode {
    /// Stop at the horizon.
    Efficiency,
    /// Run until every real target is confirmed or the cap is reached.
    #[default]
    Completeness,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MissionConfig {
    pub region: Region,
    pub targets: Vec<TargetSpec>,
    pub n_uavs: usize,
    pub vehicle: VehicleParams,
    pub policy: PolicyConfig,
    /// Horizon for counting confirmed targets, seconds.
    pub horizon: f64,
    pub mode: MissionMode,
    /// Completeness-mode time cap, seconds.
    pub completion_cap: f64,
    pub dt: f64,
    /// Sampling time of the dynamic-target random walk, seconds.
    pub target_sample_time: f64,
    pub dynamic_draw_mode: DynamicDrawMode,
    pub seed: u64,
    pub record_events: bool,
}

impl MissionConfig {
    pub const DEFAULT_DT: f64 = 0.1;
    pub const DEFAULT_CAP: f64 = 50_000.0;

    /// Reference mission for a scenario: 20 km square, 12 UAVs, scenario
    /// horizon, completeness mode.
    pub fn reference(scenario: ScenarioKind, policy: PolicyConfig) -> Self {
        Self {
            region: Region::default(),
            targets: scenario.targets(),
            n_uavs: 12,
            vehicle: VehicleParams::default(),
            policy,
            horizon: scenario.horizon(),
            mode: MissionMode::Completeness,
            completion_cap: Self::DEFAULT_CAP,
            dt: Self::DEFAULT_DT,
            target_sample_time: Self::DEFAULT_DT,
            dynamic_draw_mode: DynamicDrawMode::PerAxis,
            seed: 0,
            record_events: false,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.region.validate()?;
        self.vehicle.validate()?;
        self.policy.validate(&self.region)?;
        if self.n_uavs == 0 {
            return Err(ConfigError::new("n_uavs", "at least one UAV is required"));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(ConfigError::new("dt", "must be positive"));
        }
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return Err(ConfigError::new("horizon", "must be positive"));
        }
        if self.mode == MissionMode::Completeness && !(self.completion_cap > 0.0 && self.completion_cap.is_finite()) {
            return Err(ConfigError::new("completion_cap", "must be positive"));
        }
        if !(self.target_sample_time > 0.0) {
            return Err(ConfigError::new("target_sample_time", "must be positive"));
        }
        World::new(self.region, &self.targets, self.dynamic_draw_mode)?;
        Ok(())
    }

    /// Starting points evenly spaced along the perimeter, beginning at the
    /// origin corner.
    pub fn initial_positions(&self) -> Vec<Vec2> {
        let perimeter = 2.0 * (self.region.length + self.region.width);
        (0..self.n_uavs)
            .map(|i| self.region.perimeter_point(perimeter * i as f64 / self.n_uavs as f64))
            .collect()
    }
}

/// Outcome of one mission.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub seed: u64,
    pub real_targets: usize,
    /// Confirmations in time order.
    pub confirmations: Vec<Confirmation>,
    /// T_nc: targets confirmed by the horizon.
    pub targets_confirmed: usize,
    /// T_S: time at which the last real target was confirmed.
    pub completion_time: Option<f64>,
    pub censored: bool,
    pub end_time: f64,
    pub events: Vec<Event>,
    #[serde(skip)]
    pub wall_time: Duration,
}

enum Fleet {
    Mdm { kb: KnowledgeBase, agents: Vec<MdmAgent> },
    Sss { cfg: SssConfig, agents: Vec<SssAgent> },
    Pso { swarm: PsoSwarm, sensor: SensorSpec, signal_range: f64, rng: RngStream },
}

/// Run one mission. Deterministic in `(cfg, cfg.seed)`.
pub fn run_mission(cfg: &MissionConfig) -> Result<RunRecord, ConfigError> {
    cfg.validate()?;
    let started = Instant::now();
    let region = cfg.region;
    let mut world = World::new(region, &cfg.targets, cfg.dynamic_draw_mode)?;
    let mut log = EventLog::new(cfg.record_events);
    let mut rngs: Vec<RngStream> = (0..cfg.n_uavs).map(|i| RngStream::new(cfg.seed, i as u64)).collect();
    let mut target_rng = RngStream::new(cfg.seed, TARGET_STREAM);
    let starts = cfg.initial_positions();
    let mut kin: Vec<UavKinematics> = starts.iter().map(|&p| UavKinematics::at_rest(p, &cfg.vehicle)).collect();
    let capture = cfg.vehicle.capture_radius;

    let mut fleet = match &cfg.policy {
        PolicyConfig::Mdm(m) => {
            let kb = KnowledgeBase::build(m, &region)?;
            let agents = starts
                .iter()
                .enumerate()
                .map(|(i, &p)| MdmAgent::new(i, p, capture, &kb, &region, &mut rngs[i], &mut log))
                .collect();
            Fleet::Mdm { kb, agents }
        }
        PolicyConfig::Sss(s) => {
            let agents = starts
                .iter()
                .enumerate()
                .map(|(i, &p)| SssAgent::new(i, p, capture, s, &region, &mut rngs[i], &mut log))
                .collect();
            Fleet::Sss { cfg: *s, agents }
        }
        PolicyConfig::Pso(p) => {
            let mut rng = RngStream::new(cfg.seed, SWARM_STREAM);
            let swarm = PsoSwarm::new(*p, cfg.n_uavs, cfg.vehicle.speed, &mut rng);
            let sensor = SensorSpec::confirmation(1, p.sensor_fraction * region.length);
            let signal_range = p.signal_fraction.map_or(f64::INFINITY, |f| f * region.length);
            Fleet::Pso { swarm, sensor, signal_range, rng }
        }
    };

    let end = match cfg.mode {
        MissionMode::Efficiency => cfg.horizon,
        MissionMode::Completeness => cfg.completion_cap.max(cfg.horizon),
    };
    let last_step = (end / cfg.dt).round() as u64;
    let stride = ((cfg.target_sample_time / cfg.dt).round() as u64).max(1);
    let kappa_s = stride as f64 * cfg.dt;
    let decay = (-cfg.dt / cfg.vehicle.tau).exp();
    let has_dynamic = world.has_dynamic_targets();

    let mut step: u64 = 0;
    let end_time = loop {
        let t = step as f64 * cfg.dt;
        if world.all_real_confirmed() {
            break t;
        }
        if has_dynamic && step > 0 && step % stride == 0 {
            world.step_dynamic_targets(kappa_s, &mut target_rng);
        }

        match &mut fleet {
            Fleet::Mdm { kb, agents } => {
                for (i, agent) in agents.iter_mut().enumerate() {
                    let sensor = *agent.active_sensor(kb);
                    let position = kin[i].position;
                    let reading = sense(&sensor, position, i, t, &mut world);
                    let obs = Observation { time: t, position, reading };
                    agent.step(&obs, kb, &region, &mut rngs[i], &mut log);
                    kin[i].command = pursuit_command(&kin[i], agent.waypoint());
                }
            }
            Fleet::Sss { cfg: scfg, agents } => {
                for (i, agent) in agents.iter_mut().enumerate() {
                    let sensor = *agent.sensor();
                    let position = kin[i].position;
                    let reading = sense(&sensor, position, i, t, &mut world);
                    let obs = Observation { time: t, position, reading };
                    agent.step(&obs, scfg, &region, &mut rngs[i], &mut log);
                    kin[i].command = pursuit_command(&kin[i], agent.waypoint());
                }
            }
            Fleet::Pso { swarm, sensor, signal_range, rng } => {
                for (i, k) in kin.iter().enumerate() {
                    if let Reading::Confirmed { target, position } = sense(sensor, k.position, i, t, &mut world) {
                        swarm.invalidate(target);
                        let radius = sensor.radius;
                        log.push(t, i, || EventKind::Confirmation {
                            target,
                            uav_position: k.position,
                            target_position: position,
                            sensor_radius: radius,
                        });
                    }
                }
                let obs: Vec<SwarmObservation> = kin
                    .iter()
                    .map(|k| {
                        let nearest = world
                            .active_targets(t)
                            .map(|tg| (k.position.distance(tg.position), tg.id))
                            .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
                        match nearest {
                            Some((d, id)) if d < *signal_range => SwarmObservation { position: k.position, fitness: 1.0 / (1.0 + d), source: Some(id) },
                            _ => SwarmObservation { position: k.position, fitness: 0.0, source: None },
                        }
                    })
                    .collect();
                let commands = swarm.step(t, &obs, &region, rng);
                for (k, q) in kin.iter_mut().zip(commands) {
                    k.command = q;
                }
            }
        }

        if world.all_real_confirmed() || step >= last_step {
            break t;
        }
        for k in kin.iter_mut() {
            *k = k.step_with_decay(cfg.dt, decay);
        }
        step += 1;
    };

    let confirmations = world.ledger().chronological();
    let targets_confirmed = confirmations.iter().filter(|c| c.time <= cfg.horizon + 1e-9).count();
    let complete = world.all_real_confirmed();
    let completion_time = complete.then(|| confirmations.last().map_or(0.0, |c| c.time));
    Ok(RunRecord {
        seed: cfg.seed,
        real_targets: world.real_target_count(),
        confirmations,
        targets_confirmed,
        completion_time,
        censored: !complete,
        end_time,
        events: log.into_events(),
        wall_time: started.elapsed(),
    })
}

/// Evaluate one agent's active sensor against the world. A confirmation is
/// recorded in the ground-truth ledger before it is reported.
fn sense(sensor: &SensorSpec, position: Vec2, agent: usize, t: f64, world: &mut World) -> Reading {
    match sensor.role {
        SensorRole::Detection => {
            if detect(sensor, position, world.active_targets(t)).is_some() {
                Reading::Detected
            } else {
                Reading::Quiet
            }
        }
        SensorRole::Confirmation => {
            let Some(id) = confirm(sensor, position, world.active_targets(t)) else {
                return Reading::Quiet;
            };
            let at = world.targets()[id].position;
            match world.try_confirm(id, agent, t) {
                Ok(true) => Reading::Confirmed { target: id, position: at },
                _ => Reading::Quiet,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::policy::{MdmConfig, PsoConfig, PsoVariant};
    use crate::samplers::StochasticProcess;

    fn mdm() -> PolicyConfig {
        PolicyConfig::Mdm(MdmConfig::levy_brownian())
    }

    #[test]
    fn empty_mission_terminates_immediately() {
        let mut cfg = MissionConfig::reference(ScenarioKind::Fixed, mdm());
        cfg.targets.clear();
        let r = run_mission(&cfg).unwrap();
        assert_eq!(r.targets_confirmed, 0);
        assert_eq!(r.completion_time, Some(0.0));
        assert_eq!(r.end_time, 0.0);
        assert!(!r.censored);
    }

    #[test]
    fn nearby_target_is_confirmed_quickly() {
        let mut cfg = MissionConfig::reference(ScenarioKind::Fixed, mdm());
        cfg.n_uavs = 1;
        cfg.targets = vec![TargetSpec::fixed(100.0, 0.0)];
        let r = run_mission(&cfg).unwrap();
        let bound = 100.0 / 20.0 + 5.0 * 0.33 + 0.1;
        assert!(r.completion_time.unwrap() <= bound, "{:?}", r.completion_time);
    }

    #[test]
    fn zero_radius_sensor_confirms_nothing() {
        let mut s = SssConfig::new(StochasticProcess::UNIFORM);
        s.sensor_fraction = 0.0;
        let mut cfg = MissionConfig::reference(ScenarioKind::Fixed, PolicyConfig::Sss(s));
        cfg.n_uavs = 1;
        cfg.targets = vec![TargetSpec::fixed(10_000.0, 10_000.0)];
        cfg.mode = MissionMode::Efficiency;
        let r = run_mission(&cfg).unwrap();
        assert_eq!(r.targets_confirmed, 0);
        assert!(r.censored);
    }

    #[test]
    fn invalid_config_names_field() {
        let mut cfg = MissionConfig::reference(ScenarioKind::Fixed, mdm());
        cfg.n_uavs = 0;
        assert_eq!(run_mission(&cfg).unwrap_err().field, "n_uavs");
        let mut cfg = MissionConfig::reference(ScenarioKind::Fixed, mdm());
        cfg.dt = 0.0;
        assert_eq!(run_mission(&cfg).unwrap_err().field, "dt");
    }

    #[test]
    fn pso_swarm_finds_single_target() {
        let mut cfg = MissionConfig::reference(ScenarioKind::Fixed, PolicyConfig::Pso(PsoConfig::new(PsoVariant::Pso)));
        cfg.targets = vec![TargetSpec::fixed(10_000.0, 10_000.0)];
        cfg.seed = 4;
        let r = run_mission(&cfg).unwrap();
        assert_eq!(r.targets_confirmed, 1);
    }

    #[test]
    fn perimeter_start_positions() {
        let mut cfg = MissionConfig::reference(ScenarioKind::Fixed, mdm());
        cfg.n_uavs = 4;
        let p = cfg.initial_positions();
        assert_eq!(p, vec![Vec2::new(0.0, 0.0), Vec2::new(20_000.0, 0.0), Vec2::new(20_000.0, 20_000.0), Vec2::new(0.0, 20_000.0)]);
    }
}
