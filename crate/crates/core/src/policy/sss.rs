//! Single-sensor self-cognitive search (US / BS / LS): a stochastic
//! waypoint walk over the whole region with the confirmation sensor always
//! on.

use serde::{Deserialize, Serialize};

use crate::error::ConfigError;
use crate::events::{EventKind, EventLog};
use crate::geometry::Vec2;
use crate::policy::{Observation, Reading};
use crate::samplers::{sample_heading, RngStream, StochasticProcess, UniformDirectionMode};
use crate::sensing::SensorSpec;
use crate::vehicle::next_waypoint;
use crate::world::Region;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SssConfig {
    pub process: StochasticProcess,
    #[serde(default = "default_step")]
    pub step_fraction: f64,
    #[serde(default = "default_sensor")]
    pub sensor_fraction: f64,
    #[serde(default)]
    pub uniform_direction: UniformDirectionMode,
}

fn default_step() -> f64 {
    0.2
}
fn default_sensor() -> f64 {
    0.02
}

impl SssConfig {
    pub fn new(process: StochasticProcess) -> Self {
        Self {
            process,
            step_fraction: default_step(),
            sensor_fraction: default_sensor(),
            uniform_direction: UniformDirectionMode::default(),
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.process.validate()?;
        if !(self.step_fraction > 0.0 && self.step_fraction.is_finite()) {
            return Err(ConfigError::new("step_fraction", "must be positive"));
        }
        if !(self.sensor_fraction >= 0.0 && self.sensor_fraction.is_finite()) {
            return Err(ConfigError::new("sensor_fraction", "must be non-negative"));
        }
        Ok(())
    }

    pub fn sensor(&self, region: &Region) -> SensorSpec {
        SensorSpec::confirmation(1, self.sensor_fraction * region.length)
    }

    pub fn step_length(&self, region: &Region) -> f64 {
        self.step_fraction * region.length
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SssAction {
    Continue,
    NewWaypoint,
    Confirmed,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SssAgent {
    id: usize,
    waypoint: Vec2,
    step_length: f64,
    sensor: SensorSpec,
    capture_radius: f64,
}

impl SssAgent {
    pub fn new(
        id: usize,
        start: Vec2,
        capture_radius: f64,
        cfg: &SssConfig,
        region: &Region,
        rng: &mut RngStream,
        log: &mut EventLog,
    ) -> Self {
        let mut agent = Self {
            id,
            waypoint: start,
            step_length: cfg.step_length(region),
            sensor: cfg.sensor(region),
            capture_radius,
        };
        agent.plan(0.0, start, cfg, region, rng, log);
        agent
    }

    pub fn waypoint(&self) -> Vec2 {
        self.waypoint
    }

    pub fn sensor(&self) -> &SensorSpec {
        &self.sensor
    }

    pub fn step(
        &mut self,
        obs: &Observation,
        cfg: &SssConfig,
        region: &Region,
        rng: &mut RngStream,
        log: &mut EventLog,
    ) -> SssAction {
        if let Reading::Confirmed { target, position } = obs.reading {
            let radius = self.sensor.radius;
            log.push(obs.time, self.id, || EventKind::Confirmation {
                target,
                uav_position: obs.position,
                target_position: position,
                sensor_radius: radius,
            });
            return SssAction::Confirmed;
        }
        if obs.position.distance_squared(self.waypoint) < self.capture_radius * self.capture_radius {
            let from = self.waypoint;
            self.plan(obs.time, from, cfg, region, rng, log);
            return SssAction::NewWaypoint;
        }
        SssAction::Continue
    }

    fn plan(&mut self, t: f64, from: Vec2, cfg: &SssConfig, region: &Region, rng: &mut RngStream, log: &mut EventLog) {
        let mut heading =
            || sample_heading(rng, &cfg.process, cfg.uniform_direction).expect("validated process produced no heading");
        let dir = heading();
        let wp = next_waypoint(from, self.step_length, dir, region, heading);
        self.waypoint = wp;
        let (sensor_radius, step_length) = (self.sensor.radius, self.step_length);
        log.push(t, self.id, || EventKind::Waypoint { level: 1, sensor_radius, step_length, from, waypoint: wp, disk: None });
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn levy_walk_stays_in_region() {
        let region = Region::default();
        let cfg = SssConfig::new(StochasticProcess::LEVY);
        let mut rng = RngStream::new(9, 1);
        let mut log = EventLog::disabled();
        let mut a = SssAgent::new(0, Vec2::new(0.0, 0.0), 20.0, &cfg, &region, &mut rng, &mut log);
        for i in 0..20_000 {
            let obs = Observation { time: i as f64, position: a.waypoint(), reading: Reading::Quiet };
            assert_eq!(a.step(&obs, &cfg, &region, &mut rng, &mut log), SssAction::NewWaypoint);
            assert!(region.contains(a.waypoint()), "{:?}", a.waypoint());
        }
    }

    #[test]
    fn uses_confirmation_sensor() {
        let region = Region::default();
        let cfg = SssConfig::new(StochasticProcess::UNIFORM);
        assert_eq!(cfg.sensor(&region).radius, 400.0);
        assert_eq!(cfg.step_length(&region), 4_000.0);
    }
}
