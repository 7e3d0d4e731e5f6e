//! Social-cognitive baselines: PSO, SPSO and ARPSO swarms.
//!
//! Agents sense a scalar signal `1 / (1 + d)` from the nearest active
//! target within signal range and share a global best through a communication channel. The PSO
//! velocity only sets the heading: every agent flies at the cruise speed,
//! through the same first-order vehicle loop as the other policies.
//!
//! * PSO: `v <- w v + c1 u1 (p - x) + c2 u2 (g - x)`, per-axis uniforms.
//! * SPSO: the rotation-invariant 2011 update. Gravity center
//!   `G = x + c (u1 (p - x) + u2 (g - x)) / 3` (or `(x + p') / 2` for the
//!   particle holding the global best), a uniform point `x'` in the disk of
//!   radius `|G - x|` about `G`, and `v <- w v + x' - x`.
//! * ARPSO: PSO whose attraction terms flip sign (repulsion) once swarm
//!   diversity drops below `d_low`, and flip back above `d_high`.
//!
//! Best records remember which target produced their signal. When that
//! target is confirmed the records are dropped so the swarm disperses
//! towards the remaining targets.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::ConfigError;
use crate::geometry::Vec2;
use crate::samplers::RngStream;
use crate::world::Region;

const MIN_SPEED_FRACTION: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PsoVariant {
    Pso,
    Spso,
    Arpso,
}

impl PsoVariant {
    pub fn label(&self) -> &'static str {
        match self {
            PsoVariant::Pso => "PSO",
            PsoVariant::Spso => "SPSO",
            PsoVariant::Arpso => "ARPSO",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PsoConfig {
    pub variant: PsoVariant,
    #[serde(default = "default_inertia")]
    pub inertia: f64,
    #[serde(default = "default_accel")]
    pub cognitive: f64,
    #[serde(default = "default_accel")]
    pub social: f64,
    /// ARPSO: switch to repulsion when mean distance to the swarm centroid
    /// falls below this many meters.
    #[serde(default = "default_d_low")]
    pub diversity_low: f64,
    /// ARPSO: switch back to attraction above this fraction of the region
    /// diagonal.
    #[serde(default = "default_d_high")]
    pub diversity_high_fraction: f64,
    /// Seconds between velocity updates.
    #[serde(default = "default_period")]
    pub update_period: f64,
    /// Confirmation radius as a fraction of L.
    #[serde(default = "default_sensor")]
    pub sensor_fraction: f64,
    /// Range of the signal sensor as a fraction of L, beyond which the
    /// fitness reads zero. Unlimited when absent.
    #[serde(default)]
    pub signal_fraction: Option<f64>,
}

fn default_inertia() -> f64 {
    0.729
}
fn default_accel() -> f64 {
    1.49445
}
fn default_d_low() -> f64 {
    5.0
}
fn default_d_high() -> f64 {
    0.25
}
fn default_period() -> f64 {
    1.0
}
fn default_sensor() -> f64 {
    0.02
}

impl PsoConfig {
    pub fn new(variant: PsoVariant) -> Self {
        Self {
            variant,
            inertia: default_inertia(),
            cognitive: default_accel(),
            social: default_accel(),
            diversity_low: default_d_low(),
            diversity_high_fraction: default_d_high(),
            update_period: default_period(),
            sensor_fraction: default_sensor(),
            signal_fraction: None,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.inertia > 0.0 && self.inertia < 1.0) {
            return Err(ConfigError::new("inertia", "must lie in (0, 1)"));
        }
        if !(self.cognitive > 0.0 && self.social > 0.0) {
            return Err(ConfigError::new("cognitive/social", "must be positive"));
        }
        if !(self.diversity_low >= 0.0) {
            return Err(ConfigError::new("diversity_low", "must be non-negative"));
        }
        if !(self.diversity_high_fraction > 0.0) {
            return Err(ConfigError::new("diversity_high_fraction", "must be positive"));
        }
        if !(self.update_period > 0.0) {
            return Err(ConfigError::new("update_period", "must be positive"));
        }
        if !(self.sensor_fraction >= 0.0) {
            return Err(ConfigError::new("sensor_fraction", "must be non-negative"));
        }
        if self.signal_fraction.is_some_and(|f| !(f >= 0.0)) {
            return Err(ConfigError::new("signal_fraction", "must be non-negative"));
        }
        Ok(())
    }
}

/// What one swarm member senses in a step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SwarmObservation {
    pub position: Vec2,
    /// Signal strength at `position`; 0 when nothing is active.
    pub fitness: f64,
    /// Simulator-side tag of the emitting target, used only to expire best
    /// records once that target is confirmed.
    pub source: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BestRecord {
    pub position: Vec2,
    pub fitness: f64,
    pub source: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
struct Particle {
    velocity: Vec2,
    best: Option<BestRecord>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PsoSwarm {
    cfg: PsoConfig,
    speed: f64,
    particles: Vec<Particle>,
    global: Option<(usize, BestRecord)>,
    attracting: bool,
    next_update: f64,
}

impl PsoSwarm {
    /// Swarm of `n` agents with random initial headings at cruise `speed`.
    pub fn new(cfg: PsoConfig, n: usize, speed: f64, rng: &mut RngStream) -> Self {
        let particles = (0..n)
            .map(|_| Particle { velocity: Vec2::from_angle(2.0 * PI * rng.unit()) * speed, best: None })
            .collect();
        Self { cfg, speed, particles, global: None, attracting: true, next_update: 0.0 }
    }

    pub fn len(&self) -> usize {
        self.particles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.particles.is_empty()
    }

    pub fn global_best(&self) -> Option<BestRecord> {
        self.global.map(|(_, b)| b)
    }

    pub fn personal_best(&self, i: usize) -> Option<BestRecord> {
        self.particles[i].best
    }

    /// `false` while an ARPSO swarm is in its repulsion phase.
    pub fn is_attracting(&self) -> bool {
        self.attracting
    }

    /// Mean distance of agents to their centroid, meters.
    pub fn diversity(positions: &[Vec2]) -> f64 {
        if positions.is_empty() {
            return 0.0;
        }
        let n = positions.len() as f64;
        let c = positions.iter().fold(Vec2::ZERO, |a, &p| a + p) / n;
        positions.iter().map(|p| p.distance(c)).sum::<f64>() / n
    }

    /// Drop every best record whose signal came from `target`.
    pub fn invalidate(&mut self, target: usize) {
        for p in self.particles.iter_mut() {
            if p.best.is_some_and(|b| b.source == Some(target)) {
                p.best = None;
            }
        }
        if self.global.is_some_and(|(_, b)| b.source == Some(target)) {
            self.global = None;
            self.recompute_global();
        }
    }

    fn recompute_global(&mut self) {
        self.global = None;
        for (i, p) in self.particles.iter().enumerate() {
            if let Some(b) = p.best {
                if self.global.is_none_or(|(_, g)| b.fitness > g.fitness) {
                    self.global = Some((i, b));
                }
            }
        }
    }

    /// Fold one step of observations into the personal and global bests,
    /// update velocities when an update is due, and return the commanded
    /// velocity of every agent (magnitude equal to the cruise speed).
    pub fn step(&mut self, t: f64, obs: &[SwarmObservation], region: &Region, rng: &mut RngStream) -> Vec<Vec2> {
        assert_eq!(obs.len(), self.particles.len());
        for (i, (p, o)) in self.particles.iter_mut().zip(obs).enumerate() {
            if o.fitness <= 0.0 {
                continue;
            }
            let record = BestRecord { position: o.position, fitness: o.fitness, source: o.source };
            if p.best.is_none_or(|b| o.fitness > b.fitness) {
                p.best = Some(record);
            }
            if self.global.is_none_or(|(_, g)| o.fitness > g.fitness) {
                self.global = Some((i, record));
            }
        }

        if t + 1e-9 >= self.next_update {
            self.next_update = t + self.cfg.update_period;
            if self.cfg.variant == PsoVariant::Arpso {
                let positions: Vec<Vec2> = obs.iter().map(|o| o.position).collect();
                let d = Self::diversity(&positions);
                if self.attracting && d < self.cfg.diversity_low {
                    self.attracting = false;
                } else if !self.attracting && d > self.cfg.diversity_high_fraction * region.diagonal() {
                    self.attracting = true;
                }
            }
            for i in 0..self.particles.len() {
                self.update_velocity(i, obs[i].position, rng);
            }
        }

        let speed = self.speed;
        self.particles
            .iter_mut()
            .zip(obs)
            .map(|(p, o)| {
                p.velocity = reflect_velocity(p.velocity, o.position, region);
                p.velocity.normalized().unwrap_or(Vec2::new(1.0, 0.0)) * speed
            })
            .collect()
    }

    fn update_velocity(&mut self, i: usize, x: Vec2, rng: &mut RngStream) {
        let PsoConfig { inertia: w, cognitive: c1, social: c2, .. } = self.cfg;
        let pbest = self.particles[i].best.map_or(x, |b| b.position);
        let (gi, gbest) = self.global.map_or((usize::MAX, x), |(gi, g)| (gi, g.position));
        let v = self.particles[i].velocity;
        let mut axis = || Vec2::new(rng.unit(), rng.unit());
        let next = match self.cfg.variant {
            PsoVariant::Pso | PsoVariant::Arpso => {
                let sign = if self.attracting { 1.0 } else { -1.0 };
                let (u1, u2) = (axis(), axis());
                let pull = hadamard(u1, pbest - x) * c1 + hadamard(u2, gbest - x) * c2;
                v * w + pull * sign
            }
            PsoVariant::Spso => {
                let c = c1;
                let p_prime = x + hadamard(axis(), pbest - x) * c;
                let center = if gi == i {
                    (x + p_prime) / 2.0
                } else {
                    let l_prime = x + hadamard(axis(), gbest - x) * c2;
                    (x + p_prime + l_prime) / 3.0
                };
                let radius = center.distance(x);
                let r = radius * rng.unit().sqrt();
                let sample = center + Vec2::from_angle(2.0 * PI * rng.unit()) * r;
                v * w + (sample - x)
            }
        };
        // Clamp to the cruise speed. The lower bound keeps a heading when
        // no signal has been seen and inertia alone would decay it to zero.
        let n = next.norm();
        let floor = MIN_SPEED_FRACTION * self.speed;
        self.particles[i].velocity = if n > self.speed {
            next * (self.speed / n)
        } else if n < floor && n > 0.0 {
            next * (floor / n)
        } else {
            next
        };
    }
}

/// Turn back from the boundary instead of leaving the region.
fn reflect_velocity(mut v: Vec2, x: Vec2, region: &Region) -> Vec2 {
    if (x.x <= 0.0 && v.x < 0.0) || (x.x >= region.length && v.x > 0.0) {
        v.x = -v.x;
    }
    if (x.y <= 0.0 && v.y < 0.0) || (x.y >= region.width && v.y > 0.0) {
        v.y = -v.y;
    }
    v
}

fn hadamard(a: Vec2, b: Vec2) -> Vec2 {
    Vec2::new(a.x * b.x, a.y * b.y)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn obs_at(points: &[Vec2], target: Vec2) -> Vec<SwarmObservation> {
        points
            .iter()
            .map(|&p| SwarmObservation { position: p, fitness: 1.0 / (1.0 + p.distance(target)), source: Some(0) })
            .collect()
    }

    #[test]
    fn collapsed_swarm_enters_repulsion() {
        let mut rng = RngStream::new(1, 0);
        let mut s = PsoSwarm::new(PsoConfig::new(PsoVariant::Arpso), 4, 20.0, &mut rng);
        let p = Vec2::new(5_000.0, 5_000.0);
        assert_eq!(PsoSwarm::diversity(&[p; 4]), 0.0);
        s.step(0.0, &obs_at(&[p; 4], Vec2::new(9_000.0, 9_000.0)), &Region::default(), &mut rng);
        assert!(!s.is_attracting());
    }

    #[test]
    fn plain_pso_never_repels() {
        let mut rng = RngStream::new(1, 0);
        let mut s = PsoSwarm::new(PsoConfig::new(PsoVariant::Pso), 4, 20.0, &mut rng);
        let p = Vec2::new(5_000.0, 5_000.0);
        s.step(0.0, &obs_at(&[p; 4], Vec2::new(9_000.0, 9_000.0)), &Region::default(), &mut rng);
        assert!(s.is_attracting());
    }

    #[test]
    fn commands_have_cruise_speed() {
        let mut rng = RngStream::new(2, 0);
        for variant in [PsoVariant::Pso, PsoVariant::Spso, PsoVariant::Arpso] {
            let mut s = PsoSwarm::new(PsoConfig::new(variant), 3, 20.0, &mut rng);
            let pts = [Vec2::new(0.0, 0.0), Vec2::new(100.0, 7_000.0), Vec2::new(20_000.0, 3.0)];
            for k in 0..5 {
                for q in s.step(k as f64, &obs_at(&pts, Vec2::new(4_000.0, 4_000.0)), &Region::default(), &mut rng) {
                    assert!((q.norm() - 20.0).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn invalidation_clears_records() {
        let mut rng = RngStream::new(3, 0);
        let mut s = PsoSwarm::new(PsoConfig::new(PsoVariant::Pso), 2, 20.0, &mut rng);
        let o = [
            SwarmObservation { position: Vec2::new(1.0, 1.0), fitness: 0.5, source: Some(4) },
            SwarmObservation { position: Vec2::new(2.0, 2.0), fitness: 0.1, source: Some(6) },
        ];
        s.step(0.0, &o, &Region::default(), &mut rng);
        assert_eq!(s.global_best().unwrap().source, Some(4));
        s.invalidate(4);
        assert!(s.personal_best(0).is_none());
        assert_eq!(s.global_best().unwrap().source, Some(6));
    }
}
