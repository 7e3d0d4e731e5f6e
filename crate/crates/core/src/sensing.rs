//! Sensor specifications and the detection / confirmation predicates.
//!
//! A detection sensor of radius `r_k` fires when any active target
//! (false targets included) is strictly closer than `r_k`. It reports only
//! that something is there. The confirmation sensor of radius `r_n` returns
//! the identity of the nearest active real target strictly inside `r_n`.

use serde::{Deserialize, Serialize};

use crate::error::ConfigError;
use crate::geometry::Vec2;
use crate::world::{Region, Target};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SensorRole {
    Detection,
    Confirmation,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SensorSpec {
    /// 1-based level this sensor serves.
    pub level: usize,
    pub role: SensorRole,
    /// Sensing radius in meters.
    pub radius: f64,
}

impl SensorSpec {
    pub fn detection(level: usize, radius: f64) -> Self {
        Self { level, role: SensorRole::Detection, radius }
    }

    pub fn confirmation(level: usize, radius: f64) -> Self {
        Self { level, role: SensorRole::Confirmation, radius }
    }
}

/// Scalar signal used where a policy needs a fitness rather than a
/// predicate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SignalModel {
    #[default]
    RadiusPredicate,
    /// `s = 1 / (1 + d)`.
    InverseDistance,
}

impl SignalModel {
    /// Signal strength at distance `d` from a target. For the radius
    /// predicate this is an indicator of `d < radius`.
    pub fn strength(&self, d: f64, radius: f64) -> f64 {
        match self {
            SignalModel::RadiusPredicate => {
                if d < radius {
                    1.0
                } else {
                    0.0
                }
            }
            SignalModel::InverseDistance => 1.0 / (1.0 + d),
        }
    }
}

/// An anonymous detection: the fact that some target lies within range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectionEvent {
    pub position: Vec2,
    pub radius: f64,
}

pub fn detect<'a, I>(sensor: &SensorSpec, uav: Vec2, targets: I) -> Option<DetectionEvent>
where
    I: IntoIterator<Item = &'a Target>,
{
    debug_assert_eq!(sensor.role, SensorRole::Detection);
    let r2 = sensor.radius * sensor.radius;
    targets
        .into_iter()
        .any(|t| uav.distance_squared(t.position) < r2)
        .then_some(DetectionEvent { position: uav, radius: sensor.radius })
}

/// Nearest confirmable target strictly inside the sensor radius; ties at
/// equal distance go to the lower id. `targets` must already be filtered to
/// the active set.
pub fn confirm<'a, I>(sensor: &SensorSpec, uav: Vec2, targets: I) -> Option<usize>
where
    I: IntoIterator<Item = &'a Target>,
{
    debug_assert_eq!(sensor.role, SensorRole::Confirmation);
    let r2 = sensor.radius * sensor.radius;
    targets
        .into_iter()
        .filter(|t| !t.false_target && t.confirmed_at.is_none())
        .map(|t| (uav.distance_squared(t.position), t.id))
        .filter(|&(d2, _)| d2 < r2)
        .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)))
        .map(|(_, id)| id)
}

/// Ordered sensor repository: levels `1..n-1` detect, level `n` confirms.
#[derive(Debug, Clone, PartialEq)]
pub struct SensorSuite {
    sensors: Vec<SensorSpec>,
}

impl SensorSuite {
    /// Build from radii ordered by level; the last radius is the
    /// confirmation sensor.
    pub fn from_radii(radii: &[f64]) -> Result<Self, ConfigError> {
        if radii.is_empty() {
            return Err(ConfigError::new("sensors", "at least one sensor is required"));
        }
        for (i, r) in radii.iter().enumerate() {
            if !(*r >= 0.0 && r.is_finite()) {
                return Err(ConfigError::new(format!("sensors[{i}]"), "radius must be non-negative"));
            }
        }
        if radii.windows(2).any(|w| w[1] >= w[0]) {
            return Err(ConfigError::new("sensors", "radii must strictly decrease with level"));
        }
        let n = radii.len();
        let sensors = radii
            .iter()
            .enumerate()
            .map(|(i, &r)| {
                if i + 1 == n {
                    SensorSpec::confirmation(i + 1, r)
                } else {
                    SensorSpec::detection(i + 1, r)
                }
            })
            .collect();
        Ok(Self { sensors })
    }

    /// Two-sensor suite scaled to the region: `r_1 = 10% L`, `r_2 = 2% L`.
    pub fn default_for(region: &Region) -> Self {
        Self::from_radii(&[0.1 * region.length, 0.02 * region.length]).expect("valid default radii")
    }

    pub fn len(&self) -> usize {
        self.sensors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sensors.is_empty()
    }

    /// Sensor for a 0-based level index.
    pub fn level(&self, k: usize) -> &SensorSpec {
        &self.sensors[k]
    }

    pub fn confirmation(&self) -> &SensorSpec {
        self.sensors.last().expect("non-empty suite")
    }

    pub fn iter(&self) -> impl Iterator<Item = &SensorSpec> {
        self.sensors.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::world::{DynamicDrawMode, TargetSpec, World};

    fn world(specs: &[TargetSpec]) -> World {
        World::new(Region::default(), specs, DynamicDrawMode::PerAxis).unwrap()
    }

    #[test]
    fn detection_uses_strict_inequality() {
        let s = SensorSpec::detection(1, 2_000.0);
        let w = world(&[TargetSpec::fixed(1_999.0, 0.0)]);
        assert!(detect(&s, Vec2::ZERO, w.active_targets(0.0)).is_some());
        let w = world(&[TargetSpec::fixed(2_000.0, 0.0)]);
        assert!(detect(&s, Vec2::ZERO, w.active_targets(0.0)).is_none());
    }

    #[test]
    fn false_targets_are_detected_but_not_confirmed() {
        let w = world(&[TargetSpec::fixed(100.0, 0.0).with_false(true)]);
        assert!(detect(&SensorSpec::detection(1, 2_000.0), Vec2::ZERO, w.active_targets(0.0)).is_some());
        assert_eq!(confirm(&SensorSpec::confirmation(2, 400.0), Vec2::ZERO, w.active_targets(0.0)), None);
    }

    #[test]
    fn confirmation_radius_and_nearest() {
        let s = SensorSpec::confirmation(2, 400.0);
        let w = world(&[TargetSpec::fixed(399.0, 0.0)]);
        assert_eq!(confirm(&s, Vec2::ZERO, w.active_targets(0.0)), Some(0));
        let w = world(&[TargetSpec::fixed(300.0, 0.0), TargetSpec::fixed(0.0, 100.0)]);
        assert_eq!(confirm(&s, Vec2::ZERO, w.active_targets(0.0)), Some(1));
        let w = world(&[TargetSpec::fixed(0.0, 100.0), TargetSpec::fixed(100.0, 0.0)]);
        assert_eq!(confirm(&s, Vec2::ZERO, w.active_targets(0.0)), Some(0));
    }

    #[test]
    fn inactive_targets_are_invisible() {
        let w = world(&[TargetSpec::popup(10.0, 0.0, 200.0)]);
        assert!(detect(&SensorSpec::detection(1, 2_000.0), Vec2::ZERO, w.active_targets(100.0)).is_none());
        assert_eq!(confirm(&SensorSpec::confirmation(2, 400.0), Vec2::ZERO, w.active_targets(100.0)), None);
        assert_eq!(confirm(&SensorSpec::confirmation(2, 400.0), Vec2::ZERO, w.active_targets(200.0)), Some(0));
    }

    #[test]
    fn suite_validation() {
        assert!(SensorSuite::from_radii(&[2_000.0, 400.0]).is_ok());
        assert!(SensorSuite::from_radii(&[400.0, 2_000.0]).is_err());
        assert!(SensorSuite::from_radii(&[]).is_err());
        let s = SensorSuite::default_for(&Region::default());
        assert_eq!(s.level(0).radius, 2_000.0);
        assert_eq!(s.confirmation().radius, 400.0);
        assert_eq!(s.confirmation().role, SensorRole::Confirmation);
    }

    #[test]
    fn inverse_distance_is_monotone() {
        let m = SignalModel::InverseDistance;
        assert!(m.strength(10.0, 0.0) > m.strength(11.0, 0.0));
        assert_eq!(m.strength(0.0, 0.0), 1.0);
    }
}
