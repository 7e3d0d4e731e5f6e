//! Built-in target layouts for the three mission families.
//!
//! The ten reference locations (in meters on a 20 km x 20 km region) are
//! shared by all three families; pop-up targets appear at `t_i = 200 i`
//! and dynamic targets start from the same points.

use serde::{Deserialize, Serialize};

use crate::world::TargetSpec;

pub const REFERENCE_LOCATIONS: [(f64, f64); 10] = [
    (2_000.0, 2_000.0),
    (4_000.0, 16_000.0),
    (10_000.0, 10_000.0),
    (16_000.0, 12_000.0),
    (18_000.0, 2_000.0),
    (3_000.0, 10_000.0),
    (5_000.0, 4_000.0),
    (13_000.0, 8_000.0),
    (15_000.0, 5_000.0),
    (18_000.0, 11_000.0),
];

pub const POPUP_INTERVAL: f64 = 200.0;
pub const DYNAMIC_SPEED: f64 = 5.0;
pub const DYNAMIC_RANGE: (f64, f64) = (-0.2, 1.0);

/// Indices of the targets flagged false in the false-detection experiments.
pub const DEFAULT_FALSE_TARGETS: [usize; 3] = [7, 8, 9];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScenarioKind {
    Fixed,
    Popup,
    Dynamic,
}

impl ScenarioKind {
    pub fn name(&self) -> &'static str {
        match self {
            ScenarioKind::Fixed => "fixed",
            ScenarioKind::Popup => "popup",
            ScenarioKind::Dynamic => "dynamic",
        }
    }

    pub fn targets(&self) -> Vec<TargetSpec> {
        match self {
            ScenarioKind::Fixed => fixed_targets(),
            ScenarioKind::Popup => popup_targets(),
            ScenarioKind::Dynamic => dynamic_targets(),
        }
    }

    /// Mission horizon for efficiency (targets confirmed) measurements.
    pub fn horizon(&self) -> f64 {
        match self {
            ScenarioKind::Popup => 2_000.0,
            _ => 1_000.0,
        }
    }
}

pub fn fixed_targets() -> Vec<TargetSpec> {
    REFERENCE_LOCATIONS.iter().map(|&(x, y)| TargetSpec::fixed(x, y)).collect()
}

pub fn popup_targets() -> Vec<TargetSpec> {
    REFERENCE_LOCATIONS
        .iter()
        .enumerate()
        .map(|(i, &(x, y))| TargetSpec::popup(x, y, POPUP_INTERVAL * (i + 1) as f64))
        .collect()
}

pub fn dynamic_targets() -> Vec<TargetSpec> {
    REFERENCE_LOCATIONS
        .iter()
        .map(|&(x, y)| TargetSpec::dynamic(x, y, DYNAMIC_SPEED, DYNAMIC_RANGE))
        .collect()
}

/// Flag the given target indices as false targets.
pub fn with_false_targets(mut targets: Vec<TargetSpec>, indices: &[usize]) -> Vec<TargetSpec> {
    for &i in indices {
        if let Some(t) = targets.get_mut(i) {
            t.false_target = true;
        }
    }
    targets
}
