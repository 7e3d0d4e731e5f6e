//! The search region, the targets in it, and the ground-truth ledger of
//! confirmations.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{ConfigError, WorldError};
use crate::geometry::Vec2;
use crate::samplers::RngStream;

/// Axis-aligned rectangle `[0, length] x [0, width]`, in meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Region {
    pub length: f64,
    pub width: f64,
}

impl Default for Region {
    fn default() -> Self {
        Self { length: 20_000.0, width: 20_000.0 }
    }
}

impl Region {
    pub fn new(length: f64, width: f64) -> Result<Self, ConfigError> {
        let r = Self { length, width };
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.length > 0.0 && self.length.is_finite()) {
            return Err(ConfigError::new("region.length", "must be positive"));
        }
        if !(self.width > 0.0 && self.width.is_finite()) {
            return Err(ConfigError::new("region.width", "must be positive"));
        }
        Ok(())
    }

    pub fn area(&self) -> f64 {
        self.length * self.width
    }

    pub fn diagonal(&self) -> f64 {
        self.length.hypot(self.width)
    }

    pub fn contains(&self, p: Vec2) -> bool {
        (0.0..=self.length).contains(&p.x) && (0.0..=self.width).contains(&p.y)
    }

    pub fn clamp(&self, p: Vec2) -> Vec2 {
        Vec2::new(p.x.clamp(0.0, self.length), p.y.clamp(0.0, self.width))
    }

    /// Mirror each violated coordinate back across the boundary it crossed;
    /// anything still outside (a step longer than the region) is clamped.
    pub fn reflect(&self, p: Vec2) -> Vec2 {
        fn mirror(v: f64, hi: f64) -> f64 {
            let m = if v < 0.0 {
                -v
            } else if v > hi {
                2.0 * hi - v
            } else {
                v
            };
            m.clamp(0.0, hi)
        }
        Vec2::new(mirror(p.x, self.length), mirror(p.y, self.width))
    }

    /// Point at arc length `s` along the perimeter, counter-clockwise from
    /// the origin corner.
    pub fn perimeter_point(&self, s: f64) -> Vec2 {
        let (l, w) = (self.length, self.width);
        let s = s.rem_euclid(2.0 * (l + w));
        if s <= l {
            Vec2::new(s, 0.0)
        } else if s <= l + w {
            Vec2::new(l, s - l)
        } else if s <= 2.0 * l + w {
            Vec2::new(l - (s - l - w), w)
        } else {
            Vec2::new(0.0, w - (s - 2.0 * l - w))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TargetKind {
    /// Present from t = 0, never moves.
    #[default]
    Fixed,
    /// Stationary, invisible before its appearance time.
    Popup,
    /// Random walk `X(k+1) = X(k) + R(a, b) * V_s * kappa_s`.
    Dynamic,
}

/// Whether the dynamic-target random walk shares one uniform draw across
/// both axes or draws each axis independently.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DynamicDrawMode {
    #[default]
    PerAxis,
    Shared,
}

/// One target as written in a scenario file.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetSpec {
    pub x: f64,
    pub y: f64,
    #[serde(default)]
    pub kind: TargetKind,
    /// Appearance time t_i in seconds (pop-up only).
    #[serde(default)]
    pub appear_at: f64,
    /// V_s in m/s (dynamic only).
    #[serde(default)]
    pub speed: f64,
    /// Uniform range `(a, b)` of the random-walk multiplier (dynamic only).
    #[serde(default)]
    pub range: (f64, f64),
    /// A false target: detectable, never confirmable.
    #[serde(default, rename = "false")]
    pub false_target: bool,
}

impl TargetSpec {
    pub fn fixed(x: f64, y: f64) -> Self {
        Self { x, y, kind: TargetKind::Fixed, appear_at: 0.0, speed: 0.0, range: (0.0, 0.0), false_target: false }
    }

    pub fn popup(x: f64, y: f64, appear_at: f64) -> Self {
        Self { kind: TargetKind::Popup, appear_at, ..Self::fixed(x, y) }
    }

    pub fn dynamic(x: f64, y: f64, speed: f64, range: (f64, f64)) -> Self {
        Self { kind: TargetKind::Dynamic, speed, range, ..Self::fixed(x, y) }
    }

    pub fn with_false(mut self, false_target: bool) -> Self {
        self.false_target = false_target;
        self
    }

    pub fn position(&self) -> Vec2 {
        Vec2::new(self.x, self.y)
    }

    fn validate(&self, index: usize, region: &Region) -> Result<(), ConfigError> {
        let field = |f: &str| format!("targets[{index}].{f}");
        if !region.contains(self.position()) {
            return Err(ConfigError::new(field("x/y"), "outside the region"));
        }
        match self.kind {
            TargetKind::Popup if !(self.appear_at > 0.0 && self.appear_at.is_finite()) => {
                Err(ConfigError::new(field("appear_at"), "pop-up targets need t_i > 0"))
            }
            TargetKind::Dynamic if !(self.speed >= 0.0 && self.speed.is_finite()) => {
                Err(ConfigError::new(field("speed"), "must be non-negative"))
            }
            TargetKind::Dynamic if self.range.0 > self.range.1 => {
                Err(ConfigError::new(field("range"), "lower bound exceeds upper bound"))
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Target {
    pub id: usize,
    pub kind: TargetKind,
    pub position: Vec2,
    pub appear_at: f64,
    pub speed: f64,
    pub range: (f64, f64),
    pub false_target: bool,
    pub confirmed_at: Option<f64>,
}

impl Target {
    fn from_spec(id: usize, spec: &TargetSpec) -> Self {
        Self {
            id,
            kind: spec.kind,
            position: spec.position(),
            appear_at: if spec.kind == TargetKind::Popup { spec.appear_at } else { 0.0 },
            speed: spec.speed,
            range: spec.range,
            false_target: spec.false_target,
            confirmed_at: None,
        }
    }

    /// Visible to sensors at time `t`: appeared and not yet confirmed.
    pub fn is_active(&self, t: f64) -> bool {
        self.confirmed_at.is_none() && t >= self.appear_at
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Confirmation {
    pub target: usize,
    pub time: f64,
    pub uav: usize,
}

/// First-confirmer-wins record of confirmed targets.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct GroundTruthLedger {
    records: BTreeMap<usize, Confirmation>,
}

impl GroundTruthLedger {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn get(&self, target: usize) -> Option<&Confirmation> {
        self.records.get(&target)
    }

    /// Records ordered by confirmation time (ties by target id).
    pub fn chronological(&self) -> Vec<Confirmation> {
        let mut v: Vec<_> = self.records.values().copied().collect();
        v.sort_by(|a, b| a.time.total_cmp(&b.time).then(a.target.cmp(&b.target)));
        v
    }

    fn insert(&mut self, c: Confirmation) -> bool {
        if self.records.contains_key(&c.target) {
            return false;
        }
        self.records.insert(c.target, c);
        true
    }
}

#[derive(Debug, Clone)]
pub struct World {
    region: Region,
    targets: Vec<Target>,
    ledger: GroundTruthLedger,
    draw_mode: DynamicDrawMode,
}

impl World {
    pub fn new(region: Region, specs: &[TargetSpec], draw_mode: DynamicDrawMode) -> Result<Self, ConfigError> {
        region.validate()?;
        for (i, s) in specs.iter().enumerate() {
            s.validate(i, &region)?;
        }
        let targets = specs.iter().enumerate().map(|(i, s)| Target::from_spec(i, s)).collect();
        Ok(Self { region, targets, ledger: GroundTruthLedger::default(), draw_mode })
    }

    pub fn region(&self) -> &Region {
        &self.region
    }

    pub fn targets(&self) -> &[Target] {
        &self.targets
    }

    pub fn ledger(&self) -> &GroundTruthLedger {
        &self.ledger
    }

    /// Unconfirmed targets that have appeared by `t`. False targets are
    /// included: they are detectable.
    pub fn active_targets(&self, t: f64) -> impl Iterator<Item = &Target> + Clone {
        self.targets.iter().filter(move |tg| tg.is_active(t))
    }

    /// Number of targets that can ever be confirmed.
    pub fn real_target_count(&self) -> usize {
        self.targets.iter().filter(|t| !t.false_target).count()
    }

    pub fn all_real_confirmed(&self) -> bool {
        self.ledger.len() == self.real_target_count()
    }

    pub fn has_dynamic_targets(&self) -> bool {
        self.targets.iter().any(|t| t.kind == TargetKind::Dynamic)
    }

    /// Advance every unconfirmed dynamic target by one sampling period
    /// `kappa_s`, clamping to the region.
    pub fn step_dynamic_targets(&mut self, kappa_s: f64, rng: &mut RngStream) {
        let region = self.region;
        for t in self.targets.iter_mut() {
            if t.kind != TargetKind::Dynamic || t.confirmed_at.is_some() {
                continue;
            }
            let (a, b) = t.range;
            let mut draw = || a + (b - a) * rng.unit();
            let (rx, ry) = match self.draw_mode {
                DynamicDrawMode::PerAxis => (draw(), draw()),
                DynamicDrawMode::Shared => {
                    let r = draw();
                    (r, r)
                }
            };
            let step = t.speed * kappa_s;
            t.position = region.clamp(t.position + Vec2::new(rx * step, ry * step));
        }
    }

    /// Record a confirmation of `target` by `uav` at time `t`.
    ///
    /// Returns `false` for false targets and for targets that are already
    /// confirmed; a successful confirmation removes the target from the
    /// sensed world.
    pub fn try_confirm(&mut self, target: usize, uav: usize, t: f64) -> Result<bool, WorldError> {
        let tg = self.targets.get_mut(target).ok_or(WorldError::UnknownTarget(target))?;
        if tg.false_target || tg.confirmed_at.is_some() {
            return Ok(false);
        }
        tg.confirmed_at = Some(t);
        Ok(self.ledger.insert(Confirmation { target, time: t, uav }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario;

    fn popup_world() -> World {
        World::new(Region::default(), &scenario::popup_targets(), DynamicDrawMode::PerAxis).unwrap()
    }

    #[test]
    fn popup_gating_counts() {
        let w = popup_world();
        assert_eq!(w.active_targets(1000.0).count(), 5);
        assert_eq!(w.active_targets(199.9).count(), 0);
        assert_eq!(w.active_targets(200.0).count(), 1);
        assert_eq!(w.active_targets(2000.0).count(), 10);
    }

    #[test]
    fn fixed_targets_all_active_at_start() {
        let w = World::new(Region::default(), &scenario::fixed_targets(), DynamicDrawMode::PerAxis).unwrap();
        assert_eq!(w.active_targets(0.0).count(), 10);
    }

    #[test]
    fn dynamic_step_displacement_bounds() {
        let specs = [TargetSpec::dynamic(10_000.0, 10_000.0, 5.0, (-0.2, 1.0))];
        let mut w = World::new(Region::default(), &specs, DynamicDrawMode::PerAxis).unwrap();
        let mut rng = RngStream::new(3, 0);
        for _ in 0..10_000 {
            let before = w.targets()[0].position;
            w.step_dynamic_targets(0.1, &mut rng);
            let d = w.targets()[0].position - before;
            assert!((-0.1 - 1e-12..=0.5 + 1e-12).contains(&d.x), "{d:?}");
            assert!((-0.1 - 1e-12..=0.5 + 1e-12).contains(&d.y), "{d:?}");
        }
    }

    #[test]
    fn dynamic_zero_range_is_stationary() {
        let specs = [TargetSpec::dynamic(500.0, 700.0, 5.0, (0.0, 0.0))];
        let mut w = World::new(Region::default(), &specs, DynamicDrawMode::Shared).unwrap();
        let mut rng = RngStream::new(3, 0);
        for _ in 0..100 {
            w.step_dynamic_targets(0.1, &mut rng);
        }
        assert_eq!(w.targets()[0].position, Vec2::new(500.0, 700.0));
    }

    #[test]
    fn confirmation_rules() {
        let specs = [TargetSpec::fixed(1.0, 1.0), TargetSpec::fixed(2.0, 2.0).with_false(true)];
        let mut w = World::new(Region::default(), &specs, DynamicDrawMode::PerAxis).unwrap();
        assert_eq!(w.try_confirm(0, 3, 10.0), Ok(true));
        assert_eq!(w.ledger().len(), 1);
        assert_eq!(w.try_confirm(0, 4, 11.0), Ok(false));
        assert_eq!(w.ledger().get(0).unwrap().uav, 3);
        assert_eq!(w.try_confirm(1, 3, 12.0), Ok(false));
        assert_eq!(w.ledger().len(), 1);
        assert_eq!(w.try_confirm(7, 3, 12.0), Err(WorldError::UnknownTarget(7)));
        assert!(w.all_real_confirmed());
        assert_eq!(w.active_targets(20.0).count(), 1);
    }

    #[test]
    fn invalid_specs_rejected() {
        let r = Region::default();
        assert!(World::new(r, &[TargetSpec::fixed(-1.0, 0.0)], DynamicDrawMode::PerAxis).is_err());
        assert!(World::new(r, &[TargetSpec::popup(1.0, 1.0, 0.0)], DynamicDrawMode::PerAxis).is_err());
        assert!(Region::new(0.0, 1.0).is_err());
    }

    #[test]
    fn reflection_and_perimeter() {
        let r = Region::default();
        assert_eq!(r.reflect(Vec2::new(23_900.0, 10_000.0)), Vec2::new(16_100.0, 10_000.0));
        assert_eq!(r.reflect(Vec2::new(-300.0, -5.0)), Vec2::new(300.0, 5.0));
        assert_eq!(r.perimeter_point(0.0), Vec2::new(0.0, 0.0));
        assert_eq!(r.perimeter_point(25_000.0), Vec2::new(20_000.0, 5_000.0));
        assert_eq!(r.perimeter_point(70_000.0), Vec2::new(0.0, 10_000.0));
    }
}
