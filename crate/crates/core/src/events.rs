//! Per-mission event log.

use serde::{Deserialize, Serialize};

use crate::geometry::Vec2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Disk {
    pub center: Vec2,
    pub radius: f64,
}

impl Disk {
    pub fn contains(&self, p: Vec2, tol: f64) -> bool {
        p.distance(self.center) <= self.radius + tol
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SwitchReason {
    Detection,
    Confirmation,
    IndexExpired,
}

/// Levels are 1-based in the log.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "kebab-case")]
pub enum EventKind {
    Waypoint {
        level: usize,
        sensor_radius: f64,
        step_length: f64,
        from: Vec2,
        waypoint: Vec2,
        disk: Option<Disk>,
    },
    Detection {
        level: usize,
        position: Vec2,
        radius: f64,
    },
    LevelSwitch {
        from: usize,
        to: usize,
        reason: SwitchReason,
        disk: Option<Disk>,
    },
    Confirmation {
        target: usize,
        uav_position: Vec2,
        target_position: Vec2,
        sensor_radius: f64,
    },
    IndexReset {
        level: usize,
        index: f64,
        dwell: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Event {
    pub time: f64,
    pub agent: usize,
    #[serde(flatten)]
    pub kind: EventKind,
}

/// Event sink that is free when disabled.
#[derive(Debug, Clone, Default)]
pub struct EventLog {
    enabled: bool,
    events: Vec<Event>,
}

impl EventLog {
    pub fn new(enabled: bool) -> Self {
        Self { enabled, events: Vec::new() }
    }

    pub fn disabled() -> Self {
        Self::new(false)
    }

    pub fn is_enabled(&self) -> bool {
        self.enabled
    }

    pub fn push(&mut self, time: f64, agent: usize, kind: impl FnOnce() -> EventKind) {
        if self.enabled {
            self.events.push(Event { time, agent, kind: kind() });
        }
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn into_events(self) -> Vec<Event> {
        self.events
    }
}
