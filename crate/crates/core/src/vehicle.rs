//! UAV kinematics: a first-order velocity loop driven by pure-pursuit
//! commands, plus waypoint generation with boundary handling.

use serde::{Deserialize, Serialize};

use crate::error::ConfigError;
use crate::geometry::Vec2;
use crate::world::Region;

/// Number of fresh headings tried before a waypoint is reflected (or
/// projected) back inside its admissible set.
pub const WAYPOINT_REDRAWS: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VehicleParams {
    /// Cruise speed V_U, m/s.
    #[serde(default = "default_speed")]
    pub speed: f64,
    /// Velocity-loop time constant tau, s.
    #[serde(default = "default_tau")]
    pub tau: f64,
    /// Distance at which a waypoint counts as reached, m.
    #[serde(default = "default_capture")]
    pub capture_radius: f64,
}

fn default_speed() -> f64 {
    20.0
}
fn default_tau() -> f64 {
    0.33
}
fn default_capture() -> f64 {
    20.0
}

impl Default for VehicleParams {
    fn default() -> Self {
        Self { speed: default_speed(), tau: default_tau(), capture_radius: default_capture() }
    }
}

impl VehicleParams {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.speed > 0.0 && self.speed.is_finite()) {
            return Err(ConfigError::new("vehicle.speed", "must be positive"));
        }
        if !(self.tau > 0.0 && self.tau.is_finite()) {
            return Err(ConfigError::new("vehicle.tau", "must be positive"));
        }
        if !(self.capture_radius > 0.0) {
            return Err(ConfigError::new("vehicle.capture_radius", "must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UavKinematics {
    pub position: Vec2,
    pub velocity: Vec2,
    /// Commanded velocity Q_U.
    pub command: Vec2,
    pub speed: f64,
    pub tau: f64,
}

impl UavKinematics {
    pub fn at_rest(position: Vec2, params: &VehicleParams) -> Self {
        Self { position, velocity: Vec2::ZERO, command: Vec2::ZERO, speed: params.speed, tau: params.tau }
    }

    /// Advance `dt` seconds holding the command constant. Uses the exact
    /// solution of `dV/dt = (Q - V) / tau`, `dX/dt = V`:
    ///
    /// `V(t+dt) = Q + (V - Q) e^{-dt/tau}`,
    /// `X(t+dt) = X + Q dt + (V - Q) tau (1 - e^{-dt/tau})`.
    pub fn step(&self, dt: f64) -> Self {
        self.step_with_decay(dt, (-dt / self.tau).exp())
    }

    /// [`step`](Self::step) with a precomputed `e^{-dt/tau}`.
    pub fn step_with_decay(&self, dt: f64, decay: f64) -> Self {
        let lag = self.velocity - self.command;
        Self {
            position: self.position + self.command * dt + lag * (self.tau * (1.0 - decay)),
            velocity: self.command + lag * decay,
            ..*self
        }
    }
}

/// Pure-pursuit command: `V_U` times the unit vector toward `waypoint`.
/// A waypoint on top of the vehicle leaves the previous command in place.
pub fn pursuit_command(state: &UavKinematics, waypoint: Vec2) -> Vec2 {
    match (waypoint - state.position).normalized() {
        Some(u) => u * state.speed,
        None => state.command,
    }
}

/// `P_{q+1} = P_q + delta * direction`, kept inside `region`.
///
/// A candidate outside the region is retried with up to
/// [`WAYPOINT_REDRAWS`] fresh headings from `redraw`; if all of them fail
/// the last candidate is reflected across the violated boundary.
pub fn next_waypoint<F>(from: Vec2, delta: f64, direction: Vec2, region: &Region, mut redraw: F) -> Vec2
where
    F: FnMut() -> Vec2,
{
    let mut candidate = from + direction * delta;
    if region.contains(candidate) {
        return candidate;
    }
    for _ in 0..WAYPOINT_REDRAWS {
        candidate = from + redraw() * delta;
        if region.contains(candidate) {
            return candidate;
        }
    }
    region.reflect(candidate)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> VehicleParams {
        VehicleParams::default()
    }

    #[test]
    fn converged_vehicle_flies_straight() {
        let v = Vec2::new(12.0, -16.0);
        let s = UavKinematics { position: Vec2::new(5.0, 5.0), velocity: v, command: v, speed: 20.0, tau: 0.33 };
        let n = s.step(0.1);
        assert!(((n.position - s.position).norm() - 2.0).abs() < 1e-9);
        assert_eq!(n.velocity, v);
    }

    #[test]
    fn lag_response_after_one_time_constant() {
        let mut s = UavKinematics::at_rest(Vec2::ZERO, &params());
        s.command = Vec2::new(20.0, 0.0);
        let n = s.step(0.33);
        let expected = 20.0 * (1.0 - (-1.0f64).exp());
        assert!((n.velocity.x - expected).abs() < 1e-12);
        assert!((n.velocity.x - 12.642).abs() < 1e-3);
    }

    #[test]
    fn steps_compose() {
        let mut s = UavKinematics::at_rest(Vec2::new(100.0, 50.0), &params());
        s.velocity = Vec2::new(-3.0, 7.0);
        s.command = Vec2::new(12.0, 16.0);
        let twice = s.step(0.05).step(0.05);
        let once = s.step(0.1);
        assert!((twice.position - once.position).norm() < 1e-9);
        assert!((twice.velocity - once.velocity).norm() < 1e-9);
    }

    #[test]
    fn pursuit_geometry() {
        let s = UavKinematics::at_rest(Vec2::ZERO, &params());
        assert_eq!(pursuit_command(&s, Vec2::new(100.0, 0.0)), Vec2::new(20.0, 0.0));
        let q = pursuit_command(&s, Vec2::new(30.0, 40.0));
        assert!((q.x - 12.0).abs() < 1e-12 && (q.y - 16.0).abs() < 1e-12);
        let mut held = s;
        held.command = Vec2::new(0.0, 20.0);
        assert_eq!(pursuit_command(&held, Vec2::ZERO), Vec2::new(0.0, 20.0));
    }

    #[test]
    fn waypoint_inside_region_is_direct() {
        let r = Region::default();
        let wp = next_waypoint(Vec2::new(10_000.0, 10_000.0), 4_000.0, Vec2::new(1.0, 0.0), &r, || unreachable!());
        assert_eq!(wp, Vec2::new(14_000.0, 10_000.0));
    }

    #[test]
    fn forced_reflection() {
        let r = Region::default();
        let mut calls = 0;
        let wp = next_waypoint(Vec2::new(19_900.0, 10_000.0), 4_000.0, Vec2::new(1.0, 0.0), &r, || {
            calls += 1;
            Vec2::new(1.0, 0.0)
        });
        assert_eq!(calls, WAYPOINT_REDRAWS);
        assert_eq!(wp, Vec2::new(16_100.0, 10_000.0));
    }

    #[test]
    fn speed_converges_within_five_tau() {
        let p = params();
        let mut s = UavKinematics::at_rest(Vec2::ZERO, &p);
        let wp = Vec2::new(5_000.0, 3_000.0);
        let dt = 0.1;
        let steps = (5.0 * p.tau / dt).ceil() as usize;
        for _ in 0..steps {
            s.command = pursuit_command(&s, wp);
            s = s.step(dt);
        }
        let v = s.velocity.norm();
        assert!(v >= 0.99 * p.speed && v <= 1.01 * p.speed, "{v}");
    }
}
