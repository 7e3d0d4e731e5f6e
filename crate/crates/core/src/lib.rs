//! Decentralized multi-UAV stochastic target search.
//!
//! Agents fly random waypoint walks (Lévy, Brownian or uniform) and switch
//! between a long-range detection sensor and a short-range confirmation
//! sensor. Baselines cover single-sensor walks and particle-swarm searches.
//! [`engine::run_mission`] runs one mission; [`campaign`] runs Monte-Carlo
//! sweeps and writes CSV summaries.

pub mod campaign;
pub mod engine;
pub mod error;
pub mod events;
pub mod geometry;
pub mod metrics;
pub mod policy;
pub mod samplers;
pub mod scenario;
pub mod sensing;
pub mod vehicle;
pub mod world;

pub use engine::{run_mission, MissionConfig, MissionMode, RunRecord};
pub use error::{CampaignError, ConfigError, MetricsError, SamplerError, WorldError};
pub use geometry::Vec2;
pub use policy::PolicyConfig;
pub use samplers::{RngStream, StochasticProcess};
pub use scenario::ScenarioKind;
pub use world::{Region, TargetSpec};
