//! Search policies.
//!
//! Self-cognitive policies ([`mdm`], [`sss`]) are per-agent state machines
//! whose only input is an [`Observation`]: the clock, the agent's own
//! position and the reading of the one sensor it currently has switched on.
//! They have no handle on the world, the target list or any other agent.
//!
//! Social-cognitive policies ([`pso`]) run as one swarm object that shares a
//! global-best channel between agents.

pub mod mdm;
pub mod pso;
pub mod sss;

use serde::{Deserialize, Serialize};

use crate::error::ConfigError;
use crate::geometry::Vec2;
use crate::world::Region;

pub use mdm::{IndexConstants, KnowledgeBase, LevelConfig, MdmAction, MdmAgent, MdmConfig};
pub use pso::{PsoConfig, PsoSwarm, PsoVariant, SwarmObservation};
pub use sss::{SssAction, SssAgent, SssConfig};

/// Reading of the agent's currently active sensor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Reading {
    Quiet,
    /// The detection sensor fired; carries no identity or bearing.
    Detected,
    /// The confirmation sensor established a target's identity and location.
    Confirmed { target: usize, position: Vec2 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observation {
    pub time: f64,
    pub position: Vec2,
    pub reading: Reading,
}

/// Policy section of a mission or campaign config.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PolicyConfig {
    Mdm(MdmConfig),
    Sss(SssConfig),
    Pso(PsoConfig),
}

impl PolicyConfig {
    /// Short label such as `MDM(LS+BS)`, `US` or `ARPSO`.
    pub fn label(&self) -> String {
        match self {
            PolicyConfig::Mdm(c) => {
                let parts: Vec<_> = c.levels.iter().map(|l| l.process.label()).collect();
                format!("MDM({})", parts.join("+"))
            }
            PolicyConfig::Sss(c) => c.process.label().to_string(),
            PolicyConfig::Pso(c) => c.variant.label().to_string(),
        }
    }

    pub fn family(&self) -> &'static str {
        match self {
            PolicyConfig::Mdm(_) => "mdm",
            PolicyConfig::Sss(_) => "sss",
            PolicyConfig::Pso(_) => "pso",
        }
    }

    pub fn validate(&self, region: &Region) -> Result<(), ConfigError> {
        match self {
            PolicyConfig::Mdm(c) => KnowledgeBase::build(c, region).map(|_| ()),
            PolicyConfig::Sss(c) => c.validate(),
            PolicyConfig::Pso(c) => c.validate(),
        }
    }
}
