//! Event log of one UAV: waypoints, detections, level switches and
//! confirmations, as JSON lines.
//!
//! ```text
//! cargo run --release --example mdm_trace -- [seed] [agent] > trace.jsonl
//! ```

use uav_search::events::EventKind;
use uav_search::policy::MdmConfig;
use uav_search::{run_mission, MissionConfig, PolicyConfig, ScenarioKind};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let seed: u64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(3);
    let agent: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(0);

    let mut cfg = MissionConfig::reference(ScenarioKind::Fixed, PolicyConfig::Mdm(MdmConfig::levy_brownian()));
    cfg.seed = seed;
    cfg.horizon = 2000.0;
    cfg.mode = uav_search::MissionMode::Efficiency;
    cfg.record_events = true;
    let r = run_mission(&cfg)?;

    let mine: Vec<_> = r.events.iter().filter(|e| e.agent == agent).collect();
    let switches = mine.iter().filter(|e| matches!(e.kind, EventKind::LevelSwitch { .. })).count();
    eprintln!("UAV {agent}: {} events, {switches} level switches", mine.len());
    for e in mine {
        println!("{}", serde_json::to_string(e)?);
    }
    Ok(())
}
