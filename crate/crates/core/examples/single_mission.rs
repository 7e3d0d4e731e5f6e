//! One fixed-target mission with 12 UAVs running the two-level search.
//!
//! ```text
//! cargo run --release --example single_mission -- [seed]
//! ```

use uav_search::policy::MdmConfig;
use uav_search::{run_mission, MissionConfig, PolicyConfig, ScenarioKind};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let seed = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(1);
    let mut cfg = MissionConfig::reference(ScenarioKind::Fixed, PolicyConfig::Mdm(MdmConfig::levy_brownian()));
    cfg.seed = seed;

    let r = run_mission(&cfg)?;
    println!("seed {seed}: {} of {} targets confirmed by t = {} s", r.targets_confirmed, r.real_targets, cfg.horizon);
    for c in &r.confirmations {
        println!("  t = {:>8.1} s  target {:>2}  by UAV {:>2}", c.time, c.target, c.uav);
    }
    match r.completion_time {
        Some(t) => println!("all targets confirmed at {t:.1} s"),
        None => println!("censored at {:.0} s", r.end_time),
    }
    println!("wall time {:.1} ms", r.wall_time.as_secs_f64() * 1e3);
    Ok(())
}
