//! Analytic confirmation probability of a single-sensor search against a
//! search that localized the target at `t_d`, next to the empirical curve of
//! one UAV flying a uniform walk.
//!
//! ```text
//! cargo run --release --example analytic_curves -- [runs]
//! ```

use uav_search::metrics::{analytic_pcm, analytic_pcs, sensing_area};
use uav_search::policy::SssConfig;
use uav_search::{run_mission, MissionConfig, MissionMode, PolicyConfig, ScenarioKind, StochasticProcess, TargetSpec};

const R_N: f64 = 400.0;
const R_1: f64 = 2000.0;
const SPEED: f64 = 20.0;
const AREA: f64 = 4e8;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let runs: u64 = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(200);
    let horizon = 20_000.0;

    // Time to confirm a single target in the middle of the region.
    let mut times = Vec::new();
    for seed in 0..runs {
        let mut cfg = MissionConfig::reference(
            ScenarioKind::Fixed,
            PolicyConfig::Sss(SssConfig::new(StochasticProcess::UNIFORM)),
        );
        cfg.targets = vec![TargetSpec::fixed(10_000.0, 10_000.0)];
        cfg.n_uavs = 1;
        cfg.horizon = horizon;
        cfg.mode = MissionMode::Efficiency;
        cfg.seed = seed;
        times.push(run_mission(&cfg)?.completion_time.unwrap_or(f64::INFINITY));
    }

    let t_d = 1000.0;
    println!("{:>7} {:>8} {:>8} {:>10}", "t", "P_CS", "P_CM", "empirical");
    for i in 1..=10 {
        let t = i as f64 * 2000.0;
        let emp = times.iter().filter(|&&x| x <= t).count() as f64 / runs as f64;
        let pcs = analytic_pcs(t, R_N, SPEED, AREA)?;
        let pcm = analytic_pcm(t, t_d, R_N, SPEED, AREA, sensing_area(R_1))?;
        println!("{t:>7} {pcs:>8.4} {pcm:>8.4} {emp:>10.4}");
    }
    Ok(())
}
