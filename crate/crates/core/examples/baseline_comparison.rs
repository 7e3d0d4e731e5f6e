//! The two-level search against the single-sensor walks and the swarm
//! searches on one scenario, with the improvement ratios.
//!
//! ```text
//! cargo run --release --example baseline_comparison -- [fixed|popup|dynamic] [runs]
//! ```

use uav_search::metrics::{aggregate, aise, aise_alt, aisc};
use uav_search::policy::{MdmConfig, PsoConfig, PsoVariant, SssConfig};
use uav_search::{run_mission, MissionConfig, PolicyConfig, ScenarioKind, StochasticProcess};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let scenario = match args.next().as_deref() {
        None | Some("fixed") => ScenarioKind::Fixed,
        Some("popup") => ScenarioKind::Popup,
        Some("dynamic") => ScenarioKind::Dynamic,
        Some(other) => return Err(format!("unknown scenario {other}").into()),
    };
    let runs: u64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(50);

    let mdm = match scenario {
        ScenarioKind::Popup => MdmConfig::uniform_uniform(),
        _ => MdmConfig::levy_brownian(),
    };
    let policies = [
        PolicyConfig::Mdm(mdm),
        PolicyConfig::Sss(SssConfig::new(StochasticProcess::UNIFORM)),
        PolicyConfig::Sss(SssConfig::new(StochasticProcess::BROWNIAN)),
        PolicyConfig::Sss(SssConfig::new(StochasticProcess::LEVY)),
        PolicyConfig::Pso(PsoConfig::new(PsoVariant::Pso)),
        PolicyConfig::Pso(PsoConfig::new(PsoVariant::Spso)),
        PolicyConfig::Pso(PsoConfig::new(PsoVariant::Arpso)),
    ];

    let mut summaries = Vec::new();
    for p in &policies {
        let records = (0..runs)
            .map(|seed| {
                let mut cfg = MissionConfig::reference(scenario, p.clone());
                cfg.seed = seed;
                run_mission(&cfg)
            })
            .collect::<Result<Vec<_>, _>>()?;
        summaries.push((p.label(), aggregate(&records)?));
    }

    let (mdm_label, m) = summaries[0].clone();
    println!("{} targets, 12 UAVs, {runs} runs; ratios against {mdm_label}", scenario.name());
    println!("{:<12} {:>8} {:>7} {:>9} {:>8} {:>8} {:>8}", "policy", "mu(Tnc)", "sd", "mu(Ts)", "AISE", "AISE'", "AISC");
    for (label, s) in &summaries {
        let ts = s.mean_ts.map(|v| format!("{v:.0}")).unwrap_or_else(|| "-".into());
        let ratios = if *label == mdm_label {
            String::new()
        } else {
            let c = match (s.mean_ts, m.mean_ts) {
                (Some(b), Some(x)) => format!("{:8.1}", aisc(b, x)?),
                _ => format!("{:>8}", "-"),
            };
            format!("{:8.1} {:8.1} {c}", aise(m.mean_tnc, s.mean_tnc)?, aise_alt(m.mean_tnc, s.mean_tnc)?)
        };
        println!("{label:<12} {:>8.3} {:>7.3} {ts:>9} {ratios}", s.mean_tnc, s.sd_tnc);
    }
    Ok(())
}
