//! Whole-mission behaviour: determinism, isolation between agents, event-log
//! causality and the single-UAV confirmation curve.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use uav_search::events::{Event, EventKind};
use uav_search::metrics::analytic_pcs;
use uav_search::policy::{MdmConfig, PsoConfig, PsoVariant, SssConfig};
use uav_search::scenario::{with_false_targets, DEFAULT_FALSE_TARGETS, POPUP_INTERVAL};
use uav_search::{run_mission, MissionConfig, MissionMode, PolicyConfig, ScenarioKind, StochasticProcess, TargetSpec};

fn mission(scenario: ScenarioKind, policy: PolicyConfig, seed: u64) -> MissionConfig {
    let mut cfg = MissionConfig::reference(scenario, policy);
    cfg.seed = seed;
    cfg.record_events = true;
    cfg.mode = MissionMode::Efficiency;
    cfg
}

fn all_policies() -> Vec<PolicyConfig> {
    vec![
        PolicyConfig::Mdm(MdmConfig::levy_brownian()),
        PolicyConfig::Mdm(MdmConfig::uniform_uniform()),
        PolicyConfig::Sss(SssConfig::new(StochasticProcess::LEVY)),
        PolicyConfig::Pso(PsoConfig::new(PsoVariant::Arpso)),
    ]
}

#[test]
fn identical_seeds_give_identical_records() {
    for policy in all_policies() {
        let cfg = mission(ScenarioKind::Dynamic, policy, 77);
        let a = serde_json::to_vec(&run_mission(&cfg).unwrap()).unwrap();
        let b = serde_json::to_vec(&run_mission(&cfg).unwrap()).unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn event_recording_does_not_change_outcomes() {
    let mut cfg = mission(ScenarioKind::Fixed, PolicyConfig::Mdm(MdmConfig::levy_brownian()), 5);
    let with = run_mission(&cfg).unwrap();
    cfg.record_events = false;
    let without = run_mission(&cfg).unwrap();
    assert!(without.events.is_empty());
    assert_eq!(with.confirmations, without.confirmations);
}

fn agent_events(events: &[Event], agent: usize, before: f64) -> Vec<Event> {
    events.iter().filter(|e| e.agent == agent && e.time < before).cloned().collect()
}

#[test]
fn agents_do_not_influence_each_other() {
    // Agent 0 starts at the origin for any fleet size. Until some other
    // agent confirms a target its trajectory must not depend on the fleet.
    for policy in [
        PolicyConfig::Mdm(MdmConfig::levy_brownian()),
        PolicyConfig::Sss(SssConfig::new(StochasticProcess::BROWNIAN)),
    ] {
        for seed in 0..5 {
            let mut solo = mission(ScenarioKind::Fixed, policy.clone(), seed);
            solo.n_uavs = 1;
            let fleet = mission(ScenarioKind::Fixed, policy.clone(), seed);
            let (a, b) = (run_mission(&solo).unwrap(), run_mission(&fleet).unwrap());
            let cutoff = b.confirmations.iter().filter(|c| c.uav != 0).map(|c| c.time).fold(f64::INFINITY, f64::min);
            let cutoff = cutoff.min(solo.horizon);
            let (ea, eb) = (agent_events(&a.events, 0, cutoff), agent_events(&b.events, 0, cutoff));
            assert!(!ea.is_empty());
            assert_eq!(ea, eb, "seed {seed}");
        }
    }
}

#[test]
fn confirmations_are_causal() {
    for policy in all_policies() {
        for scenario in [ScenarioKind::Fixed, ScenarioKind::Popup, ScenarioKind::Dynamic] {
            let cfg = mission(scenario, policy.clone(), 9);
            let r = run_mission(&cfg).unwrap();
            let mut last = 0.0;
            for c in &r.confirmations {
                assert!(c.time >= last);
                last = c.time;
            }
            for e in &r.events {
                if let EventKind::Confirmation { target, uav_position, target_position, sensor_radius } = e.kind {
                    assert!(uav_position.distance(target_position) < sensor_radius);
                    assert!((sensor_radius - 400.0).abs() < 1e-9);
                    if scenario == ScenarioKind::Fixed {
                        assert_eq!(target_position, cfg.targets[target].position());
                    }
                    if scenario == ScenarioKind::Popup {
                        assert!(e.time >= POPUP_INTERVAL * (target + 1) as f64);
                    }
                }
            }
            assert!(r.targets_confirmed <= r.real_targets);
        }
    }
}

#[test]
fn false_targets_are_never_confirmed() {
    for seed in 0..4 {
        let mut cfg = MissionConfig::reference(ScenarioKind::Fixed, PolicyConfig::Mdm(MdmConfig::levy_brownian()));
        cfg.targets = with_false_targets(cfg.targets.clone(), &DEFAULT_FALSE_TARGETS);
        cfg.seed = seed;
        let r = run_mission(&cfg).unwrap();
        assert_eq!(r.real_targets, 7);
        assert!(r.confirmations.iter().all(|c| !DEFAULT_FALSE_TARGETS.contains(&c.target)));
        if let Some(ts) = r.completion_time {
            assert_eq!(r.confirmations.len(), 7);
            assert_eq!(ts, r.confirmations.last().unwrap().time);
        }
    }
}

#[test]
fn waypoints_stay_in_region() {
    for policy in all_policies() {
        let r = run_mission(&mission(ScenarioKind::Fixed, policy, 3)).unwrap();
        for e in &r.events {
            if let EventKind::Waypoint { waypoint, .. } = e.kind {
                assert!((0.0..=20_000.0).contains(&waypoint.x) && (0.0..=20_000.0).contains(&waypoint.y));
            }
        }
    }
}

#[test]
fn single_uav_confirmation_curve_tracks_random_search_model() {
    const RUNS: usize = 2000;
    const HORIZON: f64 = 20_000.0;
    let mut placement = ChaCha20Rng::seed_from_u64(2024);
    let mut times = Vec::with_capacity(RUNS);
    for seed in 0..RUNS as u64 {
        let mut cfg = MissionConfig::reference(
            ScenarioKind::Fixed,
            PolicyConfig::Sss(SssConfig::new(StochasticProcess::UNIFORM)),
        );
        cfg.targets = vec![TargetSpec::fixed(placement.random_range(0.0..20_000.0), placement.random_range(0.0..20_000.0))];
        cfg.n_uavs = 1;
        cfg.horizon = HORIZON;
        cfg.mode = MissionMode::Efficiency;
        cfg.seed = seed;
        times.push(run_mission(&cfg).unwrap().completion_time.unwrap_or(f64::INFINITY));
    }
    let mut sup = 0.0f64;
    for k in 1..=200 {
        let t = HORIZON * k as f64 / 200.0;
        let empirical = times.iter().filter(|&&x| x <= t).count() as f64 / RUNS as f64;
        let model = analytic_pcs(t, 400.0, 20.0, 4e8).unwrap();
        sup = sup.max((empirical - model).abs());
    }
    println!("sup-norm distance to the random-search curve: {sup:.4}");
    assert!(sup <= 0.1, "sup-norm {sup}");
}
