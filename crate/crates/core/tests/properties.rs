use proptest::prelude::*;

use uav_search::events::Disk;
use uav_search::metrics::{analytic_pcm, analytic_pcs, mean_sd, sensing_area};
use uav_search::policy::mdm::{constrain_to_disk, decay_index};
use uav_search::policy::IndexConstants;
use uav_search::sensing::{detect, SensorSpec};
use uav_search::vehicle::{next_waypoint, pursuit_command, UavKinematics, VehicleParams};
use uav_search::world::{DynamicDrawMode, World};
use uav_search::{Region, RngStream, TargetSpec, Vec2};

const L: f64 = 20_000.0;

fn region() -> Region {
    Region::new(L, L).unwrap()
}

fn point() -> impl Strategy<Value = Vec2> {
    (0.0..=L, 0.0..=L).prop_map(|(x, y)| Vec2::new(x, y))
}

fn heading() -> impl Strategy<Value = Vec2> {
    (0.0..std::f64::consts::TAU).prop_map(Vec2::from_angle)
}

proptest! {
    #[test]
    fn reflection_lands_inside(x in -L..2.0 * L, y in -L..2.0 * L) {
        prop_assert!(region().contains(region().reflect(Vec2::new(x, y))));
    }

    #[test]
    fn waypoints_never_leave_region(
        from in point(),
        delta in 1.0..12_000.0f64,
        first in heading(),
        redraws in prop::collection::vec(heading(), 32),
    ) {
        let mut it = redraws.into_iter().cycle();
        let wp = next_waypoint(from, delta, first, &region(), || it.next().unwrap());
        prop_assert!(region().contains(wp));
    }

    #[test]
    fn localized_waypoints_stay_in_disk(
        center in point(),
        radius in 10.0..5000.0f64,
        candidate in (-L..2.0 * L, -L..2.0 * L),
        redraws in prop::collection::vec((-L..2.0 * L, -L..2.0 * L), 32),
    ) {
        let disk = Disk { center, radius };
        let mut it = redraws.into_iter().cycle().map(|(x, y)| Vec2::new(x, y));
        let wp = constrain_to_disk(Vec2::new(candidate.0, candidate.1), disk, &region(), || it.next().unwrap());
        prop_assert!(region().contains(wp));
        prop_assert!(wp.distance(center) <= radius * (1.0 + 1e-9));
    }

    #[test]
    fn lag_steps_compose(
        v in (-30.0..30.0f64, -30.0..30.0f64),
        q in heading(),
        dt in 0.01..2.0f64,
    ) {
        let params = VehicleParams::default();
        let mut s = UavKinematics::at_rest(Vec2::new(5000.0, 5000.0), &params);
        s.velocity = Vec2::new(v.0, v.1);
        s.command = q * params.speed;
        let (twice, once) = (s.step(dt).step(dt), s.step(2.0 * dt));
        prop_assert!(twice.position.distance(once.position) < 1e-9);
        prop_assert!(twice.velocity.distance(once.velocity) < 1e-9);
    }

    #[test]
    fn pursuit_command_has_cruise_speed(at in point(), to in point()) {
        prop_assume!(at.distance(to) > 1e-6);
        let params = VehicleParams::default();
        let q = pursuit_command(&UavKinematics::at_rest(at, &params), to);
        prop_assert!((q.norm() - params.speed).abs() < 1e-12);
    }

    #[test]
    fn index_decays_monotonically(a in 0.0..5000.0f64, b in 0.0..5000.0f64) {
        let c = IndexConstants::default();
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        prop_assert!(decay_index(lo, &c) >= decay_index(hi, &c));
        prop_assert!(decay_index(hi, &c) >= c.gamma);
    }

    #[test]
    fn localized_confirmation_dominates(t in 1e-3..5000.0f64, t_d in 1e-3..5000.0f64, r_prev in 400.0..11_000.0f64) {
        let a_prev = sensing_area(r_prev);
        prop_assume!(a_prev < 4e8);
        let pcm = analytic_pcm(t, t_d, 400.0, 20.0, 4e8, a_prev).unwrap();
        let pcs = analytic_pcs(t, 400.0, 20.0, 4e8).unwrap();
        prop_assert!(pcm >= pcs);
        prop_assert!((0.0..=1.0).contains(&pcm));
    }

    #[test]
    fn aggregation_ignores_order(mut xs in prop::collection::vec(0.0..10.0f64, 1..60), seed in any::<u64>()) {
        let before = mean_sd(&xs).unwrap();
        let mut rng = RngStream::new(seed, 0);
        for i in (1..xs.len()).rev() {
            let j = (rng.unit() * (i + 1) as f64) as usize;
            xs.swap(i, j.min(i));
        }
        let after = mean_sd(&xs).unwrap();
        prop_assert_eq!(before.0.to_bits(), after.0.to_bits());
        prop_assert_eq!(before.1.to_bits(), after.1.to_bits());
    }

    #[test]
    fn detection_is_monotone_in_radius(uav in point(), target in point(), r in 1.0..10_000.0f64, extra in 0.0..5000.0f64) {
        let world = World::new(region(), &[TargetSpec::fixed(target.x, target.y)], DynamicDrawMode::PerAxis).unwrap();
        if detect(&SensorSpec::detection(1, r), uav, world.targets()).is_some() {
            prop_assert!(detect(&SensorSpec::detection(1, r + extra), uav, world.targets()).is_some());
        }
    }

    #[test]
    fn dynamic_targets_stay_in_region(x in 0.0..=L, y in 0.0..=L, seed in any::<u64>()) {
        let spec = TargetSpec::dynamic(x, y, 5.0, (-0.2, 1.0));
        let corner = TargetSpec::dynamic(0.0, 0.0, 5.0, (-1.0, 0.1));
        let mut world = World::new(region(), &[spec, corner], DynamicDrawMode::PerAxis).unwrap();
        let mut rng = RngStream::new(seed, u64::MAX);
        for _ in 0..2000 {
            world.step_dynamic_targets(0.1, &mut rng);
            prop_assert!(world.targets().iter().all(|t| region().contains(t.position)));
        }
    }
}
