mod common;

use barenblatt::comparison::{matched_sub_for, matched_super_for, MatchedSub};
use barenblatt::profiles::{log_tail_constants, InitialData, RadialData};
use barenblatt::solver::*;
use barenblatt::ModelParams;
use rand::rngs::StdRng;
use rand::SeedableRng;

fn p5() -> ModelParams {
    ModelParams::new(5, 1.0, 0.5).unwrap()
}

fn to_ten() -> SolverConfig {
    SolverConfig::default().with_resolution(512).with_outputs(0.1, 10.0, 8)
}

#[test]
fn zero_and_constants_are_stationary() {
    let z = solve(&InitialData::Zero, &to_ten(), &p5()).unwrap();
    assert!((0..z.len()).all(|k| z.sup_value(k).abs() <= 1e-6));
    let c = solve(&InitialData::constant(0.7).unwrap(), &to_ten(), &p5()).unwrap();
    let dev = c.fields.last().unwrap().iter().map(|v| (v - 0.7).abs()).fold(0.0, f64::max);
    assert!(dev <= 1e-6, "{dev}");
}

#[test]
fn bump_stays_nonnegative_and_decays() {
    let tr = solve(&InitialData::bump(1.0, 0.5, 2.0).unwrap(), &to_ten(), &p5()).unwrap();
    assert!((0..tr.len()).all(|k| tr.min_value(k) >= -1e-10));
    assert!(tr.sup_value(tr.len() - 1) < tr.sup_value(0));
    assert!(tr.stats.min_value >= -1e-10);
}

#[test]
fn random_pairs_stay_ordered() {
    let mut rng = StdRng::seed_from_u64(7);
    let c = common::pair_config();
    for _ in 0..6 {
        let (lo, hi) = common::random_ordered_pair(&mut rng);
        let a = solve(&lo, &c, &p5()).unwrap();
        let b = solve(&hi, &c, &p5()).unwrap();
        let (gap, floor) = common::pair_margins(&a, &b);
        assert!(gap >= -1e-6 && floor >= -1e-10, "gap {gap}, floor {floor}");
    }
}

#[test]
fn refinement_ratio() {
    let d = common::bump_refinement(&[512, 1024, 2048]);
    assert!(d[0] / d[1] >= 3.0, "{d:?}");
}

#[test]
fn far_boundary_does_not_reach_origin() {
    let data = InitialData::log_tail(1.0, 0.5).unwrap();
    let mut c = SolverConfig::default().with_resolution(1024).with_outputs(1.0, 1e2, 8);
    let pinned = solve(&data, &c, &p5()).unwrap();
    c.boundary = FarBoundary::HomogeneousSecondDerivative;
    let free = solve(&data, &c, &p5()).unwrap();
    let k = pinned.len() - 1;
    assert!((pinned.origin_value(k) - free.origin_value(k)).abs() < 1e-6);
    assert_ne!(pinned.config_hash, free.config_hash);
}

#[test]
fn identical_runs_hash_and_match() {
    let data = InitialData::bump(1.0, 0.5, 2.0).unwrap();
    let a = solve(&data, &to_ten(), &p5()).unwrap();
    let b = solve(&data, &to_ten(), &p5()).unwrap();
    assert_eq!(a.config_hash, b.config_hash);
    assert_eq!(a.fields, b.fields);
    assert_eq!(a.times[0], 0.0);
    assert_eq!(a.descriptor, "bump(height=1,r_a=0.5,r_b=2)");
}

#[test]
fn invalid_inputs_are_rejected() {
    let bad = barenblatt::profiles::initial_phi_from_psi("neg", |r| 1.0 - r);
    assert!(bad.is_err());
    let mut c = to_ten();
    c.t_end = 1e4;
    c.output_times = vec![1e4];
    c.xi_max = 100.0;
    assert!(solve(&InitialData::Zero, &c, &p5()).is_err());
    assert!(required_xi_max(1e4) <= SolverConfig::default().xi_max);
}

#[test]
fn sandwich_with_zero_and_super() {
    let p = p5();
    let data = InitialData::log_tail(1.0, 0.5).unwrap();
    let (_, big_b) = log_tail_constants(&data, 0.5, 1e6);
    let (sup, _) = matched_super_for(&data, &p, big_b).unwrap();
    let c = SolverConfig::default().with_resolution(1024).with_outputs(1.0, 1e2, 8);
    let (rep, traj) = sandwich_run(&data, &c, &p, Barrier::Zero, Barrier::Solution(&sup)).unwrap();
    assert!(rep.pass, "{:?}", rep.failure());
    assert_eq!(rep.rows.len(), traj.unwrap().len() - 1);
    assert!((rep.tol - SANDWICH_REL_TOL * data.value(0.0)).abs() < 1e-15);
}

#[test]
fn oversized_sub_stops_before_stepping() {
    let p = p5();
    let data = InitialData::log_tail(1.0, 0.5).unwrap();
    let (b, big_b) = log_tail_constants(&data, 0.5, 1e6);
    let sub = matched_sub_for(&data, &p, b).unwrap();
    let (sup, _) = matched_super_for(&data, &p, big_b).unwrap();
    let big = MatchedSub::new(&p, &sub.sub_params().with_a(0.99)).unwrap();
    let (rep, traj) = sandwich_run(&data, &to_ten(), &p, Barrier::Solution(&big), Barrier::Solution(&sup)).unwrap();
    assert!(traj.is_none() && !rep.pass && rep.rows.is_empty());
    assert_eq!(rep.failure().unwrap(), "initial ordering violated on the lower side");
}
