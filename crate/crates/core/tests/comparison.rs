mod common;

use barenblatt::comparison::*;
use barenblatt::profiles::{log_tail_constants, InitialData};
use barenblatt::ModelParams;
use common::{fd1, fd2};

fn fast() -> GridSpec {
    GridSpec::new(GridPreset::Fast)
}

fn canonical(p: &ModelParams) -> (InitialData, f64, f64) {
    let data = InitialData::log_tail(1.0, p.gamma()).unwrap();
    let (b, big_b) = log_tail_constants(&data, p.gamma(), 1e6);
    (data, b, big_b)
}

#[test]
fn supersolutions_certify_on_sample_triples() {
    for &(n, d, g) in &[(5, 0.5, 0.25), (7, 2.0, 0.75), (5, 1.0, 0.5)] {
        let p = ModelParams::new(n, d, g).unwrap();
        let sp = select_super_params(&p).unwrap();
        assert!(sp.is_admissible());
        let sup = MatchedSuper::new(&p, &sp).unwrap();
        let rep = certify(&sup, &fast(), None);
        assert!(rep.pass, "({n},{d},{g}): {}", rep.summary_line());
        assert!(rep.check("heat_identity").unwrap().value <= 1e-10);
        assert!(rep.check("corner_gap").unwrap().value > 0.0);
    }
}

#[test]
fn subsolutions_certify_on_sample_triples() {
    for &(n, d, g) in &[(5, 0.5, 0.25), (7, 2.0, 0.75), (5, 1.0, 0.5)] {
        let p = ModelParams::new(n, d, g).unwrap();
        let sub = MatchedSub::new(&p, &select_sub_params(&p).unwrap()).unwrap();
        let rep = certify(&sub, &fast(), None);
        assert!(rep.pass, "({n},{d},{g}): {}", rep.summary_line());
        assert!(rep.check("continuity").unwrap().value <= 1e-10);
        assert!(rep.check("inner_negative").unwrap().value < 0.0);
    }
}

#[test]
fn unit_t0_is_rejected() {
    let p = ModelParams::new(5, 1.0, 0.5).unwrap();
    let sp = select_super_params(&p).unwrap().with_t0(1.0);
    assert!(!sp.is_admissible());
    let rep = certify(&MatchedSuper::new(&p, &sp).unwrap(), &fast(), None);
    assert!(!rep.pass);
}

#[test]
fn larger_amplitude_and_shift_still_certify() {
    let p = ModelParams::new(5, 1.0, 0.5).unwrap();
    let sp = select_super_params(&p).unwrap();
    for variant in [sp.with_amplitude(100.0), sp.with_t0(10.0 * sp.t0)] {
        let rep = certify(&MatchedSuper::new(&p, &variant).unwrap(), &fast(), None);
        assert!(rep.pass, "{}", rep.summary_line());
    }
}

#[test]
fn ordering_certificates_and_controls() {
    let p = ModelParams::new(5, 1.0, 0.5).unwrap();
    let (data, b, big_b) = canonical(&p);
    let (sup, amp) = matched_super_for(&data, &p, big_b).unwrap();
    assert!(amp.margin > 0.0);
    let rep = certify(&sup, &fast(), Some(&data));
    assert!(rep.pass, "{}", rep.summary_line());

    let small = MatchedSuper::new(&p, &sup.super_params().with_amplitude(amp.amplitude / 10.0)).unwrap();
    assert!(domination_margin(&small, &data, ORDERING_R_MAX) <= 0.0);
    assert_eq!(certify(&small, &fast(), Some(&data)).summary_line(), "FAIL initial_domination");

    let sub = matched_sub_for(&data, &p, b).unwrap();
    let sp = *sub.sub_params();
    assert!(sub_ordering_margin(&data, &p, &sp, ORDERING_R_MAX) > 0.0);
    assert!(certify(&sub, &fast(), Some(&data)).pass);
    assert!(sub_ordering_margin(&data, &p, &sp.with_a(10.0 * sp.a), ORDERING_R_MAX) < 0.0);
}

#[test]
fn sub_explicit_form() {
    let p = ModelParams::new(5, 1.0, 0.5).unwrap();
    let sp = select_sub_params(&p).unwrap().with_a(0.3);
    let outer = SubOuter::new(&p, &sp).unwrap();
    let expected = 0.3 * 5f64.powf(-0.25);
    assert!((outer.explicit_value(sp.xi0 + 2.0, 3.0) - expected).abs() < 1e-15);
    assert!((outer.chi(sp.xi0 + 2.0, 3.0).value - expected).abs() < 1e-14);
}

#[test]
fn analytic_partials_match_differences() {
    let p = ModelParams::new(5, 1.0, 0.5).unwrap();
    let sup = MatchedSuper::new(&p, &select_super_params(&p).unwrap()).unwrap();
    let sub = MatchedSub::new(&p, &select_sub_params(&p).unwrap()).unwrap();
    let sols: [&dyn ComparisonSolution; 2] = [&sup, &sub];
    for sol in sols {
        let rm = sol.matching_radius().unwrap();
        for &r in &[0.3 * rm, 0.7 * rm, 1.5 * rm, 20.0 * rm] {
            for &t in &[0.0, 3.0, 100.0] {
                let jet = sol.phi(r, t);
                let h = 1e-4 * r;
                let scale = 1.0 + jet.value.abs();
                assert!((fd1(|x| sol.phi(x, t).value, r, h) - jet.d_x).abs() * r <= 1e-5 * scale);
                assert!((fd2(|x| sol.phi(x, t).value, r, h) - jet.d_xx).abs() * r * r <= 1e-5 * scale);
                let ht = 1e-4 * (t + 1.0);
                let tc = t + ht;
                assert!((fd1(|s| sol.phi(r, s).value, tc, ht) - jet.d_t).abs() <= 1e-5 * scale + 2.0 * ht * jet.d_t.abs());
            }
        }
    }
}

#[test]
fn report_csv_has_one_row_per_check() {
    let p = ModelParams::new(5, 1.0, 0.5).unwrap();
    let rep = certify(&MatchedSub::new(&p, &select_sub_params(&p).unwrap()).unwrap(), &fast(), None);
    let mut buf = Vec::new();
    rep.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert_eq!(text.lines().count(), rep.checks.len() + 1);
    assert!(text.starts_with("check,value,relation"));
}
