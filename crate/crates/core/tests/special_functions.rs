mod common;

use barenblatt::special::*;
use barenblatt::ModelParams;
use common::*;

#[test]
fn kummer_trivial_values() {
    for &(a, b) in &[(0.25, 0.5), (-1.5, 2.5), (3.0, 0.5)] {
        assert_eq!(kummer_m(a, b, 0.0).unwrap(), 1.0);
    }
    assert!((kummer_m(1.0, 1.0, 1.0).unwrap() - std::f64::consts::E).abs() < 1e-14);
    assert!(kummer_m(0.5, -2.0, 1.0).is_err());
    assert!(kummer_m(0.5, 0.5, -1.0).is_err());
}

#[test]
fn kummer_against_big_integer_series() {
    let oracle = kummer_fixed_point(Ratio(1, 4), Ratio(1, 2), Ratio(4, 1), 60);
    // frozen from the same series at 60 digits
    assert!((oracle - 20.420_939_405_034_18).abs() < 1e-12);
    let m = kummer_m(0.25, 0.5, 4.0).unwrap();
    assert!((m - oracle).abs() / oracle < 1e-14, "{m} vs {oracle}");
    for &(a, b, z) in &[(Ratio(1, 8), Ratio(1, 2), Ratio(25, 1)), (Ratio(3, 8), Ratio(3, 2), Ratio(81, 2))] {
        let o = kummer_fixed_point(a, b, z, 80);
        let v = kummer_m(a.0 as f64 / a.1 as f64, b.0 as f64 / b.1 as f64, z.0 as f64 / z.1 as f64).unwrap();
        assert!((v - o).abs() / o < 1e-12, "{v} vs {o}");
    }
}

#[test]
fn kummer_overflow_is_reported() {
    assert!(matches!(kummer_m(2.0, 0.5, 800.0), Err(barenblatt::Error::Overflow(_))));
}

#[test]
fn phi_normalization_and_gaussian_case() {
    let j = PhiProfile::new(0.5).unwrap().eval(0.0);
    assert_eq!((j.value, j.d1), (1.0, 0.0));
    let g = PhiProfile::new(1.0).unwrap();
    assert!((g.value(2.0) - (-1.0f64).exp()).abs() < 1e-15);
    assert!(g.is_exploratory());
    assert!(PhiProfile::new(0.0).is_err());
}

#[test]
fn phi_matches_ode_integration() {
    let (v, d) = phi_ivp(0.5, 3.0);
    // frozen from the IVP oracle
    assert!((v - 0.474_481_921_940_980_06).abs() < 1e-11);
    let phi = PhiProfile::new(0.5).unwrap();
    assert!((phi.value(3.0) - v).abs() < 1e-11);
    assert!((phi.eval(3.0).d1 - d).abs() < 1e-11);
    for &g in &[0.1, 0.25, 0.75, 0.9] {
        let phi = PhiProfile::new(g).unwrap();
        for i in 1..=20 {
            let z = i as f64;
            let (v, _) = phi_ivp(g, z);
            assert!((phi.value(z) - v).abs() <= 1e-9 * v.abs().max(1e-300), "γ={g} z={z}");
        }
    }
}

#[test]
fn phi_sign_and_residual() {
    for &g in &[0.1, 0.25, 0.5, 0.75, 0.9] {
        let phi = PhiProfile::new(g).unwrap();
        for i in 1..=3000 {
            let z = 0.01 * i as f64;
            let j = phi.eval(z);
            assert!(j.value > 0.0 && j.d1 < 0.0, "γ={g} z={z}");
            assert!(phi.ode_residual(z).abs() <= 1e-8 * (1.0 + j.value.abs()));
        }
    }
}

#[test]
fn phi_tail_constant_matches_asymptotics() {
    for &g in &[0.25, 0.5, 0.75] {
        let phi = PhiProfile::new(g).unwrap();
        let z: f64 = 200.0;
        let scaled = z.powf(g) * phi.value(z);
        assert!((scaled - phi.tail_constant()).abs() / phi.tail_constant() < 1e-3, "γ={g}");
    }
    let e = phi_asymptotic_constants(0.5, 1.0, 50.0).unwrap();
    assert!(e.value.0 > 0.0 && e.slope.0 > 0.0 && e.curvature.1.is_finite());
    let g1 = phi_asymptotic_constants(1.0, 1.0, 20.0).unwrap();
    assert!(g1.value.0 > 0.0);
    assert!(phi_asymptotic_constants(0.5, 0.5, 2.0).is_err());
}

#[test]
fn rho_matches_bessel_and_ivp() {
    let rho = RhoProfile::new(4.0).unwrap();
    assert!((rho.value(0.1) - 0.990_024_972_239_576_4).abs() < 1e-15);
    let (v, d) = rho_ivp(4.0, 0.1);
    assert!((rho.value(0.1) - v).abs() < 1e-11 && (rho.eval(0.1).d1 - d).abs() < 1e-10);
    let zero = RhoProfile::new(1.0).unwrap().first_zero();
    assert!((zero - 2.404_825_557_695_772_8).abs() < 1e-10);
    assert!((bisect(bessel_j0, 2.0, 3.0, 1e-14) - zero).abs() < 1e-10);
}

#[test]
fn rho_residual_and_monotonicity() {
    for &l in &[0.3, 1.25, 2.5, 7.0] {
        let rho = RhoProfile::new(l).unwrap();
        let s0 = sigma0_of(l).unwrap();
        let mut prev = f64::INFINITY;
        for i in 0..=1000 {
            let s = s0 * i as f64 / 1000.0;
            assert!(rho.ode_residual(s).abs() <= 1e-9);
            let v = rho.value(s);
            assert!(v > 0.0 && v <= prev);
            prev = v;
        }
    }
}

#[test]
fn hat_phi_identities_and_inequality() {
    let h = HatPhiProfile::new(0.5).unwrap();
    let xs: Vec<f64> = (1..200).map(|i| 0.1 * i as f64).collect();
    let (e1, e2) = derivative_mismatch(&h, &xs, 1e-5);
    assert!(e1 < 1e-6 && e2 < 1e-6, "{e1} {e2}");
    let g = 0.5;
    for &z in &[0.1f64, 1.0, 10.0] {
        let w = 1.0 + z * z / 4.0;
        let expanded = (g / 4.0 + g * (g + 3.0) * z * z / 16.0) * w.powf(-g / 2.0 - 2.0) - g / 4.0 * w.powf(-g / 2.0 - 1.0);
        let r = h.inequality_residual(z);
        assert!(r >= 0.0);
        assert!((r - expanded).abs() < 1e-14, "z={z}: {r} vs {expanded}");
    }
}

#[test]
fn derivatives_agree_with_differences() {
    let xs: Vec<f64> = (1..100).map(|i| 0.2 * i as f64).collect();
    let phi = PhiProfile::new(0.5).unwrap();
    let (a, b) = derivative_mismatch(&phi, &xs, 1e-5);
    assert!(a < 1e-6 && b < 1e-6);
    let rho = RhoProfile::new(1.25).unwrap();
    let ss: Vec<f64> = (1..100).map(|i| 0.0099 * i as f64).collect();
    let (a, b) = derivative_mismatch(&rho, &ss, 1e-5);
    assert!(a < 1e-6 && b < 1e-6);
}

#[test]
fn matching_factor_limits() {
    let p = ModelParams::new(5, 1.0, 0.5).unwrap();
    let s0 = sigma0_of(p.lambda()).unwrap();
    let f = MatchingFactor::new(&p, 5.0, 10.0).unwrap();
    assert!((f.value(1e8) - 1.0).abs() < 1e-3);
    let bound = f.bound();
    let mut worst = 0.0f64;
    for i in 0..=4000 {
        let t = 1e4 * (i as f64 / 4000.0).powi(3);
        worst = worst.max((t + 10.0).powi(2) * f.eval(t).d1.abs());
    }
    assert!(worst <= bound.constant, "{worst} > {}", bound.constant);
    assert!(MatchingFactor::new(&p, 5.0, 0.5 / (s0 * s0)).is_err());
}
