//! Independent reference computations used only by the test suites.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

/// A rational number `num/den` for exact series coefficients.
#[derive(Clone, Copy, Debug)]
pub struct Ratio(pub i64, pub i64);

/// `M(a, b, ζ)` by summing the series in fixed point with `digits` decimal
/// digits after the point. All of `a`, `b`, `ζ` are exact rationals.
pub fn kummer_fixed_point(a: Ratio, b: Ratio, zeta: Ratio, digits: u32) -> f64 {
    let scale = BigInt::from(10).pow(digits);
    let mut term = scale.clone();
    let mut sum = scale.clone();
    let mut k: i64 = 0;
    loop {
        // term *= (a+k)/(b+k) * ζ/(k+1)
        let num = BigInt::from(a.0 + a.1 * k) * BigInt::from(b.1) * BigInt::from(zeta.0);
        let den = BigInt::from(a.1) * BigInt::from(b.0 + b.1 * k) * BigInt::from(zeta.1) * BigInt::from(k + 1);
        term = term * num / den;
        if term.is_zero() {
            break;
        }
        sum += &term;
        k += 1;
        assert!(k < 100_000);
    }
    big_to_f64(&sum, digits)
}

fn big_to_f64(x: &BigInt, digits: u32) -> f64 {
    let s = x.to_string();
    let neg = s.starts_with('-');
    let body = s.trim_start_matches('-');
    let int_len = body.len() as i64 - digits as i64;
    let lead: String = body.chars().take(20).collect();
    let mantissa = lead.parse::<f64>().unwrap();
    let exp10 = int_len - lead.len() as i64;
    let v = mantissa * 10f64.powi(exp10 as i32);
    let _ = x.to_f64();
    if neg {
        -v
    } else {
        v
    }
}

/// Adaptive Dormand–Prince 5(4) integration of `y' = f(x, y)` from `x0` to
/// `x1`, with mixed absolute/relative tolerance `tol`.
pub fn dopri5<F>(f: F, x0: f64, y0: &[f64], x1: f64, tol: f64) -> Vec<f64>
where
    F: Fn(f64, &[f64]) -> Vec<f64>,
{
    const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
    const A: [[f64; 6]; 7] = [
        [0.0; 6],
        [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
        [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
        [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
        [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
        [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
    ];
    const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
    const B4: [f64; 7] = [
        5179.0 / 57600.0,
        0.0,
        7571.0 / 16695.0,
        393.0 / 640.0,
        -92097.0 / 339200.0,
        187.0 / 2100.0,
        1.0 / 40.0,
    ];
    let n = y0.len();
    let mut x = x0;
    let mut y = y0.to_vec();
    let mut h = (x1 - x0) * 1e-4;
    while (x1 - x) * (x1 - x0).signum() > 0.0 {
        if (x + h - x1) * (x1 - x0).signum() > 0.0 {
            h = x1 - x;
        }
        let mut k: Vec<Vec<f64>> = Vec::with_capacity(7);
        for s in 0..7 {
            let mut ys = y.clone();
            for (j, kj) in k.iter().enumerate() {
                for i in 0..n {
                    ys[i] += h * A[s][j] * kj[i];
                }
            }
            k.push(f(x + C[s] * h, &ys));
        }
        let mut y5 = y.clone();
        let mut err = 0.0f64;
        for i in 0..n {
            let mut d5 = 0.0;
            let mut d4 = 0.0;
            for s in 0..7 {
                d5 += B5[s] * k[s][i];
                d4 += B4[s] * k[s][i];
            }
            y5[i] += h * d5;
            let sc = tol * (1.0 + y[i].abs().max(y5[i].abs()));
            err = err.max((h * (d5 - d4)).abs() / sc);
        }
        if err <= 1.0 {
            x += h;
            y = y5;
        }
        let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h *= fac;
    }
    y
}

/// `Φ(z)`, `Φ'(z)` by integrating `Φ'' = -(z/2)Φ' - (γ/2)Φ` from the origin.
pub fn phi_ivp(gamma: f64, z: f64) -> (f64, f64) {
    let y = dopri5(
        |x, y| vec![y[1], -0.5 * x * y[1] - 0.5 * gamma * y[0]],
        0.0,
        &[1.0, 0.0],
        z,
        1e-13,
    );
    (y[0], y[1])
}

/// `ρ(σ)`, `ρ'(σ)` for `ρ'' + ρ'/σ + λρ = 0`, started from the Frobenius
/// expansion at a small `σ`.
pub fn rho_ivp(lambda: f64, sigma: f64) -> (f64, f64) {
    let s0 = 1e-4 * sigma.min(1.0);
    let x = lambda * s0 * s0 / 4.0;
    let r0 = 1.0 - x + x * x / 4.0;
    let d0 = -lambda * s0 / 2.0 * (1.0 - x / 2.0);
    let y = dopri5(|s, y| vec![y[1], -y[1] / s - lambda * y[0]], s0, &[r0, d0], sigma, 1e-13);
    (y[0], y[1])
}

/// Bessel `J₀` by its own power series, for bisection oracles.
pub fn bessel_j0(x: f64) -> f64 {
    let q = x * x / 4.0;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..200 {
        term *= -q / (k as f64 * k as f64);
        sum += term;
    }
    sum
}

pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let flo = f(lo);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if (f(mid) > 0.0) == (flo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Central second difference of `f` at `x`.
pub fn fd2<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h)
}

pub fn fd1<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}

/// Random nonnegative radial data built from a few bumps and an optional
/// log tail, as `(lower, upper)` with `lower ≤ upper` pointwise.
pub fn random_ordered_pair(rng: &mut impl rand::Rng) -> (barenblatt::profiles::RadialFunction, barenblatt::profiles::RadialFunction) {
    use barenblatt::profiles::{initial_phi_from_psi, InitialData, RadialData};
    fn draw(rng: &mut impl rand::Rng) -> Vec<InitialData> {
        let mut parts = Vec::new();
        for _ in 0..rng.gen_range(1..=3) {
            let r_a = rng.gen_range(0.0..3.0);
            parts.push(InitialData::bump(rng.gen_range(0.05..1.0), r_a, r_a + rng.gen_range(0.3..3.0)).unwrap());
        }
        if rng.gen_bool(0.5) {
            parts.push(InitialData::log_tail(rng.gen_range(0.1..1.0), rng.gen_range(0.2..0.9)).unwrap());
        }
        parts
    }
    let base = draw(rng);
    let extra = draw(rng);
    let lo = base.clone();
    let hi: Vec<InitialData> = base.into_iter().chain(extra).collect();
    let sum = |parts: Vec<InitialData>| move |r: f64| parts.iter().map(|p| p.value(r)).sum::<f64>();
    (
        initial_phi_from_psi("random-lower", sum(lo)).unwrap(),
        initial_phi_from_psi("random-upper", sum(hi)).unwrap(),
    )
}

/// Short run on a coarse grid with a fixed step schedule.
pub fn pair_config() -> barenblatt::solver::SolverConfig {
    let mut c = barenblatt::solver::SolverConfig::default().with_resolution(256).with_outputs(0.1, 5.0, 6);
    c.xi_max = 30.0;
    c.stepping = barenblatt::solver::TimeStepping::Geometric { dt0: 1e-4, growth: 1.1, max_frac: 0.05 };
    c
}

/// `(min over outputs of upper − lower, min over outputs of both fields)`.
pub fn pair_margins(lo: &barenblatt::solver::Trajectory, hi: &barenblatt::solver::Trajectory) -> (f64, f64) {
    let mut gap = f64::INFINITY;
    let mut floor = f64::INFINITY;
    for (a, b) in lo.fields.iter().zip(&hi.fields) {
        for (x, y) in a.iter().zip(b) {
            gap = gap.min(y - x);
            floor = floor.min(x.min(*y));
        }
    }
    (gap, floor)
}

/// Sup-norm differences at `t = 1` between successive doublings of the grid,
/// for the bump `(1, 0.5, 2)`, compared at shared nodes.
pub fn bump_refinement(resolutions: &[usize]) -> Vec<f64> {
    use barenblatt::profiles::InitialData;
    use barenblatt::solver::{solve, SolverConfig, TimeStepping};
    let p = barenblatt::ModelParams::new(5, 1.0, 0.5).unwrap();
    let data = InitialData::bump(1.0, 0.5, 2.0).unwrap();
    let mut prev: Option<Vec<f64>> = None;
    let mut diffs = Vec::new();
    for &n in resolutions {
        let mut c = SolverConfig::default().with_resolution(n).with_outputs(1.0, 1.0, 1);
        c.stepping = TimeStepping::Geometric { dt0: 1e-6, growth: 1.05, max_frac: 0.002 };
        let field = solve(&data, &c, &p).unwrap().fields.pop().unwrap();
        if let Some(coarse) = &prev {
            diffs.push(coarse.iter().enumerate().map(|(i, v)| (v - field[2 * i]).abs()).fold(0.0, f64::max));
        }
        prev = Some(field);
    }
    diffs
}
