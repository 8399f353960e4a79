//! End-to-end acceptance run. Prints one `criterion k PASS|FAIL` line per
//! criterion and exits nonzero when the outcome differs from the expected one.
//!
//! Criterion 7 is expected to fail on its collapse clause: with a sup-norm
//! decaying like `t^{-1/2}`, the weight `(t+1)^{0.6}` makes the band grow
//! across `[10², 10⁴]` rather than fall by a factor of two.

mod common;

use std::time::Instant;

use barenblatt::comparison::*;
use barenblatt::profiles::{log_tail_constants, InitialData};
use barenblatt::rates::*;
use barenblatt::solver::{sandwich_run, solve, Barrier, SolverConfig};
use barenblatt::special::*;
use barenblatt::ModelParams;
use rand::rngs::StdRng;
use rand::SeedableRng;

const GAMMAS: [f64; 3] = [0.25, 0.5, 0.75];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn triples() -> Vec<ModelParams> {
    let mut out = Vec::new();
    for n in [5, 7] {
        for d in [0.5, 1.0, 2.0] {
            for g in GAMMAS {
                out.push(ModelParams::new(n, d, g).unwrap());
            }
        }
    }
    out
}

fn special_functions() -> Outcome {
    let mut phi_res = 0.0f64;
    for k in 1..=9 {
        let phi = PhiProfile::new(0.1 * k as f64).unwrap();
        for i in 0..=3000 {
            phi_res = phi_res.max(phi.ode_residual(0.01 * i as f64).abs());
        }
    }
    let gauss = PhiProfile::new(1.0).unwrap();
    let gauss_err = (0..=3000)
        .map(|i| 0.01 * i as f64)
        .map(|z| (gauss.value(z) - (-0.25 * z * z).exp()).abs())
        .fold(0.0, f64::max);
    let kum = (1..=9)
        .map(|k| {
            let g = 0.1 * k as f64;
            let phi = PhiProfile::new(g).unwrap();
            (20f64.powf(g) * phi.value(20.0) / phi.tail_constant() - 1.0).abs()
        })
        .fold(0.0, f64::max);
    let mut rho_res = 0.0f64;
    for lambda in [0.3, 0.75, 1.25, 2.5, 7.0] {
        let rho = RhoProfile::new(lambda).unwrap();
        let s0 = sigma0_of(lambda).unwrap();
        for i in 0..=2000 {
            rho_res = rho_res.max(rho.ode_residual(s0 * i as f64 / 2000.0).abs());
        }
    }
    let zs: Vec<f64> = (1..400).map(|i| 0.05 * i as f64).collect();
    let hat = GAMMAS
        .iter()
        .map(|&g| {
            let (a, b) = derivative_mismatch(&HatPhiProfile::new(g).unwrap(), &zs, 1e-5);
            a.max(b)
        })
        .fold(0.0, f64::max);
    let pass = phi_res <= 1e-8 && gauss_err <= 1e-12 && kum <= 0.01 && rho_res <= 1e-9 && hat <= 1e-6;
    outcome(
        pass,
        format!(
            "phi residual {phi_res:.2e}, gaussian {gauss_err:.2e}, kummer limit {:.3}%, rho residual {rho_res:.2e}, hat-phi fd {hat:.2e}",
            100.0 * kum
        ),
    )
}

fn supersolutions(spec: &GridSpec) -> Outcome {
    let mut worst = (f64::INFINITY, f64::INFINITY, 0.0f64);
    let mut failed = Vec::new();
    for p in triples() {
        let rep = match select_super_params(&p).and_then(|sp| MatchedSuper::new(&p, &sp)) {
            Ok(sup) => certify(&sup, spec, None),
            Err(e) => {
                failed.push(format!("({},{},{}) {e}", p.n(), p.d(), p.gamma()));
                continue;
            }
        };
        let res = ["residual_inner", "residual_outer"].iter().map(|id| rep.check(id).unwrap().value).fold(f64::INFINITY, f64::min);
        worst.0 = worst.0.min(res);
        worst.1 = worst.1.min(rep.check("corner_gap").unwrap().value);
        worst.2 = worst.2.max(rep.check("heat_identity").unwrap().value);
        if !rep.pass {
            failed.push(format!("({},{},{}) {}", p.n(), p.d(), p.gamma(), rep.summary_line()));
        }
    }
    let pass = failed.is_empty() && worst.0 >= -RESIDUAL_TOL && worst.1 > 0.0 && worst.2 <= 1e-10;
    outcome(
        pass,
        format!(
            "18 triples: min scaled residual {:.2e}, min corner gap {:.2e}, max heat identity {:.2e}{}",
            worst.0,
            worst.1,
            worst.2,
            if failed.is_empty() { String::new() } else { format!("; failed {failed:?}") }
        ),
    )
}

fn subsolutions(spec: &GridSpec) -> Outcome {
    let mut worst = (f64::NEG_INFINITY, 0.0f64, f64::NEG_INFINITY);
    let mut failed = Vec::new();
    for p in triples() {
        let rep = match select_sub_params(&p).and_then(|sp| MatchedSub::new(&p, &sp)) {
            Ok(sub) => certify(&sub, spec, None),
            Err(e) => {
                failed.push(format!("({},{},{}) {e}", p.n(), p.d(), p.gamma()));
                continue;
            }
        };
        let res = ["residual_inner", "residual_outer"].iter().map(|id| rep.check(id).unwrap().value).fold(f64::NEG_INFINITY, f64::max);
        worst.0 = worst.0.max(res);
        worst.1 = worst.1.max(rep.check("continuity").unwrap().value);
        worst.2 = worst.2.max(rep.check("inner_negative").unwrap().value);
        if !rep.pass {
            failed.push(format!("({},{},{}) {}", p.n(), p.d(), p.gamma(), rep.summary_line()));
        }
    }
    let pass = failed.is_empty() && worst.0 <= RESIDUAL_TOL && worst.1 <= 1e-10 && worst.2 < 0.0;
    outcome(
        pass,
        format!(
            "18 triples: max scaled residual {:.2e}, max matching gap {:.2e}, max inner P {:.2e}{}",
            worst.0,
            worst.1,
            worst.2,
            if failed.is_empty() { String::new() } else { format!("; failed {failed:?}") }
        ),
    )
}

fn ordering() -> Outcome {
    let mut lines = Vec::new();
    let mut pass = true;
    for g in GAMMAS {
        let p = ModelParams::new(5, 1.0, g).unwrap();
        let data = InitialData::log_tail(1.0, g).unwrap();
        let (b, big_b) = log_tail_constants(&data, g, ORDERING_R_MAX);
        let (sup, amp) = match matched_super_for(&data, &p, big_b) {
            Ok(x) => x,
            Err(e) => return outcome(false, format!("gamma {g}: {e}")),
        };
        let sub = match matched_sub_for(&data, &p, b) {
            Ok(x) => x,
            Err(e) => return outcome(false, format!("gamma {g}: {e}")),
        };
        let sp = *sub.sub_params();
        let up = domination_margin(&sup, &data, ORDERING_R_MAX);
        let lo = sub_ordering_margin(&data, &p, &sp, ORDERING_R_MAX);
        let small = MatchedSuper::new(&p, &sup.super_params().with_amplitude(amp.amplitude / 10.0)).unwrap();
        let up_ctl = domination_margin(&small, &data, ORDERING_R_MAX);
        let lo_ctl = sub_ordering_margin(&data, &p, &sp.with_a(10.0 * sp.a), ORDERING_R_MAX);
        pass &= up > 0.0 && lo > 0.0 && up_ctl <= 0.0 && lo_ctl <= 0.0;
        lines.push(format!("gamma {g}: margins {up:.2e}/{lo:.2e}, controls {up_ctl:.2e}/{lo_ctl:.2e}"));
    }
    outcome(pass, lines.join("; "))
}

fn sandwich() -> Outcome {
    let p = ModelParams::new(5, 1.0, 0.5).unwrap();
    let data = InitialData::log_tail(1.0, 0.5).unwrap();
    let (b, big_b) = log_tail_constants(&data, 0.5, ORDERING_R_MAX);
    let (sup, _) = matched_super_for(&data, &p, big_b).unwrap();
    let sub = matched_sub_for(&data, &p, b).unwrap();
    let mut lines = Vec::new();
    let mut pass = true;
    for n in [2048, 4096] {
        let c = SolverConfig::default().with_resolution(n);
        match sandwich_run(&data, &c, &p, Barrier::Solution(&sub), Barrier::Solution(&sup)) {
            Ok((rep, _)) => {
                pass &= rep.pass && rep.rows.len() == 16;
                lines.push(format!("n_xi {n}: {} times, worst margin {:.2e} (tol {:.2e})", rep.rows.len(), rep.worst_margin(), rep.tol));
            }
            Err(e) => {
                pass = false;
                lines.push(format!("n_xi {n}: {e}"));
            }
        }
    }
    outcome(pass, lines.join("; "))
}

fn algebraic_rates() -> Outcome {
    let p = ModelParams::new(5, 1.0, 0.5).unwrap();
    let w = DEFAULT_WINDOW;
    let rows = theorem_suite(&p, &Family::LogTail { b: 1.0 }, &GAMMAS, &suite_config(w), w);
    let pass = rows.iter().all(|r| r.pass);
    let lines: Vec<String> = rows
        .iter()
        .map(|r| match &r.error {
            Some(e) => format!("gamma {}: {e}", r.gamma),
            None => format!("gamma {}: slope {:.4}, band [{:.3}, {:.3}]", r.gamma, r.p_origin, r.band_lo, r.band_hi),
        })
        .collect();
    outcome(pass, lines.join("; "))
}

/// `(ceiling holds, collapse holds, detail)`.
fn ceiling() -> (bool, bool, String) {
    let p = ModelParams::new(5, 1.0, 0.5).unwrap();
    let w = DEFAULT_WINDOW;
    let mut ceiling_ok = true;
    let mut collapse_ok = true;
    let mut lines = Vec::new();
    for data in [InitialData::bump(1.0, 0.5, 2.0).unwrap(), InitialData::constant_tail(0.5, 1.0, 2.0).unwrap()] {
        let run = solve(&data, &suite_config(w), &p)
            .and_then(|tr| extract_series(&tr, SeriesKind::Sup))
            .and_then(|s| Ok((band_check(&s, CEILING_EXPONENT, w)?, band_check(&s, FAST_EXPONENT, w)?)));
        match run {
            Ok((ceil, fast)) => {
                ceiling_ok &= ceil.band_lo > 0.0;
                collapse_ok &= fast.collapses(COLLAPSE_FACTOR);
                lines.push(format!(
                    "{}: ceiling band_lo {:.3e}, exponent-0.6 start/end {:.3}",
                    barenblatt::profiles::RadialData::descriptor(&data),
                    ceil.band_lo,
                    fast.decrease()
                ));
            }
            Err(e) => {
                ceiling_ok = false;
                lines.push(e.to_string());
            }
        }
    }
    (ceiling_ok, collapse_ok, lines.join("; "))
}

fn solver_quality() -> Outcome {
    let diffs = common::bump_refinement(&[512, 1024, 2048, 4096]);
    let ratios: Vec<f64> = diffs.windows(2).map(|w| w[0] / w[1]).collect();
    let refine_ok = ratios.iter().all(|&r| r >= 3.0);
    let p = ModelParams::new(5, 1.0, 0.5).unwrap();
    let c = common::pair_config();
    let mut rng = StdRng::seed_from_u64(2024);
    let (mut gap, mut floor) = (f64::INFINITY, f64::INFINITY);
    for _ in 0..20 {
        let (lo, hi) = common::random_ordered_pair(&mut rng);
        match (solve(&lo, &c, &p), solve(&hi, &c, &p)) {
            (Ok(a), Ok(b)) => {
                let (g, f) = common::pair_margins(&a, &b);
                gap = gap.min(g);
                floor = floor.min(f);
            }
            _ => gap = f64::NEG_INFINITY,
        }
    }
    let pass = refine_ok && gap >= -1e-6 && floor >= -1e-10;
    outcome(
        pass,
        format!("refinement ratios {ratios:.2?}; 20 pairs: min ordering gap {gap:.2e}, min value {floor:.2e}"),
    )
}

fn report(k: usize, o: Outcome, start: Instant, unexpected: &mut Vec<usize>) {
    println!("criterion {k} {} {} ({:.1} s)", if o.pass { "PASS" } else { "FAIL" }, o.detail, start.elapsed().as_secs_f64());
    if !o.pass {
        unexpected.push(k);
    }
}

fn main() {
    let full = GridSpec::new(GridPreset::Full);
    let mut unexpected = Vec::new();
    let t = Instant::now();
    report(1, special_functions(), t, &mut unexpected);
    let t = Instant::now();
    report(2, supersolutions(&full), t, &mut unexpected);
    let t = Instant::now();
    report(3, subsolutions(&full), t, &mut unexpected);
    let t = Instant::now();
    report(4, ordering(), t, &mut unexpected);
    let t = Instant::now();
    report(5, sandwich(), t, &mut unexpected);
    let t = Instant::now();
    report(6, algebraic_rates(), t, &mut unexpected);

    let t = Instant::now();
    let (ceiling_ok, collapse_ok, detail) = ceiling();
    let pass = ceiling_ok && collapse_ok;
    println!(
        "criterion 7 {} {detail}; ceiling {}, exponent-0.6 collapse {} ({:.1} s)",
        if pass { "PASS" } else { "FAIL" },
        if ceiling_ok { "holds" } else { "fails" },
        if collapse_ok { "holds" } else { "fails" },
        t.elapsed().as_secs_f64()
    );
    if !ceiling_ok {
        unexpected.push(7);
    }
    if collapse_ok {
        println!("note: criterion 7 collapse clause now holds; the expected-failure analysis is out of date");
        unexpected.push(7);
    }

    let t = Instant::now();
    report(8, solver_quality(), t, &mut unexpected);

    if unexpected.is_empty() {
        println!("acceptance: all criteria as expected (criterion 7 fails on its collapse clause only)");
    } else {
        println!("acceptance: unexpected outcome for criteria {unexpected:?}");
        std::process::exit(1);
    }
}
