//! Fit algebraic decay rates for log-tail data and the compact-bump ceiling.

use barenblatt::rates::{slopes_monotone, suite_config, theorem_suite, Family, DEFAULT_WINDOW};
use barenblatt::ModelParams;

fn main() -> barenblatt::Result<()> {
    let p = ModelParams::new(5, 1.0, 0.5)?;
    let w = DEFAULT_WINDOW;
    let config = suite_config(w);

    let rows = theorem_suite(&p, &Family::LogTail { b: 1.0 }, &[0.25, 0.5, 0.75], &config, w);
    for r in &rows {
        println!("gamma {:<5} slope {:>8.4} (expected {:>6.3})  band [{:.3}, {:.3}]", r.gamma, r.p_origin, -0.5 * r.gamma, r.band_lo, r.band_hi);
    }
    println!("slopes monotone in gamma: {}", slopes_monotone(&rows));

    let bump = &theorem_suite(&p, &"bump".parse()?, &[], &config, w)[0];
    println!("bump: sup slope {:.4}, min (t+1)^(1/2) sup phi = {:.4e}", bump.p_sup, bump.ceiling_lo);
    Ok(())
}
