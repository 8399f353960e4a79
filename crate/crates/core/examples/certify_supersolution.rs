//! Select and certify the matched supersolution for log-tail data.

use barenblatt::comparison::{certify, matched_super_for, GridPreset, GridSpec};
use barenblatt::profiles::{log_tail_constants, InitialData};
use barenblatt::ModelParams;

fn main() -> barenblatt::Result<()> {
    let p = ModelParams::new(5, 1.0, 0.5)?;
    let data = InitialData::log_tail(1.0, p.gamma())?;
    let (_, tail) = log_tail_constants(&data, p.gamma(), 1e6);
    let (sup, amp) = matched_super_for(&data, &p, tail)?;
    let sp = sup.super_params();
    println!("xi0 = {:.4}, t0 = {:.4}, A = {:.4}", sp.xi0, sp.t0, amp.amplitude);
    println!("initial domination margin {:.3e}", amp.margin);

    let report = certify(&sup, &GridSpec::new(GridPreset::Fast), Some(&data));
    for c in &report.checks {
        println!("  {:<20} {:>12.4e}  {}", c.id, c.value, if c.pass { "ok" } else { "FAIL" });
    }
    println!("{}", report.summary_line());
    Ok(())
}
