//! Select and certify the matched subsolution, then show that an oversized
//! amplitude breaks the initial ordering.

use barenblatt::comparison::{certify, matched_sub_for, sub_ordering_margin, GridPreset, GridSpec};
use barenblatt::profiles::{log_tail_constants, InitialData};
use barenblatt::ModelParams;

fn main() -> barenblatt::Result<()> {
    let p = ModelParams::new(7, 0.5, 0.25)?;
    let data = InitialData::log_tail(1.0, p.gamma())?;
    let (b, _) = log_tail_constants(&data, p.gamma(), 1e6);
    let sub = matched_sub_for(&data, &p, b)?;
    let sp = *sub.sub_params();
    println!("xi0 = {}, a = {:.4}", sp.xi0, sp.a);

    let report = certify(&sub, &GridSpec::new(GridPreset::Fast), Some(&data));
    println!("{}", report.summary_line());
    let bad = sub_ordering_margin(&data, &p, &sp.with_a(10.0 * sp.a), 1e6);
    println!("ordering margin with 10a: {bad:.3e}");
    Ok(())
}
