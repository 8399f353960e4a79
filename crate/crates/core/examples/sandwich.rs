//! Check that a solution stays between the sub- and supersolution.

use barenblatt::comparison::{matched_sub_for, matched_super_for};
use barenblatt::profiles::{log_tail_constants, InitialData};
use barenblatt::solver::{sandwich_run, Barrier, SolverConfig};
use barenblatt::ModelParams;

fn main() -> barenblatt::Result<()> {
    let p = ModelParams::new(5, 1.0, 0.5)?;
    let data = InitialData::log_tail(1.0, p.gamma())?;
    let (b, big_b) = log_tail_constants(&data, p.gamma(), 1e6);
    let (sup, _) = matched_super_for(&data, &p, big_b)?;
    let sub = matched_sub_for(&data, &p, b)?;

    let config = SolverConfig::default().with_resolution(1024);
    let (report, _) = sandwich_run(&data, &config, &p, Barrier::Solution(&sub), Barrier::Solution(&sup))?;
    println!("{:>10} {:>12} {:>12}", "t", "upper-phi", "phi-lower");
    for row in &report.rows {
        println!("{:>10.3} {:>12.4e} {:>12.4e}", row.t, row.upper_margin, row.lower_margin);
    }
    match report.failure() {
        None => println!("sandwich holds (tol {:.2e})", report.tol),
        Some(why) => println!("sandwich fails: {why}"),
    }
    Ok(())
}
