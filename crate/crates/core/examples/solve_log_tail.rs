//! Solve the radial equation from log-tail data and print the origin value.

use barenblatt::profiles::InitialData;
use barenblatt::solver::{solve, SolverConfig};
use barenblatt::ModelParams;

fn main() -> barenblatt::Result<()> {
    let p = ModelParams::new(5, 1.0, 0.5)?;
    let data = InitialData::log_tail(1.0, p.gamma())?;
    let config = SolverConfig::default().with_outputs(1.0, 1e3, 8);
    let traj = solve(&data, &config, &p)?;
    println!("{} steps accepted, {} rejected", traj.stats.accepted, traj.stats.rejected);
    for k in 0..traj.len() {
        let t = traj.times[k];
        println!("t = {t:>9.3}  phi(0) = {:.6}  (t+1)^(1/4) phi(0) = {:.6}", traj.origin_value(k), (t + 1.0).powf(0.25) * traj.origin_value(k));
    }
    println!("config hash {}", traj.config_hash);
    Ok(())
}
