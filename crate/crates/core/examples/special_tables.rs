//! Tabulate the outer profile, the inner profile and the explicit
//! subsolution profile, with ODE residuals.

use barenblatt::special::{sigma0_of, ClosedForm, HatPhiProfile, PhiProfile, RhoProfile};

fn main() -> barenblatt::Result<()> {
    let gamma = 0.5;
    let phi = PhiProfile::new(gamma)?;
    println!("Phi for gamma = {gamma}, tail constant {:.6}", phi.tail_constant());
    println!("{:>6} {:>14} {:>14} {:>10}", "z", "Phi", "Phi'", "residual");
    for z in [0.0, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0] {
        let j = phi.eval(z);
        println!("{z:>6} {:>14.6e} {:>14.6e} {:>10.1e}", j.value, j.d1, phi.ode_residual(z));
    }

    let lambda = 1.25;
    let rho = RhoProfile::new(lambda)?;
    let s0 = sigma0_of(lambda)?;
    println!("\nrho for lambda = {lambda}: first zero {:.6}, sigma0 = {s0:.6}", rho.first_zero());
    for k in 0..=4 {
        let s = s0 * k as f64 / 4.0;
        println!("  rho({s:.4}) = {:.8}   residual {:.1e}", rho.value(s), rho.ode_residual(s));
    }

    let hat = HatPhiProfile::new(gamma)?;
    println!("\nhat Phi inequality residual (nonnegative):");
    for z in [0.0, 1.0, 4.0, 16.0] {
        println!("  z = {z:>4}: {:.4e}", hat.inequality_residual(z));
    }
    Ok(())
}
