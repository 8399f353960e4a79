//! Move between the original variables, the stationary profile and the
//! perturbation coordinate.

use barenblatt::profiles::{barenblatt_u, phi_from_v, v_from_phi, BarenblattProfile, VariableStack};
use barenblatt::ModelParams;

fn main() -> barenblatt::Result<()> {
    let p = ModelParams::new(5, 1.0, 0.5)?;
    println!("n = {}, m = {:.4}, lambda = {:.4}", p.n(), p.m(), p.lambda());

    let profile = BarenblattProfile::new(p);
    let stack = VariableStack::new(p, 1.0)?;
    for r in [0.0, 1.0, 3.0] {
        let v = profile.value(r);
        println!("V_D({r}) = {v:.6}, phi = {:.2e}", phi_from_v(&p, v, r)?);
    }

    let (tau, y) = (0.5, 1.0);
    let x = stack.x_of_y(y, tau);
    let u = barenblatt_u(&p, p.d(), 1.0, y, tau)?;
    println!("\ntau = {tau} maps to t = {:.6}; y = {y} maps to x = {x:.6}", stack.t_of_tau(tau));
    println!("U = {u:.6} rescales to v = {:.6}; V_D(x) = {:.6}", stack.v_of_u(u, tau), profile.value(x));

    let lifted = v_from_phi(&p, 0.3, 1.0)?;
    println!("\nphi = 0.3 at r = 1 gives v = {lifted:.6} < V_D(1) = {:.6}", profile.value(1.0));
    Ok(())
}
