//! Numerical laboratory for the critical fast diffusion equation
//! `u_τ = ∇·(u^{m-1}∇u)` with `m = (n-4)/(n-2)`.
//!
//! After the self-similar rescaling the problem becomes a nonlinear
//! Fokker–Planck equation whose stationary states are the Barenblatt
//! profiles `V_D(x) = (D + |x|²)^{-(n-2)/2}`. Writing a radial solution as
//! `v = (r² + D + φ)^{-(n-2)/2}` turns the question of convergence to `V_D`
//! into decay of the perturbation `φ`. This crate
//!
//! * evaluates the analytic ingredients of explicit comparison functions
//!   ([`special`]),
//! * implements the Barenblatt solutions and the stacked changes of
//!   variables ([`profiles`]),
//! * builds the super- and subsolutions, selects their free constants and
//!   certifies their differential inequalities on grids ([`comparison`]),
//! * time-steps the radial `φ` equation ([`solver`]),
//! * extracts algebraic decay exponents from trajectories ([`rates`]),
//! * and wires everything into reproducible commands ([`cli`]).

pub mod cli;
pub mod comparison;
mod error;
mod params;
pub mod profiles;
pub mod rates;
pub mod solver;
pub mod special;

pub use error::{Error, Result};
pub use params::ModelParams;
