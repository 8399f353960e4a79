//! Analytic ingredients of the comparison functions.
//!
//! Every profile is exposed through [`ClosedForm`], which returns the value
//! together with its first and second derivative. All profiles are plain
//! immutable values and may be evaluated concurrently.

mod hat_phi;
mod kummer;
mod matching;
mod phi;
mod rho;

pub use hat_phi::HatPhiProfile;
pub use kummer::{kummer_m, kummer_scaled, KUMMER_SERIES_CROSSOVER};
pub use matching::{MatchingFactor, MatchingFactorBound};
pub use phi::{phi_asymptotic_constants, AsymptoticEnclosure, PhiProfile};
pub use rho::{sigma0_of, RhoProfile};

/// Value and first two derivatives of a scalar function at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
}

/// A scalar profile with analytic first and second derivatives.
pub trait ClosedForm: Send + Sync {
    fn eval(&self, x: f64) -> Jet;

    /// Name of the object this function represents, used in tables.
    fn label(&self) -> &'static str;

    /// Interval on which the derivatives are certified.
    fn domain(&self) -> (f64, f64);

    fn value(&self, x: f64) -> f64 {
        self.eval(x).value
    }
}

/// Largest relative mismatch between the analytic derivatives of `f` and
/// centered differences with step `h`, over the sample points `xs`.
///
/// The mismatch is measured relative to `max(|analytic|, scale)` where
/// `scale` is the largest analytic magnitude seen for that derivative, so
/// zero crossings do not inflate the figure.
pub fn derivative_mismatch(f: &dyn ClosedForm, xs: &[f64], h: f64) -> (f64, f64) {
    let jets: Vec<(Jet, f64, f64)> = xs
        .iter()
        .map(|&x| {
            let jm = f.eval(x - h);
            let j0 = f.eval(x);
            let jp = f.eval(x + h);
            let fd1 = (jp.value - jm.value) / (2.0 * h);
            let fd2 = (jp.d1 - jm.d1) / (2.0 * h);
            (j0, fd1, fd2)
        })
        .collect();
    let scale1 = jets.iter().map(|(j, _, _)| j.d1.abs()).fold(0.0, f64::max);
    let scale2 = jets.iter().map(|(j, _, _)| j.d2.abs()).fold(0.0, f64::max);
    let mut worst1 = 0.0f64;
    let mut worst2 = 0.0f64;
    for (j, fd1, fd2) in &jets {
        worst1 = worst1.max((j.d1 - fd1).abs() / j.d1.abs().max(scale1).max(f64::MIN_POSITIVE));
        worst2 = worst2.max((j.d2 - fd2).abs() / j.d2.abs().max(scale2).max(f64::MIN_POSITIVE));
    }
    (worst1, worst2)
}
