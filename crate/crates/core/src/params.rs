use serde::Serialize;

use crate::{Error, Result};

/// Dimension, profile constant and tail exponent of one experiment.
///
/// The nonlinearity is fixed at the critical exponent `m = (n-4)/(n-2)`,
/// stored as the integer pair `(n-4, n-2)`; every derived constant is
/// computed from that pair so the rational relation holds exactly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelParams {
    n: u32,
    d: f64,
    gamma: f64,
}

impl ModelParams {
    pub fn new(n: u32, d: f64, gamma: f64) -> Result<Self> {
        if n < 3 {
            return Err(Error::Parameter(format!("dimension n = {n} must be at least 3")));
        }
        if !(d.is_finite() && d > 0.0) {
            return Err(Error::Parameter(format!("profile constant D = {d} must be positive")));
        }
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(Error::Parameter(format!("tail exponent gamma = {gamma} must be positive")));
        }
        Ok(Self { n, d, gamma })
    }

    /// Same dimension and `D`, different tail exponent.
    pub fn with_gamma(&self, gamma: f64) -> Result<Self> {
        Self::new(self.n, self.d, gamma)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// `n` as a float, for use in formulas.
    pub fn dim(&self) -> f64 {
        f64::from(self.n)
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Numerator and denominator of the critical exponent `m = (n-4)/(n-2)`.
    pub fn m_ratio(&self) -> (i64, i64) {
        (i64::from(self.n) - 4, i64::from(self.n) - 2)
    }

    pub fn m(&self) -> f64 {
        let (p, q) = self.m_ratio();
        p as f64 / q as f64
    }

    /// `μ = 2/(1-m)`, which equals `n-2` at the critical exponent.
    pub fn mu(&self) -> f64 {
        self.dim() - 2.0
    }

    /// `β = 1/(n(1-m)-2)`, which equals `(n-2)/4` at the critical exponent.
    pub fn beta(&self) -> f64 {
        (self.dim() - 2.0) / 4.0
    }

    /// `λ = (γ/2 + 1)/D`, the eigenvalue of the inner profile.
    pub fn lambda(&self) -> f64 {
        (0.5 * self.gamma + 1.0) / self.d
    }

    /// `γ ∈ (0,1)`, the range where the rate theorems apply.
    pub fn gamma_in_theorem_range(&self) -> bool {
        self.gamma > 0.0 && self.gamma < 1.0
    }
}
