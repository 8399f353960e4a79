use crate::{Error, Result};

/// `ξ` beyond which the node spacing grows proportionally to `ξ`.
pub const XI_STRETCH: f64 = 12.0;

/// Largest supported `ξ_max`, so that `r = e^ξ` stays finite.
pub const XI_CEILING: f64 = 700.0;

/// Radial nodes on a uniform computational coordinate `u_i = i·du`.
///
/// For `u ≤ u₁` the nodes are `r = c sinh(u)`: uniform in `r` for `r ≪ c`
/// and uniform in `ξ = ln r` for `r ≫ c`. Beyond `ξ = XI_STRETCH` they follow
/// `ξ = XI_STRETCH·exp((u − u₁)/XI_STRETCH)`, so the `ξ` spacing grows
/// geometrically and one grid reaches `ξ_max` of several hundred.
#[derive(Debug, Clone, PartialEq)]
pub struct MappedGrid {
    scale: f64,
    du: f64,
    u_switch: f64,
    r: Vec<f64>,
    xi: Vec<f64>,
    half: Vec<f64>,
}

impl MappedGrid {
    /// `scale = e^{ξ_min + 1}` sets the crossover radius; the last node sits
    /// at `r = e^{ξ_max}`.
    pub fn new(xi_min: f64, xi_max: f64, intervals: usize) -> Result<Self> {
        if !(xi_max > xi_min + 1.0 && xi_max <= XI_CEILING && intervals >= 8) {
            return Err(Error::Parameter(format!(
                "grid needs xi_min + 1 < xi_max ≤ {XI_CEILING} and at least 8 intervals (got {xi_min}, {xi_max}, {intervals})"
            )));
        }
        let scale = (xi_min + 1.0).exp();
        let xs = XI_STRETCH.max(xi_min + 2.0);
        let (u_switch, u_max) = if xi_max <= xs {
            let u = (xi_max.exp() / scale).asinh();
            (u, u)
        } else {
            let u1 = (xs.exp() / scale).asinh();
            (u1, u1 + xs * (xi_max / xs).ln())
        };
        let du = u_max / intervals as f64;
        // ξ at computational coordinate u, or -∞ at the origin.
        let xi_of = |u: f64| {
            if u <= u_switch {
                (scale * u.sinh()).ln()
            } else {
                xs * ((u - u_switch) / xs).exp()
            }
        };
        let xi: Vec<f64> = (0..=intervals)
            .map(|i| if i == intervals { xi_max } else { xi_of(du * i as f64) })
            .collect();
        let r = xi.iter().map(|x| x.exp()).collect();
        let half = (0..intervals).map(|i| xi_of(du * (i as f64 + 0.5)).exp()).collect();
        Ok(Self { scale, du, u_switch, r, xi, half })
    }

    pub fn radii(&self) -> &[f64] {
        &self.r
    }

    /// `ln r_i`, with `-∞` at the origin.
    pub fn xi(&self) -> &[f64] {
        &self.xi
    }

    /// `r_{i+1/2}` for `i = 0..N-1`.
    pub fn faces(&self) -> &[f64] {
        &self.half
    }

    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn du(&self) -> f64 {
        self.du
    }

    /// Computational coordinate where the geometric stretching starts.
    pub fn u_switch(&self) -> f64 {
        self.u_switch
    }
}

/// Thomas algorithm for `a_i x_{i-1} + b_i x_i + c_i x_{i+1} = d_i`.
///
/// Stable without pivoting for diagonally dominant systems, which is the only
/// kind assembled here. `a[0]` and `c[n-1]` are ignored.
pub fn solve_tridiagonal(a: &[f64], b: &[f64], c: &[f64], d: &mut [f64], scratch: &mut Vec<f64>) {
    let n = d.len();
    scratch.clear();
    scratch.resize(n, 0.0);
    let mut beta = b[0];
    d[0] /= beta;
    for i in 1..n {
        scratch[i] = c[i - 1] / beta;
        beta = b[i] - a[i] * scratch[i];
        d[i] = (d[i] - a[i] * d[i - 1]) / beta;
    }
    for i in (0..n - 1).rev() {
        d[i] -= scratch[i + 1] * d[i + 1];
    }
}
