//! Single-type criterion: one child one level back w.p. 1/(d+1), else two
//! children one level forward.

use serde::Serialize;

pub fn mu_simple(d: u32, theta: f64) -> f64 {
    let d = d as f64;
    theta.exp() / (d + 1.0) + 2.0 * d * (-theta).exp() / (d + 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThetaStar {
    pub d: u32,
    pub theta: f64,
    pub mu: f64,
    pub transient: bool,
}

pub fn theta_star(d: u32) -> ThetaStar {
    let df = d as f64;
    ThetaStar {
        d,
        theta: (2.0 * df).ln() / 2.0,
        mu: 2.0 * (2.0 * df).sqrt() / (df + 1.0),
        transient: is_transient(d),
    }
}

/// μ* < 1, decided in integers: 2√(2d) < d + 1 ⇔ 8d < (d + 1)².
pub fn is_transient(d: u32) -> bool {
    let d = d as u64;
    8 * d < (d + 1) * (d + 1)
}
