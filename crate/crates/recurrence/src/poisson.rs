//! Poisson envelope for the iterates: 𝒜ⁿ g₀(x) ≤ exp(aₙ (x − 1)).

use num_rational::BigRational;
use serde::Serialize;

use crate::error::{RecurrenceError, Result};
use crate::operator::{iterate_a, ArithmeticMode, IterateValue, EXACT_DEPTH_LIMIT};
use frog_core::rational::serde_ratio;

pub fn c_of_a(a: f64) -> Result<f64> {
    if a.is_nan() || a < 0.0 {
        return Err(RecurrenceError::Domain(format!("a = {a}")));
    }
    Ok(if a <= 4.0 {
        (-2f64).exp() / 3.0
    } else {
        (-a / 2.0).exp() / 3.0
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PoissonBoundSeq {
    /// a₀ … aₙ
    pub values: Vec<f64>,
    /// c(a₀) … c(aₙ₋₁)
    pub increments: Vec<f64>,
}

impl PoissonBoundSeq {
    pub fn len(&self) -> usize {
        self.increments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.increments.is_empty()
    }

    pub fn a(&self, m: usize) -> f64 {
        self.values[m]
    }

    pub fn last(&self) -> f64 {
        *self.values.last().unwrap()
    }

    /// g_{aₘ}(x) = exp(aₘ (x − 1)).
    pub fn bound(&self, m: usize, x: f64) -> f64 {
        (self.values[m] * (x - 1.0)).exp()
    }
}

pub fn poisson_seq(n: usize) -> PoissonBoundSeq {
    let mut values = Vec::with_capacity(n + 1);
    let mut increments = Vec::with_capacity(n);
    let mut a = 0.0;
    values.push(a);
    for _ in 0..n {
        let c = c_of_a(a).expect("sequence stays nonnegative");
        increments.push(c);
        a += c;
        values.push(a);
    }
    PoissonBoundSeq { values, increments }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DominationPoint {
    pub n: u32,
    #[serde(with = "serde_ratio")]
    pub x: BigRational,
    pub value: IterateValue,
    pub bound: f64,
    /// bound − value; exact values are rounded to the nearest double first.
    pub slack: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DominationReport {
    pub n: u32,
    pub points: Vec<DominationPoint>,
    pub min_slack: f64,
}

impl DominationReport {
    pub fn holds(&self, tol: f64) -> bool {
        self.min_slack >= -tol
    }
}

pub fn domination_point(n: u32, x: &BigRational, seq: &PoissonBoundSeq, mode: ArithmeticMode) -> Result<DominationPoint> {
    if n as usize >= seq.values.len() {
        return Err(RecurrenceError::Input(format!("sequence too short for n = {n}")));
    }
    let value = iterate_a(n, x, mode)?;
    let v = value.to_f64();
    let bound = seq.bound(n as usize, crate::scalar::Scalar::to_f64(x));
    Ok(DominationPoint {
        n,
        x: x.clone(),
        value,
        bound,
        slack: bound - v,
    })
}

/// Checks 𝒜ⁿ g₀ ≤ exp(aₙ(x − 1)) at every grid point.
pub fn poisson_domination_check(n: u32, grid: &[BigRational], mode: ArithmeticMode) -> Result<DominationReport> {
    if mode == ArithmeticMode::Exact && n > EXACT_DEPTH_LIMIT {
        return Err(RecurrenceError::Bound { n, max: EXACT_DEPTH_LIMIT });
    }
    let seq = poisson_seq(n as usize);
    let points = grid
        .iter()
        .map(|x| domination_point(n, x, &seq, mode))
        .collect::<Result<Vec<_>>>()?;
    let min_slack = points.iter().map(|p| p.slack).fold(f64::INFINITY, f64::min);
    Ok(DominationReport { n, points, min_slack })
}

/// {j/16 : 0 ≤ j ≤ 16}
pub fn sixteenths() -> Vec<BigRational> {
    (0..=16).map(|j| frog_core::rational::ratio(j, 16)).collect()
}

/// r_b(x) = (2+x)/3 + ((1+x)/3)(e^{−bx} − e^{−b}), the candidate image of a
/// Poisson generating function whose monotonicity fails for larger b.
pub fn r_b(b: f64, x: f64) -> f64 {
    (2.0 + x) / 3.0 + (1.0 + x) / 3.0 * ((-b * x).exp() - (-b).exp())
}

/// First grid step on which r_b decreases, if any.
pub fn r_b_decrease(b: f64, points: usize) -> Option<(f64, f64)> {
    let xs: Vec<f64> = (0..points).map(|i| i as f64 / (points - 1) as f64).collect();
    xs.windows(2).find(|w| r_b(b, w[1]) < r_b(b, w[0])).map(|w| (w[0], w[1]))
}
