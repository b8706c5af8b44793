//! Lower bound δₙ on the probability that the frogs started in a subtree
//! never return, with δ₁ = 1/8 and δₙ₊₁ = δₙ (1 − 1/(n+1)²).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{ExperimentError, Result};
use frog_core::rational::{ratio_to_f64, serde_ratio};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EscapeBound {
    pub n: u64,
    /// the product
    #[serde(with = "serde_ratio")]
    pub delta: BigRational,
    /// (n + 1) / (16 n)
    #[serde(with = "serde_ratio")]
    pub closed_form: BigRational,
    #[serde(with = "serde_ratio")]
    pub limit: BigRational,
}

fn r(p: u64, q: u64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

pub fn delta_lower_bound(n: u64) -> Result<EscapeBound> {
    if n == 0 {
        return Err(ExperimentError::Input("n must be at least 1".into()));
    }
    let mut delta = r(1, 8);
    for k in 1..n {
        delta *= BigRational::one() - r(1, (k + 1) * (k + 1));
    }
    Ok(EscapeBound {
        n,
        delta,
        closed_form: r(n + 1, 16 * n),
        limit: r(1, 16),
    })
}

/// The same product in doubles, as exp of a compensated sum of logs. A
/// plain running product drifts by about 2e-12 over 10^6 factors.
pub fn delta_float(n: u64) -> f64 {
    let (mut sum, mut c) = (0f64, 0f64);
    for k in 1..n {
        let j = (k + 1) as f64;
        let y = (-1.0 / (j * j)).ln_1p() - c;
        let t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    0.125 * sum.exp()
}

/// Limit estimate from the float products at n and 2n. δₙ − δ∞ is
/// proportional to 1/n, so 2δ₂ₙ − δₙ cancels the leading error term.
pub fn extrapolated_limit(n: u64) -> f64 {
    2.0 * delta_float(2 * n) - delta_float(n)
}

impl EscapeBound {
    pub fn delta_f64(&self) -> f64 {
        ratio_to_f64(&self.delta)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_terms() {
        assert_eq!(delta_lower_bound(1).unwrap().delta, r(1, 8));
        assert_eq!(delta_lower_bound(2).unwrap().delta, r(3, 32));
        assert_eq!(delta_lower_bound(3).unwrap().delta, r(1, 12));
        assert!(delta_lower_bound(0).is_err());
    }

    #[test]
    fn product_telescopes() {
        for n in 1..=1000 {
            let b = delta_lower_bound(n).unwrap();
            assert_eq!(&b.delta * r(16 * n, 1), r(n + 1, 1), "n={n}");
            assert_eq!(b.delta, b.closed_form);
        }
    }

    #[test]
    fn decreasing_towards_the_limit() {
        let ds: Vec<BigRational> = (1..50).map(|n| delta_lower_bound(n).unwrap().delta).collect();
        assert!(ds.windows(2).all(|w| w[1] < w[0]));
        assert!(ds.iter().all(|d| *d > r(1, 16)));
    }

    #[test]
    fn float_product_and_limit() {
        let n = 1_000_000;
        let exact = (n as f64 + 1.0) / (16.0 * n as f64);
        assert!((delta_float(n) - exact).abs() < 1e-12);
        assert!((extrapolated_limit(n) - 0.0625).abs() < 1e-12);
    }
}
