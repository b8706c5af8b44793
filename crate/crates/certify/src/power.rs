//! Spectral radius below one, certified by a power of the matrix whose row
//! sums are all below one. The max row sum bounds the spectral radius, so
//! ρ(M)^e = ρ(M^e) < 1 gives ρ(M) < 1.

use frog_core::rational::{ratio_to_f64, serde_ratio};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{CertifyError, Result};
use crate::laurent::RationalMatrix;

pub const DEFAULT_BIT_LIMIT: u64 = 1_000_000;

/// M = num / den with integer entries.
#[derive(Debug, Clone, PartialEq)]
struct ScaledMatrix {
    num: Vec<Vec<BigInt>>,
    den: BigInt,
}

impl ScaledMatrix {
    fn from_rational(m: &RationalMatrix) -> Self {
        let den = m
            .iter()
            .flatten()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let num = m
            .iter()
            .map(|r| r.iter().map(|x| x.numer() * (&den / x.denom())).collect())
            .collect();
        Self { num, den }
    }

    fn mul(&self, other: &Self) -> Self {
        let n = self.num.len();
        let num = (0..n)
            .into_par_iter()
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let mut acc = BigInt::zero();
                        for k in 0..n {
                            let (a, b) = (&self.num[i][k], &other.num[k][j]);
                            if !a.is_zero() && !b.is_zero() {
                                acc += a * b;
                            }
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        Self {
            num,
            den: &self.den * &other.den,
        }
    }

    fn bits(&self) -> u64 {
        self.num.iter().flatten().map(|x| x.bits()).max().unwrap_or(0).max(self.den.bits())
    }

    fn to_rational(&self) -> RationalMatrix {
        self.num
            .iter()
            .map(|r| r.iter().map(|x| BigRational::new(x.clone(), self.den.clone())).collect())
            .collect()
    }
}

fn check_square(m: &RationalMatrix) -> Result<usize> {
    let n = m.len();
    if n == 0 || m.iter().any(|r| r.len() != n) {
        return Err(CertifyError::Input("matrix must be square and nonempty".into()));
    }
    Ok(n)
}

fn power_scaled(m: &RationalMatrix, e: u64, bit_limit: u64) -> Result<ScaledMatrix> {
    if e == 0 {
        return Err(CertifyError::Input("power must be positive".into()));
    }
    let mut base = ScaledMatrix::from_rational(m);
    let mut acc: Option<ScaledMatrix> = None;
    let mut steps = 0u32;
    let mut rest = e;
    loop {
        if rest & 1 == 1 {
            acc = Some(match acc {
                None => base.clone(),
                Some(a) => {
                    steps += 1;
                    a.mul(&base)
                }
            });
            let bits = acc.as_ref().unwrap().bits();
            if bits > bit_limit {
                return Err(CertifyError::Resource { bits, limit: bit_limit, steps });
            }
        }
        rest >>= 1;
        if rest == 0 {
            break;
        }
        base = base.mul(&base);
        steps += 1;
        let bits = base.bits();
        if bits > bit_limit {
            return Err(CertifyError::Resource { bits, limit: bit_limit, steps });
        }
    }
    Ok(acc.unwrap())
}

/// M^e by square-and-multiply.
pub fn mat_pow(m: &RationalMatrix, e: u64) -> Result<RationalMatrix> {
    check_square(m)?;
    Ok(power_scaled(m, e, u64::MAX)?.to_rational())
}

pub fn mat_mul(a: &RationalMatrix, b: &RationalMatrix) -> RationalMatrix {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| &a[i][k] * &b[k][j]).fold(BigRational::zero(), |x, y| x + y))
                .collect()
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub matrix: String,
    #[serde(with = "serde_ratio")]
    pub y: BigRational,
    pub power: u64,
    #[serde(with = "serde_ratio")]
    pub max_row_sum: BigRational,
    pub max_row_sum_float: f64,
    pub pass: bool,
}

/// Max row sum of M^e, exactly. `pass` iff it is below 1.
pub fn power_rowsum_certificate(
    id: &str,
    y: &BigRational,
    m: &RationalMatrix,
    e: u64,
    bit_limit: u64,
) -> Result<Certificate> {
    check_square(m)?;
    if m.iter().flatten().any(|x| x.is_negative()) {
        return Err(CertifyError::Input("matrix has a negative entry".into()));
    }
    let p = power_scaled(m, e, bit_limit)?;
    let max_num = p
        .num
        .iter()
        .map(|r| r.iter().sum::<BigInt>())
        .max()
        .expect("nonempty");
    let pass = max_num < p.den;
    let max_row_sum = BigRational::new(max_num, p.den);
    Ok(Certificate {
        matrix: id.to_string(),
        y: y.clone(),
        power: e,
        max_row_sum_float: ratio_to_f64(&max_row_sum),
        max_row_sum,
        pass,
    })
}

/// Whether the digraph of nonzero entries is strongly connected.
pub fn irreducibility_check<T: Zero>(m: &[Vec<T>]) -> bool {
    let n = m.len();
    if n == 0 {
        return false;
    }
    let reach = |forward: bool| {
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for j in 0..n {
                let nz = if forward { !m[i][j].is_zero() } else { !m[j][i].is_zero() };
                if nz && !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen.into_iter().all(|s| s)
    };
    reach(true) && reach(false)
}

pub const POWER_ITERATION_CAP: usize = 1_000_000;

/// Perron root of a nonnegative irreducible matrix by power iteration on
/// M + I, which is primitive even when M is periodic.
pub fn spectral_radius_estimate(m: &[Vec<f64>]) -> Result<f64> {
    let n = m.len();
    if n == 0 || m.iter().any(|r| r.len() != n) {
        return Err(CertifyError::Input("matrix must be square and nonempty".into()));
    }
    let mut x = vec![1.0 / n as f64; n];
    let mut lambda = 0.0;
    for _ in 0..POWER_ITERATION_CAP {
        let mut next: Vec<f64> = (0..n).map(|i| x[i] + (0..n).map(|j| m[i][j] * x[j]).sum::<f64>()).collect();
        let norm: f64 = next.iter().sum();
        next.iter_mut().for_each(|v| *v /= norm);
        // x was normalized to sum 1, so the new sum is the Rayleigh-type ratio
        let est = norm - 1.0;
        let done = (est - lambda).abs() <= 1e-9 * est.abs().max(1e-300)
            && next.iter().zip(&x).all(|(a, b)| (a - b).abs() <= 1e-12);
        x = next;
        lambda = est;
        if done {
            return Ok(lambda);
        }
    }
    Err(CertifyError::Numeric(POWER_ITERATION_CAP))
}
