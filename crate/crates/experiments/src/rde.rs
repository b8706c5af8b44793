//! Exact law of the root-visit count V_k of the self-similar frog model on
//! the binary tree, truncated after k levels of the recursion.
//!
//! One step, with X, X' ~ Bin(V, 1/2), I a fair coin, q = E[2^{-V}] and
//! T[j] = 2^{-j} P[V = j]:
//!
//! ```text
//! V' = X' + X        w.p. 1/3
//!      I + X' + Y    w.p. 2(1-q)/3,   P[Y = j] = (P[X = j] - T[j]) / (1 - q)
//!      I + Z         w.p. 2q/3,       P[Z = j] = T[j] / q
//! ```
//!
//! The divisions by q and 1 - q cancel against the weights, so the solver
//! works with the division-free form
//! `V' = (X*X + (1+x) X*(X - T) + (1+x) T) / 3` on integer numerators over a
//! shared 2^a 3^b denominator. [`RdeMixture`] keeps the literal mixture as a
//! cross-check.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use serde::{Serialize, Serializer};

use crate::error::{ExperimentError, Result};
use frog_core::rational::format_ratio;

pub const MAX_DEPTH: u32 = 12;

/// P[V_k = j] = num[j] / (2^two 3^three).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VPmf {
    k: u32,
    num: Vec<BigUint>,
    two: u64,
    three: u64,
}

/// Largest value V_k can take: V doubles at most once per level
/// (branch X' + X with both thinnings keeping everything).
pub fn support_bound(k: u32) -> usize {
    if k == 0 {
        0
    } else {
        1usize << (k - 1)
    }
}

impl VPmf {
    pub fn point_mass_at_zero() -> Self {
        Self {
            k: 0,
            num: vec![BigUint::one()],
            two: 0,
            three: 0,
        }
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn max_value(&self) -> usize {
        self.num.len() - 1
    }

    fn denom(&self) -> BigInt {
        BigInt::from(BigUint::one() << self.two as usize) * BigInt::from(3).pow(self.three as u32)
    }

    pub fn mass(&self, j: usize) -> BigRational {
        match self.num.get(j) {
            Some(n) => BigRational::new(n.clone().into(), self.denom()),
            None => BigRational::zero(),
        }
    }

    pub fn masses(&self) -> Vec<BigRational> {
        (0..self.num.len()).map(|j| self.mass(j)).collect()
    }

    pub fn total(&self) -> BigRational {
        let s: BigUint = self.num.iter().sum();
        BigRational::new(s.into(), self.denom())
    }

    /// q = E[2^{-V}]
    pub fn q(&self) -> BigRational {
        self.pgf(&BigRational::new(1.into(), 2.into()))
    }

    /// E[x^V]
    pub fn pgf(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for n in self.num.iter().rev() {
            acc = acc * x + BigRational::from_integer(n.clone().into());
        }
        acc / BigRational::from_integer(self.denom())
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.masses().iter().map(frog_core::rational::ratio_to_f64).collect()
    }

    /// One recursion step.
    pub fn next(&self) -> Self {
        let m = self.max_value();
        let t: Vec<BigUint> = self.num.iter().enumerate().map(|(j, n)| n << (m - j)).collect();
        let x = taylor_shift(t.clone());
        let x_minus_t: Vec<BigUint> = x.iter().zip(&t).map(|(a, b)| a - b).collect();
        let xx = convolve(&x, &x);
        let xy = convolve(&x, &x_minus_t);
        let scale: BigUint = (BigUint::one() << (self.two as usize + m)) * BigUint::from(3u32).pow(self.three as u32);
        let ts: Vec<BigUint> = t.iter().map(|v| v * &scale).collect();

        let len = 2 * m + 2;
        let at = |v: &[BigUint], i: usize| v.get(i).cloned().unwrap_or_default();
        let mut num: Vec<BigUint> = (0..len)
            .map(|j| {
                let shifted = |v: &[BigUint]| at(v, j) + if j > 0 { at(v, j - 1) } else { BigUint::zero() };
                at(&xx, j) + shifted(&xy) + shifted(&ts)
            })
            .collect();
        while num.len() > 1 && num.last().is_some_and(Zero::is_zero) {
            num.pop();
        }
        let two = 2 * (self.two + m as u64);
        let three = 2 * self.three + 1;
        let out = normalize(num, two, three, self.k + 1);
        assert!(
            out.max_value() <= support_bound(out.k),
            "V_{} has mass at {} beyond the support bound {}",
            out.k,
            out.max_value(),
            support_bound(out.k)
        );
        out
    }
}

fn normalize(mut num: Vec<BigUint>, mut two: u64, mut three: u64, k: u32) -> VPmf {
    let tz = num.iter().filter_map(BigUint::trailing_zeros).min().unwrap_or(0).min(two);
    if tz > 0 {
        for n in &mut num {
            *n >>= tz as usize;
        }
        two -= tz;
    }
    let three_u = BigUint::from(3u32);
    while three > 0 && num.iter().all(|n| (n % &three_u).is_zero()) {
        for n in &mut num {
            *n /= &three_u;
        }
        three -= 1;
    }
    VPmf { k, num, two, three }
}

/// Coefficients of Σ a_v (1 + x)^v.
fn taylor_shift(mut a: Vec<BigUint>) -> Vec<BigUint> {
    let n = a.len();
    for i in 0..n.saturating_sub(1) {
        for j in (i..n - 1).rev() {
            let next = a[j + 1].clone();
            a[j] += next;
        }
    }
    a
}

/// Product of two polynomials with nonnegative integer coefficients by
/// Kronecker substitution: pack each into one integer with slots wide
/// enough that no product coefficient spills, multiply once, unpack.
pub fn convolve(a: &[BigUint], b: &[BigUint]) -> Vec<BigUint> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let max_bits = |v: &[BigUint]| v.iter().map(BigUint::bits).max().unwrap_or(0);
    let terms = a.len().min(b.len()) as u64;
    let slot_bits = max_bits(a) + max_bits(b) + (64 - terms.leading_zeros() as u64) + 1;
    let w = slot_bits.div_ceil(32) as usize;
    let pack = |v: &[BigUint]| {
        let mut limbs = vec![0u32; v.len() * w];
        for (i, c) in v.iter().enumerate() {
            let d = c.to_u32_digits();
            limbs[i * w..i * w + d.len()].copy_from_slice(&d);
        }
        BigUint::new(limbs)
    };
    let digits = (pack(a) * pack(b)).to_u32_digits();
    (0..a.len() + b.len() - 1)
        .map(|i| {
            let lo = (i * w).min(digits.len());
            let hi = ((i + 1) * w).min(digits.len());
            BigUint::from_slice(&digits[lo..hi])
        })
        .collect()
}

pub fn rde_pmf_exact(k: u32) -> Result<VPmf> {
    if k > MAX_DEPTH {
        return Err(ExperimentError::Bound {
            what: "rde depth",
            value: k as u64,
            max: MAX_DEPTH as u64,
        });
    }
    let mut v = VPmf::point_mass_at_zero();
    for _ in 0..k {
        v = v.next();
    }
    Ok(v)
}

impl Serialize for VPmf {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("VPmf", 3)?;
        st.serialize_field("k", &self.k)?;
        st.serialize_field("q", &format_ratio(&self.q()))?;
        let masses: Vec<String> = self.masses().iter().map(format_ratio).collect();
        st.serialize_field("pmf", &masses)?;
        st.end()
    }
}

/// The components of one recursion step, built with plain rationals.
#[derive(Debug, Clone, PartialEq)]
pub struct RdeMixture {
    pub q: BigRational,
    /// (1/3, 2(1-q)/3, 2q/3)
    pub weights: [BigRational; 3],
    /// law of X = Bin(V, 1/2)
    pub x: Vec<BigRational>,
    /// law of Y; `None` when q = 1 (the branch has weight 0)
    pub y: Option<Vec<BigRational>>,
    pub z: Vec<BigRational>,
}

fn binomial(n: usize, j: usize) -> BigUint {
    let mut c = BigUint::one();
    for i in 0..j {
        c = c * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    c
}

fn rconv(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

impl RdeMixture {
    pub fn from_pmf(v: &[BigRational]) -> Self {
        let pow2 = |j: usize| BigRational::from_integer(BigInt::one() << j);
        let x: Vec<BigRational> = (0..v.len())
            .map(|j| {
                (j..v.len())
                    .map(|n| &v[n] * BigRational::from_integer(binomial(n, j).into()) / pow2(n))
                    .fold(BigRational::zero(), |a, b| a + b)
            })
            .collect();
        let t: Vec<BigRational> = v.iter().enumerate().map(|(j, p)| p / pow2(j)).collect();
        let q: BigRational = t.iter().fold(BigRational::zero(), |a, b| a + b);
        assert!(q > BigRational::zero(), "P[V = 0] > 0 at every finite depth");
        let one = BigRational::one();
        let y = (q != one).then(|| x.iter().zip(&t).map(|(a, b)| (a - b) / (&one - &q)).collect());
        let z = t.iter().map(|b| b / &q).collect();
        let third = BigRational::new(1.into(), 3.into());
        let two_thirds = &third + &third;
        let weights = [third.clone(), (&one - &q) * &two_thirds, &q * &two_thirds];
        Self { q, weights, x, y, z }
    }

    /// Law of the next V, evaluated as the literal three-branch mixture.
    pub fn next_pmf(&self) -> Vec<BigRational> {
        let half = BigRational::new(1.into(), 2.into());
        let coin = [half.clone(), half];
        let mut out = vec![BigRational::zero(); 2 * self.x.len()];
        let mut add = |w: &BigRational, p: Vec<BigRational>| {
            for (j, m) in p.into_iter().enumerate() {
                out[j] += w * m;
            }
        };
        add(&self.weights[0], rconv(&self.x, &self.x));
        if let Some(y) = &self.y {
            add(&self.weights[1], rconv(&rconv(&coin, &self.x), y));
        }
        add(&self.weights[2], rconv(&coin, &self.z));
        while out.len() > 1 && out.last().is_some_and(Zero::is_zero) {
            out.pop();
        }
        out
    }
}

/// Bin(n, 1/2)
fn thin<R: Rng + ?Sized>(n: u64, rng: &mut R) -> u64 {
    let mut left = n;
    let mut kept = 0;
    while left >= 64 {
        kept += rng.random::<u64>().count_ones() as u64;
        left -= 64;
    }
    if left > 0 {
        kept += (rng.random::<u64>() & ((1u64 << left) - 1)).count_ones() as u64;
    }
    kept
}

/// One draw of V_k, simulating the frogs around ∅' directly: V_v frogs come
/// back to ∅' from v and each continues to ∅ or to u; the frog woken at ∅'
/// goes to ∅, u or v; if u is ever visited an independent copy V' of the
/// subtree count is thinned on its way through ∅'.
pub fn rde_sample<R: Rng + ?Sized>(k: u32, rng: &mut R) -> u64 {
    if k == 0 {
        return 0;
    }
    let from_v = rde_sample(k - 1, rng);
    let to_root_from_v = thin(from_v, rng);
    let mut visits = to_root_from_v;
    let mut u_visited = to_root_from_v < from_v;
    match rng.random_range(0..3) {
        0 => visits += 1,
        1 => u_visited = true,
        _ => {} // onto v, already visited: stopped
    }
    if u_visited {
        let from_u = rde_sample(k - 1, rng);
        visits += thin(from_u, rng);
    }
    visits
}
