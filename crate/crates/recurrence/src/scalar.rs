//! Number types the operator can run over.
//!
//! Every denominator produced by iterating the operator from the constant 1
//! at a dyadic point is of the form 2^a 3^b, so exact mode uses
//! [`Smooth`], which keeps that shape and never needs a gcd. Plain
//! `BigRational` is kept as the reference implementation.

use std::cmp::Ordering;
use std::fmt;

use frog_core::rational::ratio_to_f64;
use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub trait Scalar: Clone + PartialOrd + fmt::Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_int(n: i64) -> Self;
    /// `None` when the type cannot hold `r` exactly.
    fn from_ratio(r: &BigRational) -> Option<Self>;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div_pow2(&self, k: u32) -> Self;
    fn div3(&self) -> Self;
    fn to_f64(&self) -> f64;
    fn to_ratio(&self) -> BigRational;
    fn is_exact() -> bool;
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_int(n: i64) -> Self {
        n as f64
    }
    fn from_ratio(r: &BigRational) -> Option<Self> {
        Some(ratio_to_f64(r))
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div_pow2(&self, k: u32) -> Self {
        self * 2f64.powi(-(k as i32))
    }
    fn div3(&self) -> Self {
        self / 3.0
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn to_ratio(&self) -> BigRational {
        BigRational::from_float(*self).expect("finite float")
    }
    fn is_exact() -> bool {
        false
    }
}

impl Scalar for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_int(n: i64) -> Self {
        BigRational::from_integer(n.into())
    }
    fn from_ratio(r: &BigRational) -> Option<Self> {
        Some(r.clone())
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div_pow2(&self, k: u32) -> Self {
        self / BigRational::from_integer(BigInt::one() << k as usize)
    }
    fn div3(&self) -> Self {
        self / BigRational::from_integer(3.into())
    }
    fn to_f64(&self) -> f64 {
        ratio_to_f64(self)
    }
    fn to_ratio(&self) -> BigRational {
        self.clone()
    }
    fn is_exact() -> bool {
        true
    }
}

/// `num / (2^a 3^b)`, normalized so that `num` is odd when `a > 0` and not
/// a multiple of 3 when `b > 0`. Zero is `0 / 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Smooth {
    num: BigInt,
    a: u64,
    b: u64,
}

impl Smooth {
    fn normalized(mut num: BigInt, mut a: u64, mut b: u64) -> Self {
        if num.is_zero() {
            return Self { num, a: 0, b: 0 };
        }
        if a > 0 {
            let tz = num.trailing_zeros().unwrap_or(0).min(a);
            if tz > 0 {
                num >>= tz as usize;
                a -= tz;
            }
        }
        let three = BigInt::from(3);
        while b > 0 {
            let (q, r) = num.div_rem(&three);
            if !r.is_zero() {
                break;
            }
            num = q;
            b -= 1;
        }
        Self { num, a, b }
    }

    /// Raw parts `(num, a, b)`.
    pub fn parts(&self) -> (&BigInt, u64, u64) {
        (&self.num, self.a, self.b)
    }

    fn scaled_num(&self, a: u64, b: u64) -> BigInt {
        let mut n = &self.num << (a - self.a) as usize;
        if b > self.b {
            n *= BigInt::from(3).pow((b - self.b) as u32);
        }
        n
    }

    fn aligned(&self, o: &Self) -> (BigInt, BigInt, u64, u64) {
        let a = self.a.max(o.a);
        let b = self.b.max(o.b);
        (self.scaled_num(a, b), o.scaled_num(a, b), a, b)
    }

    fn denom(&self) -> BigInt {
        (BigInt::one() << self.a as usize) * BigInt::from(3).pow(self.b as u32)
    }
}

impl fmt::Debug for Smooth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/(2^{} 3^{})", self.num, self.a, self.b)
    }
}

impl PartialOrd for Smooth {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Smooth {
    fn cmp(&self, o: &Self) -> Ordering {
        let (x, y, _, _) = self.aligned(o);
        x.cmp(&y)
    }
}

impl Scalar for Smooth {
    fn zero() -> Self {
        Self { num: BigInt::zero(), a: 0, b: 0 }
    }
    fn one() -> Self {
        Self { num: BigInt::one(), a: 0, b: 0 }
    }
    fn from_int(n: i64) -> Self {
        Self { num: n.into(), a: 0, b: 0 }
    }
    fn from_ratio(r: &BigRational) -> Option<Self> {
        let mut d = r.denom().clone();
        let a = d.trailing_zeros().unwrap_or(0);
        d >>= a as usize;
        let three = BigInt::from(3);
        let mut b = 0;
        while (&d % &three).is_zero() {
            d /= &three;
            b += 1;
        }
        d.is_one().then(|| Self::normalized(r.numer().clone(), a, b))
    }
    fn add(&self, o: &Self) -> Self {
        let (x, y, a, b) = self.aligned(o);
        Self::normalized(x + y, a, b)
    }
    fn sub(&self, o: &Self) -> Self {
        let (x, y, a, b) = self.aligned(o);
        Self::normalized(x - y, a, b)
    }
    fn mul(&self, o: &Self) -> Self {
        Self::normalized(&self.num * &o.num, self.a + o.a, self.b + o.b)
    }
    fn div_pow2(&self, k: u32) -> Self {
        if self.num.is_zero() {
            return self.clone();
        }
        Self { num: self.num.clone(), a: self.a + k as u64, b: self.b }
    }
    fn div3(&self) -> Self {
        if self.num.is_zero() {
            return self.clone();
        }
        Self { num: self.num.clone(), a: self.a, b: self.b + 1 }
    }
    fn to_f64(&self) -> f64 {
        if self.a == 0 && self.b == 0 {
            return self.num.to_f64().unwrap_or(f64::NAN);
        }
        // Truncate both parts to their top 128 bits: relative error ~2^-127.
        let n = self.num.abs();
        let d = self.denom();
        let top = |v: &BigInt| -> (f64, i64) {
            let s = v.bits().saturating_sub(128);
            ((v >> s as usize).to_f64().unwrap(), s as i64)
        };
        let (nf, ns) = top(&n);
        let (df, ds) = top(&d);
        // Scale in two halves so an intermediate power of two cannot
        // underflow while the final value is still representable.
        let e = (ns - ds).clamp(-4000, 4000) as i32;
        let v = nf / df * 2f64.powi(e / 2) * 2f64.powi(e - e / 2);
        if self.num.sign() == Sign::Minus {
            -v
        } else {
            v
        }
    }
    fn to_ratio(&self) -> BigRational {
        // Normalization makes the fraction already reduced.
        BigRational::new_raw(self.num.clone(), self.denom())
    }
    fn is_exact() -> bool {
        true
    }
}

impl Smooth {
    pub fn is_negative(&self) -> bool {
        self.num.is_negative()
    }
}
