use num_rational::BigRational;
use serde::{Serialize, Serializer};

use crate::error::{RecurrenceError, Result};
use crate::scalar::{Scalar, Smooth};
use frog_core::rational::{format_ratio, is_unit_interval};

/// Exact iteration keeps every level of the dyadic table; past this depth
/// the table no longer fits comfortably in memory.
pub const EXACT_DEPTH_LIMIT: u32 = 24;

/// Float tables hold 2^n doubles; 2^26 of them is half a gigabyte.
pub const TABLE_DEPTH_LIMIT: u32 = 26;

/// The operator applied to known values: `hi = g((x+1)/2)`, `lo = g(x/2)`.
pub fn combine<S: Scalar>(x: &S, hi: &S, lo: &S) -> S {
    let one = S::one();
    let w_hi = x.add(&S::from_int(2)).div3();
    let w_lo = x.add(&one).div3();
    w_hi.mul(&hi.mul(hi)).add(&w_lo.mul(lo).mul(&one.sub(hi)))
}

pub(crate) fn in_unit<S: Scalar>(v: &S) -> bool {
    *v >= S::zero() && *v <= S::one()
}

pub fn apply_a<S: Scalar>(g: impl Fn(&S) -> S, x: &S) -> Result<S> {
    if !in_unit(x) {
        return Err(RecurrenceError::Domain(format!("x = {x:?}")));
    }
    let hi_arg = x.add(&S::one()).div_pow2(1);
    let lo_arg = x.div_pow2(1);
    let hi = g(&hi_arg);
    let lo = g(&lo_arg);
    for (t, v) in [(hi_arg, &hi), (lo_arg, &lo)] {
        if !in_unit(v) {
            return Err(RecurrenceError::Contract(format!("g({t:?}) = {v:?}")));
        }
    }
    Ok(combine(x, &hi, &lo))
}

/// Values of 𝒜^{n-m} g₀ at the points `(x + j) / 2^m`, `0 ≤ j < 2^m`, for
/// every level `m < n`. Level `n` is the constant 1 and is not stored.
///
/// Level `m` is built from level `m + 1`: the argument `(x+j)/2^m` has
/// halves `(x+j)/2^{m+1}` (index `j`) and `(x+j+2^m)/2^{m+1}` (index
/// `j + 2^m`).
#[derive(Debug, Clone)]
pub struct DyadicFunctionTable<S> {
    depth: u32,
    x: S,
    levels: Vec<Vec<S>>,
}

impl<S: Scalar> DyadicFunctionTable<S> {
    pub fn build(depth: u32, x: S) -> Result<Self> {
        if !in_unit(&x) {
            return Err(RecurrenceError::Domain(format!("x = {x:?}")));
        }
        if depth > TABLE_DEPTH_LIMIT {
            return Err(RecurrenceError::Bound { n: depth, max: TABLE_DEPTH_LIMIT });
        }
        let mut levels: Vec<Vec<S>> = Vec::with_capacity(depth as usize);
        for m in (0..depth).rev() {
            let row = next_level(&x, m, levels.last());
            levels.push(row);
        }
        levels.reverse();
        Ok(Self { depth, x, levels })
    }

    /// 𝒜^{depth} g₀(x) without keeping the table: only two levels are
    /// alive at a time.
    pub fn evaluate(depth: u32, x: S) -> Result<S> {
        if !in_unit(&x) {
            return Err(RecurrenceError::Domain(format!("x = {x:?}")));
        }
        if depth > TABLE_DEPTH_LIMIT {
            return Err(RecurrenceError::Bound { n: depth, max: TABLE_DEPTH_LIMIT });
        }
        let mut below: Option<Vec<S>> = None;
        for m in (0..depth).rev() {
            below = Some(next_level(&x, m, below.as_ref()));
        }
        Ok(below.map_or_else(S::one, |mut row| row.swap_remove(0)))
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn x(&self) -> &S {
        &self.x
    }

    /// 𝒜^{depth} g₀(x).
    pub fn value(&self) -> S {
        self.get(0, 0)
    }

    /// 𝒜^{depth-m} g₀((x + j) / 2^m).
    pub fn get(&self, m: u32, j: usize) -> S {
        if m >= self.depth {
            S::one()
        } else {
            self.levels[m as usize][j].clone()
        }
    }

    pub fn argument(&self, m: u32, j: usize) -> S {
        self.x.add(&S::from_int(j as i64)).div_pow2(m)
    }

    pub fn len(&self) -> usize {
        self.levels.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn values(&self) -> impl Iterator<Item = &S> {
        self.levels.iter().flatten()
    }
}

fn next_level<S: Scalar>(x: &S, m: u32, below: Option<&Vec<S>>) -> Vec<S> {
    let width = 1usize << m;
    let one = S::one();
    (0..width)
        .map(|j| {
            let t = x.add(&S::from_int(j as i64)).div_pow2(m);
            let (hi, lo) = match below {
                Some(b) => (&b[j + width], &b[j]),
                None => (&one, &one),
            };
            combine(&t, hi, lo)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ArithmeticMode {
    Exact,
    Float,
}

#[derive(Debug, Clone, PartialEq)]
pub enum IterateValue {
    Exact(BigRational),
    Float(f64),
}

impl IterateValue {
    pub fn to_f64(&self) -> f64 {
        match self {
            IterateValue::Exact(r) => Scalar::to_f64(r),
            IterateValue::Float(v) => *v,
        }
    }

    pub fn exact(&self) -> Option<&BigRational> {
        match self {
            IterateValue::Exact(r) => Some(r),
            IterateValue::Float(_) => None,
        }
    }
}

impl Serialize for IterateValue {
    fn serialize<Z: Serializer>(&self, s: Z) -> std::result::Result<Z::Ok, Z::Error> {
        match self {
            IterateValue::Exact(r) => s.serialize_str(&format_ratio(r)),
            IterateValue::Float(v) => s.serialize_f64(*v),
        }
    }
}

/// 𝒜ⁿ g₀(x) with g₀ ≡ 1.
pub fn iterate_a(n: u32, x: &BigRational, mode: ArithmeticMode) -> Result<IterateValue> {
    if !is_unit_interval(x) {
        return Err(RecurrenceError::Domain(format!("x = {x}")));
    }
    match mode {
        ArithmeticMode::Float => {
            let v = DyadicFunctionTable::evaluate(n, Scalar::to_f64(x))?;
            Ok(IterateValue::Float(v))
        }
        ArithmeticMode::Exact => {
            if n > EXACT_DEPTH_LIMIT {
                return Err(RecurrenceError::Bound { n, max: EXACT_DEPTH_LIMIT });
            }
            // Dyadic and triadic points stay in the gcd-free representation.
            let v = match Smooth::from_ratio(x) {
                Some(s) => DyadicFunctionTable::evaluate(n, s)?.to_ratio(),
                None => DyadicFunctionTable::evaluate(n, x.clone())?,
            };
            Ok(IterateValue::Exact(v))
        }
    }
}
