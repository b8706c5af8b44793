//! Executable checks of two structural facts: 𝒜 is monotone, and it
//! maps nondecreasing functions into [0, 1] to nondecreasing functions into
//! [0, 1].

use serde::Serialize;

use crate::error::{RecurrenceError, Result};
use crate::operator::{combine, in_unit};
use crate::scalar::Scalar;

fn tolerance<S: Scalar>() -> f64 {
    if S::is_exact() {
        0.0
    } else {
        1e-12
    }
}

fn sort_dedup<S: Scalar>(mut v: Vec<S>) -> Vec<S> {
    v.sort_by(|a, b| a.partial_cmp(b).expect("comparable grid points"));
    v.dedup();
    v
}

/// `grid` together with its images under t ↦ t/2 and t ↦ (t+1)/2, iterated
/// `depth` times; sorted.
pub fn grid_closure<S: Scalar>(grid: &[S], depth: u32) -> Vec<S> {
    let mut all = sort_dedup(grid.to_vec());
    let mut frontier = all.clone();
    for _ in 0..depth {
        let next: Vec<S> = frontier
            .iter()
            .flat_map(|t| [t.div_pow2(1), t.add(&S::one()).div_pow2(1)])
            .collect();
        all.extend(next.iter().cloned());
        all = sort_dedup(all);
        frontier = sort_dedup(next);
    }
    all
}

/// `{j / 2^k : 0 ≤ j ≤ 2^k}`
pub fn dyadic_grid<S: Scalar>(k: u32) -> Vec<S> {
    (0..=(1i64 << k)).map(|j| S::from_int(j).div_pow2(k)).collect()
}

fn check_nondecreasing<S: Scalar>(name: &str, pts: &[S], vals: &[S]) -> Result<()> {
    for (i, v) in vals.iter().enumerate() {
        if !in_unit(v) {
            return Err(RecurrenceError::Input(format!("{name}({:?}) = {v:?} is outside [0, 1]", pts[i])));
        }
    }
    for i in 1..vals.len() {
        if vals[i] < vals[i - 1] {
            return Err(RecurrenceError::Input(format!("{name} decreases between {:?} and {:?}", pts[i - 1], pts[i])));
        }
    }
    Ok(())
}

/// 𝒜f on each grid point, reading f only on the one-step closure.
fn apply_on_grid<S: Scalar>(f: &impl Fn(&S) -> S, grid: &[S]) -> Vec<S> {
    grid.iter()
        .map(|x| {
            let hi = f(&x.add(&S::one()).div_pow2(1));
            let lo = f(&x.div_pow2(1));
            combine(x, &hi, &lo)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonotoneReport {
    pub points: usize,
    /// max over the grid of 𝒜g − 𝒜h
    pub max_violation: f64,
    pub holds: bool,
}

pub fn check_monotone_operator<S: Scalar>(
    g: impl Fn(&S) -> S,
    h: impl Fn(&S) -> S,
    grid: &[S],
) -> Result<MonotoneReport> {
    if grid.iter().any(|x| !in_unit(x)) {
        return Err(RecurrenceError::Domain("grid leaves [0, 1]".into()));
    }
    let closure = grid_closure(grid, 1);
    let gv: Vec<S> = closure.iter().map(&g).collect();
    let hv: Vec<S> = closure.iter().map(&h).collect();
    check_nondecreasing("g", &closure, &gv)?;
    check_nondecreasing("h", &closure, &hv)?;
    if let Some(i) = (0..closure.len()).find(|&i| gv[i] > hv[i]) {
        return Err(RecurrenceError::Input(format!("g > h at {:?}", closure[i])));
    }
    let ag = apply_on_grid(&g, grid);
    let ah = apply_on_grid(&h, grid);
    let worst = ag
        .iter()
        .zip(&ah)
        .map(|(a, b)| a.sub(b))
        .max_by(|a, b| a.partial_cmp(b).unwrap())
        .unwrap_or_else(S::zero);
    let max_violation = worst.to_f64();
    let holds = if S::is_exact() {
        worst <= S::zero()
    } else {
        max_violation <= tolerance::<S>()
    };
    Ok(MonotoneReport {
        points: grid.len(),
        max_violation,
        holds,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClosureReport {
    pub points: usize,
    pub min: f64,
    pub max: f64,
    /// Largest drop between consecutive grid points (0 if nondecreasing).
    pub max_decrease: f64,
    pub in_s: bool,
}

/// The precondition on g is not enforced here: the report simply says
/// whether 𝒜g came out in range and nondecreasing on the sorted grid.
pub fn check_closure<S: Scalar>(g: impl Fn(&S) -> S, grid: &[S]) -> Result<ClosureReport> {
    if grid.iter().any(|x| !in_unit(x)) {
        return Err(RecurrenceError::Domain("grid leaves [0, 1]".into()));
    }
    let pts = sort_dedup(grid.to_vec());
    let vals = apply_on_grid(&g, &pts);
    let tol = tolerance::<S>();
    let mut max_decrease = S::zero();
    for w in vals.windows(2) {
        let d = w[0].sub(&w[1]);
        if d > max_decrease {
            max_decrease = d;
        }
    }
    let lo = vals.iter().cloned().min_by(|a, b| a.partial_cmp(b).unwrap()).unwrap_or_else(S::one);
    let hi = vals.iter().cloned().max_by(|a, b| a.partial_cmp(b).unwrap()).unwrap_or_else(S::zero);
    let (min, max, dec) = (lo.to_f64(), hi.to_f64(), max_decrease.to_f64());
    let in_s = if S::is_exact() {
        in_unit(&lo) && in_unit(&hi) && max_decrease == S::zero()
    } else {
        min >= -tol && max <= 1.0 + tol && dec <= tol
    };
    Ok(ClosureReport {
        points: pts.len(),
        min,
        max,
        max_decrease: dec,
        in_s,
    })
}

/// Right-continuous nondecreasing step function on [0, 1]: `values[i]` on
/// `[breaks[i-1], breaks[i])`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFunction<S> {
    breaks: Vec<S>,
    values: Vec<S>,
}

impl<S: Scalar> StepFunction<S> {
    pub fn new(breaks: Vec<S>, values: Vec<S>) -> Result<Self> {
        if values.len() != breaks.len() + 1 {
            return Err(RecurrenceError::Input("need one more value than breaks".into()));
        }
        if breaks.windows(2).any(|w| w[1] < w[0]) || values.windows(2).any(|w| w[1] < w[0]) {
            return Err(RecurrenceError::Input("breaks and values must be sorted".into()));
        }
        if !values.iter().all(in_unit) {
            return Err(RecurrenceError::Input("values must lie in [0, 1]".into()));
        }
        Ok(Self { breaks, values })
    }

    pub fn eval(&self, t: &S) -> S {
        let i = self.breaks.partition_point(|b| b <= t);
        self.values[i].clone()
    }
}
