use std::sync::OnceLock;

use frog_core::rational::ratio;
use frog_core::RngStreamSpec;
use frog_recurrence::*;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::Rng;

const N_MAX: u32 = 20;

/// 𝒜ⁿ g₀(j/16) for n ≤ 20 and j ≤ 16, exact. Takes about a minute and a
/// half on one core, so it is shared by every test in this file.
fn exact_table() -> &'static Vec<Vec<BigRational>> {
    static T: OnceLock<Vec<Vec<BigRational>>> = OnceLock::new();
    T.get_or_init(|| {
        (0..=N_MAX)
            .map(|n| {
                sixteenths()
                    .iter()
                    .map(|x| iterate_a(n, x, ArithmeticMode::Exact).unwrap().exact().unwrap().clone())
                    .collect()
            })
            .collect()
    })
}

#[test]
fn iterates_decrease_in_n_exactly() {
    let t = exact_table();
    for (n, w) in t.windows(2).enumerate() {
        for (j, (next, prev)) in w[1].iter().zip(&w[0]).enumerate() {
            assert!(next <= prev, "n={n} j={j}");
        }
    }
    // strictly below 1 off x = 1 once n ≥ 1
    assert!(t[1][..16].iter().all(|v| *v < ratio(1, 1)));
    assert!(t.iter().all(|row| row[16] == ratio(1, 1)));
}

#[test]
fn exact_and_float_agree() {
    let t = exact_table();
    let tol = 2f64.powi(-40);
    for n in 0..=N_MAX {
        for (j, x) in sixteenths().iter().enumerate() {
            let f = iterate_a(n, x, ArithmeticMode::Float).unwrap().to_f64();
            let e = Scalar::to_f64(&t[n as usize][j]);
            assert!((e - f).abs() <= tol, "n={n} x={x}: {e} vs {f}");
        }
    }
}

#[test]
fn poisson_envelope_dominates_float_sweep() {
    for n in 0..=N_MAX {
        let r = poisson_domination_check(n, &sixteenths(), ArithmeticMode::Float).unwrap();
        assert!(r.holds(1e-12), "n={n} min slack {}", r.min_slack);
        assert_eq!(r.points.len(), 17);
    }
}

#[test]
fn poisson_envelope_dominates_exact_values() {
    let t = exact_table();
    let seq = poisson_seq(N_MAX as usize);
    for (n, row) in t.iter().enumerate() {
        for (v, x) in row.iter().zip(sixteenths()) {
            let bound = seq.bound(n, Scalar::to_f64(&x));
            assert!(Scalar::to_f64(v) <= bound, "n={n} x={x}");
        }
    }
    let v20 = Scalar::to_f64(&t[20][8]);
    assert!(v20 <= (seq.a(20) * -0.5).exp());
}

fn random_step(rng: &mut impl Rng) -> StepFunction<f64> {
    let k = rng.random_range(0..8);
    let mut breaks: Vec<f64> = (0..k).map(|_| rng.random_range(0..=64) as f64 / 64.0).collect();
    breaks.sort_by(f64::total_cmp);
    let mut values: Vec<f64> = (0..=k).map(|_| rng.random::<f64>()).collect();
    values.sort_by(f64::total_cmp);
    StepFunction::new(breaks, values).unwrap()
}

#[test]
fn operator_is_monotone_on_random_pairs() {
    let mut rng = RngStreamSpec::new(7, 0).rng();
    let grid = grid_closure::<f64>(&dyadic_grid(4), 2);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..1000 {
        let (u, v) = (random_step(&mut rng), random_step(&mut rng));
        let g = |t: &f64| u.eval(t).min(v.eval(t));
        let h = |t: &f64| u.eval(t).max(v.eval(t));
        let r = check_monotone_operator(g, h, &grid).unwrap();
        assert!(r.holds, "violation {}", r.max_violation);
        worst = worst.max(r.max_violation);
    }
    assert!(worst <= 1e-12);
}

#[test]
fn closure_holds_on_random_steps() {
    let mut rng = RngStreamSpec::new(7, 1).rng();
    let grid = grid_closure::<f64>(&dyadic_grid(4), 2);
    for _ in 0..1000 {
        let u = random_step(&mut rng);
        let r = check_closure(|t: &f64| u.eval(t), &grid).unwrap();
        assert!(r.in_s, "{r:?}");
    }
}

#[test]
fn consecutive_iterates_stay_ordered() {
    let grid: Vec<BigRational> = sixteenths();
    for n in 1..=10 {
        let g = |t: &BigRational| iterate_a(n, t, ArithmeticMode::Exact).unwrap().exact().unwrap().clone();
        let h = |t: &BigRational| iterate_a(n - 1, t, ArithmeticMode::Exact).unwrap().exact().unwrap().clone();
        let r = check_monotone_operator(g, h, &grid).unwrap();
        assert!(r.holds, "n={n}");
        // equality at x = 1, where every iterate is 1
        assert_eq!(r.max_violation, 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exact_monotone_on_rational_steps(
        bu in prop::collection::vec(0i64..=32, 0..5),
        vu in prop::collection::vec(0i64..=30, 6),
        bv in prop::collection::vec(0i64..=32, 0..5),
        vv in prop::collection::vec(0i64..=30, 6),
    ) {
        let mk = |mut b: Vec<i64>, mut v: Vec<i64>| {
            b.sort();
            v.truncate(b.len() + 1);
            v.sort();
            StepFunction::new(
                b.into_iter().map(|p| ratio(p, 32)).collect(),
                v.into_iter().map(|p| ratio(p, 30)).collect(),
            ).unwrap()
        };
        let (u, v) = (mk(bu, vu), mk(bv, vv));
        let g = |t: &BigRational| u.eval(t).min(v.eval(t));
        let h = |t: &BigRational| u.eval(t).max(v.eval(t));
        let r = check_monotone_operator(g, h, &grid_closure(&dyadic_grid::<BigRational>(3), 1)).unwrap();
        prop_assert!(r.holds);
        prop_assert!(check_closure(|t: &BigRational| u.eval(t), &dyadic_grid::<BigRational>(5)).unwrap().in_s);
    }
}
