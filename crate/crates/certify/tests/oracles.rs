use std::collections::HashSet;

use frog_certify::*;
use frog_core::rational::{ratio, ratio_to_f64};
use frog_core::RngStreamSpec;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::Rng;

/// Direct simulation of two rounds from one frog with sleepers everywhere
/// except the ancestors. Vertices are paths from the grandparent.
fn simulate_single_frog(rng: &mut impl Rng) -> usize {
    let origin: Vec<u8> = vec![0, 0];
    let mut empty: HashSet<Vec<u8>> = [vec![], vec![0], origin.clone()].into_iter().collect();
    let step = |v: &Vec<u8>, rng: &mut dyn rand::RngCore| {
        let k = rng.random_range(0..6u8);
        let mut w = v.clone();
        if k == 5 {
            w.pop();
        } else {
            w.push(k);
        }
        w
    };
    let mut frogs = vec![origin];
    for _ in 0..2 {
        let moved: Vec<Vec<u8>> = frogs.iter().map(|v| step(v, rng)).collect();
        let mut next = moved.clone();
        for v in moved {
            if empty.insert(v.clone()) {
                next.push(v);
            }
        }
        frogs = next;
    }
    frogs.len()
}

#[test]
fn expected_frogs_match_simulation() {
    let t = ParticleType::new(1, 0, 0).unwrap();
    let exact = ratio_to_f64(&expected_awake(t));
    let mut rng = RngStreamSpec::new(3, 0).rng();
    let n = 1_000_000;
    let xs: Vec<f64> = (0..n).map(|_| simulate_single_frog(&mut rng) as f64).collect();
    let mean = xs.iter().sum::<f64>() / n as f64;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    let se = (var / n as f64).sqrt();
    assert!((mean - exact).abs() <= 3.0 * se, "{mean} vs {exact} (se {se})");
}

fn naive_pow(m: &RationalMatrix, e: u64) -> RationalMatrix {
    let mut acc = m.clone();
    for _ in 1..e {
        acc = mat_mul(&acc, m);
    }
    acc
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn square_and_multiply_matches_naive(
        entries in prop::collection::vec((0i64..20, 1i64..12), 16),
        e in 1u64..=20,
    ) {
        let m: RationalMatrix = entries
            .chunks(4)
            .map(|r| r.iter().map(|&(p, q)| ratio(p, q)).collect())
            .collect();
        prop_assert_eq!(mat_pow(&m, e).unwrap(), naive_pow(&m, e));
    }

    #[test]
    fn certificate_agrees_with_naive_row_sums(
        entries in prop::collection::vec((0i64..6, 1i64..12), 9),
        e in 1u64..=12,
    ) {
        let m: RationalMatrix = entries
            .chunks(3)
            .map(|r| r.iter().map(|&(p, q)| ratio(p, q)).collect())
            .collect();
        let c = power_rowsum_certificate("m", &ratio(1, 1), &m, e, DEFAULT_BIT_LIMIT).unwrap();
        let sums: Vec<BigRational> = naive_pow(&m, e).iter().map(|r| r.iter().sum()).collect();
        let max = sums.into_iter().max().unwrap();
        prop_assert_eq!(&c.max_row_sum, &max);
        prop_assert_eq!(c.pass, max < ratio(1, 1));
    }
}
