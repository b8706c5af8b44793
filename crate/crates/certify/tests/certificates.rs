use std::sync::OnceLock;
use std::time::Instant;

use frog_certify::*;
use frog_core::rational::ratio;
use num_rational::BigRational;

fn third() -> BigRational {
    ratio(1, 3)
}

fn phi27() -> &'static TypedMatrix {
    static M: OnceLock<TypedMatrix> = OnceLock::new();
    M.get_or_init(build_phi27)
}

#[test]
fn phi6_first_passing_power_is_66() {
    let m = phi6_matrix().eval(&third()).unwrap();
    let t = Instant::now();
    let pass = power_rowsum_certificate("phi6", &third(), &m, 66, DEFAULT_BIT_LIMIT).unwrap();
    let fail = power_rowsum_certificate("phi6", &third(), &m, 65, DEFAULT_BIT_LIMIT).unwrap();
    assert!(t.elapsed().as_secs() < 10);
    assert!(pass.pass, "{}", pass.max_row_sum_float);
    assert!(!fail.pass, "{}", fail.max_row_sum_float);
    assert!(pass.max_row_sum < ratio(1, 1) && fail.max_row_sum >= ratio(1, 1));
    let earlier: Vec<u64> = (1..66)
        .filter(|&e| power_rowsum_certificate("phi6", &third(), &m, e, DEFAULT_BIT_LIMIT).unwrap().pass)
        .collect();
    assert!(earlier.is_empty(), "{earlier:?}");
}

#[test]
fn phi6_spectral_radius() {
    let m = phi6_matrix();
    assert!(irreducibility_check(&m.eval(&third()).unwrap()));
    let rho = spectral_radius_estimate(&to_f64_matrix(&m.eval(&third()).unwrap())).unwrap();
    assert!((rho - 0.9937).abs() < 0.002, "{rho}");
    assert!(rho.powi(66) < 1.0);
}

#[test]
fn phi27_shape() {
    let m = phi27();
    assert_eq!(m.dim(), 27);
    assert!(m.has_nonnegative_coefficients());
    for p in m.entries.iter().flatten() {
        assert!(p.exponents().all(|e| [-2, 0, 2].contains(&e)));
    }
    assert!(m.entries.iter().all(|r| r.iter().any(|p| !p.is_zero())));
    assert!(irreducibility_check(&m.eval(&third()).unwrap()));
}

#[test]
fn enumeration_is_a_probability_space() {
    for t in ParticleType::all() {
        let states = two_step_states(t);
        let total: BigRational = states.iter().map(|s| s.probability.clone()).sum();
        assert_eq!(total, ratio(1, 1), "{t}");
        assert_eq!(total_probability(&enumerate_two_step(t)), ratio(1, 1), "{t}");
    }
}

#[test]
fn rows_conserve_frogs() {
    let one = phi27().eval(&ratio(1, 1)).unwrap();
    for t in ParticleType::all() {
        let weighted: BigRational = one[t.index()]
            .iter()
            .enumerate()
            .map(|(j, x)| x * BigRational::from_integer(ParticleType::from_index(j).unwrap().a.into()))
            .sum();
        assert_eq!(weighted, expected_awake(t), "{t}");
    }
}

#[test]
fn piles_conserve_frogs_and_never_overstate_emptiness() {
    for t in ParticleType::all() {
        for s in two_step_states(t) {
            for p in &s.piles {
                for rule in [PileRule::Shared, PileRule::Split] {
                    let parts = decompose(p, rule);
                    assert_eq!(parts.iter().map(|q| q.a as u32).sum::<u32>(), p.frogs);
                    assert!(parts.iter().all(|q| q.b <= p.emptied_children && q.c <= p.emptied_siblings));
                    assert_eq!(parts.iter().filter(|q| q.a < 3).count(), usize::from(p.frogs % 3 != 0));
                }
            }
        }
    }
}

#[test]
fn phi27_passes_at_power_1024() {
    let t = Instant::now();
    let m = phi27().eval(&third()).unwrap();
    let c = power_rowsum_certificate("phi27", &third(), &m, 1024, DEFAULT_BIT_LIMIT).unwrap();
    eprintln!("phi27^1024 max row sum {} in {:?}", c.max_row_sum_float, t.elapsed());
    assert!(c.pass);
    let rho = spectral_radius_estimate(&to_f64_matrix(&m)).unwrap();
    eprintln!("phi27 spectral radius {rho}");
    assert!(rho < 1.0);
}
