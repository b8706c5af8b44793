//! Transience certificates for branching random walks that dominate the frog
//! model on trees: the single-type criterion, the six-type matrix for the
//! 5/6-alternating tree, the 27-type matrix generated by exhaustive two-step
//! enumeration on the 5-ary tree, and exact row-sum checks of matrix powers.

pub mod enumerate;
pub mod error;
pub mod laurent;
pub mod mu;
pub mod phi6;
pub mod power;

pub use enumerate::{
    build_phi27, build_phi27_with, decompose, enumerate_two_step, enumerate_two_step_with, expected_awake,
    total_probability, two_step_states, ChildOutcome, ParticleType, Pile, PileRule, TerminalState,
};
pub use error::{CertifyError, Result};
pub use laurent::{identity, to_f64_matrix, LaurentPoly, RationalMatrix, TypedMatrix};
pub use mu::{is_transient, mu_simple, theta_star, ThetaStar};
pub use phi6::{phi6_matrix, PHI6_LABELS};
pub use power::{
    irreducibility_check, mat_mul, mat_pow, power_rowsum_certificate, spectral_radius_estimate, Certificate,
    DEFAULT_BIT_LIMIT,
};
