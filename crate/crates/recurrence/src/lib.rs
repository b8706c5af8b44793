//! The generating-function operator
//!
//! ```text
//! 𝒜g(x) = (x+2)/3 · g((x+1)/2)² + (x+1)/3 · g(x/2) · (1 − g((x+1)/2))
//! ```
//!
//! for the self-similar frog model on the binary tree, its iterates from
//! g₀ ≡ 1, and the Poisson envelope exp(aₙ(x − 1)) that drives them to 0.

pub mod checks;
pub mod error;
pub mod operator;
pub mod poisson;
pub mod scalar;

pub use checks::{check_closure, check_monotone_operator, dyadic_grid, grid_closure, ClosureReport, MonotoneReport, StepFunction};
pub use error::{RecurrenceError, Result};
pub use operator::{
    apply_a, combine, iterate_a, ArithmeticMode, DyadicFunctionTable, IterateValue, EXACT_DEPTH_LIMIT,
    TABLE_DEPTH_LIMIT,
};
pub use poisson::{
    c_of_a, domination_point, poisson_domination_check, poisson_seq, r_b, r_b_decrease, sixteenths, DominationPoint,
    DominationReport, PoissonBoundSeq,
};
pub use scalar::{Scalar, Smooth};
