//! Experiments on the frog model: stunning-fence statistics on d-ary trees,
//! the A/B/C events and exact root-visit law of the self-similar model,
//! root-visit censuses, and the escape-probability bound δₙ.

pub mod abc;
pub mod census;
pub mod delta;
pub mod error;
pub mod fence;
pub mod rde;
pub mod stats;

pub use abc::{classify_replicate, event_abc_estimate, AbcEstimate, AbcEvent};
pub use census::{root_visit_census, Census};
pub use delta::{delta_float, delta_lower_bound, extrapolated_limit, EscapeBound};
pub use error::{ExperimentError, Result};
pub use fence::{fence_experiment, fence_experiment_with, FenceOptions, FenceRecord, FenceStats};
pub use rde::{rde_pmf_exact, rde_sample, support_bound, RdeMixture, VPmf};
pub use stats::{binomial_sigma, chi_square_gof, mean_stderr, ChiSquareTest};
