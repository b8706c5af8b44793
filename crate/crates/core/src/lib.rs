//! Frog model on trees: graph families with arithmetic vertex addressing,
//! walkers, and a synchronous multi-frog engine with pluggable stopping
//! rules.

pub mod engine;
pub mod error;
pub mod graph;
pub mod rational;
pub mod rng;
pub mod walker;

pub use engine::{
    run_frog_model, CollisionCheck, EngineConfig, FenceWake, Frog, FrogStatus, FrogSystemState,
    InitialCondition, SiteRule, StatusCounts, StepRecord, StopRule, TraceSummary, WakeOrder,
};
pub use error::{FrogError, Result};
pub use graph::{GraphKind, Move, VertexAddress};
pub use rng::{RngStreamSpec, StreamRng};
pub use walker::{step_walker, WalkerKind, WalkerMemory};
