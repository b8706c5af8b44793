//! Events A, B, C of the self-similar model on the binary tree. The initial
//! frog walks ∅ → ∅' → v; u is the other child of ∅'.
//!
//! - A: the frog woken at ∅' visits u.
//! - B: not A, but a frog coming back up through v visits u.
//! - C: u is never visited.

use frog_core::{EngineConfig, FrogSystemState, GraphKind, RngStreamSpec, StopRule};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{ExperimentError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AbcEvent {
    A,
    B,
    C,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AbcEstimate {
    pub reps: u64,
    pub depth_cap: u32,
    pub counts: [u64; 3],
}

impl AbcEstimate {
    pub fn p(&self, e: AbcEvent) -> f64 {
        self.counts[e as usize] as f64 / self.reps as f64
    }

    pub fn p_a(&self) -> f64 {
        self.p(AbcEvent::A)
    }

    pub fn p_b(&self) -> f64 {
        self.p(AbcEvent::B)
    }

    pub fn p_c(&self) -> f64 {
        self.p(AbcEvent::C)
    }
}

pub fn classify_replicate(depth_cap: u32, stream: RngStreamSpec) -> Result<AbcEvent> {
    let g = GraphKind::DAryTree(2);
    let config = EngineConfig::self_similar(g).with_rule(StopRule::DepthCap(depth_cap));
    let mut state = FrogSystemState::new(config)?;
    let mut rng = stream.rng();
    state.step_round(&mut rng)?;
    let root_prime = state.frogs()[0].address;
    state.step_round(&mut rng)?;
    let v = state.frogs()[0].address;
    let u = g
        .neighbors(&root_prime)?
        .into_iter()
        .skip(1)
        .find(|c| *c != v)
        .expect("binary tree vertex has two children");
    // frog 1 is the one woken at ∅'
    if state.frogs()[1].address == u {
        return Ok(AbcEvent::A);
    }
    state.run(u64::MAX, &mut rng)?;
    Ok(if state.is_visited(&u) { AbcEvent::B } else { AbcEvent::C })
}

pub fn event_abc_estimate(reps: u64, depth_cap: u32, seed: u64) -> Result<AbcEstimate> {
    if reps == 0 {
        return Err(ExperimentError::Input("reps must be positive".into()));
    }
    if depth_cap < 2 {
        return Err(ExperimentError::Input(format!("depth cap {depth_cap}: need at least 2")));
    }
    let events = (0..reps)
        .into_par_iter()
        .map(|i| classify_replicate(depth_cap, RngStreamSpec::new(seed, i)))
        .collect::<Result<Vec<_>>>()?;
    let mut counts = [0u64; 3];
    for e in events {
        counts[e as usize] += 1;
    }
    Ok(AbcEstimate { reps, depth_cap, counts })
}
