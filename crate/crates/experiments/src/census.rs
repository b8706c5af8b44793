use std::collections::BTreeMap;

use frog_core::{EngineConfig, FrogSystemState, GraphKind, RngStreamSpec, VertexAddress};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{ExperimentError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Census {
    pub reps: u64,
    pub horizon: u64,
    /// root-visit count → number of replicates
    pub histogram: BTreeMap<u64, u64>,
    /// replicates with at least one visit to the root after time 0
    pub returned: u64,
    /// `ZGlueTree6` only: replicates whose initial frog first stepped into
    /// the tree rather than onto the line
    pub first_step_into_tree: Option<u64>,
    /// replicates still running at the horizon
    pub unfinished: u64,
}

impl Census {
    pub fn return_fraction(&self) -> f64 {
        self.returned as f64 / self.reps as f64
    }

    pub fn tree_step_fraction(&self) -> Option<f64> {
        self.first_step_into_tree.map(|c| c as f64 / self.reps as f64)
    }
}

struct One {
    visits: u64,
    into_tree: bool,
    unfinished: bool,
}

fn census_replicate(config: &EngineConfig, horizon: u64, stream: RngStreamSpec) -> Result<One> {
    let mut state = FrogSystemState::new(config.clone())?;
    let mut rng = stream.rng();
    let mut into_tree = false;
    if horizon > 0 {
        state.step_round(&mut rng)?;
        into_tree = matches!(state.frogs()[0].address, VertexAddress::Tree { .. });
    }
    let s = state.run(horizon, &mut rng)?;
    Ok(One {
        visits: s.root_visits,
        into_tree,
        unfinished: s.horizon_exhausted,
    })
}

/// Root-visit counts within `horizon` rounds over `reps` independent runs.
pub fn root_visit_census(config: &EngineConfig, horizon: u64, reps: u64, seed: u64) -> Result<Census> {
    if reps == 0 {
        return Err(ExperimentError::Input("reps must be positive".into()));
    }
    let runs = (0..reps)
        .into_par_iter()
        .map(|i| census_replicate(config, horizon, RngStreamSpec::new(seed, i)))
        .collect::<Result<Vec<_>>>()?;
    let mut histogram = BTreeMap::new();
    let (mut returned, mut tree, mut unfinished) = (0, 0, 0);
    for r in &runs {
        *histogram.entry(r.visits).or_insert(0) += 1;
        returned += u64::from(r.visits > 0);
        tree += u64::from(r.into_tree);
        unfinished += u64::from(r.unfinished);
    }
    Ok(Census {
        reps,
        horizon,
        histogram,
        returned,
        first_step_into_tree: (config.graph == GraphKind::ZGlueTree6).then_some(tree),
        unfinished,
    })
}
