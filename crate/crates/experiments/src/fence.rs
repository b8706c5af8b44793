//! Stunning fences on the d-ary tree.
//!
//! A fence at depth k stuns every frog that reaches depth k. Once no frog
//! is left moving, the stunned count A_{d,k} is recorded, the fence moves to
//! k + 1 and every stunned frog resumes. All epochs k = 1..=k_max share one
//! run of the frog model.

use std::io::Write;

use frog_core::{
    EngineConfig, FenceWake, FrogSystemState, GraphKind, InitialCondition, RngStreamSpec, StopRule, WalkerKind,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{ExperimentError, Result};
use crate::stats::mean_stderr;

pub const MAX_FENCE_DEPTH: u32 = 25;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FenceOptions {
    pub fence_wake: FenceWake,
    /// Steps a single frog may take within one epoch before the replicate
    /// is abandoned.
    pub step_cap: u64,
}

impl Default for FenceOptions {
    fn default() -> Self {
        Self {
            fence_wake: FenceWake::Stun,
            step_cap: 1_000_000,
        }
    }
}

/// Per-epoch counts of one replicate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FenceReplicate {
    pub stunned: Vec<u64>,
    pub root_visits: Vec<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Aborted {
    pub epoch: u32,
}

pub fn fence_replicate(
    d: u32,
    k_max: u32,
    opts: &FenceOptions,
    stream: RngStreamSpec,
) -> Result<std::result::Result<FenceReplicate, Aborted>> {
    let mut config = EngineConfig::new(GraphKind::DAryTree(d), InitialCondition::OnePerSite, WalkerKind::Simple)
        .with_rule(StopRule::FenceAtDepth(1));
    config.fence_wake = opts.fence_wake;
    config.step_cap = Some(opts.step_cap);
    let mut state = FrogSystemState::new(config)?;
    let mut rng = stream.rng();
    let mut out = FenceReplicate {
        stunned: Vec::with_capacity(k_max as usize),
        root_visits: Vec::with_capacity(k_max as usize),
    };
    for k in 1..=k_max {
        if k > 1 {
            state.set_fence(k);
            state.release_stunned();
        }
        let before = state.root_visits();
        state.run(u64::MAX, &mut rng)?;
        if state.step_cap_exceeded() {
            return Ok(Err(Aborted { epoch: k }));
        }
        let a = state.status_counts().stunned as u64;
        debug_assert!(a >= 1);
        out.stunned.push(a);
        out.root_visits.push(state.root_visits() - before);
    }
    Ok(Ok(out))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FenceRecord {
    pub d: u32,
    pub k: u32,
    /// completed replicates
    pub reps: usize,
    pub mean_a: f64,
    pub stderr_a: f64,
    /// k d^{-k} mean_a
    pub scaled: f64,
    pub mean_root_visits: f64,
    pub aborted: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FenceStats {
    pub d: u32,
    pub k_max: u32,
    pub requested_reps: usize,
    pub seed: u64,
    pub records: Vec<FenceRecord>,
    /// (replicate index, epoch) of every abandoned replicate
    pub aborted: Vec<(u64, u32)>,
}

impl FenceStats {
    pub fn record(&self, k: u32) -> Option<&FenceRecord> {
        self.records.iter().find(|r| r.k == k)
    }

    /// Header `d,k,reps,mean_A,stderr_A,scaled,mean_root_visits,aborted`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["d", "k", "reps", "mean_A", "stderr_A", "scaled", "mean_root_visits", "aborted"])?;
        for r in &self.records {
            out.write_record([
                r.d.to_string(),
                r.k.to_string(),
                r.reps.to_string(),
                r.mean_a.to_string(),
                r.stderr_a.to_string(),
                r.scaled.to_string(),
                r.mean_root_visits.to_string(),
                r.aborted.to_string(),
            ])?;
        }
        out.flush().map_err(csv::Error::from)?;
        Ok(())
    }
}

pub fn fence_experiment(d: u32, k_max: u32, reps: usize, seed: u64) -> Result<FenceStats> {
    fence_experiment_with(d, k_max, reps, seed, &FenceOptions::default())
}

pub fn fence_experiment_with(d: u32, k_max: u32, reps: usize, seed: u64, opts: &FenceOptions) -> Result<FenceStats> {
    if d < 2 {
        return Err(ExperimentError::Input(format!("d = {d}: need d >= 2")));
    }
    if k_max == 0 || k_max > MAX_FENCE_DEPTH {
        return Err(ExperimentError::Bound {
            what: "kmax",
            value: k_max as u64,
            max: MAX_FENCE_DEPTH as u64,
        });
    }
    if reps == 0 {
        return Err(ExperimentError::Input("reps must be positive".into()));
    }
    let runs = (0..reps as u64)
        .into_par_iter()
        .map(|i| fence_replicate(d, k_max, opts, RngStreamSpec::new(seed, i)).map(|r| (i, r)))
        .collect::<Result<Vec<_>>>()?;

    let mut done = Vec::new();
    let mut aborted = Vec::new();
    for (i, r) in runs {
        match r {
            Ok(rep) => done.push(rep),
            Err(a) => aborted.push((i, a.epoch)),
        }
    }
    let records = (1..=k_max)
        .map(|k| {
            let idx = (k - 1) as usize;
            let a: Vec<f64> = done.iter().map(|r| r.stunned[idx] as f64).collect();
            let rv: Vec<f64> = done.iter().map(|r| r.root_visits[idx] as f64).collect();
            let (mean_a, stderr_a) = mean_stderr(&a);
            let (mean_root_visits, _) = mean_stderr(&rv);
            FenceRecord {
                d,
                k,
                reps: done.len(),
                mean_a,
                stderr_a,
                scaled: k as f64 * (d as f64).powi(-(k as i32)) * mean_a,
                mean_root_visits,
                aborted: aborted.len(),
            }
        })
        .collect();
    Ok(FenceStats {
        d,
        k_max,
        requested_reps: reps,
        seed,
        records,
        aborted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_fence_holds_two_frogs() {
        // The initial frog steps to depth 1 and is stunned; the frog it wakes
        // there is stunned in place. Nothing else moves.
        for i in 0..200 {
            let r = fence_replicate(2, 1, &FenceOptions::default(), RngStreamSpec::new(5, i)).unwrap().unwrap();
            assert_eq!(r.stunned, vec![2]);
            assert_eq!(r.root_visits, vec![0]);
        }
    }

    #[test]
    fn moving_woken_frogs_can_cross_the_fence() {
        // Frogs woken on the fence keep walking, so they may pass below it,
        // escape, or stun more than two frogs.
        let opts = FenceOptions {
            fence_wake: FenceWake::Move,
            step_cap: 10_000,
        };
        let mut more_than_two = false;
        for i in 0..200 {
            if let Ok(r) = fence_replicate(2, 1, &opts, RngStreamSpec::new(6, i)).unwrap() {
                assert!(r.stunned[0] >= 1);
                more_than_two |= r.stunned[0] > 2;
            }
        }
        assert!(more_than_two);
    }

    #[test]
    fn stunned_counts_grow_with_depth() {
        for i in 0..50 {
            let r = fence_replicate(3, 6, &FenceOptions::default(), RngStreamSpec::new(8, i)).unwrap().unwrap();
            assert!(r.stunned.windows(2).all(|w| w[1] > w[0]));
            // never more frogs than vertices above the fence
            for (k, a) in r.stunned.iter().enumerate() {
                let vertices: u64 = (0..=k as u32 + 1).map(|l| 3u64.pow(l)).sum();
                assert!(*a <= vertices);
            }
        }
    }

    #[test]
    fn tiny_step_cap_aborts() {
        let opts = FenceOptions {
            step_cap: 1,
            ..Default::default()
        };
        let s = fence_experiment_with(2, 6, 20, 1, &opts).unwrap();
        assert!(!s.aborted.is_empty());
        let r = s.record(1).unwrap();
        assert_eq!(r.reps + r.aborted, 20);
    }

    #[test]
    fn csv_layout() {
        let s = fence_experiment(2, 3, 10, 4).unwrap();
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("d,k,reps,mean_A,stderr_A,scaled,mean_root_visits,aborted"));
        assert_eq!(lines.count(), 3);
        assert_eq!(s.record(1).unwrap().mean_a, 2.0);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(fence_experiment(1, 3, 10, 0).is_err());
        assert!(fence_experiment(2, 26, 10, 0).is_err());
        assert!(fence_experiment(2, 0, 10, 0).is_err());
        assert!(fence_experiment(2, 3, 0, 0).is_err());
    }
}
