//! Synchronous frog-model engine.
//!
//! Every round, all awake frogs move at once. A vertex visited for the first
//! time wakes its sleeping frog, which takes its first step in the next
//! round. Stopping rules are then applied to the frogs that moved and to the
//! frogs that just woke. Sleeping frogs are never materialized: a vertex's
//! frog is created when the vertex is first visited.

use rand::Rng;
use rustc_hash::{FxHashMap, FxHashSet};
use serde::{Deserialize, Serialize};

use crate::error::{FrogError, Result};
use crate::graph::{GraphKind, VertexAddress};
use crate::walker::{step_walker, WalkerKind, WalkerMemory};

/// Which vertices hold a sleeping frog at time zero. The starting vertex
/// never does; it holds the initially awake frog.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum InitialCondition {
    OnePerSite,
    NonePerSite,
    Custom(SiteRule),
}

/// One sleeping frog per vertex except where a rule empties it.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SiteRule {
    /// No sleeping frogs at direct ancestors of the root (homogeneous tree).
    pub empty_root_ancestors: bool,
    /// No sleeping frogs at levels strictly below this one.
    pub empty_below_level: Option<i64>,
    pub empty_vertices: Vec<VertexAddress>,
}

impl InitialCondition {
    pub fn sleeping_frogs(&self, g: &GraphKind, v: &VertexAddress) -> u8 {
        match self {
            InitialCondition::OnePerSite => 1,
            InitialCondition::NonePerSite => 0,
            InitialCondition::Custom(rule) => {
                let emptied = (rule.empty_root_ancestors && g.is_root_ancestor(v))
                    || matches!((rule.empty_below_level, v.level()), (Some(cut), Some(l)) if l < cut)
                    || rule.empty_vertices.contains(v);
                u8::from(!emptied)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StopRule {
    /// Frogs other than the initial one freeze on arriving at the root.
    StopAtRoot,
    /// The self-similar model's collision rules.
    SelfSimilarCollision,
    /// Frogs are stunned on reaching depth `k`.
    FenceAtDepth(u32),
    /// Frogs freeze at depth `k` and beyond (population truncation).
    DepthCap(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FrogStatus {
    Asleep,
    Awake,
    StoppedAtRoot,
    Stunned,
    StoppedCollision,
    Truncated,
}

/// Order of waking and stopping within a round.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum WakeOrder {
    /// Every arrival at an unvisited vertex wakes it; stopping rules run
    /// afterwards and also see the newly woken frogs.
    #[default]
    WakeThenStop,
    /// Stopping rules run on the movers first. A frog stopped this round does
    /// not count as visiting the vertex it stopped on, so it wakes nobody.
    StopThenWake,
}

/// When the self-similar collision test is made for a woken frog.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum CollisionCheck {
    /// At the first step that increases its distance to the root, wherever
    /// in its path that step occurs.
    #[default]
    FirstDownwardStep,
    /// Only if its very first step is away from the root.
    FirstStepOnly,
}

/// Fate of a frog woken at the fence depth.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum FenceWake {
    #[default]
    Stun,
    Move,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EngineConfig {
    pub graph: GraphKind,
    pub init: InitialCondition,
    pub walker: WalkerKind,
    pub stop_rules: Vec<StopRule>,
    pub wake_order: WakeOrder,
    pub collision: CollisionCheck,
    pub fence_wake: FenceWake,
    /// Maximum steps a single frog may take before the run is aborted
    /// (counted since the last [`FrogSystemState::release_stunned`]).
    pub step_cap: Option<u64>,
}

impl EngineConfig {
    pub fn new(graph: GraphKind, init: InitialCondition, walker: WalkerKind) -> Self {
        Self {
            graph,
            init,
            walker,
            stop_rules: Vec::new(),
            wake_order: WakeOrder::default(),
            collision: CollisionCheck::default(),
            fence_wake: FenceWake::default(),
            step_cap: None,
        }
    }

    pub fn with_rule(mut self, rule: StopRule) -> Self {
        self.stop_rules.push(rule);
        self
    }

    pub fn self_similar(graph: GraphKind) -> Self {
        Self::new(graph, InitialCondition::OnePerSite, WalkerKind::SelfSimilar)
            .with_rule(StopRule::StopAtRoot)
            .with_rule(StopRule::SelfSimilarCollision)
    }

    fn rules(&self) -> Result<Rules> {
        let mut r = Rules::default();
        for rule in &self.stop_rules {
            match *rule {
                StopRule::StopAtRoot => r.stop_at_root = true,
                StopRule::SelfSimilarCollision => r.collision = true,
                StopRule::FenceAtDepth(k) => {
                    if r.fence.replace(k as u64).is_some() {
                        return Err(FrogError::Config("more than one fence".into()));
                    }
                }
                StopRule::DepthCap(k) => {
                    if r.depth_cap.replace(k as u64).is_some() {
                        return Err(FrogError::Config("more than one depth cap".into()));
                    }
                }
            }
        }
        if r.collision && self.walker == WalkerKind::Simple {
            return Err(FrogError::Config(
                "the self-similar collision rule needs non-backtracking walkers".into(),
            ));
        }
        Ok(r)
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct Rules {
    stop_at_root: bool,
    collision: bool,
    fence: Option<u64>,
    depth_cap: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Frog {
    pub id: usize,
    pub origin: VertexAddress,
    pub address: VertexAddress,
    pub status: FrogStatus,
    pub memory: WalkerMemory,
    pub woken_round: u64,
    pub steps: u64,
    /// Steps since the last release of stunned frogs.
    pub epoch_steps: u64,
    /// Has taken a step that increased its distance to the root.
    pub turned_down: bool,
}

/// One frog's move in the most recent round.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StepRecord {
    pub frog: usize,
    pub from: VertexAddress,
    pub to: VertexAddress,
    /// `to` had not been visited before this round.
    pub fresh: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatusCounts {
    pub awake: usize,
    pub stopped_at_root: usize,
    pub stunned: usize,
    pub stopped_collision: usize,
    pub truncated: usize,
}

impl StatusCounts {
    pub fn total(&self) -> usize {
        self.awake + self.stopped_at_root + self.stunned + self.stopped_collision + self.truncated
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceSummary {
    pub rounds: u64,
    pub root_visits: u64,
    pub frogs: StatusCounts,
    /// Frogs woken from sleep (the initial frog excluded).
    pub wakes: usize,
    pub visited: usize,
    /// The horizon ran out while frogs were still awake.
    pub horizon_exhausted: bool,
    /// Some frog exceeded the configured step cap.
    pub step_cap_exceeded: bool,
}

#[derive(Debug, Clone)]
pub struct FrogSystemState {
    config: EngineConfig,
    rules: Rules,
    frogs: Vec<Frog>,
    visited: FxHashSet<VertexAddress>,
    active: Vec<usize>,
    round: u64,
    root_visits: u64,
    step_cap_exceeded: bool,
    last_moves: Vec<StepRecord>,
}

impl FrogSystemState {
    /// One awake frog at the root (the glued origin for `ZGlueTree6`).
    pub fn new(config: EngineConfig) -> Result<Self> {
        config.graph.validate()?;
        let rules = config.rules()?;
        let start = config.graph.root();
        let mut visited = FxHashSet::default();
        visited.insert(start);
        let mut state = Self {
            config,
            rules,
            frogs: vec![Frog {
                id: 0,
                origin: start,
                address: start,
                status: FrogStatus::Awake,
                memory: WalkerMemory::default(),
                woken_round: 0,
                steps: 0,
                epoch_steps: 0,
                turned_down: false,
            }],
            visited,
            active: vec![0],
            round: 0,
            root_visits: 0,
            step_cap_exceeded: false,
            last_moves: Vec::new(),
        };
        state.apply_arrival_rules_to_woken(&[0]);
        Ok(state)
    }

    pub fn config(&self) -> &EngineConfig {
        &self.config
    }

    pub fn frogs(&self) -> &[Frog] {
        &self.frogs
    }

    pub fn round(&self) -> u64 {
        self.round
    }

    pub fn root_visits(&self) -> u64 {
        self.root_visits
    }

    pub fn is_visited(&self, v: &VertexAddress) -> bool {
        self.visited.contains(v)
    }

    pub fn visited_count(&self) -> usize {
        self.visited.len()
    }

    pub fn awake_count(&self) -> usize {
        self.active.len()
    }

    pub fn last_moves(&self) -> &[StepRecord] {
        &self.last_moves
    }

    pub fn step_cap_exceeded(&self) -> bool {
        self.step_cap_exceeded
    }

    pub fn status_counts(&self) -> StatusCounts {
        let mut c = StatusCounts::default();
        for f in &self.frogs {
            match f.status {
                FrogStatus::Awake => c.awake += 1,
                FrogStatus::StoppedAtRoot => c.stopped_at_root += 1,
                FrogStatus::Stunned => c.stunned += 1,
                FrogStatus::StoppedCollision => c.stopped_collision += 1,
                FrogStatus::Truncated => c.truncated += 1,
                FrogStatus::Asleep => unreachable!("sleeping frogs are never materialized"),
            }
        }
        c
    }

    pub fn summary(&self) -> TraceSummary {
        TraceSummary {
            rounds: self.round,
            root_visits: self.root_visits,
            frogs: self.status_counts(),
            wakes: self.frogs.len() - 1,
            visited: self.visited.len(),
            horizon_exhausted: !self.active.is_empty() && !self.step_cap_exceeded,
            step_cap_exceeded: self.step_cap_exceeded,
        }
    }

    /// Moves the fence. Frogs already past the new depth stay where they are.
    pub fn set_fence(&mut self, k: u32) {
        self.rules.fence = Some(k as u64);
    }

    /// Wakes every stunned frog and resets the per-epoch step counters.
    /// Returns the number of frogs released.
    pub fn release_stunned(&mut self) -> usize {
        let mut released = 0;
        for f in &mut self.frogs {
            f.epoch_steps = 0;
            if f.status == FrogStatus::Stunned {
                f.status = FrogStatus::Awake;
                released += 1;
            }
        }
        self.active = self
            .frogs
            .iter()
            .filter(|f| f.status == FrogStatus::Awake)
            .map(|f| f.id)
            .collect();
        released
    }

    /// Runs until `horizon` rounds have elapsed, no frog is awake, or the step
    /// cap is hit.
    pub fn run<R: Rng + ?Sized>(&mut self, horizon: u64, rng: &mut R) -> Result<TraceSummary> {
        while self.round < horizon && !self.active.is_empty() && !self.step_cap_exceeded {
            self.step_round(rng)?;
        }
        Ok(self.summary())
    }

    fn fresh_frog(&mut self, v: VertexAddress) -> usize {
        let id = self.frogs.len();
        self.frogs.push(Frog {
            id,
            origin: v,
            address: v,
            status: FrogStatus::Awake,
            memory: WalkerMemory::default(),
            woken_round: self.round,
            steps: 0,
            epoch_steps: 0,
            turned_down: false,
        });
        id
    }

    /// Fence and depth-cap rules for frogs that appear at a vertex without
    /// moving (the initial frog, freshly woken frogs).
    fn apply_arrival_rules_to_woken(&mut self, ids: &[usize]) {
        for &id in ids {
            let depth = self.config.graph.depth(&self.frogs[id].address);
            let status = if self.rules.fence.is_some_and(|k| depth >= k)
                && self.config.fence_wake == FenceWake::Stun
            {
                Some(FrogStatus::Stunned)
            } else if self.rules.depth_cap.is_some_and(|k| depth >= k) {
                Some(FrogStatus::Truncated)
            } else {
                None
            };
            if let Some(s) = status {
                self.frogs[id].status = s;
            }
        }
        self.active.retain(|id| self.frogs[*id].status == FrogStatus::Awake);
    }

    /// One synchronous round.
    pub fn step_round<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<()> {
        let g = self.config.graph;
        let root = g.root();
        let movers = std::mem::take(&mut self.active);
        self.last_moves.clear();

        for &id in &movers {
            let f = &mut self.frogs[id];
            let (to, memory) = step_walker(&g, self.config.walker, &f.address, &f.memory, rng)?;
            let from = f.address;
            f.address = to;
            f.memory = memory;
            f.steps += 1;
            f.epoch_steps += 1;
            if self.config.step_cap.is_some_and(|cap| f.epoch_steps > cap) {
                self.step_cap_exceeded = true;
            }
            if to == root {
                self.root_visits += 1;
            }
            let fresh = !self.visited.contains(&to);
            self.last_moves.push(StepRecord { frog: id, from, to, fresh });
        }

        // Stopping rules for movers.
        let mut stopped: FxHashMap<usize, FrogStatus> = FxHashMap::default();
        let mut first_arrival: FxHashMap<VertexAddress, usize> = FxHashMap::default();
        for rec in &self.last_moves {
            if rec.fresh {
                let e = first_arrival.entry(rec.to).or_insert(rec.frog);
                // movers are processed in id order, so the survivor is the
                // smallest id
                if *e != rec.frog && self.rules.collision {
                    stopped.insert(rec.frog, FrogStatus::StoppedCollision);
                }
            }
        }
        for rec in &self.last_moves {
            let f = &mut self.frogs[rec.frog];
            if self.rules.stop_at_root && rec.to == root && rec.frog != 0 {
                stopped.insert(rec.frog, FrogStatus::StoppedAtRoot);
                continue;
            }
            if self.rules.collision && rec.frog != 0 && !f.turned_down {
                let away = g.depth(&rec.to) > g.depth(&rec.from);
                let checked = match self.config.collision {
                    CollisionCheck::FirstDownwardStep => away,
                    CollisionCheck::FirstStepOnly => away && f.steps == 1,
                };
                if away {
                    f.turned_down = true;
                }
                if checked && !rec.fresh {
                    stopped.insert(rec.frog, FrogStatus::StoppedCollision);
                    continue;
                }
            }
            if stopped.contains_key(&rec.frog) {
                continue;
            }
            let depth = g.depth(&rec.to);
            if self.rules.fence.is_some_and(|k| depth >= k) {
                stopped.insert(rec.frog, FrogStatus::Stunned);
            } else if self.rules.depth_cap.is_some_and(|k| depth >= k) {
                stopped.insert(rec.frog, FrogStatus::Truncated);
            }
        }

        // Waking.
        let mut woken = Vec::new();
        let mut newly: Vec<(usize, VertexAddress)> =
            first_arrival.iter().map(|(v, id)| (*id, *v)).collect();
        newly.sort_unstable();
        for (_, v) in newly {
            if self.config.wake_order == WakeOrder::StopThenWake {
                let survivor = self
                    .last_moves
                    .iter()
                    .any(|r| r.to == v && !stopped.contains_key(&r.frog));
                if !survivor {
                    continue;
                }
            }
            self.visited.insert(v);
            if self.config.init.sleeping_frogs(&g, &v) > 0 {
                woken.push(self.fresh_frog(v));
            }
        }

        for (&id, &status) in &stopped {
            self.frogs[id].status = status;
        }
        self.active = movers
            .into_iter()
            .filter(|id| self.frogs[*id].status == FrogStatus::Awake)
            .collect();
        self.active.extend_from_slice(&woken);
        self.apply_arrival_rules_to_woken(&woken);
        self.round += 1;
        Ok(())
    }
}

/// Runs a fresh system for at most `horizon` rounds.
pub fn run_frog_model<R: Rng + ?Sized>(
    config: EngineConfig,
    horizon: u64,
    rng: &mut R,
) -> Result<TraceSummary> {
    let mut state = FrogSystemState::new(config)?;
    state.run(horizon, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStreamSpec;

    #[test]
    fn horizon_zero_is_untouched() {
        let cfg = EngineConfig::new(GraphKind::DAryTree(2), InitialCondition::NonePerSite, WalkerKind::Simple);
        let s = run_frog_model(cfg, 0, &mut RngStreamSpec::new(1, 0).rng()).unwrap();
        assert_eq!(s.frogs.awake, 1);
        assert_eq!(s.root_visits, 0);
        assert_eq!(s.rounds, 0);
        assert!(s.horizon_exhausted);
    }

    #[test]
    fn lone_frog_never_wakes_anyone() {
        // depth stays below 127, inside the u128 index range of the binary tree
        let cfg = EngineConfig::new(GraphKind::DAryTree(2), InitialCondition::NonePerSite, WalkerKind::Simple);
        let s = run_frog_model(cfg, 120, &mut RngStreamSpec::new(2, 0).rng()).unwrap();
        assert_eq!(s.wakes, 0);
        assert_eq!(s.frogs.total(), 1);
        assert_eq!(s.rounds, 120);
    }

    #[test]
    fn woken_frog_moves_next_round() {
        let cfg = EngineConfig::new(GraphKind::DAryTree(2), InitialCondition::OnePerSite, WalkerKind::Simple);
        let mut st = FrogSystemState::new(cfg).unwrap();
        let mut rng = RngStreamSpec::new(3, 0).rng();
        st.step_round(&mut rng).unwrap();
        assert_eq!(st.frogs().len(), 2);
        let woken = &st.frogs()[1];
        assert_eq!(woken.steps, 0);
        assert_eq!(woken.address, st.frogs()[0].address);
        st.step_round(&mut rng).unwrap();
        assert_eq!(st.frogs()[1].steps, 1);
    }

    #[test]
    fn conservation_and_monotone_visits() {
        let cfg = EngineConfig::new(GraphKind::DAryTree(3), InitialCondition::OnePerSite, WalkerKind::Simple)
            .with_rule(StopRule::DepthCap(6));
        let mut st = FrogSystemState::new(cfg).unwrap();
        let mut rng = RngStreamSpec::new(4, 0).rng();
        let mut last_visited = st.visited_count();
        let mut last_root = 0;
        for _ in 0..60 {
            st.step_round(&mut rng).unwrap();
            let c = st.status_counts();
            assert_eq!(c.total(), 1 + st.summary().wakes);
            assert!(st.visited_count() >= last_visited);
            assert!(st.root_visits() >= last_root);
            // every woken frog's origin is visited
            for f in st.frogs() {
                assert!(st.is_visited(&f.origin));
            }
            // each vertex woke at most one frog
            assert_eq!(st.frogs().len(), st.visited_count());
            last_visited = st.visited_count();
            last_root = st.root_visits();
        }
    }

    #[test]
    fn wake_round_equals_first_visit_round() {
        let cfg = EngineConfig::new(GraphKind::DAryTree(2), InitialCondition::OnePerSite, WalkerKind::Simple)
            .with_rule(StopRule::DepthCap(8));
        let mut st = FrogSystemState::new(cfg).unwrap();
        let mut rng = RngStreamSpec::new(5, 0).rng();
        let mut first_seen = std::collections::HashMap::new();
        for _ in 0..40 {
            st.step_round(&mut rng).unwrap();
            for m in st.last_moves() {
                if m.fresh {
                    first_seen.entry(m.to).or_insert(st.round());
                }
            }
        }
        for f in &st.frogs()[1..] {
            assert_eq!(first_seen[&f.origin], f.woken_round + 1);
        }
    }

    #[test]
    fn custom_rule_empties_ancestors() {
        let g = GraphKind::HomogeneousTree(5);
        let init = InitialCondition::Custom(SiteRule {
            empty_root_ancestors: true,
            ..Default::default()
        });
        assert_eq!(init.sleeping_frogs(&g, &VertexAddress::tree(-3, 0)), 0);
        assert_eq!(init.sleeping_frogs(&g, &VertexAddress::tree(-3, 1)), 1);
        assert_eq!(init.sleeping_frogs(&g, &VertexAddress::tree(2, 0)), 1);
    }

    #[test]
    fn fence_stuns_on_arrival_and_on_wake() {
        let cfg = EngineConfig::new(GraphKind::DAryTree(2), InitialCondition::OnePerSite, WalkerKind::Simple)
            .with_rule(StopRule::FenceAtDepth(1));
        let mut st = FrogSystemState::new(cfg).unwrap();
        let s = st.run(10, &mut RngStreamSpec::new(6, 0).rng()).unwrap();
        assert_eq!(s.rounds, 1);
        assert_eq!(s.frogs.stunned, 2);
        assert!(!s.horizon_exhausted);
    }

    #[test]
    fn collision_rule_rejects_simple_walkers() {
        let cfg = EngineConfig::new(GraphKind::DAryTree(2), InitialCondition::OnePerSite, WalkerKind::Simple)
            .with_rule(StopRule::SelfSimilarCollision);
        assert!(FrogSystemState::new(cfg).is_err());
    }

    #[test]
    fn self_similar_initial_frog_never_returns() {
        let cfg = EngineConfig::self_similar(GraphKind::DAryTree(2)).with_rule(StopRule::DepthCap(10));
        for seed in 0..50 {
            let mut st = FrogSystemState::new(cfg.clone()).unwrap();
            let s = st.run(1_000, &mut RngStreamSpec::new(seed, 0).rng()).unwrap();
            assert!(!s.horizon_exhausted);
            assert_eq!(s.frogs.awake, 0);
            assert_eq!(st.frogs()[0].status, FrogStatus::Truncated);
            // every visit to the root freezes a frog there
            assert_eq!(s.root_visits as usize, s.frogs.stopped_at_root);
        }
    }

    #[test]
    fn step_cap_aborts() {
        let mut cfg = EngineConfig::new(GraphKind::DAryTree(2), InitialCondition::NonePerSite, WalkerKind::Simple);
        cfg.step_cap = Some(5);
        let s = run_frog_model(cfg, 100, &mut RngStreamSpec::new(7, 0).rng()).unwrap();
        assert!(s.step_cap_exceeded);
        assert_eq!(s.rounds, 6);
    }
}
