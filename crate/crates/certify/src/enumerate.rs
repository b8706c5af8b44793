//! Two rounds of the frog model on the homogeneous tree with 5 children per
//! vertex, started from a pile of awake frogs, and the 27-type matrix built
//! from the outcomes.
//!
//! The local state lives on the radius-2 ball around the origin O: parent,
//! grandparent, 4 siblings, 5 children, 25 grandchildren. Direct ancestors
//! hold no sleeping frog. Frogs woken in round 1 move in round 2; frogs woken
//! in round 2 stay where they woke, so every terminal frog sits at level −2,
//! 0 or +2.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::laurent::{LaurentPoly, TypedMatrix};

pub const CHILDREN: usize = 5;
const SIBLINGS: usize = CHILDREN - 1;
const DEGREE: u64 = CHILDREN as u64 + 1;
pub const ARENA_SIZE: usize = 3 + SIBLINGS + CHILDREN + CHILDREN * CHILDREN;

/// Pile counts are capped at 2 when mapped to types.
pub const CAP: u8 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ParticleType {
    /// awake frogs on the vertex, 1..=3
    pub a: u8,
    /// children known to hold no sleeping frog, 0..=2
    pub b: u8,
    /// siblings known to hold no sleeping frog, 0..=2
    pub c: u8,
}

impl ParticleType {
    pub fn new(a: u8, b: u8, c: u8) -> Option<Self> {
        ((1..=3).contains(&a) && b <= CAP && c <= CAP).then_some(Self { a, b, c })
    }

    pub fn index(self) -> usize {
        (self.a as usize - 1) * 9 + self.b as usize * 3 + self.c as usize
    }

    pub fn from_index(i: usize) -> Option<Self> {
        (i < 27).then(|| Self {
            a: (i / 9) as u8 + 1,
            b: (i / 3 % 3) as u8,
            c: (i % 3) as u8,
        })
    }

    pub fn all() -> impl Iterator<Item = Self> {
        (0..27).map(|i| Self::from_index(i).unwrap())
    }
}

impl fmt::Display for ParticleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P({},{},{})", self.a, self.b, self.c)
    }
}

/// How the emptied counts of a vertex are handed to the particles that a
/// pile of more than three frogs splits into.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PileRule {
    /// Every particle on the vertex gets the capped counts. Four frogs next to
    /// one emptied sibling become P(3,0,1) + P(1,0,1).
    #[default]
    Shared,
    /// The first particle takes up to 2 of each count, the next one what is
    /// left, and so on.
    Split,
}

// Arena vertex ids.
const O: u8 = 0;
const PARENT: u8 = 1;
const GRAND: u8 = 2;

fn sibling(i: usize) -> u8 {
    (3 + i) as u8
}

fn child(i: usize) -> u8 {
    (3 + SIBLINGS + i) as u8
}

fn grandchild(i: usize, j: usize) -> u8 {
    (3 + SIBLINGS + CHILDREN + CHILDREN * i + j) as u8
}

fn level(v: u8) -> i32 {
    match v {
        O => 0,
        PARENT => -1,
        GRAND => -2,
        v if v < child(0) => 0,
        v if v < grandchild(0, 0) => 1,
        _ => 2,
    }
}

/// Neighbours of the vertices a frog can stand on before its last move.
fn neighbors(v: u8) -> Vec<u8> {
    match v {
        O => std::iter::once(PARENT).chain((0..CHILDREN).map(child)).collect(),
        PARENT => [GRAND, O].into_iter().chain((0..SIBLINGS).map(sibling)).collect(),
        v if (child(0)..grandchild(0, 0)).contains(&v) => {
            let i = (v - child(0)) as usize;
            std::iter::once(O).chain((0..CHILDREN).map(|j| grandchild(i, j))).collect()
        }
        _ => panic!("frog left the radius-2 ball at vertex {v}"),
    }
}

type Mask = u64;

fn bit(v: u8) -> Mask {
    1 << v
}

fn initial_sleepers(t: ParticleType) -> Mask {
    let mut m: Mask = (1 << ARENA_SIZE) - 1;
    for v in [O, PARENT, GRAND] {
        m &= !bit(v);
    }
    for i in 0..t.b as usize {
        m &= !bit(child(i));
    }
    for i in 0..t.c as usize {
        m &= !bit(sibling(i));
    }
    m
}

/// Every joint move of `frogs`, as sorted landing multisets with the number
/// of move sequences leading to each.
fn joint_moves(frogs: &[u8]) -> HashMap<Vec<u8>, u64> {
    let mut states: HashMap<Vec<u8>, u64> = HashMap::from([(Vec::new(), 1)]);
    for &f in frogs {
        let nb = neighbors(f);
        let mut next: HashMap<Vec<u8>, u64> = HashMap::new();
        for (pos, w) in &states {
            for &to in &nb {
                let mut p = pos.clone();
                let at = p.partition_point(|x| *x <= to);
                p.insert(at, to);
                *next.entry(p).or_insert(0) += w;
            }
        }
        states = next;
    }
    states
}

/// Wake the sleepers at the landing sites; returns the frogs (moved and
/// woken) and the remaining sleepers.
fn wake(landed: &[u8], sleepers: Mask) -> (Vec<u8>, Mask) {
    let mut frogs = landed.to_vec();
    let mut s = sleepers;
    for &v in landed {
        if s & bit(v) != 0 {
            s &= !bit(v);
            frogs.push(v);
        }
    }
    frogs.sort_unstable();
    (frogs, s)
}

/// The frogs on one vertex at the end of the two rounds.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pile {
    pub level: i32,
    pub frogs: u32,
    /// children without a sleeping frog
    pub emptied_children: u8,
    /// siblings without a sleeping frog
    pub emptied_siblings: u8,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TerminalState {
    pub probability: BigRational,
    pub piles: Vec<Pile>,
}

impl TerminalState {
    pub fn frogs(&self) -> u32 {
        self.piles.iter().map(|p| p.frogs).sum()
    }
}

fn pile_at(v: u8, frogs: u32, sleepers: Mask) -> Pile {
    let empty = |u: u8| u32::from(sleepers & bit(u) == 0) as u8;
    let (emptied_children, emptied_siblings) = match v {
        O => (
            (0..CHILDREN).map(|i| empty(child(i))).sum(),
            (0..SIBLINGS).map(|i| empty(sibling(i))).sum(),
        ),
        // children of the grandparent: the parent, emptied, and the parent's
        // siblings, out of reach; its siblings are out of reach too
        GRAND => (empty(PARENT), 0),
        // children out of reach; siblings are O and the other siblings
        v if v < child(0) => (0, empty(O) + (0..SIBLINGS).map(sibling).filter(|u| *u != v).map(empty).sum::<u8>()),
        v if v >= grandchild(0, 0) => {
            let i = (v - grandchild(0, 0)) as usize / CHILDREN;
            (0, (0..CHILDREN).map(|j| grandchild(i, j)).filter(|u| *u != v).map(empty).sum())
        }
        _ => unreachable!("odd-level vertex {v} holds frogs after two rounds"),
    };
    Pile {
        level: level(v),
        frogs,
        emptied_children,
        emptied_siblings,
    }
}

/// All states two rounds after starting from type `t`, with exact
/// probabilities. States with identical piles are not merged.
pub fn two_step_states(t: ParticleType) -> Vec<TerminalState> {
    let sleepers0 = initial_sleepers(t);
    let start = vec![O; t.a as usize];
    let mut out = Vec::new();
    for (landed1, w1) in joint_moves(&start) {
        let (frogs1, sleepers1) = wake(&landed1, sleepers0);
        let denom = BigInt::from(DEGREE).pow((start.len() + frogs1.len()) as u32);
        for (landed2, w2) in joint_moves(&frogs1) {
            let (frogs2, sleepers2) = wake(&landed2, sleepers1);
            let mut piles = Vec::new();
            let mut i = 0;
            while i < frogs2.len() {
                let v = frogs2[i];
                let n = frogs2[i..].iter().take_while(|u| **u == v).count();
                piles.push(pile_at(v, n as u32, sleepers2));
                i += n;
            }
            piles.sort();
            out.push(TerminalState {
                probability: BigRational::new(BigInt::from(w1 * w2), denom.clone()),
                piles,
            });
        }
    }
    out
}

/// Split a pile into particles, as many 3-frog particles as possible.
pub fn decompose(pile: &Pile, rule: PileRule) -> Vec<ParticleType> {
    let mut n = pile.frogs;
    let (mut b, mut c) = (pile.emptied_children, pile.emptied_siblings);
    let mut out = Vec::new();
    while n > 0 {
        let a = n.min(3) as u8;
        n -= a as u32;
        let (pb, pc) = (b.min(CAP), c.min(CAP));
        if rule == PileRule::Split {
            b -= pb;
            c -= pc;
        }
        out.push(ParticleType { a, b: pb, c: pc });
    }
    out
}

/// One possible set of children: particles with their level displacement.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChildOutcome {
    #[serde(with = "frog_core::rational::serde_ratio")]
    pub probability: BigRational,
    pub children: Vec<(ParticleType, i32)>,
}

pub fn enumerate_two_step(t: ParticleType) -> Vec<ChildOutcome> {
    enumerate_two_step_with(t, PileRule::default())
}

pub fn enumerate_two_step_with(t: ParticleType, rule: PileRule) -> Vec<ChildOutcome> {
    let mut merged: BTreeMap<Vec<(ParticleType, i32)>, BigRational> = BTreeMap::new();
    for s in two_step_states(t) {
        let mut children: Vec<(ParticleType, i32)> = s
            .piles
            .iter()
            .flat_map(|p| decompose(p, rule).into_iter().map(move |q| (q, p.level)))
            .collect();
        children.sort();
        *merged.entry(children).or_insert_with(BigRational::zero) += s.probability;
    }
    merged
        .into_iter()
        .map(|(children, probability)| ChildOutcome { probability, children })
        .collect()
}

/// Expected number of awake frogs after the two rounds.
pub fn expected_awake(t: ParticleType) -> BigRational {
    two_step_states(t)
        .into_iter()
        .map(|s| BigRational::from_integer(s.frogs().into()) * s.probability)
        .sum()
}

pub fn build_phi27() -> TypedMatrix {
    build_phi27_with(PileRule::default())
}

pub fn build_phi27_with(rule: PileRule) -> TypedMatrix {
    let rows: Vec<Vec<LaurentPoly>> = ParticleType::all()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|t| {
            let mut row = vec![LaurentPoly::zero(); 27];
            for o in enumerate_two_step_with(t, rule) {
                for (q, lvl) in &o.children {
                    row[q.index()].add_term(o.probability.clone(), *lvl);
                }
            }
            row
        })
        .collect();
    TypedMatrix {
        id: "phi27".into(),
        labels: ParticleType::all().map(|t| t.to_string()).collect(),
        entries: rows,
    }
}

pub fn total_probability(outcomes: &[ChildOutcome]) -> BigRational {
    outcomes.iter().map(|o| &o.probability).fold(BigRational::zero(), |a, b| a + b)
}
