//! Graph families and arithmetic vertex addressing.
//!
//! No vertex table is ever materialized. A tree vertex is addressed by its
//! level and its position within the level; children of `(l, i)` are
//! `(l + 1, i * b + j)` for `0 <= j < b`, where `b` is the branching number
//! at level `l`, and the parent is `(l - 1, i / b)`.
//!
//! The homogeneous tree uses the same arithmetic on every level `l` in ℤ.
//! Fixing the end of the tree that runs through the root's ancestors, the
//! vertices `(l, 0)` form the ancestral spine and every level is indexed by
//! all of ℕ. The root is `(0, 0)` and its ancestors are `(-k, 0)`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{FrogError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GraphKind {
    /// Rooted tree, `d` children everywhere; the root has degree `d`.
    DAryTree(u32),
    /// `d` children and one parent at every vertex.
    HomogeneousTree(u32),
    /// Levels alternate between 5 and 6 children, starting at the root.
    AlternatingTree56 { root_children: u32 },
    /// ℤ with its origin identified with the root of a 6-ary tree.
    ZGlueTree6,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum VertexAddress {
    Tree { level: i64, index: u128 },
    /// Nonzero coordinate on the line of [`GraphKind::ZGlueTree6`]; the
    /// origin itself is the tree root.
    Line(i64),
}

impl VertexAddress {
    pub const ROOT: VertexAddress = VertexAddress::Tree { level: 0, index: 0 };

    pub fn tree(level: i64, index: u128) -> Self {
        VertexAddress::Tree { level, index }
    }

    pub fn level(&self) -> Option<i64> {
        match self {
            VertexAddress::Tree { level, .. } => Some(*level),
            VertexAddress::Line(_) => None,
        }
    }
}

impl fmt::Display for VertexAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexAddress::Tree { level, index } => write!(f, "({level},{index})"),
            VertexAddress::Line(z) => write!(f, "line {z}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Move {
    Parent,
    Child(u32),
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::Parent => write!(f, "to parent"),
            Move::Child(i) => write!(f, "to child {i}"),
        }
    }
}

impl GraphKind {
    pub fn validate(&self) -> Result<()> {
        match *self {
            GraphKind::DAryTree(d) | GraphKind::HomogeneousTree(d) if d < 2 => Err(
                FrogError::InvalidGraph(format!("tree needs d >= 2, got {d}")),
            ),
            GraphKind::AlternatingTree56 { root_children } if !(5..=6).contains(&root_children) => {
                Err(FrogError::InvalidGraph(format!(
                    "alternating tree root must have 5 or 6 children, got {root_children}"
                )))
            }
            _ => Ok(()),
        }
    }

    pub fn root(&self) -> VertexAddress {
        VertexAddress::ROOT
    }

    /// Number of children of any tree vertex at `level`.
    pub fn branching(&self, level: i64) -> u32 {
        match *self {
            GraphKind::DAryTree(d) | GraphKind::HomogeneousTree(d) => d,
            GraphKind::AlternatingTree56 { root_children } => {
                if level.rem_euclid(2) == 0 {
                    root_children
                } else {
                    11 - root_children
                }
            }
            GraphKind::ZGlueTree6 => 6,
        }
    }

    /// Number of vertices at `level` of a rooted tree, `None` when it does
    /// not fit in `u128` or the level is unbounded (homogeneous tree).
    pub fn level_width(&self, level: i64) -> Option<u128> {
        if matches!(self, GraphKind::HomogeneousTree(_)) || level < 0 {
            return None;
        }
        let mut w: u128 = 1;
        for l in 0..level {
            w = w.checked_mul(self.branching(l) as u128)?;
        }
        Some(w)
    }

    pub fn contains(&self, v: &VertexAddress) -> bool {
        match (*self, *v) {
            (GraphKind::HomogeneousTree(_), VertexAddress::Tree { .. }) => true,
            (_, VertexAddress::Tree { level, index }) => {
                level >= 0 && self.level_width(level).is_none_or(|w| index < w)
            }
            (GraphKind::ZGlueTree6, VertexAddress::Line(z)) => z != 0,
            (_, VertexAddress::Line(_)) => false,
        }
    }

    fn check(&self, v: &VertexAddress) -> Result<()> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(FrogError::InvalidAddress {
                graph: *self,
                address: *v,
            })
        }
    }

    fn tree_parent(&self, v: &VertexAddress) -> Option<VertexAddress> {
        match *v {
            VertexAddress::Tree { level, index } => {
                if level == 0 && !matches!(self, GraphKind::HomogeneousTree(_)) {
                    None
                } else {
                    let b = self.branching(level - 1) as u128;
                    Some(VertexAddress::tree(level - 1, index / b))
                }
            }
            VertexAddress::Line(_) => None,
        }
    }

    fn tree_child(&self, v: &VertexAddress, i: u32) -> Result<VertexAddress> {
        match *v {
            VertexAddress::Tree { level, index } => {
                let b = self.branching(level);
                if i >= b {
                    return Err(FrogError::Navigation {
                        address: *v,
                        mv: Move::Child(i).to_string(),
                    });
                }
                let idx = index
                    .checked_mul(b as u128)
                    .and_then(|x| x.checked_add(i as u128))
                    .ok_or(FrogError::AddressOverflow(*v))?;
                Ok(VertexAddress::tree(level + 1, idx))
            }
            VertexAddress::Line(_) => Err(FrogError::Navigation {
                address: *v,
                mv: Move::Child(i).to_string(),
            }),
        }
    }

    fn line_vertex(z: i64) -> VertexAddress {
        if z == 0 {
            VertexAddress::ROOT
        } else {
            VertexAddress::Line(z)
        }
    }

    /// Number of "up-front" neighbors listed before the children: the
    /// parent, or the two line neighbors at the glued origin.
    fn lead_count(&self, v: &VertexAddress) -> usize {
        match (*self, *v) {
            (GraphKind::ZGlueTree6, VertexAddress::Tree { level: 0, .. }) => 2,
            (_, VertexAddress::Line(_)) => 2,
            _ => usize::from(self.tree_parent(v).is_some()),
        }
    }

    pub fn degree(&self, v: &VertexAddress) -> Result<usize> {
        self.check(v)?;
        Ok(match v {
            VertexAddress::Line(_) => 2,
            VertexAddress::Tree { level, .. } => {
                self.lead_count(v) + self.branching(*level) as usize
            }
        })
    }

    /// The `i`-th entry of [`GraphKind::neighbors`] without building the list.
    pub fn neighbor_at(&self, v: &VertexAddress, i: usize) -> Result<VertexAddress> {
        let deg = self.degree(v)?;
        if i >= deg {
            return Err(FrogError::Navigation {
                address: *v,
                mv: format!("to neighbor {i} of {deg}"),
            });
        }
        match *v {
            VertexAddress::Line(z) => Ok(Self::line_vertex(if i == 0 { z - 1 } else { z + 1 })),
            VertexAddress::Tree { .. } => {
                let lead = self.lead_count(v);
                if i < lead {
                    if matches!(self, GraphKind::ZGlueTree6) && lead == 2 {
                        Ok(VertexAddress::Line(if i == 0 { -1 } else { 1 }))
                    } else {
                        Ok(self.tree_parent(v).expect("lead entry is the parent"))
                    }
                } else {
                    self.tree_child(v, (i - lead) as u32)
                }
            }
        }
    }

    /// Parent first (or the line neighbors −1, +1 at the glued origin), then
    /// children in index order. The length equals the degree.
    pub fn neighbors(&self, v: &VertexAddress) -> Result<Vec<VertexAddress>> {
        let deg = self.degree(v)?;
        (0..deg).map(|i| self.neighbor_at(v, i)).collect()
    }

    /// Position of `u` in the neighbor list of `v`, if adjacent.
    pub fn neighbor_position(&self, v: &VertexAddress, u: &VertexAddress) -> Option<usize> {
        let lead = self.lead_count(v);
        match (*v, *u) {
            (VertexAddress::Line(z), _) => {
                if *u == Self::line_vertex(z - 1) {
                    Some(0)
                } else if *u == Self::line_vertex(z + 1) {
                    Some(1)
                } else {
                    None
                }
            }
            (VertexAddress::Tree { .. }, VertexAddress::Line(z)) => {
                if lead == 2 && matches!(self, GraphKind::ZGlueTree6) {
                    match z {
                        -1 => Some(0),
                        1 => Some(1),
                        _ => None,
                    }
                } else {
                    None
                }
            }
            (VertexAddress::Tree { level, index }, VertexAddress::Tree { level: ul, index: ui }) => {
                if ul == level + 1 {
                    let b = self.branching(level) as u128;
                    let lo = index.checked_mul(b)?;
                    if ui >= lo && ui - lo < b {
                        return Some(lead + (ui - lo) as usize);
                    }
                    None
                } else if ul == level - 1 && lead == 1 && self.tree_parent(v) == Some(*u) {
                    Some(0)
                } else {
                    None
                }
            }
        }
    }

    pub fn navigate(&self, v: &VertexAddress, mv: Move) -> Result<VertexAddress> {
        self.check(v)?;
        match mv {
            Move::Parent => self.tree_parent(v).ok_or_else(|| FrogError::Navigation {
                address: *v,
                mv: mv.to_string(),
            }),
            Move::Child(i) => self.tree_child(v, i),
        }
    }

    pub fn parent(&self, v: &VertexAddress) -> Option<VertexAddress> {
        self.tree_parent(v)
    }

    /// Graph distance to the root (the glued origin for `ZGlueTree6`).
    pub fn depth(&self, v: &VertexAddress) -> u64 {
        match (*self, *v) {
            (_, VertexAddress::Line(z)) => z.unsigned_abs(),
            (GraphKind::HomogeneousTree(d), VertexAddress::Tree { level, mut index }) => {
                // Climb to the ancestral spine, then walk along it.
                let mut ups = 0u64;
                let mut l = level;
                while index != 0 {
                    index /= d as u128;
                    l -= 1;
                    ups += 1;
                }
                ups + l.unsigned_abs()
            }
            (_, VertexAddress::Tree { level, .. }) => level as u64,
        }
    }

    /// Direct ancestors of the root exist only in the homogeneous tree.
    pub fn is_root_ancestor(&self, v: &VertexAddress) -> bool {
        matches!(
            (self, v),
            (GraphKind::HomogeneousTree(_), VertexAddress::Tree { level, index: 0 }) if *level < 0
        )
    }
}
