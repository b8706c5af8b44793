use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::graph::{GraphKind, VertexAddress};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WalkerKind {
    Simple,
    NonBacktracking,
    /// Non-backtracking steps; the engine adds the collision stopping rule.
    SelfSimilar,
}

impl WalkerKind {
    pub fn avoids_backtracking(&self) -> bool {
        !matches!(self, WalkerKind::Simple)
    }
}

/// What a walker remembers between steps: the vertex it last departed from.
/// Empty only before the first move.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct WalkerMemory {
    pub previous: Option<VertexAddress>,
}

/// One step of a walker at `at`. Returns the new address and the memory to
/// carry into the next step (which records `at` as the departed vertex).
pub fn step_walker<R: Rng + ?Sized>(
    g: &GraphKind,
    kind: WalkerKind,
    at: &VertexAddress,
    memory: &WalkerMemory,
    rng: &mut R,
) -> Result<(VertexAddress, WalkerMemory)> {
    let deg = g.degree(at)?;
    let excluded = if kind.avoids_backtracking() && deg > 1 {
        memory.previous.and_then(|p| g.neighbor_position(at, &p))
    } else {
        None
    };
    let slot = match excluded {
        Some(skip) => {
            let r = rng.random_range(0..deg - 1);
            if r >= skip {
                r + 1
            } else {
                r
            }
        }
        None => rng.random_range(0..deg),
    };
    let next = g.neighbor_at(at, slot)?;
    Ok((next, WalkerMemory { previous: Some(*at) }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStreamSpec;
    use std::collections::HashMap;

    fn frequencies(
        g: GraphKind,
        kind: WalkerKind,
        at: VertexAddress,
        mem: WalkerMemory,
        n: usize,
    ) -> HashMap<VertexAddress, usize> {
        let mut rng = RngStreamSpec::new(11, 0).rng();
        let mut out = HashMap::new();
        for _ in 0..n {
            let (next, m) = step_walker(&g, kind, &at, &mem, &mut rng).unwrap();
            assert_eq!(m.previous, Some(at));
            *out.entry(next).or_default() += 1;
        }
        out
    }

    fn within_3_sigma(count: usize, n: usize, p: f64) -> bool {
        let sd = (n as f64 * p * (1.0 - p)).sqrt();
        (count as f64 - n as f64 * p).abs() <= 3.0 * sd
    }

    #[test]
    fn simple_root_of_binary_tree_is_fair() {
        let g = GraphKind::DAryTree(2);
        let f = frequencies(g, WalkerKind::Simple, g.root(), WalkerMemory::default(), 20_000);
        assert_eq!(f.len(), 2);
        for c in f.values() {
            assert!(within_3_sigma(*c, 20_000, 0.5));
        }
    }

    #[test]
    fn non_backtracking_excludes_arrival() {
        let g = GraphKind::DAryTree(2);
        let at = VertexAddress::tree(1, 0);
        let mem = WalkerMemory { previous: Some(g.root()) };
        let f = frequencies(g, WalkerKind::NonBacktracking, at, mem, 20_000);
        assert!(!f.contains_key(&g.root()));
        assert_eq!(f.len(), 2);
        for c in f.values() {
            assert!(within_3_sigma(*c, 20_000, 0.5));
        }
    }

    #[test]
    fn first_non_backtracking_step_is_uniform() {
        let g = GraphKind::DAryTree(5);
        let f = frequencies(g, WalkerKind::NonBacktracking, g.root(), WalkerMemory::default(), 50_000);
        assert_eq!(f.len(), 5);
        for c in f.values() {
            assert!(within_3_sigma(*c, 50_000, 0.2));
        }
    }

    #[test]
    fn non_backtracking_on_the_line_keeps_direction() {
        let g = GraphKind::ZGlueTree6;
        let mut rng = RngStreamSpec::new(1, 1).rng();
        let mut at = VertexAddress::Line(3);
        let mut mem = WalkerMemory { previous: Some(VertexAddress::Line(2)) };
        for k in 4..20 {
            (at, mem) = step_walker(&g, WalkerKind::NonBacktracking, &at, &mem, &mut rng).unwrap();
            assert_eq!(at, VertexAddress::Line(k));
        }
    }
}
