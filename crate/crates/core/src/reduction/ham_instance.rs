//! Constrained-Hamiltonicity instances: a directed graph with designated
//! branch vertices, each owning an arc pair, and the patterns over them.

use serde::{Deserialize, Serialize};

use crate::error::{GraphError, ReductionError};
use crate::graph::DirectedGraph;

/// An instance of the for-all-exists Hamiltonicity problem: does the graph
/// contain, for every pattern (one arc per pair), a Hamiltonian cycle whose
/// intersection with the pair arcs is exactly that pattern?
///
/// Pair `j` consists of the two outgoing arcs `e_j`, `ē_j` of a designated
/// vertex `v^(j)` of out-degree exactly two.
#[derive(Debug, Clone)]
pub struct HamInstance {
    pub h: DirectedGraph,
    /// `pairs[j] = [e_j, ē_j]` as arc indices into `h`.
    pub pairs: Vec<[usize; 2]>,
}

#[derive(Serialize, Deserialize)]
struct HamInstanceDoc {
    arcs: Vec<(usize, usize)>,
    pairs: Vec<[usize; 2]>,
}

impl HamInstance {
    pub fn new(h: DirectedGraph, pairs: Vec<[usize; 2]>) -> Result<Self, ReductionError> {
        let mut seen_arcs = std::collections::HashSet::new();
        let mut seen_tails = std::collections::HashSet::new();
        for &[e, eb] in &pairs {
            if e >= h.arc_count() || eb >= h.arc_count() || e == eb {
                return Err(ReductionError::InstanceInvalid(format!(
                    "pair [{e}, {eb}] is not two distinct arc indices"
                )));
            }
            if !seen_arcs.insert(e) || !seen_arcs.insert(eb) {
                return Err(ReductionError::InstanceInvalid(format!(
                    "arc of pair [{e}, {eb}] appears in more than one pair"
                )));
            }
            let (v, _) = h.arc(e);
            let (v2, _) = h.arc(eb);
            // Both arcs leave the same designated vertex, which has no
            // other outgoing arcs, and designated vertices are distinct.
            if v != v2 || h.out_degree(v) != 2 || !seen_tails.insert(v) {
                return Err(ReductionError::InstanceInvalid(format!(
                    "pair [{e}, {eb}] must be the only two outgoing arcs of one \
                     fresh designated vertex"
                )));
            }
        }
        Ok(HamInstance { h, pairs })
    }

    pub fn vertex_count(&self) -> usize {
        self.h.vertex_count()
    }

    pub fn pair_count(&self) -> usize {
        self.pairs.len()
    }

    /// `(v^(j), u^(j), w^(j))`: the designated vertex and the heads of
    /// `e_j` and `ē_j`.
    pub fn designated(&self, j: usize) -> (usize, usize, usize) {
        let (v, u) = self.h.arc(self.pairs[j][0]);
        let (_, w) = self.h.arc(self.pairs[j][1]);
        (v, u, w)
    }

    /// `true` when the arc index belongs to some pair.
    pub fn is_pair_arc(&self, arc: usize) -> bool {
        self.pairs.iter().any(|p| p.contains(&arc))
    }

    /// Pair arcs as `[(u, v); 2]` endpoint form, for the oracle.
    pub fn pairs_as_endpoints(&self) -> Vec<[(usize, usize); 2]> {
        self.pairs
            .iter()
            .map(|&[e, eb]| [self.h.arc(e), self.h.arc(eb)])
            .collect()
    }

    /// Parses `{"arcs": [[u, v], ...], "pairs": [[e_idx, ebar_idx], ...]}`.
    /// The vertex count is one past the largest endpoint.
    pub fn from_json(bytes: &[u8]) -> Result<Self, GraphError> {
        let doc: HamInstanceDoc = serde_json::from_slice(bytes).map_err(|e| GraphError::Parse {
            offset: 0,
            message: e.to_string(),
        })?;
        let n = doc
            .arcs
            .iter()
            .map(|&(u, v)| u.max(v) + 1)
            .max()
            .unwrap_or(0);
        let h = DirectedGraph::build(n, doc.arcs)?;
        HamInstance::new(h, doc.pairs).map_err(|_| GraphError::Parse {
            offset: 0,
            message: "pairs do not describe designated out-degree-2 vertices".into(),
        })
    }

    pub fn to_json(&self) -> String {
        let doc = HamInstanceDoc {
            arcs: self.h.arcs().to_vec(),
            pairs: self.pairs.clone(),
        };
        serde_json::to_string_pretty(&doc).expect("instance serialization cannot fail")
    }
}

/// Endpoint lists `(required, forbidden)` derived from a pattern.
pub type ArcConstraints = (Vec<(usize, usize)>, Vec<(usize, usize)>);

/// A pattern: one chosen arc per pair. `picks[j]` selects `e_j` when true,
/// `ē_j` when false.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pattern {
    pub picks: Vec<bool>,
}

impl Pattern {
    pub fn new(picks: Vec<bool>) -> Self {
        Pattern { picks }
    }

    pub fn validate(&self, instance: &HamInstance) -> Result<(), ReductionError> {
        if self.picks.len() != instance.pair_count() {
            return Err(ReductionError::PatternInvalid(format!(
                "pattern has {} picks for {} pairs",
                self.picks.len(),
                instance.pair_count()
            )));
        }
        Ok(())
    }

    /// The chosen arc indices, in pair order.
    pub fn arcs(&self, instance: &HamInstance) -> Vec<usize> {
        self.picks
            .iter()
            .zip(&instance.pairs)
            .map(|(&pick, &[e, eb])| if pick { e } else { eb })
            .collect()
    }

    /// Chosen and rejected arcs as endpoints: `(required, forbidden)`.
    pub fn constraints(&self, instance: &HamInstance) -> ArcConstraints {
        let mut required = Vec::new();
        let mut forbidden = Vec::new();
        for (&pick, &[e, eb]) in self.picks.iter().zip(&instance.pairs) {
            let (chosen, other) = if pick { (e, eb) } else { (eb, e) };
            required.push(instance.h.arc(chosen));
            forbidden.push(instance.h.arc(other));
        }
        (required, forbidden)
    }
}

/// Small fixed instances shared by tests and examples.
pub mod test_instances {
    use super::*;

    /// Four vertices, one designated vertex 0 with pair arcs to 1 and 2;
    /// both patterns extend to Hamiltonian cycles.
    pub fn diamond() -> HamInstance {
        let h = DirectedGraph::build(
            4,
            vec![
                (0, 1),
                (0, 2),
                (1, 2),
                (2, 1),
                (1, 3),
                (2, 3),
                (3, 0),
            ],
        )
        .unwrap();
        HamInstance::new(h, vec![[0, 1]]).unwrap()
    }

    /// Three vertices `v=0, u=1, w=2` with arcs both ways; `k = 1`.
    pub fn triangle_in_out() -> HamInstance {
        let h =
            DirectedGraph::build(3, vec![(0, 1), (0, 2), (1, 2), (2, 1), (1, 0), (2, 0)]).unwrap();
        HamInstance::new(h, vec![[0, 1]]).unwrap()
    }

    /// An `n`-vertex ring with a branch at 0: the cycle `0 -> 1 -> ... ->
    /// n-1 -> 0`, the chord `0 -> 2`, and return arcs `n-1 -> 1` and
    /// `1 -> 0`, so both branch choices extend to Hamiltonian cycles.
    pub fn branched_ring(n: usize) -> HamInstance {
        assert!(n >= 4);
        let mut arcs: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        arcs.push((0, 2));
        arcs.push((n - 1, 1));
        arcs.push((1, 0));
        let h = DirectedGraph::build(n, arcs).unwrap();
        HamInstance::new(h, vec![[0, n]]).unwrap()
    }

    /// The same ring with only the chord added: choosing the chord strands
    /// vertex 1, so that branch has no Hamiltonian cycle.
    pub fn dead_end_ring(n: usize) -> HamInstance {
        assert!(n >= 4);
        let mut arcs: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        arcs.push((0, 2));
        let h = DirectedGraph::build(n, arcs).unwrap();
        HamInstance::new(h, vec![[0, n]]).unwrap()
    }

    /// The fixed ten-instance desk corpus: seven where every pattern is
    /// routable and three where the chord branch is refuted.
    pub fn desk_corpus() -> Vec<HamInstance> {
        let mut out = vec![diamond(), triangle_in_out()];
        out.extend((4..=8).map(branched_ring));
        out.extend((4..=6).map(dead_end_ring));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use test_instances::diamond;

    #[test]
    fn json_round_trip() {
        let inst = diamond();
        let json = inst.to_json();
        let back = HamInstance::from_json(json.as_bytes()).unwrap();
        assert_eq!(back.h.arcs(), inst.h.arcs());
        assert_eq!(back.pairs, inst.pairs);
    }

    #[test]
    fn invalid_pair_structures_are_rejected() {
        let h = DirectedGraph::build(3, vec![(0, 1), (0, 2), (1, 2), (2, 0)]).unwrap();
        // Arcs of a pair must share their tail.
        assert!(HamInstance::new(h.clone(), vec![[0, 2]]).is_err());
        // Out-degree 2 at the designated vertex is fine...
        let h3 = DirectedGraph::build(3, vec![(0, 1), (0, 2), (1, 2), (2, 0), (1, 0)]).unwrap();
        assert!(HamInstance::new(h3, vec![[0, 1]]).is_ok());
        // ...but a third outgoing arc is not.
        let h6 = DirectedGraph::build(4, vec![(0, 1), (0, 2), (0, 3), (1, 2), (2, 3), (3, 0)])
            .unwrap();
        assert!(HamInstance::new(h6, vec![[0, 1]]).is_err());
        // Duplicate designated vertex.
        let h4 = DirectedGraph::build(3, vec![(0, 1), (0, 2), (1, 2), (2, 0)]).unwrap();
        assert!(HamInstance::new(h4, vec![[0, 1], [0, 1]]).is_err());
    }

    #[test]
    fn pattern_constraints_partition_the_pair() {
        let inst = diamond();
        let p = Pattern::new(vec![true]);
        p.validate(&inst).unwrap();
        let (req, forb) = p.constraints(&inst);
        assert_eq!(req, vec![(0, 1)]);
        assert_eq!(forb, vec![(0, 2)]);
        assert_eq!(p.arcs(&inst), vec![0]);
        assert!(Pattern::new(vec![]).validate(&inst).is_err());
    }
}
