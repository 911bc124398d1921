//! Perfect matchings and vertex adjacency on the matching polytope.
//!
//! Two perfect matchings are adjacent vertices of the polytope exactly when
//! their symmetric difference is a single alternating cycle. Everything in
//! this module is exact and brute-force: it is the ground truth the rest of
//! the crate is checked against.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::MatchingError;
use crate::graph::{BipartiteGraph, Side};

/// A perfect matching, stored as a canonically sorted edge-index set tied to
/// the content hash of the graph it belongs to.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PerfectMatching {
    edges: Vec<usize>,
    graph_hash: u64,
}

/// Serialization shape: sorted edge indices plus the owning graph's hash.
#[derive(Serialize, Deserialize)]
struct MatchingDoc {
    graph_hash: String,
    edges: Vec<usize>,
}

impl Serialize for PerfectMatching {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        MatchingDoc {
            graph_hash: format!("{:016x}", self.graph_hash),
            edges: self.edges.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PerfectMatching {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let doc = MatchingDoc::deserialize(d)?;
        let graph_hash = u64::from_str_radix(&doc.graph_hash, 16)
            .map_err(|e| serde::de::Error::custom(format!("bad graph hash: {e}")))?;
        let mut edges = doc.edges;
        edges.sort_unstable();
        Ok(PerfectMatching { edges, graph_hash })
    }
}

impl PerfectMatching {
    /// Validating constructor: every vertex must be covered exactly once.
    pub fn new(g: &BipartiteGraph, mut edges: Vec<usize>) -> Result<Self, MatchingError> {
        edges.sort_unstable();
        edges.dedup();
        let mut cover = vec![0usize; g.vertex_count()];
        for &e in &edges {
            let (u, v) = g.edge(e);
            cover[u] += 1;
            cover[v] += 1;
        }
        for (v, &c) in cover.iter().enumerate() {
            if c != 1 {
                return Err(MatchingError::NotPerfect(v, c));
            }
        }
        Ok(PerfectMatching {
            edges,
            graph_hash: g.hash(),
        })
    }

    /// Internal constructor for edge sets already known to be perfect.
    pub(crate) fn from_sorted_unchecked(g: &BipartiteGraph, edges: Vec<usize>) -> Self {
        debug_assert!(edges.windows(2).all(|w| w[0] < w[1]));
        PerfectMatching {
            edges,
            graph_hash: g.hash(),
        }
    }

    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    pub fn graph_hash(&self) -> u64 {
        self.graph_hash
    }

    pub fn contains(&self, e: usize) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    pub fn belongs_to(&self, g: &BipartiteGraph) -> bool {
        self.graph_hash == g.hash()
    }

    /// Membership bitmap over all edges of the graph.
    pub fn edge_bitmap(&self, g: &BipartiteGraph) -> Vec<bool> {
        let mut map = vec![false; g.edge_count()];
        for &e in &self.edges {
            map[e] = true;
        }
        map
    }

    /// For each vertex, the index of its matched edge.
    pub fn matched_edge_per_vertex(&self, g: &BipartiteGraph) -> Vec<usize> {
        let mut out = vec![usize::MAX; g.vertex_count()];
        for &e in &self.edges {
            let (u, v) = g.edge(e);
            out[u] = e;
            out[v] = e;
        }
        out
    }

    /// The matching obtained by flipping the edge set `cycle` (symmetric
    /// difference). The caller is responsible for `cycle` being alternating;
    /// the result is re-validated.
    pub fn flip(&self, g: &BipartiteGraph, cycle: &[usize]) -> Result<Self, MatchingError> {
        let mut map = self.edge_bitmap(g);
        for &e in cycle {
            map[e] = !map[e];
        }
        let edges: Vec<usize> = (0..g.edge_count()).filter(|&e| map[e]).collect();
        PerfectMatching::new(g, edges)
    }
}

fn check_same_graph(m: &PerfectMatching, n: &PerfectMatching) -> Result<(), MatchingError> {
    if m.graph_hash != n.graph_hash {
        return Err(MatchingError::MatchingMismatch);
    }
    Ok(())
}

/// Enumerates all perfect matchings of `g` in a deterministic order
/// (lexicographic by sorted edge-index set). Fails once more than `cap`
/// matchings have been found.
pub fn enumerate_perfect_matchings(
    g: &BipartiteGraph,
    cap: usize,
) -> Result<Vec<PerfectMatching>, MatchingError> {
    assert!(cap >= 1, "cap must be at least 1");
    if !g.vertex_count().is_multiple_of(2) {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut covered = vec![false; g.vertex_count()];
    let mut chosen = Vec::new();
    enumerate_rec(g, cap, &mut covered, &mut chosen, &mut out)?;
    Ok(out)
}

fn enumerate_rec(
    g: &BipartiteGraph,
    cap: usize,
    covered: &mut [bool],
    chosen: &mut Vec<usize>,
    out: &mut Vec<PerfectMatching>,
) -> Result<(), MatchingError> {
    // Branch on the lowest-index uncovered vertex; its incident edges are
    // already sorted, so the output order is deterministic.
    let v = match covered.iter().position(|&c| !c) {
        None => {
            if out.len() == cap {
                return Err(MatchingError::CapExceeded {
                    cap,
                    found: out.len() + 1,
                });
            }
            let mut edges = chosen.clone();
            edges.sort_unstable();
            out.push(PerfectMatching::from_sorted_unchecked(g, edges));
            return Ok(());
        }
        Some(v) => v,
    };
    for &e in g.adjacency(v) {
        let u = g.other_end(e, v);
        if covered[u] {
            continue;
        }
        covered[v] = true;
        covered[u] = true;
        chosen.push(e);
        let r = enumerate_rec(g, cap, covered, chosen, out);
        chosen.pop();
        covered[v] = false;
        covered[u] = false;
        r?;
    }
    Ok(())
}

/// Decomposes `M △ N` into its vertex-disjoint cycles, each returned as a
/// sorted edge-index set. Every cycle alternates between `M`-edges and
/// `N`-edges by construction.
pub fn decompose_symmetric_difference(
    g: &BipartiteGraph,
    m: &PerfectMatching,
    n: &PerfectMatching,
) -> Result<Vec<Vec<usize>>, MatchingError> {
    check_same_graph(m, n)?;
    let in_m = m.edge_bitmap(g);
    let in_n = n.edge_bitmap(g);
    let diff: Vec<usize> = (0..g.edge_count()).filter(|&e| in_m[e] != in_n[e]).collect();
    // Walk each component: every vertex touched by the difference has exactly
    // one incident M-edge and one N-edge in it, so components are cycles.
    let mut incident: HashMap<usize, Vec<usize>> = HashMap::new();
    for &e in &diff {
        let (u, v) = g.edge(e);
        incident.entry(u).or_default().push(e);
        incident.entry(v).or_default().push(e);
    }
    let mut used = vec![false; g.edge_count()];
    let mut cycles = Vec::new();
    for &start in &diff {
        if used[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut e = start;
        let (mut v, _) = g.edge(e);
        loop {
            used[e] = true;
            cycle.push(e);
            v = g.other_end(e, v);
            let next = incident[&v]
                .iter()
                .copied()
                .find(|&f| f != e && !used[f]);
            match next {
                Some(f) => e = f,
                None => break,
            }
        }
        cycle.sort_unstable();
        cycles.push(cycle);
    }
    cycles.sort();
    Ok(cycles)
}

/// Chvátal's criterion: adjacent iff the symmetric difference is one cycle.
pub fn is_adjacent(
    g: &BipartiteGraph,
    m: &PerfectMatching,
    n: &PerfectMatching,
) -> Result<bool, MatchingError> {
    Ok(decompose_symmetric_difference(g, m, n)?.len() == 1)
}

/// Streams the polytope neighbors of `m` without materializing the full
/// matching list.
///
/// Orient matched edges Right→Left and unmatched edges Left→Right; simple
/// directed cycles of this orientation are exactly the `m`-alternating
/// cycles. Each cycle is enumerated once, rooted at its minimum vertex. The
/// visitor receives the cycle (sorted edge set) and the flipped matching;
/// returning `false` stops the enumeration early.
pub fn alternating_cycle_neighbors<F>(g: &BipartiteGraph, m: &PerfectMatching, mut visit: F)
where
    F: FnMut(&[usize], PerfectMatching) -> bool,
{
    let in_m = m.edge_bitmap(g);
    let n = g.vertex_count();
    // succ[v] = directed out-neighbors of v as (edge, head).
    let mut succ: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (e, &matched) in in_m.iter().enumerate() {
        let (u, v) = g.edge(e);
        let (l, r) = if g.side(u) == Side::Left { (u, v) } else { (v, u) };
        if matched {
            succ[r].push((e, l));
        } else {
            succ[l].push((e, r));
        }
    }
    for s in succ.iter_mut() {
        s.sort_unstable_by_key(|&(_, h)| h);
    }
    let mut on_path = vec![false; n];
    let mut path_edges = Vec::new();
    for root in 0..n {
        on_path[root] = true;
        if !neighbor_dfs(g, m, &succ, root, root, &mut on_path, &mut path_edges, &mut visit) {
            return;
        }
        on_path[root] = false;
    }
}

/// DFS restricted to vertices > root (plus the root itself), so each cycle
/// is emitted exactly once. Returns `false` to abort the whole enumeration.
#[allow(clippy::too_many_arguments)]
fn neighbor_dfs<F>(
    g: &BipartiteGraph,
    m: &PerfectMatching,
    succ: &[Vec<(usize, usize)>],
    root: usize,
    v: usize,
    on_path: &mut [bool],
    path_edges: &mut Vec<usize>,
    visit: &mut F,
) -> bool
where
    F: FnMut(&[usize], PerfectMatching) -> bool,
{
    for &(e, h) in &succ[v] {
        if h == root {
            path_edges.push(e);
            let mut cycle = path_edges.clone();
            cycle.sort_unstable();
            let flipped = m
                .flip(g, &cycle)
                .expect("flipping an alternating cycle preserves perfection");
            let go_on = visit(&cycle, flipped);
            path_edges.pop();
            if !go_on {
                return false;
            }
        } else if h > root && !on_path[h] {
            on_path[h] = true;
            path_edges.push(e);
            let go_on = neighbor_dfs(g, m, succ, root, h, on_path, path_edges, visit);
            path_edges.pop();
            on_path[h] = false;
            if !go_on {
                return false;
            }
        }
    }
    true
}

/// Collects the neighbor stream into a sorted, deduplicated list. Distinct
/// alternating cycles always yield distinct neighbors, so deduplication is a
/// checked no-op.
pub fn neighbor_list(g: &BipartiteGraph, m: &PerfectMatching) -> Vec<PerfectMatching> {
    let mut out = Vec::new();
    alternating_cycle_neighbors(g, m, |_, n| {
        out.push(n);
        true
    });
    let before = out.len();
    out.sort();
    out.dedup();
    debug_assert_eq!(before, out.len(), "duplicate neighbor emitted");
    out
}

#[cfg(test)]
pub(crate) mod test_graphs {
    use crate::graph::{BipartiteGraph, Side};

    /// Even cycle on `len` vertices.
    pub fn cycle(len: usize) -> BipartiteGraph {
        assert!(len.is_multiple_of(2));
        let vertices = (0..len)
            .map(|i| {
                (
                    if i % 2 == 0 { Side::Left } else { Side::Right },
                    Vec::new(),
                )
            })
            .collect();
        let edges = (0..len).map(|i| (i, (i + 1) % len)).collect();
        BipartiteGraph::build(vertices, edges).unwrap()
    }

    /// Complete bipartite graph K_{s,s}: Left 0..s, Right s..2s.
    pub fn complete(s: usize) -> BipartiteGraph {
        let mut vertices = vec![(Side::Left, Vec::new()); s];
        vertices.extend(vec![(Side::Right, Vec::new()); s]);
        let mut edges = Vec::new();
        for u in 0..s {
            for v in s..2 * s {
                edges.push((u, v));
            }
        }
        BipartiteGraph::build(vertices, edges).unwrap()
    }

    /// Disjoint union of two 4-cycles.
    pub fn two_c4() -> BipartiteGraph {
        let vertices = (0..8)
            .map(|i| {
                (
                    if i % 2 == 0 { Side::Left } else { Side::Right },
                    Vec::new(),
                )
            })
            .collect();
        let edges = vec![
            (0, 1),
            (1, 2),
            (2, 3),
            (3, 0),
            (4, 5),
            (5, 6),
            (6, 7),
            (7, 4),
        ];
        BipartiteGraph::build(vertices, edges).unwrap()
    }

    /// Star with three leaves (odd vertex count, no perfect matching).
    pub fn star3() -> BipartiteGraph {
        let vertices = vec![
            (Side::Left, Vec::new()),
            (Side::Right, Vec::new()),
            (Side::Right, Vec::new()),
            (Side::Right, Vec::new()),
        ];
        BipartiteGraph::build(vertices, vec![(0, 1), (0, 2), (0, 3)]).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::test_graphs::*;
    use super::*;

    #[test]
    fn c4_has_two_matchings() {
        let g = cycle(4);
        let ms = enumerate_perfect_matchings(&g, 100).unwrap();
        assert_eq!(ms.len(), 2);
    }

    #[test]
    fn k33_has_six_matchings() {
        let g = complete(3);
        let ms = enumerate_perfect_matchings(&g, 100).unwrap();
        assert_eq!(ms.len(), 6);
    }

    #[test]
    fn star_has_none() {
        let g = star3();
        assert!(enumerate_perfect_matchings(&g, 100).unwrap().is_empty());
    }

    #[test]
    fn cap_is_enforced() {
        let g = complete(3);
        let err = enumerate_perfect_matchings(&g, 5).unwrap_err();
        assert_eq!(err, MatchingError::CapExceeded { cap: 5, found: 6 });
    }

    #[test]
    fn symmetric_difference_on_c4() {
        let g = cycle(4);
        let ms = enumerate_perfect_matchings(&g, 10).unwrap();
        assert!(decompose_symmetric_difference(&g, &ms[0], &ms[0])
            .unwrap()
            .is_empty());
        let cycles = decompose_symmetric_difference(&g, &ms[0], &ms[1]).unwrap();
        assert_eq!(cycles.len(), 1);
        assert_eq!(cycles[0].len(), 4);
        assert!(is_adjacent(&g, &ms[0], &ms[1]).unwrap());
        assert!(!is_adjacent(&g, &ms[0], &ms[0]).unwrap());
    }

    #[test]
    fn two_components_flipped_give_two_cycles() {
        let g = two_c4();
        let ms = enumerate_perfect_matchings(&g, 10).unwrap();
        assert_eq!(ms.len(), 4);
        // Find the antipodal pair: symmetric difference covers all 8 edges.
        let mut found = false;
        for i in 0..ms.len() {
            for j in i + 1..ms.len() {
                let cycles = decompose_symmetric_difference(&g, &ms[i], &ms[j]).unwrap();
                let total: usize = cycles.iter().map(Vec::len).sum();
                if total == 8 {
                    assert_eq!(cycles.len(), 2);
                    assert!(!is_adjacent(&g, &ms[i], &ms[j]).unwrap());
                    found = true;
                }
            }
        }
        assert!(found);
    }

    #[test]
    fn mismatched_graphs_are_rejected() {
        let g4 = cycle(4);
        let g6 = cycle(6);
        let m4 = &enumerate_perfect_matchings(&g4, 10).unwrap()[0];
        let m6 = &enumerate_perfect_matchings(&g6, 10).unwrap()[0];
        assert_eq!(
            decompose_symmetric_difference(&g4, m4, m6).unwrap_err(),
            MatchingError::MatchingMismatch
        );
    }

    #[test]
    fn c4_matching_has_one_neighbor() {
        let g = cycle(4);
        let ms = enumerate_perfect_matchings(&g, 10).unwrap();
        let nbrs = neighbor_list(&g, &ms[0]);
        assert_eq!(nbrs.len(), 1);
        assert_eq!(nbrs[0], ms[1]);
    }

    #[test]
    fn k33_matching_has_five_neighbors() {
        let g = complete(3);
        let ms = enumerate_perfect_matchings(&g, 10).unwrap();
        for m in &ms {
            assert_eq!(neighbor_list(&g, m).len(), 5);
        }
    }

    /// The streaming generator must agree with pairwise Chvátal testing.
    #[test]
    fn stream_equals_pairwise_adjacency() {
        for g in [cycle(4), cycle(6), cycle(8), complete(3), complete(4), two_c4()] {
            let ms = enumerate_perfect_matchings(&g, 100).unwrap();
            for m in &ms {
                let stream = neighbor_list(&g, m);
                let mut pairwise: Vec<PerfectMatching> = ms
                    .iter()
                    .filter(|n| is_adjacent(&g, m, n).unwrap())
                    .cloned()
                    .collect();
                pairwise.sort();
                assert_eq!(stream, pairwise);
            }
        }
    }

    #[test]
    fn adjacency_is_symmetric_and_irreflexive() {
        let g = complete(3);
        let ms = enumerate_perfect_matchings(&g, 100).unwrap();
        for m in &ms {
            assert!(!is_adjacent(&g, m, m).unwrap());
            for n in &ms {
                assert_eq!(
                    is_adjacent(&g, m, n).unwrap(),
                    is_adjacent(&g, n, m).unwrap()
                );
            }
        }
    }

    #[test]
    fn matching_serde_round_trip() {
        let g = cycle(6);
        let ms = enumerate_perfect_matchings(&g, 10).unwrap();
        let json = serde_json::to_string(&ms[0]).unwrap();
        let back: PerfectMatching = serde_json::from_str(&json).unwrap();
        assert_eq!(back, ms[0]);
        assert!(back.belongs_to(&g));
    }
}
