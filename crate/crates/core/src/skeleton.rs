//! Flip sequences and exact search over the polytope skeleton.
//!
//! The skeleton is the graph on perfect matchings whose edges are
//! alternating-cycle flips. Distances are computed by breadth-first search
//! with deterministic tie-breaking; the diameter runs one search per source
//! matching, parallelized over sources.

use std::collections::{HashMap, VecDeque};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{FlipViolation, MatchingError};
use crate::graph::BipartiteGraph;
use crate::matching::{
    enumerate_perfect_matchings, neighbor_list, PerfectMatching,
};

/// Default cap on the number of matchings enumerated for a diameter run.
pub const DEFAULT_MATCHING_CAP: usize = 1_000_000;
/// Default bound on explored states for a single distance search.
pub const DEFAULT_STATE_BUDGET: usize = 10_000_000;

/// A start matching plus an ordered list of cycle flips. Valid when each
/// cycle is a single cycle alternating with respect to the running matching.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlipSequence {
    pub start: PerfectMatching,
    pub cycles: Vec<Vec<usize>>,
}

impl FlipSequence {
    pub fn identity(start: PerfectMatching) -> Self {
        FlipSequence {
            start,
            cycles: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }
}

/// Checks that `cycle` is a single cycle alternating w.r.t. the matching
/// bitmap, without flipping anything.
fn check_alternating_cycle(
    g: &BipartiteGraph,
    in_m: &[bool],
    cycle: &[usize],
) -> Result<(), CycleDefect> {
    if cycle.is_empty() {
        return Err(CycleDefect::NotACycle);
    }
    let mut incident: HashMap<usize, Vec<usize>> = HashMap::new();
    for &e in cycle {
        if e >= g.edge_count() {
            return Err(CycleDefect::NotACycle);
        }
        let (u, v) = g.edge(e);
        incident.entry(u).or_default().push(e);
        incident.entry(v).or_default().push(e);
    }
    for edges in incident.values() {
        if edges.len() != 2 {
            return Err(CycleDefect::NotACycle);
        }
        let a = in_m[edges[0]];
        let b = in_m[edges[1]];
        if a == b {
            return Err(CycleDefect::NotAlternating);
        }
    }
    // Degree-2 everywhere means a disjoint union of cycles; walk one
    // component and require it to use every edge.
    let mut used = vec![false; cycle.len()];
    let pos: HashMap<usize, usize> = cycle.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let start = cycle[0];
    let mut e = start;
    let (mut v, _) = g.edge(e);
    let mut count = 0usize;
    loop {
        used[pos[&e]] = true;
        count += 1;
        v = g.other_end(e, v);
        let next = incident[&v].iter().copied().find(|&f| !used[pos[&f]]);
        match next {
            Some(f) => e = f,
            None => break,
        }
    }
    if count != cycle.len() {
        return Err(CycleDefect::NotACycle);
    }
    Ok(())
}

enum CycleDefect {
    NotACycle,
    NotAlternating,
}

/// Replays a flip sequence, checking every step. On success returns the
/// final matching; on failure reports the index of the first bad step.
pub fn validate_flip_sequence(
    g: &BipartiteGraph,
    seq: &FlipSequence,
) -> Result<PerfectMatching, FlipViolation> {
    let mut current = seq.start.clone();
    for (i, cycle) in seq.cycles.iter().enumerate() {
        let in_m = current.edge_bitmap(g);
        match check_alternating_cycle(g, &in_m, cycle) {
            Err(CycleDefect::NotACycle) => return Err(FlipViolation::NotACycle(i)),
            Err(CycleDefect::NotAlternating) => return Err(FlipViolation::NotAlternating(i)),
            Ok(()) => {}
        }
        current = current
            .flip(g, cycle)
            .map_err(|_| FlipViolation::NotPerfectAfterFlip(i))?;
    }
    Ok(current)
}

/// Exact flip distance by breadth-first search, with a witness sequence of
/// that length. `budget` bounds the number of explored states.
pub fn flip_distance(
    g: &BipartiteGraph,
    m: &PerfectMatching,
    n: &PerfectMatching,
    budget: usize,
) -> Result<FlipSequence, MatchingError> {
    if m.graph_hash() != n.graph_hash() {
        return Err(MatchingError::MatchingMismatch);
    }
    if m == n {
        return Ok(FlipSequence::identity(m.clone()));
    }
    // parent: matching -> (predecessor, flipped cycle)
    let mut parent: HashMap<PerfectMatching, (PerfectMatching, Vec<usize>)> = HashMap::new();
    let mut seen: HashMap<PerfectMatching, ()> = HashMap::new();
    seen.insert(m.clone(), ());
    let mut queue = VecDeque::from([m.clone()]);
    let mut explored = 0usize;
    while let Some(cur) = queue.pop_front() {
        explored += 1;
        if explored > budget {
            return Err(MatchingError::BudgetExceeded(budget));
        }
        // Materialized neighbor list keeps exploration order canonical and
        // the witness deterministic.
        let mut hit = false;
        let mut cycles: HashMap<PerfectMatching, Vec<usize>> = HashMap::new();
        crate::matching::alternating_cycle_neighbors(g, &cur, |cycle, nbr| {
            cycles.entry(nbr).or_insert_with(|| cycle.to_vec());
            true
        });
        let mut nbrs: Vec<_> = cycles.into_iter().collect();
        nbrs.sort_by(|a, b| a.0.cmp(&b.0));
        for (nbr, cycle) in nbrs {
            if seen.contains_key(&nbr) {
                continue;
            }
            seen.insert(nbr.clone(), ());
            parent.insert(nbr.clone(), (cur.clone(), cycle));
            if &nbr == n {
                hit = true;
                break;
            }
            queue.push_back(nbr);
        }
        if hit {
            break;
        }
    }
    if !parent.contains_key(n) {
        return Err(MatchingError::BudgetExceeded(budget));
    }
    let mut cycles_rev = Vec::new();
    let mut cur = n.clone();
    while &cur != m {
        let (prev, cycle) = parent[&cur].clone();
        cycles_rev.push(cycle);
        cur = prev;
    }
    cycles_rev.reverse();
    Ok(FlipSequence {
        start: m.clone(),
        cycles: cycles_rev,
    })
}

/// The result of an exact diameter computation. For this polytope the
/// circuit diameter coincides with the skeleton diameter, so it is reported
/// as the identical value rather than computed independently.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiameterReport {
    pub diameter: usize,
    /// Equal to `diameter` by the known diam = cdiam identity for bipartite
    /// perfect matching polytopes.
    pub circuit_diameter: usize,
    pub matching_count: usize,
    pub witness_pair: (PerfectMatching, PerfectMatching),
    pub witness: FlipSequence,
}

/// Exact diameter: max flip distance over all pairs of perfect matchings.
/// One BFS per source, run in parallel over sources.
pub fn polytope_diameter(
    g: &BipartiteGraph,
    cap: usize,
) -> Result<DiameterReport, MatchingError> {
    let matchings = enumerate_perfect_matchings(g, cap)?;
    if matchings.is_empty() {
        return Err(MatchingError::NoPerfectMatching);
    }
    let index: HashMap<&PerfectMatching, usize> =
        matchings.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let adjacency: Vec<Vec<usize>> = matchings
        .par_iter()
        .map(|m| {
            let mut nbrs: Vec<usize> = neighbor_list(g, m)
                .iter()
                .map(|n| index[n])
                .collect();
            nbrs.sort_unstable();
            nbrs
        })
        .collect();
    let eccentricities: Vec<(usize, usize)> = (0..matchings.len())
        .into_par_iter()
        .map(|src| bfs_farthest(&adjacency, src))
        .collect();
    // Deterministic argmax: smallest source, then smallest target.
    let (mut best_src, mut best) = (0usize, eccentricities[0]);
    for (src, ecc) in eccentricities.iter().enumerate().skip(1) {
        if ecc.0 > best.0 {
            best_src = src;
            best = *ecc;
        }
    }
    let (diameter, best_dst) = best;
    let witness = flip_distance(
        g,
        &matchings[best_src],
        &matchings[best_dst],
        DEFAULT_STATE_BUDGET,
    )?;
    debug_assert_eq!(witness.len(), diameter);
    Ok(DiameterReport {
        diameter,
        circuit_diameter: diameter,
        matching_count: matchings.len(),
        witness_pair: (matchings[best_src].clone(), matchings[best_dst].clone()),
        witness,
    })
}

/// BFS over an explicit adjacency list; returns (eccentricity, smallest
/// farthest target).
fn bfs_farthest(adjacency: &[Vec<usize>], src: usize) -> (usize, usize) {
    let mut dist = vec![usize::MAX; adjacency.len()];
    dist[src] = 0;
    let mut queue = VecDeque::from([src]);
    let mut far = (0usize, src);
    while let Some(v) = queue.pop_front() {
        if dist[v] > far.0 {
            far = (dist[v], v);
        }
        for &w in &adjacency[v] {
            if dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
    far
}
