//! The distance-amplifying construction behind hardness of approximating
//! the flip distance.
//!
//! Every vertex `x` of an undirected instance becomes a junction pair
//! `x_in`, `x_out` joined by a city; every instance edge `{a, b}` becomes
//! the two crossing edges `a_out b_in` and `b_out a_in`. Between the
//! all-locked and all-default matchings, a Hamiltonian cycle of the
//! instance yields a flip sequence of exactly `2 h_c` cycles, while any
//! short sequence must contain cycles whose projected closed walks visit
//! most vertices exactly once, so the flip distance separates Hamiltonian
//! from far-from-Hamiltonian instances by a constant factor.

use std::collections::{BTreeSet, HashMap};

use num_rational::Ratio;

use crate::error::{MatchingError, ReductionError};
use crate::gadgets::{
    attach_city, matching_semi_default, tower_harness, tower_plan, CityScale, GadgetRegistry,
};
use crate::graph::{BipartiteGraph, GraphBuilder, Side, UndirectedGraph};
use crate::matching::{decompose_symmetric_difference, PerfectMatching};
use crate::skeleton::{validate_flip_sequence, FlipSequence};

use super::synthesize::harness_restriction;

/// The amplified graph with everything needed to interpret matchings and
/// cycles on it.
#[derive(Debug, Clone)]
pub struct InapproxGraph {
    pub h: UndirectedGraph,
    pub scale: CityScale,
    pub graph: BipartiteGraph,
    pub reg: GadgetRegistry,
    /// `x_in` / `x_out` junction per instance vertex.
    pub x_in: Vec<usize>,
    pub x_out: Vec<usize>,
    /// Registry city index per instance vertex.
    pub vertex_city: Vec<usize>,
    /// Per instance edge `{a, b}`: the crossing edges `a_out b_in` and
    /// `b_out a_in`.
    pub crossing_edges: Vec<[usize; 2]>,
    /// The anchor vertices whose default partners characterize
    /// semi-default matchings: all `x_in`.
    pub v_s: Vec<usize>,
}

/// The city scale used at full amplification strength for an `n`-vertex
/// instance.
pub fn full_scale_city(n: usize) -> CityScale {
    CityScale {
        height: n * n,
        width: 4 * n * n + 4 * n,
    }
}

pub fn build_inapprox(
    h: &UndirectedGraph,
    scale: CityScale,
) -> Result<InapproxGraph, ReductionError> {
    if scale.width < 1 || scale.height < 2 {
        return Err(ReductionError::ProfileInvalid(
            "amplification needs city width at least one and height at least two".into(),
        ));
    }
    let n = h.vertex_count();
    let mut gb = GraphBuilder::new();
    let mut reg = GadgetRegistry::new();
    let mut x_in = Vec::with_capacity(n);
    let mut x_out = Vec::with_capacity(n);
    for x in 0..n {
        let vin = gb.add_vertex(Side::Left);
        gb.add_role(vin, format!("v{x}.in"));
        let vout = gb.add_vertex(Side::Right);
        gb.add_role(vout, format!("v{x}.out"));
        x_in.push(vin);
        x_out.push(vout);
    }
    let mut vertex_city = Vec::with_capacity(n);
    for x in 0..n {
        vertex_city.push(
            attach_city(&mut gb, &mut reg, x_in[x], x_out[x], scale, format!("city.v{x}"))
                .map_err(|e| ReductionError::ProfileInvalid(e.to_string()))?,
        );
    }
    for &(a, b) in h.edges() {
        for (p, q) in [(x_out[a], x_in[b]), (x_out[b], x_in[a])] {
            gb.add_edge(p, q)
                .map_err(|e| ReductionError::InstanceInvalid(e.to_string()))?;
        }
    }
    let graph = gb.build();
    let crossing_edges: Vec<[usize; 2]> = h
        .edges()
        .iter()
        .map(|&(a, b)| {
            [(a, b), (b, a)].map(|(p, q)| {
                graph
                    .edge_between(x_out[p], x_in[q])
                    .expect("crossing edge was added")
            })
        })
        .collect();
    let v_s = x_in.clone();
    Ok(InapproxGraph {
        h: h.clone(),
        scale,
        graph,
        reg,
        x_in,
        x_out,
        vertex_city,
        crossing_edges,
        v_s,
    })
}

impl InapproxGraph {
    fn e(&self, u: usize, v: usize) -> usize {
        self.graph.edge_between(u, v).expect("gadget edge present")
    }

    /// The first endpoint matching: every tower default.
    pub fn default_matching(&self) -> PerfectMatching {
        let mut edges = Vec::new();
        for t in &self.reg.towers {
            edges.push(self.e(t.v, t.a[0]));
            edges.push(self.e(t.b[0], t.w));
            for i in 1..=t.h {
                edges.push(self.e(t.a[i], t.b[i]));
            }
        }
        PerfectMatching::new(&self.graph, edges).expect("default matching is perfect")
    }

    /// The second endpoint matching: every tower locked.
    pub fn locked_matching(&self) -> PerfectMatching {
        let mut edges = Vec::new();
        for t in &self.reg.towers {
            edges.push(self.e(t.v, t.a[0]));
            edges.push(self.e(t.b[0], t.w));
            for i in 1..=t.h - 2 {
                edges.push(self.e(t.a[i], t.b[i]));
            }
            edges.push(self.e(t.a[t.h], t.a[t.h - 1]));
            edges.push(self.e(t.b[t.h], t.b[t.h - 1]));
        }
        PerfectMatching::new(&self.graph, edges).expect("locked matching is perfect")
    }

    /// `true` when every city is semi-default.
    pub fn is_semi_default(&self, m: &PerfectMatching) -> bool {
        matching_semi_default(&self.graph, &self.reg, m)
    }

    /// Projects an arbitrary matching onto a semi-default one by flipping
    /// the components of `M △ M_def` that touch the anchor set; the
    /// sequence has at most `|V_s|` vertex-disjoint cycles.
    pub fn semi_default_projection(
        &self,
        m: &PerfectMatching,
    ) -> Result<(PerfectMatching, FlipSequence), MatchingError> {
        let m_def = self.default_matching();
        let cycles = decompose_symmetric_difference(&self.graph, m, &m_def)?;
        let mut anchored = vec![false; self.graph.vertex_count()];
        for &v in &self.v_s {
            anchored[v] = true;
        }
        let kept: Vec<Vec<usize>> = cycles
            .into_iter()
            .filter(|cycle| {
                cycle.iter().any(|&e| {
                    let (u, v) = self.graph.edge(e);
                    anchored[u] || anchored[v]
                })
            })
            .collect();
        assert!(kept.len() <= self.v_s.len());
        let seq = FlipSequence {
            start: m.clone(),
            cycles: kept,
        };
        let end = validate_flip_sequence(&self.graph, &seq)
            .expect("disjoint difference cycles are valid flips");
        debug_assert!(self.is_semi_default(&end));
        Ok((end, seq))
    }
}

/// A synthesized flip sequence together with the route every cycle
/// followed.
#[derive(Debug, Clone)]
pub struct InapproxSynthesis {
    pub seq: FlipSequence,
    pub route: Vec<usize>,
}

/// `true` when `route` is a Hamiltonian cycle of the instance.
fn route_is_hamiltonian(h: &UndirectedGraph, route: &[usize]) -> bool {
    let n = h.vertex_count();
    if route.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &v in route {
        if v >= n || seen[v] {
            return false;
        }
        seen[v] = true;
    }
    (0..n).all(|w| h.edge_between(route[w], route[(w + 1) % n]).is_some())
}

/// Builds the `2 h_c`-flip sequence between two semi-default matchings
/// from a Hamiltonian cycle of the instance. Every cycle follows the route
/// through all cities while each tower advances its own exact-length plan,
/// so the crossing edges cancel across consecutive pairs and the sequence
/// lands exactly on the target.
pub fn synthesize_inapprox_sequence(
    ig: &InapproxGraph,
    m1: &PerfectMatching,
    m2: &PerfectMatching,
    route: &[usize],
) -> Result<InapproxSynthesis, ReductionError> {
    for m in [m1, m2] {
        if !ig.is_semi_default(m) {
            return Err(ReductionError::InstanceInvalid(
                "synthesis endpoints must be semi-default matchings".into(),
            ));
        }
    }
    if !route_is_hamiltonian(&ig.h, route) {
        return Err(ReductionError::NotHamiltonian);
    }
    let g = &ig.graph;
    let cycles_total = 2 * ig.scale.height;

    let thar = tower_harness(ig.scale.height);
    let mut cache: HashMap<_, Vec<Vec<usize>>> = HashMap::new();
    let mut tower_cycles: Vec<Vec<Vec<usize>>> = Vec::with_capacity(ig.reg.towers.len());
    for tower in &ig.reg.towers {
        let map = thar.tower_vertex_map(tower);
        let from = harness_restriction(&thar, &map, g, m1, false);
        let to = harness_restriction(&thar, &map, g, m2, false);
        let key = (from.edges().to_vec(), to.edges().to_vec());
        let plan = cache.entry(key).or_insert_with(|| {
            tower_plan(&thar, &from, &to, cycles_total)
                .expect("semi-default tower states admit an exact-length plan")
        });
        tower_cycles.push(plan.iter().map(|c| thar.map_cycle(&map, g, c)).collect());
    }

    let n = route.len();
    let base: BTreeSet<usize> = (0..n)
        .map(|w| ig.e(ig.x_out[route[w]], ig.x_in[route[(w + 1) % n]]))
        .collect();

    let mut m = m1.clone();
    let mut cycles: Vec<Vec<usize>> = Vec::with_capacity(cycles_total);
    for c_idx in 0..cycles_total {
        let mut edges = base.clone();
        for tc in &tower_cycles {
            edges.extend(tc[c_idx].iter().copied());
        }
        let cycle: Vec<usize> = edges.into_iter().collect();
        m = m
            .flip(g, &cycle)
            .expect("assembled edges form a single alternating cycle");
        cycles.push(cycle);
        if c_idx % 2 == 1 {
            debug_assert!(ig.is_semi_default(&m), "each pair ends semi-default");
        }
    }
    assert_eq!(
        m.edges(),
        m2.edges(),
        "all crossing edges cancel pairwise, so synthesis lands exactly on the target"
    );
    Ok(InapproxSynthesis {
        seq: FlipSequence {
            start: m1.clone(),
            cycles,
        },
        route: route.to_vec(),
    })
}

/// The closed walk one flip cycle projects to on the instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkExtraction {
    /// The cyclic vertex sequence of the walk, one entry per visit.
    pub walk: Vec<usize>,
    /// The vertices the walk visits exactly once, sorted.
    pub once: Vec<usize>,
}

/// Replays a simple cycle of the amplified graph as a closed walk on the
/// instance: traversing a crossing edge `a_out b_in` or `a_in b_out` steps
/// the walk from `a` to `b`, while everything inside a city keeps it in
/// place. Purely structural; the cycle need not be regular.
pub fn extract_closed_walk(
    ig: &InapproxGraph,
    cycle: &[usize],
) -> Result<WalkExtraction, ReductionError> {
    let g = &ig.graph;
    let invalid = |msg: &str| ReductionError::InstanceInvalid(msg.into());
    if cycle.is_empty() {
        return Err(invalid("empty edge set is not a cycle"));
    }
    let mut incident: HashMap<usize, Vec<usize>> = HashMap::new();
    for &e in cycle {
        let (u, v) = g.edge(e);
        for x in [u, v] {
            incident.entry(x).or_default().push(e);
        }
    }
    if incident.values().any(|es| es.len() != 2) {
        return Err(invalid("edge set is not a disjoint union of cycles"));
    }
    // Walk the cycle once in a fixed orientation, recording the edges in
    // traversal order together with the vertex each one leads to.
    let first = cycle[0];
    let (start, _) = g.edge(first);
    let mut oriented: Vec<(usize, usize)> = Vec::with_capacity(cycle.len());
    let (mut prev_e, mut at) = (first, g.other_end(first, start));
    oriented.push((first, at));
    while at != start {
        let es = &incident[&at];
        let next = if es[0] == prev_e { es[1] } else { es[0] };
        at = g.other_end(next, at);
        oriented.push((next, at));
        prev_e = next;
    }
    if oriented.len() != cycle.len() {
        return Err(invalid("edge set is not a single cycle"));
    }
    let mut owner: HashMap<usize, usize> = HashMap::new();
    let mut crossing = vec![false; g.edge_count()];
    for x in 0..ig.h.vertex_count() {
        owner.insert(ig.x_in[x], x);
        owner.insert(ig.x_out[x], x);
    }
    for pair in &ig.crossing_edges {
        for &e in pair {
            crossing[e] = true;
        }
    }
    let walk: Vec<usize> = oriented
        .iter()
        .filter(|&&(e, _)| crossing[e])
        .map(|&(_, to)| owner[&to])
        .collect();
    if walk.is_empty() {
        return Err(invalid("cycle never leaves a city"));
    }
    let mut count: HashMap<usize, usize> = HashMap::new();
    for &v in &walk {
        *count.entry(v).or_insert(0) += 1;
    }
    let mut once: Vec<usize> = count
        .iter()
        .filter(|&(_, &c)| c == 1)
        .map(|(&v, _)| v)
        .collect();
    once.sort_unstable();
    Ok(WalkExtraction { walk, once })
}

/// The frozen constants of the amplification argument.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapConstants {
    /// Fraction of once-visited vertices forced in some cycle of a short
    /// sequence.
    pub eps1: Ratio<u64>,
    /// The locality radius of the patching step.
    pub d: u64,
    /// The resulting once-visited density after patching.
    pub eps2: Ratio<u64>,
    /// The final inapproximability gap.
    pub eps: Ratio<u64>,
}

pub fn gap_constants() -> GapConstants {
    GapConstants {
        eps1: Ratio::new(1, 19),
        d: 13,
        eps2: Ratio::new(1, 16226),
        eps: Ratio::new(1, 16226),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadgets::is_regular;
    use crate::graph::is_bipartite_certificate;

    fn cycle_graph(n: usize) -> UndirectedGraph {
        UndirectedGraph::build(n, (0..n).map(|i| (i, (i + 1) % n)).collect()).unwrap()
    }

    fn desk_scale() -> CityScale {
        CityScale {
            width: 2,
            height: 2,
        }
    }

    #[test]
    fn triangle_structure() {
        let ig = build_inapprox(&cycle_graph(3), CityScale { width: 1, height: 2 }).unwrap();
        assert_eq!(ig.reg.cities.len(), 3);
        assert_eq!(ig.crossing_edges.len(), 3);
        // Width-one height-two city: eight vertices including junctions.
        assert_eq!(ig.graph.vertex_count(), 3 * 8);
        assert!(is_bipartite_certificate(&ig.graph).is_bipartite());
        for m in [ig.default_matching(), ig.locked_matching()] {
            assert!(ig.is_semi_default(&m));
        }
    }

    #[test]
    fn synthesis_follows_the_route_with_all_regular_cycles() {
        let ig = build_inapprox(&cycle_graph(4), desk_scale()).unwrap();
        let m1 = ig.locked_matching();
        let m2 = ig.default_matching();
        let route = [0, 1, 2, 3];
        let syn = synthesize_inapprox_sequence(&ig, &m1, &m2, &route).unwrap();
        assert_eq!(syn.seq.cycles.len(), 2 * ig.scale.height);
        let end = validate_flip_sequence(&ig.graph, &syn.seq).unwrap();
        assert_eq!(end.edges(), m2.edges());
        for cycle in &syn.seq.cycles {
            let mut bm = vec![false; ig.graph.edge_count()];
            for &e in cycle {
                bm[e] = true;
            }
            assert!(is_regular(&ig.graph, &ig.reg, &bm));
        }
        // Identity synthesis idles every tower but still follows the route.
        let idle = synthesize_inapprox_sequence(&ig, &m2, &m2, &route).unwrap();
        let end = validate_flip_sequence(&ig.graph, &idle.seq).unwrap();
        assert_eq!(end.edges(), m2.edges());
    }

    #[test]
    fn extracted_walk_visits_every_vertex_once() {
        let ig = build_inapprox(&cycle_graph(4), desk_scale()).unwrap();
        let m1 = ig.locked_matching();
        let m2 = ig.default_matching();
        let syn = synthesize_inapprox_sequence(&ig, &m1, &m2, &[0, 1, 2, 3]).unwrap();
        for cycle in &syn.seq.cycles {
            let w = extract_closed_walk(&ig, cycle).unwrap();
            assert_eq!(w.walk.len(), 4);
            assert_eq!(w.once, vec![0, 1, 2, 3]);
        }
    }

    #[test]
    fn non_hamiltonian_route_is_rejected() {
        let ig = build_inapprox(&cycle_graph(4), desk_scale()).unwrap();
        let m = ig.default_matching();
        let err = synthesize_inapprox_sequence(&ig, &m, &m, &[0, 2, 1, 3]).unwrap_err();
        assert!(matches!(err, ReductionError::NotHamiltonian));
    }

    #[test]
    fn constants_are_frozen() {
        let c = gap_constants();
        assert_eq!(c.eps1, Ratio::new(1, 19));
        assert_eq!(c.d, 13);
        assert_eq!(c.eps, Ratio::new(1, 16226));
        assert_eq!(c.eps2, c.eps);
        // The gap factors through the once-visited density and locality.
        assert_eq!(c.eps, c.eps1 / 61 / (c.d + 1));
    }
}
