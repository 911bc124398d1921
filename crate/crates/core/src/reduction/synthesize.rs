//! Turning Hamiltonian cycles of the instance into short flip sequences on
//! `G_H`.
//!
//! Between any two semi-default matchings the synthesized sequence has
//! exactly `2 h_c = 4t` flips, grouped into `2t` consecutive pairs
//! `(C, C')`. Both cycles of a pair follow the same Hamiltonian route of
//! the instance and the same branch direction per gadget; they differ only
//! in which step of each tower plan and ladder plan they carry, so all
//! route edges cancel across the pair and each pair ends in a semi-default
//! matching again. Every tower advances its own plan (of exactly `4t`
//! flips) in every cycle; ladder `i` of each branch gadget is serviced by
//! pairs `2i` and `2i + 1` via two boundary pair-moves, whose entry sides
//! dictate the route's branch choices for those pairs.

use std::collections::{BTreeSet, HashMap};

use crate::error::ReductionError;
use crate::gadgets::{
    ladder_harness, ladder_pair_plan, tower_harness, tower_plan, Dir, ForallHandle,
    GadgetRegistry, Harness, LeId,
};
use crate::graph::BipartiteGraph;
use crate::matching::PerfectMatching;
use crate::oracle::ham_cycle_directed;
use crate::skeleton::FlipSequence;

use super::gh::GhGraph;
use super::ham_instance::{HamInstance, Pattern};

/// A synthesized flip sequence together with the route and pattern each
/// pair of cycles followed.
#[derive(Debug, Clone)]
pub struct Synthesis {
    pub seq: FlipSequence,
    /// One pattern per pair of cycles.
    pub patterns: Vec<Pattern>,
    /// The Hamiltonian route (vertex sequence of the instance) per pair.
    pub routes: Vec<Vec<usize>>,
}

/// The exhaustive-search route provider: answers each pattern with a
/// Hamiltonian cycle of the instance using the chosen pair arcs and
/// avoiding the rejected ones.
pub fn oracle_ham_provider(
    instance: &HamInstance,
) -> impl FnMut(&Pattern) -> Option<Vec<usize>> + '_ {
    move |p| {
        let (required, forbidden) = p.constraints(instance);
        ham_cycle_directed(&instance.h, &forbidden, &required)
    }
}

/// The restriction of an ambient matching to a gadget harness. Closing
/// edges are not ambient edges; for the ladder harness they stand in for
/// the externally matched boundary vertices, so a semi-default state maps
/// to both closings matched, while the tower closing stays unmatched.
pub(crate) fn harness_restriction(
    har: &Harness,
    map: &[usize],
    ambient: &BipartiteGraph,
    m: &PerfectMatching,
    closings_matched: bool,
) -> PerfectMatching {
    let mut edges = Vec::new();
    for e in 0..har.graph.edge_count() {
        if har.closing.contains(&e) {
            if closings_matched {
                edges.push(e);
            }
            continue;
        }
        let (p, q) = har.graph.edge(e);
        let ae = ambient
            .edge_between(map[p], map[q])
            .expect("gadget edge exists in ambient graph");
        if m.contains(ae) {
            edges.push(e);
        }
    }
    PerfectMatching::new(&har.graph, edges).expect("semi-default restriction is perfect")
}

/// Spine edges a regular cycle uses when it traverses a logical edge: the
/// junction into each own coupler chain, the chain's middle edge, the
/// junction onward, and on each partner chain the two partial edges that
/// let the cycle weave through the coupler cities without connecting the
/// partner's spine.
pub(crate) fn le_traversal_edges(g: &BipartiteGraph, reg: &GadgetRegistry, le: LeId) -> Vec<usize> {
    let e = |u: usize, v: usize| g.edge_between(u, v).expect("spine edge present");
    let l = &reg.logical_edges[le];
    let mut out = Vec::new();
    let mut prev = l.a;
    for &(x, s) in &l.xors {
        let own = &reg.xors[x].chains[s];
        let partner = &reg.xors[x].chains[1 - s];
        out.push(e(prev, own[0]));
        out.push(e(own[1], own[2]));
        out.push(e(partner[0], partner[1]));
        out.push(e(partner[2], partner[3]));
        prev = own[3];
    }
    out.push(e(prev, l.b));
    out
}

/// The direction-dependent edges of one branch gadget in a regular cycle,
/// excluding the active ladder's own flip (supplied by the ladder plan)
/// and the gadget cities (supplied by the tower plans).
fn forall_state_edges(
    g: &BipartiteGraph,
    reg: &GadgetRegistry,
    f: &ForallHandle,
    dir: Dir,
) -> Vec<usize> {
    let e = |u: usize, v: usize| g.edge_between(u, v).expect("gadget edge present");
    let x = &f.x;
    let mut out = match dir {
        Dir::Top => vec![
            e(f.v_out, x[0]),
            e(x[4], x[3]),
            e(x[7], x[8]),
            e(x[8], x[9]),
        ],
        Dir::Bottom => vec![
            e(f.v_out, x[4]),
            e(x[0], x[7]),
            e(x[3], x[8]),
            e(x[8], x[9]),
        ],
    };
    let (first, second) = match dir {
        Dir::Top => (f.chain_x6x7, f.chain_u),
        Dir::Bottom => (f.chain_x2x3, f.chain_w),
    };
    out.extend(le_traversal_edges(g, reg, first));
    out.extend(le_traversal_edges(g, reg, second));
    out
}

/// `true` when `route` is a Hamiltonian cycle of the instance that uses
/// every chosen pair arc and none of the rejected ones.
fn route_respects(instance: &HamInstance, pattern: &Pattern, route: &[usize]) -> bool {
    let n = instance.vertex_count();
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
    let mut used = vec![false; instance.h.arc_count()];
    for w in 0..n {
        match instance.h.arc_between(route[w], route[(w + 1) % n]) {
            Some(a) => used[a] = true,
            None => return false,
        }
    }
    pattern
        .picks
        .iter()
        .zip(&instance.pairs)
        .all(|(&pick, &[e, eb])| {
            let (chosen, other) = if pick { (e, eb) } else { (eb, e) };
            used[chosen] && !used[other]
        })
}

pub fn synthesize_flip_sequence<F>(
    gh: &GhGraph,
    m1: &PerfectMatching,
    m2: &PerfectMatching,
    mut ham_provider: F,
) -> Result<Synthesis, ReductionError>
where
    F: FnMut(&Pattern) -> Option<Vec<usize>>,
{
    gh.profile.validate_for_synthesis()?;
    for m in [m1, m2] {
        if !gh.is_semi_default(m) {
            return Err(ReductionError::InstanceInvalid(
                "synthesis endpoints must be semi-default matchings".into(),
            ));
        }
    }
    let g = &gh.graph;
    let k = gh.foralls.len();
    let t = gh.profile.forall_width;
    let cycles_total = 4 * t; // == 2 * city_height
    let pairs_total = 2 * t;

    // Per tower: an exact-length plan between its two states, mapped to
    // ambient edge ids, cached by state pair (most towers share one).
    let thar = tower_harness(gh.profile.city_height);
    let mut cache: HashMap<_, Vec<Vec<usize>>> = HashMap::new();
    let mut tower_cycles: Vec<Vec<Vec<usize>>> = Vec::with_capacity(gh.reg.towers.len());
    for tower in &gh.reg.towers {
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

    // Per branch gadget: one four-flip plan per ladder, whose pair-move
    // directions become the gadget's demanded branch per pair of cycles.
    let lhar = ladder_harness();
    let mut demands: Vec<Vec<Dir>> = vec![Vec::with_capacity(pairs_total); k];
    let mut ladder_cycles: Vec<Vec<[Vec<usize>; 4]>> = vec![Vec::new(); k];
    for (j, &fi) in gh.foralls.iter().enumerate() {
        let f = &gh.reg.foralls[fi];
        for &li in &f.ladders {
            let l = &gh.reg.ladders[li];
            let map = lhar.ladder_vertex_map(l);
            let from = harness_restriction(&lhar, &map, g, m1, true);
            let to = harness_restriction(&lhar, &map, g, m2, true);
            let combos = [
                [Dir::Top, Dir::Top],
                [Dir::Top, Dir::Bottom],
                [Dir::Bottom, Dir::Top],
                [Dir::Bottom, Dir::Bottom],
            ];
            let (dirs, plan) = combos
                .iter()
                .find_map(|&d| ladder_pair_plan(&lhar, &from, &to, d).map(|p| (d, p)))
                .expect("transfer diameter two guarantees a four-flip ladder plan");
            demands[j].push(dirs[0]);
            demands[j].push(dirs[1]);
            ladder_cycles[j].push(plan.map(|c| lhar.map_cycle(&map, g, &c)));
        }
    }

    let mut m = m1.clone();
    let mut cycles: Vec<Vec<usize>> = Vec::with_capacity(cycles_total);
    let mut patterns = Vec::with_capacity(pairs_total);
    let mut routes = Vec::with_capacity(pairs_total);
    #[allow(clippy::needless_range_loop)]
    for p in 0..pairs_total {
        let pattern = Pattern::new((0..k).map(|j| demands[j][p] == Dir::Top).collect());
        let route = ham_provider(&pattern)
            .ok_or_else(|| ReductionError::HamProviderFailed(pattern.arcs(&gh.instance)))?;
        if !route_respects(&gh.instance, &pattern, &route) {
            return Err(ReductionError::HamProviderFailed(pattern.arcs(&gh.instance)));
        }
        // Edges shared by both cycles of the pair: the route's plain arc
        // edges and each gadget's direction-dependent traversal.
        let mut base = BTreeSet::new();
        for w in 0..route.len() {
            let a = gh
                .instance
                .h
                .arc_between(route[w], route[(w + 1) % route.len()])
                .expect("route was validated");
            if let Some(e) = gh.arc_edges[a] {
                base.insert(e);
            }
        }
        for (j, &fi) in gh.foralls.iter().enumerate() {
            base.extend(forall_state_edges(g, &gh.reg, &gh.reg.foralls[fi], demands[j][p]));
        }
        for half in 0..2 {
            let c_idx = 2 * p + half;
            let mut edges = base.clone();
            for tc in &tower_cycles {
                edges.extend(tc[c_idx].iter().copied());
            }
            let (active, within) = (p / 2, 2 * (p % 2) + half);
            for lc in &ladder_cycles {
                edges.extend(lc[active][within].iter().copied());
            }
            let cycle: Vec<usize> = edges.into_iter().collect();
            m = m
                .flip(g, &cycle)
                .expect("assembled edges form a single alternating cycle");
            cycles.push(cycle);
        }
        debug_assert!(gh.is_semi_default(&m), "each pair ends semi-default");
        patterns.push(pattern);
        routes.push(route);
    }
    assert_eq!(
        m.edges(),
        m2.edges(),
        "all non-gadget edges cancel pairwise, so synthesis lands exactly on the target"
    );
    Ok(Synthesis {
        seq: FlipSequence {
            start: m1.clone(),
            cycles,
        },
        patterns,
        routes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadgets::{forall_cycle_state, is_regular, ForallVerdict};
    use crate::graph::DirectedGraph;
    use crate::reduction::gh::build_gh;
    use crate::reduction::ham_instance::test_instances::diamond;
    use crate::reduction::scale::ScaleProfile;
    use crate::skeleton::validate_flip_sequence;

    fn minimal_gh() -> GhGraph {
        build_gh(diamond(), ScaleProfile::minimal()).unwrap()
    }

    fn check(gh: &GhGraph, m1: &PerfectMatching, m2: &PerfectMatching) -> Synthesis {
        let provider = oracle_ham_provider(&gh.instance);
        let syn = synthesize_flip_sequence(gh, m1, m2, provider).unwrap();
        assert_eq!(syn.seq.cycles.len(), 4 * gh.profile.forall_width);
        let end = validate_flip_sequence(&gh.graph, &syn.seq).unwrap();
        assert_eq!(end.edges(), m2.edges());
        for cycle in &syn.seq.cycles {
            let mut bm = vec![false; gh.graph.edge_count()];
            for &e in cycle {
                bm[e] = true;
            }
            assert!(is_regular(&gh.graph, &gh.reg, &bm));
        }
        syn
    }

    #[test]
    fn identity_synthesis_is_four_idle_regular_cycles() {
        let gh = minimal_gh();
        let m = gh.default_matching();
        check(&gh, &m, &m);
    }

    #[test]
    fn default_to_each_pattern_matching() {
        let gh = minimal_gh();
        let m_def = gh.default_matching();
        for pick in [true, false] {
            let m_p = gh.pattern_matching(&Pattern::new(vec![pick])).unwrap();
            check(&gh, &m_def, &m_p);
            check(&gh, &m_p, &m_def);
        }
    }

    #[test]
    fn pattern_to_pattern_crosses_both_branches() {
        let gh = minimal_gh();
        let a = gh.pattern_matching(&Pattern::new(vec![true])).unwrap();
        let b = gh.pattern_matching(&Pattern::new(vec![false])).unwrap();
        let syn = check(&gh, &a, &b);
        // Every cycle's branch-gadget verdict matches the demanded side.
        for (p, pattern) in syn.patterns.iter().enumerate() {
            for half in 0..2 {
                let cycle = &syn.seq.cycles[2 * p + half];
                let mut bm = vec![false; gh.graph.edge_count()];
                for &e in cycle {
                    bm[e] = true;
                }
                let verdict = forall_cycle_state(&gh.graph, &gh.reg, gh.foralls[0], &bm);
                match (pattern.picks[0], verdict) {
                    (true, ForallVerdict::Top { .. }) | (false, ForallVerdict::Bottom { .. }) => {}
                    other => panic!("cycle {} has mismatched verdict {other:?}", 2 * p + half),
                }
            }
        }
    }

    #[test]
    fn missing_route_reports_the_chosen_arcs() {
        // Removing arc (2, 1) from the diamond leaves the e_1-pattern
        // solvable but the rejected branch without a Hamiltonian cycle.
        let h = DirectedGraph::build(
            4,
            vec![(0, 1), (0, 2), (1, 2), (1, 3), (2, 3), (3, 0)],
        )
        .unwrap();
        let inst = HamInstance::new(h, vec![[0, 1]]).unwrap();
        let gh = build_gh(inst, ScaleProfile::minimal()).unwrap();
        let m_def = gh.default_matching();
        let m_p = gh.pattern_matching(&Pattern::new(vec![false])).unwrap();
        let provider = oracle_ham_provider(&gh.instance);
        let err = synthesize_flip_sequence(&gh, &m_def, &m_p, provider).unwrap_err();
        assert!(matches!(err, ReductionError::HamProviderFailed(_)));
    }
}
