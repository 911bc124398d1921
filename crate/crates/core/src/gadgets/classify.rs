//! Matching-state and cycle-restriction classifiers for the gadget library.
//!
//! Matching classifiers take a [`PerfectMatching`] of the host graph and
//! report the state of one gadget (default / locked / semi-default for
//! towers, the eight semi-default ladder states, ...). Cycle classifiers
//! take a cycle as an edge-membership bitmap (`&[bool]`, indexed by edge
//! id) and report how the cycle passes through a gadget.

use std::collections::BTreeSet;

use crate::graph::BipartiteGraph;
use crate::matching::PerfectMatching;

use super::{Dir, GadgetRegistry, LadderHandle, LeId, TowerHandle};

/// Matching state of one tower.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TowerState {
    /// Both boundary edges `v a0` and `b0 w` are matched.
    pub semi_default: bool,
    /// Boundary matched plus horizontals `a_i b_i` for `i = 1..=h`.
    pub default: bool,
    /// Default except the top two rows, which are matched vertically.
    pub locked: bool,
    /// Indices `i` with `a_i b_i` matched.
    pub horizontals: BTreeSet<usize>,
}

pub fn tower_state(g: &BipartiteGraph, t: &TowerHandle, m: &PerfectMatching) -> TowerState {
    let e = |u: usize, v: usize| g.edge_between(u, v).expect("tower edge present");
    let semi_default = m.contains(e(t.v, t.a[0])) && m.contains(e(t.b[0], t.w));
    let horizontals: BTreeSet<usize> = (0..=t.h)
        .filter(|&i| m.contains(e(t.a[i], t.b[i])))
        .collect();
    let default = semi_default && horizontals == (1..=t.h).collect();
    let locked = t.h >= 2
        && semi_default
        && horizontals == (1..=t.h.saturating_sub(2)).collect()
        && m.contains(e(t.a[t.h], t.a[t.h - 1]))
        && m.contains(e(t.b[t.h], t.b[t.h - 1]));
    TowerState {
        semi_default,
        default,
        locked,
        horizontals,
    }
}

/// How a cycle passes through one tower.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TowerVerdict {
    /// No cycle edge lies inside the tower.
    Untouched,
    /// The restriction of the cycle to the tower is a single `v`–`w` path;
    /// the payload lists its edges in path order.
    WellBehaved(Vec<usize>),
    Violating,
}

pub fn tower_cycle_verdict(
    g: &BipartiteGraph,
    reg: &GadgetRegistry,
    t: &TowerHandle,
    cycle: &[bool],
) -> TowerVerdict {
    let rest: Vec<usize> = reg
        .tower_edges(g, t)
        .into_iter()
        .filter(|&e| cycle[e])
        .collect();
    if rest.is_empty() {
        return TowerVerdict::Untouched;
    }
    // Walk from v along the restriction; a well-behaved cycle yields a
    // single simple path ending at w that consumes every restricted edge.
    let mut incident: std::collections::HashMap<usize, Vec<usize>> = Default::default();
    for &e in &rest {
        let (p, q) = g.edge(e);
        incident.entry(p).or_default().push(e);
        incident.entry(q).or_default().push(e);
    }
    let boundary_deg_ok = incident.get(&t.v).map(Vec::len) == Some(1)
        && incident.get(&t.w).map(Vec::len) == Some(1);
    if !boundary_deg_ok || incident.iter().any(|(&x, es)| x != t.v && x != t.w && es.len() != 2) {
        return TowerVerdict::Violating;
    }
    let mut path = Vec::with_capacity(rest.len());
    let mut used = vec![false; rest.len()];
    let index_of = |e: usize| rest.iter().position(|&r| r == e).unwrap();
    let mut at = t.v;
    while let Some(&next) = incident[&at].iter().find(|&&e| !used[index_of(e)]) {
        used[index_of(next)] = true;
        path.push(next);
        at = g.other_end(next, at);
        if at == t.w {
            break;
        }
    }
    if at == t.w && path.len() == rest.len() {
        TowerVerdict::WellBehaved(path)
    } else {
        TowerVerdict::Violating
    }
}

/// Matching state of one ladder.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LadderState {
    /// No boundary vertical (`a0 a1`, `b0 b1`, `a5 a6`, `b5 b6`) is
    /// matched, so the ten inner vertices are matched among themselves.
    pub semi_default: bool,
    /// Semi-default with all five horizontals matched.
    pub default: bool,
    /// Semi-default with horizontals `{5}`: rows 1–4 pair vertically, the
    /// open rungs face the bottom boundary.
    pub bottom_open: bool,
    /// Semi-default with horizontals `{1}`.
    pub top_open: bool,
    /// Indices `i` in `1..=5` with `a_i b_i` matched.
    pub horizontals: BTreeSet<usize>,
}

pub fn ladder_state(g: &BipartiteGraph, l: &LadderHandle, m: &PerfectMatching) -> LadderState {
    let e = |u: usize, v: usize| g.edge_between(u, v).expect("ladder edge present");
    let boundary = [
        e(l.a[0], l.a[1]),
        e(l.b[0], l.b[1]),
        e(l.a[5], l.a[6]),
        e(l.b[5], l.b[6]),
    ];
    let semi_default = boundary.iter().all(|&be| !m.contains(be));
    let horizontals: BTreeSet<usize> = (1..=5)
        .filter(|&i| m.contains(e(l.a[i], l.b[i])))
        .collect();
    LadderState {
        semi_default,
        default: semi_default && horizontals == (1..=5).collect(),
        bottom_open: semi_default && horizontals == BTreeSet::from([5]),
        top_open: semi_default && horizontals == BTreeSet::from([1]),
        horizontals,
    }
}

/// How a cycle passes through one ladder, judged by its boundary verticals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LadderVerdict {
    Untouched,
    /// Contains `a0 a1` and `b0 b1` but neither top boundary vertical.
    FromBottom,
    /// Contains `a5 a6` and `b5 b6` but neither bottom boundary vertical.
    FromTop,
    Violating,
}

pub fn ladder_cycle_verdict(
    g: &BipartiteGraph,
    l: &LadderHandle,
    cycle: &[bool],
) -> LadderVerdict {
    let e = |u: usize, v: usize| g.edge_between(u, v).expect("ladder edge present");
    let bot = (cycle[e(l.a[0], l.a[1])], cycle[e(l.b[0], l.b[1])]);
    let top = (cycle[e(l.a[5], l.a[6])], cycle[e(l.b[5], l.b[6])]);
    let mut touched = bot.0 || bot.1 || top.0 || top.1;
    for i in 1..=5 {
        touched |= cycle[e(l.a[i], l.b[i])];
        if i < 5 {
            touched |= cycle[e(l.a[i], l.a[i + 1])] || cycle[e(l.b[i], l.b[i + 1])];
        }
    }
    match (touched, bot, top) {
        (false, _, _) => LadderVerdict::Untouched,
        (true, (true, true), (false, false)) => LadderVerdict::FromBottom,
        (true, (false, false), (true, true)) => LadderVerdict::FromTop,
        _ => LadderVerdict::Violating,
    }
}

/// A cycle visits a city exactly when it contains the city's first edge.
pub fn city_matched(
    g: &BipartiteGraph,
    reg: &GadgetRegistry,
    city: usize,
    m: &PerfectMatching,
) -> bool {
    m.contains(reg.city_first_edge(g, city))
}

/// Every tower of the city is semi-default (equivalently, the first edge is
/// matched and the whole city chain is in its resting state).
pub fn city_semi_default(
    g: &BipartiteGraph,
    reg: &GadgetRegistry,
    city: usize,
    m: &PerfectMatching,
) -> bool {
    reg.cities[city]
        .towers
        .iter()
        .all(|&t| tower_state(g, &reg.towers[t], m).semi_default)
}

pub fn xor_semi_default(
    g: &BipartiteGraph,
    reg: &GadgetRegistry,
    xor: usize,
    m: &PerfectMatching,
) -> bool {
    reg.xors[xor]
        .cities
        .iter()
        .all(|&c| city_semi_default(g, reg, c, m))
}

/// All cities and couplers of the branch gadget are semi-default, its
/// ladders are semi-default, and the internal edge `x9 x10` is matched.
pub fn forall_semi_default(
    g: &BipartiteGraph,
    reg: &GadgetRegistry,
    forall: usize,
    m: &PerfectMatching,
) -> bool {
    let f = &reg.foralls[forall];
    f.cities.iter().all(|&c| city_semi_default(g, reg, c, m))
        && f.xors.iter().all(|&x| xor_semi_default(g, reg, x, m))
        && m.contains(g.edge_between(f.x[8], f.x[9]).expect("x9 x10 edge"))
        && f.ladders
            .iter()
            .all(|&l| ladder_state(g, &reg.ladders[l], m).semi_default)
}

/// The matching is semi-default for every gadget in the registry.
pub fn matching_semi_default(
    g: &BipartiteGraph,
    reg: &GadgetRegistry,
    m: &PerfectMatching,
) -> bool {
    (0..reg.cities.len()).all(|c| city_semi_default(g, reg, c, m))
        && reg
            .ladders
            .iter()
            .all(|l| ladder_state(g, l, m).semi_default)
        && reg
            .foralls
            .iter()
            .all(|f| m.contains(g.edge_between(f.x[8], f.x[9]).expect("x9 x10 edge")))
}

/// The first and last physical edges of a logical edge's spine (equal when
/// no coupler has been applied).
pub(crate) fn spine_terminals(
    g: &BipartiteGraph,
    reg: &GadgetRegistry,
    le: LeId,
) -> (usize, usize) {
    let l = &reg.logical_edges[le];
    match (l.xors.first(), l.xors.last()) {
        (None, _) => {
            let e = g.edge_between(l.a, l.b).expect("plain logical edge");
            (e, e)
        }
        (Some(_), None) => unreachable!("first and last agree on emptiness"),
        (Some(&(x0, s0)), Some(&(xl, sl))) => (
            g.edge_between(l.a, reg.xors[x0].chains[s0][0])
                .expect("spine head junction"),
            g.edge_between(reg.xors[xl].chains[sl][3], l.b)
                .expect("spine tail junction"),
        ),
    }
}

/// A regular simple cycle uses a logical edge exactly when it contains both
/// terminal junction edges of the edge's spine.
pub fn logical_edge_used(
    g: &BipartiteGraph,
    reg: &GadgetRegistry,
    le: LeId,
    cycle: &[bool],
) -> bool {
    let (first, last) = spine_terminals(g, reg, le);
    cycle[first] && cycle[last]
}

/// A cycle is regular when it visits every city of the registry.
pub fn is_regular(g: &BipartiteGraph, reg: &GadgetRegistry, cycle: &[bool]) -> bool {
    (0..reg.cities.len()).all(|c| cycle[reg.city_first_edge(g, c)])
}

/// How a cycle passes through a branch gadget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ForallVerdict {
    Untouched,
    /// Leaves through `x10 u_in`, traverses the `x6 x7` chain, and enters
    /// the listed ladders (positions within the gadget) from the top.
    Top { ladders: Vec<usize> },
    /// Leaves through `x10 w_in`, traverses the `x2 x3` chain, and enters
    /// the listed ladders from the bottom.
    Bottom { ladders: Vec<usize> },
    Violating,
}

pub fn forall_cycle_state(
    g: &BipartiteGraph,
    reg: &GadgetRegistry,
    forall: usize,
    cycle: &[bool],
) -> ForallVerdict {
    let f = &reg.foralls[forall];
    let uses = |le| logical_edge_used(g, reg, le, cycle);
    let (u, w) = (uses(f.chain_u), uses(f.chain_w));
    let (c23, c67) = (uses(f.chain_x2x3), uses(f.chain_x6x7));
    let mut from_top = Vec::new();
    let mut from_bottom = Vec::new();
    for (i, &l) in f.ladders.iter().enumerate() {
        match ladder_cycle_verdict(g, &reg.ladders[l], cycle) {
            LadderVerdict::Untouched => {}
            LadderVerdict::FromTop => from_top.push(i),
            LadderVerdict::FromBottom => from_bottom.push(i),
            LadderVerdict::Violating => return ForallVerdict::Violating,
        }
    }
    let x9x10 = cycle[g.edge_between(f.x[8], f.x[9]).expect("x9 x10 edge")];
    match (u, w, c23, c67) {
        (false, false, false, false) if from_top.is_empty() && from_bottom.is_empty() && !x9x10 => {
            ForallVerdict::Untouched
        }
        (true, false, false, true) if from_bottom.is_empty() => {
            ForallVerdict::Top { ladders: from_top }
        }
        (false, true, true, false) if from_top.is_empty() => {
            ForallVerdict::Bottom {
                ladders: from_bottom,
            }
        }
        _ => ForallVerdict::Violating,
    }
}

/// Direction label carried by a ladder visit.
pub fn ladder_verdict_dir(v: LadderVerdict) -> Option<Dir> {
    match v {
        LadderVerdict::FromTop => Some(Dir::Top),
        LadderVerdict::FromBottom => Some(Dir::Bottom),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadgets::build::{attach_city, attach_ladder, tower_graph, CityScale};
    use crate::graph::{GraphBuilder, Side};
    use crate::matching::enumerate_perfect_matchings;

    fn edge_bitmap(g: &BipartiteGraph, edges: &[usize]) -> Vec<bool> {
        let mut map = vec![false; g.edge_count()];
        for &e in edges {
            map[e] = true;
        }
        map
    }

    #[test]
    fn tower_state_census() {
        // A free-standing tower forces both boundary edges into every
        // perfect matching, so all its matchings are semi-default; their
        // count follows the ladder-tiling recurrence 1, 2, 3, 5, ...
        let expect = [1usize, 2, 3, 5];
        for h in 1..=4 {
            let (g, reg) = tower_graph(h);
            let t = &reg.towers[0];
            let ms = enumerate_perfect_matchings(&g, 1000).unwrap();
            assert_eq!(ms.len(), expect[h - 1], "matching count at h={h}");
            assert!(ms.iter().all(|m| tower_state(&g, t, m).semi_default));
            assert_eq!(ms.iter().filter(|m| tower_state(&g, t, m).default).count(), 1);
            let locked = ms.iter().filter(|m| tower_state(&g, t, m).locked).count();
            assert_eq!(locked, if h >= 2 { 1 } else { 0 }, "locked count at h={h}");
        }
    }

    #[test]
    fn tower_verdicts() {
        let (g, reg) = tower_graph(2);
        let t = &reg.towers[0];
        let e = |u: usize, v: usize| g.edge_between(u, v).unwrap();
        // A v-w path straight across the bottom row is well-behaved.
        let path = vec![e(t.v, t.a[0]), e(t.a[0], t.b[0]), e(t.b[0], t.w)];
        match tower_cycle_verdict(&g, &reg, t, &edge_bitmap(&g, &path)) {
            TowerVerdict::WellBehaved(p) => assert_eq!(p, path),
            other => panic!("expected well-behaved, got {other:?}"),
        }
        // The default/locked alternating cycle stays inside rows 1..2 and
        // misses the boundary vertices, so it is violating.
        let square = vec![
            e(t.a[1], t.b[1]),
            e(t.b[1], t.b[2]),
            e(t.a[2], t.b[2]),
            e(t.a[1], t.a[2]),
        ];
        assert_eq!(
            tower_cycle_verdict(&g, &reg, t, &edge_bitmap(&g, &square)),
            TowerVerdict::Violating
        );
        assert_eq!(
            tower_cycle_verdict(&g, &reg, t, &vec![false; g.edge_count()]),
            TowerVerdict::Untouched
        );
    }

    #[test]
    fn ladder_state_census_with_closed_boundary() {
        // Close the ladder with edges a0 b0 and a6 b6; matchings using both
        // closing edges leave the inner ladder semi-default, and there are
        // exactly eight of those, all with an odd number of horizontals.
        let mut gb = GraphBuilder::new();
        let mut reg = crate::gadgets::GadgetRegistry::new();
        let a0 = gb.add_vertex(Side::Left);
        let b0 = gb.add_vertex(Side::Right);
        let a6 = gb.add_vertex(Side::Left);
        let b6 = gb.add_vertex(Side::Right);
        attach_ladder(&mut gb, &mut reg, a6, b6, a0, b0, "L").unwrap();
        gb.add_edge(a0, b0).unwrap();
        gb.add_edge(a6, b6).unwrap();
        let g = gb.build();
        let l = &reg.ladders[0];
        let ms = enumerate_perfect_matchings(&g, 10_000).unwrap();
        let semi: Vec<_> = ms
            .iter()
            .map(|m| ladder_state(&g, l, m))
            .filter(|s| s.semi_default)
            .collect();
        assert_eq!(semi.len(), 8);
        assert!(semi.iter().all(|s| s.horizontals.len() % 2 == 1));
        assert_eq!(semi.iter().filter(|s| s.default).count(), 1);
        assert_eq!(semi.iter().filter(|s| s.bottom_open).count(), 1);
        assert_eq!(semi.iter().filter(|s| s.top_open).count(), 1);
    }

    #[test]
    fn ladder_verdict_bullets() {
        let (g, reg) = crate::gadgets::build::ladder_graph();
        let l = &reg.ladders[0];
        let e = |u: usize, v: usize| g.edge_between(u, v).unwrap();
        let bottom = vec![
            e(l.a[0], l.a[1]),
            e(l.a[1], l.b[1]),
            e(l.b[0], l.b[1]),
        ];
        assert_eq!(
            ladder_cycle_verdict(&g, l, &edge_bitmap(&g, &bottom)),
            LadderVerdict::FromBottom
        );
        let top = vec![e(l.a[5], l.a[6]), e(l.a[5], l.b[5]), e(l.b[5], l.b[6])];
        assert_eq!(
            ladder_cycle_verdict(&g, l, &edge_bitmap(&g, &top)),
            LadderVerdict::FromTop
        );
        let mixed = vec![e(l.a[0], l.a[1]), e(l.a[5], l.a[6])];
        assert_eq!(
            ladder_cycle_verdict(&g, l, &edge_bitmap(&g, &mixed)),
            LadderVerdict::Violating
        );
        assert_eq!(
            ladder_cycle_verdict(&g, l, &vec![false; g.edge_count()]),
            LadderVerdict::Untouched
        );
    }

    #[test]
    fn city_matched_iff_semi_default() {
        // Close the city with an extra x-y edge so both resting and broken
        // boundary states admit perfect matchings, then verify the visiting
        // criterion: the first edge is matched exactly when every tower of
        // the chain is semi-default.
        let mut gb = GraphBuilder::new();
        let mut reg = crate::gadgets::GadgetRegistry::new();
        let x = gb.add_vertex(Side::Left);
        let y = gb.add_vertex(Side::Right);
        attach_city(
            &mut gb,
            &mut reg,
            x,
            y,
            CityScale {
                width: 2,
                height: 1,
            },
            "C",
        )
        .unwrap();
        gb.add_edge(x, y).unwrap();
        let g = gb.build();
        let ms = enumerate_perfect_matchings(&g, 10_000).unwrap();
        assert!(ms.len() > 2);
        let mut matched_seen = [false, false];
        for m in &ms {
            let matched = city_matched(&g, &reg, 0, m);
            assert_eq!(matched, city_semi_default(&g, &reg, 0, m));
            matched_seen[usize::from(matched)] = true;
        }
        assert_eq!(matched_seen, [true, true]);
    }
}
