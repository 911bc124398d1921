//! The compilation from a constrained-Hamiltonicity instance to a
//! bipartite graph `G_H`, together with its distinguished matchings and
//! the projection onto semi-default states.
//!
//! Construction: every vertex `x` of the directed instance becomes a pair
//! `x_in`, `x_out` joined by a city; every designated pair `j` becomes a
//! branch gadget on `(v_out^(j), u_in^(j), w_in^(j))`; every arc `(a, b)`
//! outside the pairs becomes a plain edge `a_out b_in`. A cycle through
//! the graph that visits every city traces a Hamiltonian cycle of the
//! instance, with each branch gadget's state choosing one pair arc.

use crate::error::{MatchingError, ReductionError};
use crate::gadgets::{
    attach_city, attach_forall, city_semi_default, forall_semi_default, ladder_state,
    matching_semi_default, tower_state, GadgetRegistry,
};
use crate::graph::{BipartiteGraph, GraphBuilder, Side};
use crate::matching::{decompose_symmetric_difference, PerfectMatching};
use crate::skeleton::{validate_flip_sequence, FlipSequence};

use super::ham_instance::{HamInstance, Pattern};
use super::scale::ScaleProfile;

/// `G_H` with everything needed to interpret matchings and cycles on it.
#[derive(Debug, Clone)]
pub struct GhGraph {
    pub instance: HamInstance,
    pub profile: ScaleProfile,
    pub graph: BipartiteGraph,
    pub reg: GadgetRegistry,
    /// `x_in` / `x_out` vertex per instance vertex.
    pub x_in: Vec<usize>,
    pub x_out: Vec<usize>,
    /// Registry city index per instance vertex.
    pub vertex_city: Vec<usize>,
    /// Registry branch-gadget index per pair.
    pub foralls: Vec<usize>,
    /// Per instance arc: the plain `a_out b_in` edge, or `None` for pair
    /// arcs (which route through a branch gadget instead).
    pub arc_edges: Vec<Option<usize>>,
    /// The anchor vertices whose default partners characterize
    /// semi-default matchings: all `x_in`, the coupler chains of the first
    /// logical edge of each XOR, and the ten internals of each branch
    /// gadget.
    pub v_s: Vec<usize>,
}

pub fn build_gh(instance: HamInstance, profile: ScaleProfile) -> Result<GhGraph, ReductionError> {
    profile.validate()?;
    let n = instance.vertex_count();
    let k = instance.pair_count();
    let scale = profile.city_scale();
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
    let mut foralls = Vec::with_capacity(k);
    for j in 0..k {
        let (v, u, w) = instance.designated(j);
        foralls.push(
            attach_forall(
                &mut gb,
                &mut reg,
                x_out[v],
                x_in[u],
                x_in[w],
                profile.forall_width,
                scale,
                format!("A{j}"),
            )
            .map_err(|e| ReductionError::ProfileInvalid(e.to_string()))?,
        );
    }
    for (a, &(tail, head)) in instance.h.arcs().iter().enumerate() {
        if !instance.is_pair_arc(a) {
            gb.add_edge(x_out[tail], x_in[head])
                .map_err(|e| ReductionError::InstanceInvalid(e.to_string()))?;
        }
    }
    let graph = gb.build();
    let arc_edges: Vec<Option<usize>> = instance
        .h
        .arcs()
        .iter()
        .enumerate()
        .map(|(a, &(tail, head))| {
            if instance.is_pair_arc(a) {
                None
            } else {
                Some(
                    graph
                        .edge_between(x_out[tail], x_in[head])
                        .expect("plain arc edge was added"),
                )
            }
        })
        .collect();
    let mut v_s: Vec<usize> = x_in.clone();
    for x in &reg.xors {
        v_s.extend_from_slice(&x.chains[0]);
    }
    for f in &reg.foralls {
        v_s.extend_from_slice(&f.x);
    }
    debug_assert_eq!(reg.cities.len(), n + 16 * k);
    debug_assert_eq!(v_s.len(), n + 22 * k);
    Ok(GhGraph {
        instance,
        profile,
        graph,
        reg,
        x_in,
        x_out,
        vertex_city,
        foralls,
        arc_edges,
        v_s,
    })
}

impl GhGraph {
    fn e(&self, u: usize, v: usize) -> usize {
        self.graph.edge_between(u, v).expect("gadget edge present")
    }

    /// The default matching: every tower default, every branch gadget
    /// semi-default with all its ladders default.
    pub fn default_matching(&self) -> PerfectMatching {
        let mut edges = Vec::new();
        for t in &self.reg.towers {
            edges.push(self.e(t.v, t.a[0]));
            edges.push(self.e(t.b[0], t.w));
            for i in 1..=t.h {
                edges.push(self.e(t.a[i], t.b[i]));
            }
        }
        for l in &self.reg.ladders {
            for i in 1..=5 {
                edges.push(self.e(l.a[i], l.b[i]));
            }
        }
        for f in &self.reg.foralls {
            edges.push(self.e(f.x[8], f.x[9]));
        }
        PerfectMatching::new(&self.graph, edges).expect("default matching is perfect")
    }

    /// The pattern matching `M_P`: semi-default, all towers locked, and
    /// each branch gadget's ladders all top-open (pair arc `e_j` chosen)
    /// or all bottom-open (`ē_j` chosen).
    pub fn pattern_matching(&self, p: &Pattern) -> Result<PerfectMatching, ReductionError> {
        p.validate(&self.instance)?;
        if self.profile.city_height < 2 {
            return Err(ReductionError::ProfileInvalid(
                "locked towers require city height at least two".into(),
            ));
        }
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
        for (j, f_idx) in self.foralls.iter().enumerate() {
            let f = &self.reg.foralls[*f_idx];
            edges.push(self.e(f.x[8], f.x[9]));
            for &l_idx in &f.ladders {
                let l = &self.reg.ladders[l_idx];
                if p.picks[j] {
                    // Top-open: row 1 horizontal, rows 2-5 vertical pairs.
                    edges.push(self.e(l.a[1], l.b[1]));
                    for i in [2, 4] {
                        edges.push(self.e(l.a[i], l.a[i + 1]));
                        edges.push(self.e(l.b[i], l.b[i + 1]));
                    }
                } else {
                    // Bottom-open: rows 1-4 vertical pairs, row 5 horizontal.
                    edges.push(self.e(l.a[5], l.b[5]));
                    for i in [1, 3] {
                        edges.push(self.e(l.a[i], l.a[i + 1]));
                        edges.push(self.e(l.b[i], l.b[i + 1]));
                    }
                }
            }
        }
        Ok(PerfectMatching::new(&self.graph, edges).expect("pattern matching is perfect"))
    }

    /// `true` when every city and every branch gadget is semi-default.
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

    /// Sanity census used by tests and reports: states of all gadgets.
    pub fn classify(&self, m: &PerfectMatching) -> GhStateCensus {
        let g = &self.graph;
        GhStateCensus {
            towers_default: self
                .reg
                .towers
                .iter()
                .filter(|t| tower_state(g, t, m).default)
                .count(),
            towers_locked: self
                .reg
                .towers
                .iter()
                .filter(|t| tower_state(g, t, m).locked)
                .count(),
            towers_semi_default: self
                .reg
                .towers
                .iter()
                .filter(|t| tower_state(g, t, m).semi_default)
                .count(),
            cities_semi_default: (0..self.reg.cities.len())
                .filter(|&c| city_semi_default(g, &self.reg, c, m))
                .count(),
            ladders_default: self
                .reg
                .ladders
                .iter()
                .filter(|l| ladder_state(g, l, m).default)
                .count(),
            ladders_top_open: self
                .reg
                .ladders
                .iter()
                .filter(|l| ladder_state(g, l, m).top_open)
                .count(),
            ladders_bottom_open: self
                .reg
                .ladders
                .iter()
                .filter(|l| ladder_state(g, l, m).bottom_open)
                .count(),
            foralls_semi_default: (0..self.reg.foralls.len())
                .filter(|&f| forall_semi_default(g, &self.reg, f, m))
                .count(),
        }
    }
}

/// Counts of gadget states under one matching.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct GhStateCensus {
    pub towers_default: usize,
    pub towers_locked: usize,
    pub towers_semi_default: usize,
    pub cities_semi_default: usize,
    pub ladders_default: usize,
    pub ladders_top_open: usize,
    pub ladders_bottom_open: usize,
    pub foralls_semi_default: usize,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::is_bipartite_certificate;
    use crate::reduction::ham_instance::test_instances::diamond;

    fn desk_gh() -> GhGraph {
        build_gh(diamond(), ScaleProfile::minimal()).unwrap()
    }

    #[test]
    fn census_matches_the_counting_formulas() {
        let gh = desk_gh();
        let c = gh.reg.census();
        assert_eq!(c.cities, 4 + 16);
        assert_eq!(c.xors, 3);
        assert_eq!(c.foralls, 1);
        assert_eq!(gh.v_s.len(), 4 + 22);
        assert!(is_bipartite_certificate(&gh.graph).is_bipartite());
        // Exactly one arc of the diamond instance is outside the pairs per
        // remaining arc; pair arcs have no plain edge.
        assert!(gh.arc_edges[0].is_none());
        assert!(gh.arc_edges[1].is_none());
        assert!(gh.arc_edges[2..].iter().all(Option::is_some));
    }

    #[test]
    fn default_matching_states() {
        let gh = desk_gh();
        let m = gh.default_matching();
        let census = gh.classify(&m);
        assert_eq!(census.towers_default, gh.reg.towers.len());
        assert_eq!(census.cities_semi_default, gh.reg.cities.len());
        assert_eq!(census.ladders_default, gh.reg.ladders.len());
        assert_eq!(census.foralls_semi_default, gh.reg.foralls.len());
        assert!(gh.is_semi_default(&m));
    }

    #[test]
    fn pattern_matchings_lock_towers_and_open_ladders() {
        let gh = desk_gh();
        for pick in [true, false] {
            let m = gh.pattern_matching(&Pattern::new(vec![pick])).unwrap();
            let census = gh.classify(&m);
            assert_eq!(census.towers_locked, gh.reg.towers.len());
            assert!(gh.is_semi_default(&m));
            if pick {
                assert_eq!(census.ladders_top_open, gh.reg.ladders.len());
            } else {
                assert_eq!(census.ladders_bottom_open, gh.reg.ladders.len());
            }
        }
    }

    #[test]
    fn projection_reaches_semi_default_quickly() {
        let gh = desk_gh();
        let m_def = gh.default_matching();
        let (end, seq) = gh.semi_default_projection(&m_def).unwrap();
        assert!(seq.cycles.is_empty());
        assert_eq!(end.edges(), m_def.edges());
        let m_p = gh.pattern_matching(&Pattern::new(vec![true])).unwrap();
        let (end, seq) = gh.semi_default_projection(&m_p).unwrap();
        assert!(seq.cycles.len() <= gh.v_s.len());
        assert!(gh.is_semi_default(&end));
    }
}
