//! Gadget constructions on bipartite graphs.
//!
//! Five gadget kinds are provided:
//!
//! - **tower**: a height-`h` column attached at two boundary vertices `v`,
//!   `w`; its matching states (default / locked / semi-default) and
//!   well-behaved `v`–`w` path flips drive all lower-bound arguments;
//! - **city**: a chain of towers between `x` and `y`; a cycle "visits" a
//!   city when it contains the city's first edge, which happens exactly
//!   when the cycle is well-behaved for every tower;
//! - **XOR coupler**: two edges are subdivided four times each and the
//!   subdivision points joined by four cities; every cycle visiting all
//!   cities traverses exactly one of the two original edges;
//! - **ladder**: a fixed-height-5 double column open at top and bottom,
//!   whose 8 semi-default states form a diameter-2 transfer graph with
//!   direction-labeled moves;
//! - **branch gadget** (`forall`): `t` ladders between four cities wired
//!   with three XOR couplers; every cycle visiting all cities passes
//!   through it in exactly one of two states (top/bottom) and touches
//!   exactly one ladder from the matching direction.
//!
//! Constructors append to a [`GraphBuilder`] and record handles in a
//! [`GadgetRegistry`]; handles address vertices by their structural role.

pub mod build;
pub mod classify;
pub mod search;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::graph::BipartiteGraph;
use crate::io::GadgetDoc;

pub use build::{
    attach_city, attach_forall, attach_ladder, attach_tower, insert_xor, new_logical_edge,
    CityScale,
};
pub use classify::{
    city_matched, city_semi_default, forall_cycle_state, forall_semi_default, is_regular,
    ladder_cycle_verdict, ladder_state, logical_edge_used, matching_semi_default,
    tower_cycle_verdict, tower_state, xor_semi_default, ForallVerdict, LadderState,
    LadderVerdict, TowerState, TowerVerdict,
};
pub use search::{
    enumerate_city_reduced_cycles, enumerate_semi_default_ladder_states, enumerate_simple_cycles,
    forall_harness, ladder_harness,
    ladder_pair_plan, ladder_transfer_graph, min_well_behaved_ladder_sequence,
    min_well_behaved_tower_sequence, tower_harness, tower_plan, xor_harness, Harness, LadderMove,
};

/// Direction from which a well-behaved cycle enters a ladder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Dir {
    Top,
    Bottom,
}

impl Dir {
    pub fn letter(self) -> char {
        match self {
            Dir::Top => 't',
            Dir::Bottom => 'b',
        }
    }
}

/// Identifier of a logical edge inside a [`GadgetRegistry`].
pub type LeId = usize;

/// A tower of height `h`: boundary vertices `v`, `w` and columns
/// `a[0..=h]`, `b[0..=h]`. Edges: `v a0`, `b0 w`, horizontals `a_i b_i`
/// for `i = 0..=h`, verticals `a_i a_{i-1}`, `b_i b_{i-1}` for `i = 1..=h`.
#[derive(Debug, Clone)]
pub struct TowerHandle {
    pub name: String,
    pub h: usize,
    pub v: usize,
    pub w: usize,
    pub a: Vec<usize>,
    pub b: Vec<usize>,
}

/// A city of `width` towers, each of height `height`, chained between `x`
/// and `y`. Consecutive towers share their boundary edge: the exit edge
/// `b0 w` of tower `i-1` *is* the entry edge `v a0` of tower `i` (vertex
/// identification `b0 -> v`, `w -> a0`). `towers` are registry indices.
#[derive(Debug, Clone)]
pub struct CityHandle {
    pub name: String,
    pub width: usize,
    pub height: usize,
    pub x: usize,
    pub y: usize,
    pub towers: Vec<usize>,
}

/// A ladder: columns `a[0..=6]`, `b[0..=6]`, horizontals `a_i b_i` for
/// `i = 1..=5`, verticals `a_i a_{i+1}`, `b_i b_{i+1}` for `i = 0..=5`.
/// Boundary vertices are `a0, b0, a6, b6`; the inner ladder is rows 1–5.
#[derive(Debug, Clone)]
pub struct LadderHandle {
    pub name: String,
    pub a: [usize; 7],
    pub b: [usize; 7],
}

/// An XOR coupler between two logical edges. `chains[s]` holds the four
/// subdivision vertices inserted into logical edge `les[s]`, indexed along
/// that edge's spine. `cities[i]` joins a vertex of chain 0 to a vertex of
/// chain 1 (pairing reversed when `mirrored`). `les` are registry logical
/// edge ids; `cities` are registry city indices.
#[derive(Debug, Clone)]
pub struct XorHandle {
    pub name: String,
    pub les: [LeId; 2],
    pub chains: [[usize; 4]; 2],
    pub cities: [usize; 4],
    pub mirrored: bool,
}

/// A branch gadget of `width` ladders between boundary vertices `v_out`,
/// `u_in`, `w_in`. Internal vertices `x[0..10]` are the junctions
/// `x_1..x_10` in wiring order (so `x[i]` is `x_{i+1}`). `cities`, `xors`, `ladders` are
/// registry indices; the four `chain_*` fields are the logical edges
/// `x2 x3`, `x6 x7`, `x10 u_in`, `x10 w_in`.
#[derive(Debug, Clone)]
pub struct ForallHandle {
    pub name: String,
    pub width: usize,
    pub v_out: usize,
    pub u_in: usize,
    pub w_in: usize,
    pub x: [usize; 10],
    pub cities: [usize; 4],
    pub xors: [usize; 3],
    pub ladders: Vec<usize>,
    pub chain_x2x3: LeId,
    pub chain_x6x7: LeId,
    pub chain_u: LeId,
    pub chain_w: LeId,
}

/// An edge of the abstract construction that may have been replaced by XOR
/// chains. `xors` lists `(xor registry index, side)` in spine order; the
/// physical spine runs `a`, chain of first XOR, chain of second XOR, ...,
/// `b`, joined by junction edges.
#[derive(Debug, Clone)]
pub struct LogicalEdge {
    pub a: usize,
    pub b: usize,
    pub xors: Vec<(usize, usize)>,
}

/// Flat store of every gadget instance in a constructed graph. Cities
/// inside XOR couplers and branch gadgets appear in `cities` like any
/// other city, so censuses and regularity checks iterate one list.
#[derive(Debug, Clone, Default)]
pub struct GadgetRegistry {
    pub towers: Vec<TowerHandle>,
    pub cities: Vec<CityHandle>,
    pub ladders: Vec<LadderHandle>,
    pub xors: Vec<XorHandle>,
    pub foralls: Vec<ForallHandle>,
    pub logical_edges: Vec<LogicalEdge>,
}

/// Aggregate counts used by construction reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Census {
    pub towers: usize,
    pub cities: usize,
    pub ladders: usize,
    pub xors: usize,
    pub foralls: usize,
}

impl GadgetRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn census(&self) -> Census {
        Census {
            towers: self.towers.len(),
            cities: self.cities.len(),
            ladders: self.ladders.len(),
            xors: self.xors.len(),
            foralls: self.foralls.len(),
        }
    }

    /// The first edge `x a0^(T1)` of a city; a cycle visits the city iff it
    /// contains this edge.
    pub fn city_first_edge(&self, g: &BipartiteGraph, city: usize) -> usize {
        let c = &self.cities[city];
        let t1 = &self.towers[c.towers[0]];
        g.edge_between(c.x, t1.a[0])
            .expect("city entry edge must exist")
    }

    /// All edges with both endpoints inside the tower (including the two
    /// boundary edges `v a0` and `b0 w`).
    pub fn tower_edges(&self, g: &BipartiteGraph, t: &TowerHandle) -> Vec<usize> {
        let mut verts = vec![t.v, t.w];
        verts.extend_from_slice(&t.a);
        verts.extend_from_slice(&t.b);
        let inside = |x: usize| verts.contains(&x);
        let mut edges: Vec<usize> = Vec::new();
        for &v in &verts {
            for &e in g.adjacency(v) {
                let (p, q) = g.edge(e);
                if inside(p) && inside(q) && !edges.contains(&e) {
                    edges.push(e);
                }
            }
        }
        edges.sort_unstable();
        edges
    }

    /// Serializable descriptions of every registered gadget.
    pub fn to_docs(&self) -> Vec<GadgetDoc> {
        let mut docs = Vec::new();
        for t in &self.towers {
            let mut role_map: BTreeMap<String, usize> =
                [("v".to_string(), t.v), ("w".to_string(), t.w)].into();
            for (i, (&ai, &bi)) in t.a.iter().zip(&t.b).enumerate() {
                role_map.insert(format!("a{i}"), ai);
                role_map.insert(format!("b{i}"), bi);
            }
            docs.push(GadgetDoc {
                kind: "tower".into(),
                params: serde_json::json!({"name": t.name, "h": t.h}),
                role_map,
            });
        }
        for c in &self.cities {
            let role_map: BTreeMap<String, usize> =
                [("x".to_string(), c.x), ("y".to_string(), c.y)].into();
            docs.push(GadgetDoc {
                kind: "city".into(),
                params: serde_json::json!({
                    "name": c.name, "width": c.width, "height": c.height,
                }),
                role_map,
            });
        }
        for l in &self.ladders {
            let mut role_map = BTreeMap::new();
            for i in 0..7 {
                role_map.insert(format!("a{i}"), l.a[i]);
                role_map.insert(format!("b{i}"), l.b[i]);
            }
            docs.push(GadgetDoc {
                kind: "ladder".into(),
                params: serde_json::json!({"name": l.name}),
                role_map,
            });
        }
        for x in &self.xors {
            let mut role_map = BTreeMap::new();
            for i in 0..4 {
                role_map.insert(format!("x{}", i + 1), x.chains[0][i]);
                role_map.insert(format!("y{}", i + 1), x.chains[1][i]);
            }
            docs.push(GadgetDoc {
                kind: "xor".into(),
                params: serde_json::json!({"name": x.name, "mirrored": x.mirrored}),
                role_map,
            });
        }
        for f in &self.foralls {
            let mut role_map: BTreeMap<String, usize> = [
                ("v_out".to_string(), f.v_out),
                ("u_in".to_string(), f.u_in),
                ("w_in".to_string(), f.w_in),
            ]
            .into();
            for (i, &xi) in f.x.iter().enumerate() {
                role_map.insert(format!("x{}", i + 1), xi);
            }
            docs.push(GadgetDoc {
                kind: "forall".into(),
                params: serde_json::json!({"name": f.name, "width": f.width}),
                role_map,
            });
        }
        docs
    }
}
