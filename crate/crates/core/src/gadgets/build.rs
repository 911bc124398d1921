//! Gadget constructors. All constructors append vertices and edges to a
//! [`GraphBuilder`] and record a handle in the [`GadgetRegistry`]; vertex
//! indices are stable, so handles stay valid in the built graph.

use serde::{Deserialize, Serialize};

use crate::error::GadgetError;
use crate::graph::{GraphBuilder, Side};

use super::{
    CityHandle, ForallHandle, GadgetRegistry, LadderHandle, LeId, LogicalEdge, TowerHandle,
    XorHandle,
};

/// Scale of a city: `width` towers of height `height`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CityScale {
    pub width: usize,
    pub height: usize,
}

impl CityScale {
    pub const MINIMAL: CityScale = CityScale {
        width: 1,
        height: 1,
    };

    pub fn validate(&self) -> Result<(), GadgetError> {
        if self.width < 1 || self.height < 1 {
            return Err(GadgetError::ScaleInvalid(format!(
                "city width and height must be at least 1, got {}x{}",
                self.width, self.height
            )));
        }
        Ok(())
    }
}

/// Core tower builder. `v` must exist. When `a0` is given, the entry edge
/// `v a0` is assumed to exist already (tower chaining inside a city); when
/// `w` is given it becomes the exit vertex, otherwise a fresh one is made.
fn attach_tower_inner(
    gb: &mut GraphBuilder,
    reg: &mut GadgetRegistry,
    v: usize,
    a0: Option<usize>,
    w: Option<usize>,
    h: usize,
    name: String,
) -> Result<usize, GadgetError> {
    if h < 1 {
        return Err(GadgetError::ScaleInvalid(format!(
            "tower height must be at least 1, got {h}"
        )));
    }
    let sv = gb.side(v);
    let mut a = Vec::with_capacity(h + 1);
    let mut b = Vec::with_capacity(h + 1);
    // Column a alternates starting opposite v; column b mirrors column a.
    match a0 {
        Some(a0) => {
            assert_eq!(gb.side(a0), sv.flip(), "tower entry vertex side mismatch");
            a.push(a0);
        }
        None => {
            let a0 = gb.add_vertex(sv.flip());
            gb.add_edge(v, a0).expect("fresh tower entry edge");
            a.push(a0);
        }
    }
    for i in 1..=h {
        a.push(gb.add_vertex(if i % 2 == 0 { sv.flip() } else { sv }));
    }
    for &ai in &a {
        b.push(gb.add_vertex(gb.side(ai).flip()));
    }
    let w = match w {
        Some(w) => {
            assert_eq!(gb.side(w), sv.flip(), "tower exit vertex side mismatch");
            w
        }
        None => gb.add_vertex(sv.flip()),
    };
    for i in 0..=h {
        gb.add_edge(a[i], b[i]).expect("tower horizontal edge");
        if i >= 1 {
            gb.add_edge(a[i], a[i - 1]).expect("tower vertical edge");
            gb.add_edge(b[i], b[i - 1]).expect("tower vertical edge");
        }
    }
    gb.add_edge(b[0], w).expect("tower exit edge");
    gb.add_role(v, format!("{name}.v"));
    gb.add_role(w, format!("{name}.w"));
    for i in 0..=h {
        gb.add_role(a[i], format!("{name}.a{i}"));
        gb.add_role(b[i], format!("{name}.b{i}"));
    }
    reg.towers.push(TowerHandle { name, h, v, w, a, b });
    Ok(reg.towers.len() - 1)
}

/// Attaches a tower of height `h` between the existing vertices `v`, `w`.
pub fn attach_tower(
    gb: &mut GraphBuilder,
    reg: &mut GadgetRegistry,
    v: usize,
    w: usize,
    h: usize,
    name: impl Into<String>,
) -> Result<usize, GadgetError> {
    attach_tower_inner(gb, reg, v, None, Some(w), h, name.into())
}

/// Attaches a city between the existing vertices `x` and `y`: a chain of
/// `scale.width` towers of height `scale.height`. Consecutive towers share
/// their junction edge (`b0 -> v`, `w -> a0`), so `x` and `y` end up joined
/// by a path of odd length.
pub fn attach_city(
    gb: &mut GraphBuilder,
    reg: &mut GadgetRegistry,
    x: usize,
    y: usize,
    scale: CityScale,
    name: impl Into<String>,
) -> Result<usize, GadgetError> {
    scale.validate()?;
    let name = name.into();
    assert_eq!(
        gb.side(y),
        gb.side(x).flip(),
        "city endpoints must lie on opposite sides"
    );
    let t = scale.width;
    let h = scale.height;
    let mut towers: Vec<usize> = Vec::with_capacity(t);
    for i in 0..t {
        let tname = format!("{name}.t{}", i + 1);
        let id = if i == 0 {
            let w = if t == 1 { Some(y) } else { None };
            attach_tower_inner(gb, reg, x, None, w, h, tname)?
        } else {
            let prev = &reg.towers[towers[i - 1]];
            let (v, a0) = (prev.b[0], prev.w);
            let w = if i == t - 1 { Some(y) } else { None };
            attach_tower_inner(gb, reg, v, Some(a0), w, h, tname)?
        };
        towers.push(id);
    }
    gb.add_role(x, format!("{name}.x"));
    gb.add_role(y, format!("{name}.y"));
    reg.cities.push(CityHandle {
        name,
        width: t,
        height: h,
        x,
        y,
        towers,
    });
    Ok(reg.cities.len() - 1)
}

/// Registers a logical edge `a b` and adds it as a real edge. Applying XOR
/// couplers later replaces segments of it by subdivision chains.
pub fn new_logical_edge(
    gb: &mut GraphBuilder,
    reg: &mut GadgetRegistry,
    a: usize,
    b: usize,
) -> Result<LeId, GadgetError> {
    gb.add_edge(a, b)
        .map_err(|_| GadgetError::LogicalEdgeNotFound((a, b)))?;
    reg.logical_edges.push(LogicalEdge {
        a,
        b,
        xors: Vec::new(),
    });
    Ok(reg.logical_edges.len() - 1)
}

/// The physical last segment of a logical edge: the edge between the tail
/// of its final XOR chain (or `a` if none) and `b`.
fn last_segment(reg: &GadgetRegistry, le: LeId) -> (usize, usize) {
    let l = &reg.logical_edges[le];
    let p = match l.xors.last() {
        None => l.a,
        Some(&(x, side)) => reg.xors[x].chains[side][3],
    };
    (p, l.b)
}

/// Inserts an XOR coupler between two logical edges: the current last
/// segment of each is subdivided four times and the subdivision chains are
/// joined by four cities. When the bipartition demands it, the pairing of
/// the chains is mirrored (cities join `x_i` to `y_{5-i}`); the resulting
/// graph is always bipartite.
pub fn insert_xor(
    gb: &mut GraphBuilder,
    reg: &mut GadgetRegistry,
    le0: LeId,
    le1: LeId,
    scale: CityScale,
    name: impl Into<String>,
) -> Result<usize, GadgetError> {
    scale.validate()?;
    assert_ne!(le0, le1, "XOR coupler needs two distinct logical edges");
    let name = name.into();
    let (p0, b0) = last_segment(reg, le0);
    let (p1, b1) = last_segment(reg, le1);
    for &(p, b) in &[(p0, b0), (p1, b1)] {
        if !gb.remove_edge(p, b) {
            return Err(GadgetError::LogicalEdgeNotFound((p, b)));
        }
    }
    // A subdivision chain alternates sides starting opposite its segment
    // head. The city pairing (x_i, y_i) needs opposite sides per pair,
    // which works out exactly when the two heads lie on opposite sides;
    // otherwise the pairing is mirrored to (x_i, y_{5-i}).
    let mirrored = gb.side(p0) == gb.side(p1);
    let mut chains = [[0usize; 4]; 2];
    for (s, &(p, b)) in [(p0, b0), (p1, b1)].iter().enumerate() {
        let mut prev = p;
        for slot in &mut chains[s] {
            let v = gb.add_vertex(gb.side(prev).flip());
            gb.add_edge(prev, v).expect("chain edge");
            *slot = v;
            prev = v;
        }
        gb.add_edge(prev, b).expect("chain tail edge");
    }
    for (i, (&c0, &c1)) in chains[0].iter().zip(&chains[1]).enumerate() {
        gb.add_role(c0, format!("{name}.x{}", i + 1));
        gb.add_role(c1, format!("{name}.y{}", i + 1));
    }
    let mut cities = [0usize; 4];
    for i in 0..4 {
        let partner = if mirrored {
            chains[1][3 - i]
        } else {
            chains[1][i]
        };
        cities[i] = attach_city(
            gb,
            reg,
            chains[0][i],
            partner,
            scale,
            format!("{name}.c{}", i + 1),
        )?;
    }
    let xor_id = reg.xors.len();
    reg.xors.push(XorHandle {
        name,
        les: [le0, le1],
        chains,
        cities,
        mirrored,
    });
    reg.logical_edges[le0].xors.push((xor_id, 0));
    reg.logical_edges[le1].xors.push((xor_id, 1));
    Ok(xor_id)
}

/// Attaches a ladder whose four boundary vertices `a6, b6, a0, b0` already
/// exist; ten fresh inner vertices form rows 1–5.
pub fn attach_ladder(
    gb: &mut GraphBuilder,
    reg: &mut GadgetRegistry,
    a6: usize,
    b6: usize,
    a0: usize,
    b0: usize,
    name: impl Into<String>,
) -> Result<usize, GadgetError> {
    let name = name.into();
    assert_eq!(gb.side(b6), gb.side(a6).flip(), "ladder boundary sides");
    assert_eq!(gb.side(a0), gb.side(a6), "ladder boundary sides");
    assert_eq!(gb.side(b0), gb.side(b6), "ladder boundary sides");
    let mut a = [0usize; 7];
    let mut b = [0usize; 7];
    a[0] = a0;
    a[6] = a6;
    b[0] = b0;
    b[6] = b6;
    for i in 1..=5 {
        a[i] = gb.add_vertex(if i % 2 == 0 { gb.side(a0) } else { gb.side(a0).flip() });
        b[i] = gb.add_vertex(gb.side(a[i]).flip());
        gb.add_role(a[i], format!("{name}.a{i}"));
        gb.add_role(b[i], format!("{name}.b{i}"));
    }
    for i in 1..=5 {
        gb.add_edge(a[i], b[i]).expect("ladder horizontal edge");
    }
    for i in 0..=5 {
        gb.add_edge(a[i], a[i + 1]).expect("ladder vertical edge");
        gb.add_edge(b[i], b[i + 1]).expect("ladder vertical edge");
    }
    reg.ladders.push(LadderHandle { name, a, b });
    Ok(reg.ladders.len() - 1)
}

/// Attaches a branch gadget of `width` ladders to the three existing
/// vertices `v_out`, `u_in`, `w_in`. Wiring: ten internal vertices
/// `x1..x10`, four cities on `(x1,x2), (x3,x4), (x5,x6), (x7,x8)`, the
/// eleven plain edges, three XOR couplers on the pairs
/// `(x2x3, x6x7), (x2x3, x10 u_in), (x6x7, x10 w_in)`, and `width` ladders
/// with `a6 -> x2`, `b6 -> x3`, `a0 -> x6`, `b0 -> x7`.
#[allow(clippy::too_many_arguments)]
pub fn attach_forall(
    gb: &mut GraphBuilder,
    reg: &mut GadgetRegistry,
    v_out: usize,
    u_in: usize,
    w_in: usize,
    width: usize,
    city_scale: CityScale,
    name: impl Into<String>,
) -> Result<usize, GadgetError> {
    if width < 1 {
        return Err(GadgetError::ScaleInvalid(format!(
            "branch gadget width must be at least 1, got {width}"
        )));
    }
    city_scale.validate()?;
    let name = name.into();
    let s = gb.side(v_out);
    assert_eq!(gb.side(u_in), s.flip(), "u_in must oppose v_out");
    assert_eq!(gb.side(w_in), s.flip(), "w_in must oppose v_out");
    // Sides forced by the wiring: odd-index x's oppose v_out.
    let mut x = [0usize; 10];
    for (i, xi) in x.iter_mut().enumerate() {
        let side = if i % 2 == 0 { s.flip() } else { s };
        *xi = gb.add_vertex(side);
        gb.add_role(*xi, format!("{name}.x{}", i + 1));
    }
    let (x1, x2, x3, x4, x5) = (x[0], x[1], x[2], x[3], x[4]);
    let (x6, x7, x8, x9, x10) = (x[5], x[6], x[7], x[8], x[9]);
    let mut cities = [0usize; 4];
    for (ci, (p, q)) in [(x1, x2), (x3, x4), (x5, x6), (x7, x8)].iter().enumerate() {
        cities[ci] = attach_city(
            gb,
            reg,
            *p,
            *q,
            city_scale,
            format!("{name}.c{}", ci + 1),
        )?;
    }
    for (p, q) in [
        (v_out, x1),
        (v_out, x5),
        (x1, x8),
        (x5, x4),
        (x4, x9),
        (x8, x9),
        (x9, x10),
    ] {
        gb.add_edge(p, q).expect("branch gadget plain edge");
    }
    let chain_x2x3 = new_logical_edge(gb, reg, x2, x3)?;
    let chain_x6x7 = new_logical_edge(gb, reg, x6, x7)?;
    let chain_u = new_logical_edge(gb, reg, x10, u_in)?;
    let chain_w = new_logical_edge(gb, reg, x10, w_in)?;
    let xors = [
        insert_xor(gb, reg, chain_x2x3, chain_x6x7, city_scale, format!("{name}.X1"))?,
        insert_xor(gb, reg, chain_x2x3, chain_u, city_scale, format!("{name}.X2"))?,
        insert_xor(gb, reg, chain_x6x7, chain_w, city_scale, format!("{name}.X3"))?,
    ];
    let mut ladders = Vec::with_capacity(width);
    for i in 0..width {
        ladders.push(attach_ladder(
            gb,
            reg,
            x2,
            x3,
            x6,
            x7,
            format!("{name}.L{}", i + 1),
        )?);
    }
    reg.foralls.push(ForallHandle {
        name,
        width,
        v_out,
        u_in,
        w_in,
        x,
        cities,
        xors,
        ladders,
        chain_x2x3,
        chain_x6x7,
        chain_u,
        chain_w,
    });
    Ok(reg.foralls.len() - 1)
}

/// A free-standing tower graph (for inspection and counting tests):
/// `2h + 4` vertices and `3h + 3` edges.
pub fn tower_graph(h: usize) -> (crate::graph::BipartiteGraph, GadgetRegistry) {
    let mut gb = GraphBuilder::new();
    let mut reg = GadgetRegistry::new();
    let v = gb.add_vertex(Side::Left);
    let w = gb.add_vertex(Side::Right);
    attach_tower(&mut gb, &mut reg, v, w, h, "tower").unwrap();
    (gb.build(), reg)
}

/// A free-standing ladder graph: 14 vertices and 17 edges.
pub fn ladder_graph() -> (crate::graph::BipartiteGraph, GadgetRegistry) {
    let mut gb = GraphBuilder::new();
    let mut reg = GadgetRegistry::new();
    let a0 = gb.add_vertex(Side::Left);
    let b0 = gb.add_vertex(Side::Right);
    let a6 = gb.add_vertex(Side::Left);
    let b6 = gb.add_vertex(Side::Right);
    attach_ladder(&mut gb, &mut reg, a6, b6, a0, b0, "ladder").unwrap();
    (gb.build(), reg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::is_bipartite_certificate;

    #[test]
    fn tower_counts_match_formulas() {
        for h in 1..=6 {
            let (g, reg) = tower_graph(h);
            assert_eq!(g.vertex_count(), 2 * h + 4, "vertices at h={h}");
            assert_eq!(g.edge_count(), 3 * h + 3, "edges at h={h}");
            assert!(is_bipartite_certificate(&g).is_bipartite());
            assert_eq!(reg.towers.len(), 1);
        }
    }

    #[test]
    fn ladder_counts() {
        let (g, reg) = ladder_graph();
        assert_eq!(g.vertex_count(), 14);
        assert_eq!(g.edge_count(), 17);
        assert!(is_bipartite_certificate(&g).is_bipartite());
        assert_eq!(reg.ladders.len(), 1);
    }

    #[test]
    fn city_is_an_odd_path_of_towers() {
        let mut gb = GraphBuilder::new();
        let mut reg = GadgetRegistry::new();
        let x = gb.add_vertex(Side::Left);
        let y = gb.add_vertex(Side::Right);
        let scale = CityScale {
            width: 3,
            height: 2,
        };
        attach_city(&mut gb, &mut reg, x, y, scale, "city").unwrap();
        let g = gb.build();
        assert!(is_bipartite_certificate(&g).is_bipartite());
        assert_eq!(reg.cities.len(), 1);
        assert_eq!(reg.towers.len(), 3);
        // Towers share junction vertices: tower i's v is tower i-1's b0.
        let c = &reg.cities[0];
        for i in 1..3 {
            let prev = &reg.towers[c.towers[i - 1]];
            let cur = &reg.towers[c.towers[i]];
            assert_eq!(cur.v, prev.b[0]);
            assert_eq!(cur.a[0], prev.w);
        }
        assert_eq!(reg.towers[c.towers[0]].v, x);
        assert_eq!(reg.towers[c.towers[2]].w, y);
        // Vertex count: each tower spans 2h+4 vertices and consecutive
        // towers share two junction vertices.
        assert_eq!(g.vertex_count(), 3 * (2 * 2 + 4) - 2 * 2);
    }

    #[test]
    fn xor_insertion_keeps_bipartiteness_both_orientations() {
        // Host: an 8-cycle. Couple two edges whose heads lie on opposite
        // sides (plain) and two with heads on the same side (mirrored).
        for offset in [3, 4] {
            let mut gb = GraphBuilder::new();
            let mut reg = GadgetRegistry::new();
            let vs: Vec<usize> = (0..8)
                .map(|i| gb.add_vertex(if i % 2 == 0 { Side::Left } else { Side::Right }))
                .collect();
            for i in 0..8 {
                if i != 0 && i != offset {
                    gb.add_edge(vs[i], vs[(i + 1) % 8]).unwrap();
                }
            }
            let le0 = new_logical_edge(&mut gb, &mut reg, vs[0], vs[1]).unwrap();
            let le1 =
                new_logical_edge(&mut gb, &mut reg, vs[offset], vs[(offset + 1) % 8]).unwrap();
            insert_xor(&mut gb, &mut reg, le0, le1, CityScale::MINIMAL, "X").unwrap();
            let g = gb.build();
            assert!(is_bipartite_certificate(&g).is_bipartite());
            // Heads vs[0] and vs[offset] share a side exactly when offset
            // is even, which is when the pairing must mirror.
            assert_eq!(reg.xors[0].mirrored, offset == 4);
            assert_eq!(reg.cities.len(), 4);
        }
    }

    #[test]
    fn forall_census() {
        let mut gb = GraphBuilder::new();
        let mut reg = GadgetRegistry::new();
        let v_out = gb.add_vertex(Side::Right);
        let u_in = gb.add_vertex(Side::Left);
        let w_in = gb.add_vertex(Side::Left);
        attach_forall(
            &mut gb,
            &mut reg,
            v_out,
            u_in,
            w_in,
            2,
            CityScale::MINIMAL,
            "A",
        )
        .unwrap();
        let g = gb.build();
        assert!(is_bipartite_certificate(&g).is_bipartite());
        let census = reg.census();
        // 4 own cities + 3 XOR couplers with 4 cities each.
        assert_eq!(census.cities, 16);
        assert_eq!(census.xors, 3);
        assert_eq!(census.ladders, 2);
        assert_eq!(census.foralls, 1);
    }
}
