//! Immutable graph representations.
//!
//! Three graph types live here: [`BipartiteGraph`] (the ambient graph whose
//! perfect matchings span the polytope), [`DirectedGraph`] (inputs to the
//! Hamiltonian-cycle problems) and [`UndirectedGraph`] (outputs of the
//! folklore SAT reduction). All are validated at construction time and never
//! mutated afterwards; gadget insertion goes through [`GraphBuilder`] and
//! produces a fresh graph.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::GraphError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex {
    pub side: Side,
    /// Symbolic names of the form `"<gadget-instance>.<role>"`, e.g.
    /// `"city3.t2.a0"`. Each such tag resolves to exactly one vertex.
    pub roles: Vec<String>,
}

/// An immutable simple bipartite graph with dense vertex and edge indices.
#[derive(Debug, Clone)]
pub struct BipartiteGraph {
    vertices: Vec<Vertex>,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
    hash: u64,
}

impl BipartiteGraph {
    /// Validating constructor. Rejects same-side edges, duplicates,
    /// self-loops and dangling endpoints.
    pub fn build(
        vertices: Vec<(Side, Vec<String>)>,
        edges: Vec<(usize, usize)>,
    ) -> Result<Self, GraphError> {
        Self::build_inner(vertices, edges, true)
    }

    /// Like [`Self::build`] but skips the same-side check. Used by
    /// odd-count subdivision, which deliberately produces a graph whose
    /// declared sides no longer form a proper two-coloring.
    pub(crate) fn build_unchecked_sides(
        vertices: Vec<(Side, Vec<String>)>,
        edges: Vec<(usize, usize)>,
    ) -> Result<Self, GraphError> {
        Self::build_inner(vertices, edges, false)
    }

    fn build_inner(
        vertices: Vec<(Side, Vec<String>)>,
        edges: Vec<(usize, usize)>,
        check_sides: bool,
    ) -> Result<Self, GraphError> {
        let n = vertices.len();
        let mut seen = HashMap::new();
        for &(u, v) in &edges {
            if u >= n {
                return Err(GraphError::DanglingEndpoint(u));
            }
            if v >= n {
                return Err(GraphError::DanglingEndpoint(v));
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if check_sides && vertices[u].0 == vertices[v].0 {
                return Err(GraphError::NotBipartite(u, v));
            }
            let key = (u.min(v), u.max(v));
            if seen.insert(key, ()).is_some() {
                return Err(GraphError::DuplicateEdge(u, v));
            }
        }
        let mut adj = vec![Vec::new(); n];
        for (i, &(u, v)) in edges.iter().enumerate() {
            adj[u].push(i);
            adj[v].push(i);
        }
        let vertices: Vec<Vertex> = vertices
            .into_iter()
            .map(|(side, roles)| Vertex { side, roles })
            .collect();
        let hash = content_hash(&vertices, &edges);
        Ok(BipartiteGraph {
            vertices,
            edges,
            adj,
            hash,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex(&self, v: usize) -> &Vertex {
        &self.vertices[v]
    }

    pub fn side(&self, v: usize) -> Side {
        self.vertices[v].side
    }

    pub fn edge(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Sorted edge indices incident to `v`.
    pub fn adjacency(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn other_end(&self, e: usize, v: usize) -> usize {
        let (a, b) = self.edges[e];
        if a == v {
            b
        } else {
            debug_assert_eq!(b, v);
            a
        }
    }

    pub fn edge_between(&self, u: usize, v: usize) -> Option<usize> {
        self.adj[u]
            .iter()
            .copied()
            .find(|&e| self.other_end(e, u) == v)
    }

    /// Stable content hash used to tie matchings to the graph they belong to.
    pub fn hash(&self) -> u64 {
        self.hash
    }

    pub fn hash_hex(&self) -> String {
        format!("{:016x}", self.hash)
    }

    /// Resolves a `"<instance>.<role>"` tag to its unique vertex.
    pub fn resolve_role(&self, tag: &str) -> Option<usize> {
        let mut hit = None;
        for (i, v) in self.vertices.iter().enumerate() {
            if v.roles.iter().any(|r| r == tag) {
                if hit.is_some() {
                    return None;
                }
                hit = Some(i);
            }
        }
        hit
    }
}

fn content_hash(vertices: &[Vertex], edges: &[(usize, usize)]) -> u64 {
    let mut h = Sha256::new();
    h.update((vertices.len() as u64).to_le_bytes());
    for v in vertices {
        h.update([match v.side {
            Side::Left => 0u8,
            Side::Right => 1u8,
        }]);
    }
    h.update((edges.len() as u64).to_le_bytes());
    for &(u, v) in edges {
        h.update((u as u64).to_le_bytes());
        h.update((v as u64).to_le_bytes());
    }
    let digest = h.finalize();
    u64::from_le_bytes(digest[..8].try_into().unwrap())
}

/// Result of the structural two-coloring check. The check ignores the
/// declared sides and recomputes a coloring from scratch, so it also serves
/// as an independent certificate for constructed gadget graphs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BipartiteCertificate {
    /// A valid two-coloring, one side per vertex.
    Coloring(Vec<Side>),
    /// An odd closed walk (as a vertex sequence) witnessing failure.
    OddClosedWalk(Vec<usize>),
}

impl BipartiteCertificate {
    pub fn is_bipartite(&self) -> bool {
        matches!(self, BipartiteCertificate::Coloring(_))
    }
}

/// BFS two-coloring with an odd-cycle witness on failure.
pub fn is_bipartite_certificate(g: &BipartiteGraph) -> BipartiteCertificate {
    let n = g.vertex_count();
    let mut color: Vec<Option<Side>> = vec![None; n];
    let mut parent: Vec<usize> = vec![usize::MAX; n];
    for start in 0..n {
        if color[start].is_some() {
            continue;
        }
        color[start] = Some(Side::Left);
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            let cu = color[u].unwrap();
            for &e in g.adjacency(u) {
                let v = g.other_end(e, u);
                match color[v] {
                    None => {
                        color[v] = Some(cu.flip());
                        parent[v] = u;
                        queue.push_back(v);
                    }
                    Some(cv) if cv == cu => {
                        return BipartiteCertificate::OddClosedWalk(odd_walk(&parent, u, v));
                    }
                    Some(_) => {}
                }
            }
        }
    }
    BipartiteCertificate::Coloring(color.into_iter().map(Option::unwrap).collect())
}

/// Builds the closed walk u -> ... -> root -> ... -> v -> u from BFS parents.
fn odd_walk(parent: &[usize], u: usize, v: usize) -> Vec<usize> {
    let path_to_root = |mut x: usize| {
        let mut p = vec![x];
        while parent[x] != usize::MAX {
            x = parent[x];
            p.push(x);
        }
        p
    };
    let pu = path_to_root(u);
    let pv = path_to_root(v);
    // Trim the common suffix down to the lowest common ancestor.
    let mut i = pu.len();
    let mut j = pv.len();
    while i > 1 && j > 1 && pu[i - 2] == pv[j - 2] {
        i -= 1;
        j -= 1;
    }
    let mut walk: Vec<usize> = pu[..i].to_vec();
    walk.extend(pv[..j].iter().rev());
    walk
}

/// Outcome of subdividing an edge: the new graph, the freshly created path
/// vertices in order from the first endpoint, and the index map for edges
/// that survived. `side_flip` reports that an odd subdivision count made a
/// proper side assignment impossible.
#[derive(Debug, Clone)]
pub struct Subdivision {
    pub graph: BipartiteGraph,
    pub new_vertices: Vec<usize>,
    /// `edge_map[old] = Some(new)` for surviving edges, `None` for the
    /// replaced edge.
    pub edge_map: Vec<Option<usize>>,
    pub side_flip: bool,
}

/// Replaces edge `e` by a path through `count` fresh vertices.
pub fn subdivide_edge(
    g: &BipartiteGraph,
    e: usize,
    count: usize,
) -> Result<Subdivision, GraphError> {
    if e >= g.edge_count() {
        return Err(GraphError::EdgeNotFound(e));
    }
    assert!(count >= 1, "subdivision count must be at least 1");
    let (u, v) = g.edge(e);
    let mut vertices: Vec<(Side, Vec<String>)> = g
        .vertices
        .iter()
        .map(|vx| (vx.side, vx.roles.clone()))
        .collect();
    let mut edges = Vec::with_capacity(g.edge_count() - 1 + count + 1);
    let mut edge_map = vec![None; g.edge_count()];
    for (i, &pair) in g.edges().iter().enumerate() {
        if i != e {
            edge_map[i] = Some(edges.len());
            edges.push(pair);
        }
    }
    let mut side = g.side(u);
    let mut prev = u;
    let mut new_vertices = Vec::with_capacity(count);
    for _ in 0..count {
        side = side.flip();
        let idx = vertices.len();
        vertices.push((side, Vec::new()));
        edges.push((prev, idx));
        new_vertices.push(idx);
        prev = idx;
    }
    edges.push((prev, v));
    let side_flip = count % 2 == 1;
    let graph = if side_flip {
        BipartiteGraph::build_unchecked_sides(vertices, edges)?
    } else {
        BipartiteGraph::build(vertices, edges)?
    };
    Ok(Subdivision {
        graph,
        new_vertices,
        edge_map,
        side_flip,
    })
}

/// Append-only construction surface for gadget insertion. Vertex indices are
/// stable; edges are identified by their endpoint pair (the graph stays
/// simple throughout) and receive dense indices at build time.
#[derive(Debug, Clone, Default)]
pub struct GraphBuilder {
    vertices: Vec<(Side, Vec<String>)>,
    edges: Vec<(usize, usize)>,
    edge_set: HashMap<(usize, usize), ()>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, side: Side) -> usize {
        self.vertices.push((side, Vec::new()));
        self.vertices.len() - 1
    }

    pub fn add_role(&mut self, v: usize, role: impl Into<String>) {
        self.vertices[v].1.push(role.into());
    }

    pub fn side(&self, v: usize) -> Side {
        self.vertices[v].0
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        let n = self.vertices.len();
        if u >= n {
            return Err(GraphError::DanglingEndpoint(u));
        }
        if v >= n {
            return Err(GraphError::DanglingEndpoint(v));
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        if self.vertices[u].0 == self.vertices[v].0 {
            return Err(GraphError::NotBipartite(u, v));
        }
        let key = (u.min(v), u.max(v));
        if self.edge_set.insert(key, ()).is_some() {
            return Err(GraphError::DuplicateEdge(u, v));
        }
        self.edges.push((u, v));
        Ok(())
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edge_set.contains_key(&(u.min(v), u.max(v)))
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) -> bool {
        let key = (u.min(v), u.max(v));
        if self.edge_set.remove(&key).is_none() {
            return false;
        }
        let pos = self
            .edges
            .iter()
            .position(|&(a, b)| (a.min(b), a.max(b)) == key)
            .expect("edge set and edge list out of sync");
        self.edges.remove(pos);
        true
    }

    /// Replaces the edge `u`-`v` by a path through `count` fresh vertices,
    /// returned in order from `u`. `count` must be even so that the sides
    /// stay consistent.
    pub fn subdivide(&mut self, u: usize, v: usize, count: usize) -> Vec<usize> {
        assert!(count.is_multiple_of(2), "builder subdivision requires an even count");
        assert!(self.remove_edge(u, v), "subdivide: edge not present");
        let mut prev = u;
        let mut fresh = Vec::with_capacity(count);
        for _ in 0..count {
            let side = self.vertices[prev].0.flip();
            let idx = self.add_vertex(side);
            self.add_edge(prev, idx).unwrap();
            fresh.push(idx);
            prev = idx;
        }
        self.add_edge(prev, v).unwrap();
        fresh
    }

    pub fn build(self) -> BipartiteGraph {
        BipartiteGraph::build(self.vertices, self.edges)
            .expect("builder invariants guarantee a valid graph")
    }
}

/// A simple directed graph with dense arc indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedGraph {
    n: usize,
    arcs: Vec<(usize, usize)>,
    out_adj: Vec<Vec<usize>>,
    in_adj: Vec<Vec<usize>>,
}

impl DirectedGraph {
    pub fn build(n: usize, arcs: Vec<(usize, usize)>) -> Result<Self, GraphError> {
        let mut seen = HashMap::new();
        for &(u, v) in &arcs {
            if u >= n {
                return Err(GraphError::DanglingEndpoint(u));
            }
            if v >= n {
                return Err(GraphError::DanglingEndpoint(v));
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if seen.insert((u, v), ()).is_some() {
                return Err(GraphError::DuplicateEdge(u, v));
            }
        }
        let mut out_adj = vec![Vec::new(); n];
        let mut in_adj = vec![Vec::new(); n];
        for (i, &(u, v)) in arcs.iter().enumerate() {
            out_adj[u].push(i);
            in_adj[v].push(i);
        }
        Ok(DirectedGraph {
            n,
            arcs,
            out_adj,
            in_adj,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn arc(&self, a: usize) -> (usize, usize) {
        self.arcs[a]
    }

    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    pub fn out_arcs(&self, v: usize) -> &[usize] {
        &self.out_adj[v]
    }

    pub fn in_arcs(&self, v: usize) -> &[usize] {
        &self.in_adj[v]
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out_adj[v].len()
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.in_adj[v].len()
    }

    pub fn arc_between(&self, u: usize, v: usize) -> Option<usize> {
        self.out_adj[u].iter().copied().find(|&a| self.arcs[a].1 == v)
    }
}

/// A simple undirected graph, not necessarily bipartite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UndirectedGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl UndirectedGraph {
    pub fn build(n: usize, edges: Vec<(usize, usize)>) -> Result<Self, GraphError> {
        let mut seen = HashMap::new();
        for &(u, v) in &edges {
            if u >= n {
                return Err(GraphError::DanglingEndpoint(u));
            }
            if v >= n {
                return Err(GraphError::DanglingEndpoint(v));
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if seen.insert((u.min(v), u.max(v)), ()).is_some() {
                return Err(GraphError::DuplicateEdge(u, v));
            }
        }
        let mut adj = vec![Vec::new(); n];
        for (i, &(u, v)) in edges.iter().enumerate() {
            adj[u].push(i);
            adj[v].push(i);
        }
        Ok(UndirectedGraph { n, edges, adj })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn adjacency(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn other_end(&self, e: usize, v: usize) -> usize {
        let (a, b) = self.edges[e];
        if a == v {
            b
        } else {
            a
        }
    }

    pub fn edge_between(&self, u: usize, v: usize) -> Option<usize> {
        self.adj[u]
            .iter()
            .copied()
            .find(|&e| self.other_end(e, u) == v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub fn cycle_graph(len: usize) -> BipartiteGraph {
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

    #[test]
    fn c4_builds() {
        let g = cycle_graph(4);
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.edge_count(), 4);
        assert!(is_bipartite_certificate(&g).is_bipartite());
    }

    #[test]
    fn k33_builds() {
        let mut vertices = vec![(Side::Left, Vec::new()); 3];
        vertices.extend(vec![(Side::Right, Vec::new()); 3]);
        let mut edges = Vec::new();
        for u in 0..3 {
            for v in 3..6 {
                edges.push((u, v));
            }
        }
        let g = BipartiteGraph::build(vertices, edges).unwrap();
        assert_eq!(g.vertex_count(), 6);
        assert_eq!(g.edge_count(), 9);
    }

    #[test]
    fn triangle_is_rejected() {
        let vertices = vec![
            (Side::Left, Vec::new()),
            (Side::Right, Vec::new()),
            (Side::Left, Vec::new()),
        ];
        let err = BipartiteGraph::build(vertices, vec![(0, 1), (1, 2), (2, 0)]).unwrap_err();
        assert_eq!(err, GraphError::NotBipartite(2, 0));
    }

    #[test]
    fn duplicate_and_dangling_rejected() {
        let vertices = vec![(Side::Left, Vec::new()), (Side::Right, Vec::new())];
        assert_eq!(
            BipartiteGraph::build(vertices.clone(), vec![(0, 1), (1, 0)]).unwrap_err(),
            GraphError::DuplicateEdge(1, 0)
        );
        assert_eq!(
            BipartiteGraph::build(vertices, vec![(0, 7)]).unwrap_err(),
            GraphError::DanglingEndpoint(7)
        );
    }

    #[test]
    fn subdivide_even_preserves_bipartiteness() {
        let g = cycle_graph(4);
        let out = subdivide_edge(&g, 0, 4).unwrap();
        assert_eq!(out.graph.vertex_count(), 8);
        assert_eq!(out.graph.edge_count(), 8);
        assert!(!out.side_flip);
        assert!(is_bipartite_certificate(&out.graph).is_bipartite());
        // The surviving coloring matches the original one.
        if let BipartiteCertificate::Coloring(c) = is_bipartite_certificate(&out.graph) {
            let flipped = c[0] != g.side(0);
            for (v, &cv) in c.iter().enumerate().take(4) {
                assert_eq!(cv != g.side(v), flipped);
            }
        }
    }

    #[test]
    fn subdivide_odd_creates_odd_cycle() {
        let g = cycle_graph(4);
        let out = subdivide_edge(&g, 0, 1).unwrap();
        assert!(out.side_flip);
        assert_eq!(out.graph.vertex_count(), 5);
        match is_bipartite_certificate(&out.graph) {
            BipartiteCertificate::OddClosedWalk(w) => assert!(w.len() >= 3),
            _ => panic!("expected odd-cycle witness"),
        }
    }

    #[test]
    fn subdivide_single_edge_gives_path() {
        let g = BipartiteGraph::build(
            vec![(Side::Left, Vec::new()), (Side::Right, Vec::new())],
            vec![(0, 1)],
        )
        .unwrap();
        let out = subdivide_edge(&g, 0, 4).unwrap();
        assert_eq!(out.graph.vertex_count(), 6);
        assert_eq!(out.graph.edge_count(), 5);
        assert_eq!(out.new_vertices.len(), 4);
    }

    #[test]
    fn degree_sum_is_twice_edge_count() {
        for g in [cycle_graph(4), cycle_graph(6), cycle_graph(8)] {
            let total: usize = (0..g.vertex_count()).map(|v| g.degree(v)).sum();
            assert_eq!(total, 2 * g.edge_count());
        }
    }
}
