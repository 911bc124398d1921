//! Independent brute-force ground truth: exact Hamiltonian-cycle search
//! (directed and undirected, with required/forbidden arc sets), the full
//! for-all-exists decision by pattern enumeration, CNF satisfiability by
//! assignment enumeration, and ε-good walk checking.
//!
//! Everything here is deliberately exhaustive and allocation-light; these
//! routines certify the constructions, so none of them share code with the
//! procedures they check.

use std::collections::HashSet;

use num_rational::Ratio;
use serde::Serialize;

use crate::error::OracleError;
use crate::graph::{DirectedGraph, UndirectedGraph};
use crate::reduction::cnf::CnfFormula;

/// Input selector for [`ham_cycle`].
#[derive(Debug, Clone, Copy)]
pub enum HamGraph<'a> {
    Directed(&'a DirectedGraph),
    Undirected(&'a UndirectedGraph),
}

/// Exact backtracking Hamiltonian-cycle search. Returns the cycle as a
/// vertex sequence starting at vertex 0 (closing back to 0), or `None`.
/// `forbidden` arcs never appear in the cycle; every `required` arc does.
/// In the undirected case pairs are unordered. Branching follows the
/// lowest-index candidate first, so results are deterministic.
pub fn ham_cycle(
    g: HamGraph<'_>,
    forbidden: &[(usize, usize)],
    required: &[(usize, usize)],
) -> Option<Vec<usize>> {
    match g {
        HamGraph::Directed(d) => ham_cycle_directed(d, forbidden, required),
        HamGraph::Undirected(u) => ham_cycle_undirected(u, forbidden, required),
    }
}

pub fn ham_cycle_directed(
    g: &DirectedGraph,
    forbidden: &[(usize, usize)],
    required: &[(usize, usize)],
) -> Option<Vec<usize>> {
    let n = g.vertex_count();
    if n == 0 {
        return None;
    }
    let forbidden: HashSet<(usize, usize)> = forbidden.iter().copied().collect();
    // A required arc fixes the successor of its tail and the predecessor of
    // its head; conflicts mean no cycle exists.
    let mut req_out: Vec<Option<usize>> = vec![None; n];
    let mut req_in: Vec<Option<usize>> = vec![None; n];
    for &(u, v) in required {
        if g.arc_between(u, v).is_none() || forbidden.contains(&(u, v)) {
            return None;
        }
        if req_out[u].is_some_and(|x| x != v) || req_in[v].is_some_and(|x| x != u) {
            return None;
        }
        req_out[u] = Some(v);
        req_in[v] = Some(u);
    }
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (u, slot) in succ.iter_mut().enumerate() {
        let mut heads: Vec<usize> = g.out_arcs(u).iter().map(|&a| g.arc(a).1).collect();
        heads.sort_unstable();
        *slot = heads;
    }
    let mut path = vec![0usize];
    let mut visited = vec![false; n];
    visited[0] = true;
    fn dfs(
        n: usize,
        succ: &[Vec<usize>],
        forbidden: &HashSet<(usize, usize)>,
        req_out: &[Option<usize>],
        req_in: &[Option<usize>],
        path: &mut Vec<usize>,
        visited: &mut [bool],
    ) -> bool {
        let u = *path.last().unwrap();
        if path.len() == n {
            return succ[u].contains(&0)
                && !forbidden.contains(&(u, 0))
                && req_out[u].is_none_or(|x| x == 0)
                && req_in[0].is_none_or(|x| x == u);
        }
        for &v in &succ[u] {
            if visited[v]
                || forbidden.contains(&(u, v))
                || req_out[u].is_some_and(|x| x != v)
                || req_in[v].is_some_and(|x| x != u)
            {
                continue;
            }
            visited[v] = true;
            path.push(v);
            if dfs(n, succ, forbidden, req_out, req_in, path, visited) {
                return true;
            }
            path.pop();
            visited[v] = false;
        }
        false
    }
    dfs(
        n,
        &succ,
        &forbidden,
        &req_out,
        &req_in,
        &mut path,
        &mut visited,
    )
    .then_some(path)
}

pub fn ham_cycle_undirected(
    g: &UndirectedGraph,
    forbidden: &[(usize, usize)],
    required: &[(usize, usize)],
) -> Option<Vec<usize>> {
    let n = g.vertex_count();
    if n < 3 {
        return None;
    }
    let norm = |(u, v): (usize, usize)| (u.min(v), u.max(v));
    let forbidden: HashSet<(usize, usize)> = forbidden.iter().copied().map(norm).collect();
    let mut req_adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(u, v) in required {
        if g.edge_between(u, v).is_none() || forbidden.contains(&norm((u, v))) {
            return None;
        }
        if !req_adj[u].contains(&v) {
            req_adj[u].push(v);
            req_adj[v].push(u);
        }
    }
    if req_adj.iter().any(|r| r.len() > 2) {
        return None;
    }
    let mut nbrs: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (u, slot) in nbrs.iter_mut().enumerate() {
        let mut ns: Vec<usize> = g
            .adjacency(u)
            .iter()
            .map(|&e| g.other_end(e, u))
            .filter(|&v| !forbidden.contains(&norm((u, v))))
            .collect();
        ns.sort_unstable();
        *slot = ns;
    }
    // Forced-edge propagation to a fixpoint: a vertex with exactly two
    // usable edges must use both, and a vertex with two forced edges uses
    // nothing else, which prunes the adjacency and may force more edges.
    // Required edges are forced from the start. This determines the whole
    // interior of subdivision-style gadgets before any search happens.
    let mut forced: Vec<Vec<usize>> = req_adj;
    let mut changed = true;
    while changed {
        changed = false;
        for u in 0..n {
            if nbrs[u].len() < 2 || forced[u].len() > 2 {
                return None;
            }
            if nbrs[u].len() == 2 && forced[u].len() < 2 {
                let pair = [nbrs[u][0], nbrs[u][1]];
                for v in pair {
                    if !forced[u].contains(&v) {
                        forced[u].push(v);
                        forced[v].push(u);
                        changed = true;
                    }
                }
            }
            if forced[u].len() == 2 && nbrs[u].len() > 2 {
                let keep = forced[u].clone();
                let dropped: Vec<usize> = nbrs[u]
                    .iter()
                    .copied()
                    .filter(|v| !keep.contains(v))
                    .collect();
                nbrs[u].retain(|v| keep.contains(v));
                for v in dropped {
                    nbrs[v].retain(|&w| w != u);
                }
                changed = true;
            }
        }
    }
    // Forced edges that close a cycle either solve the problem outright
    // (when the cycle spans every vertex) or rule it out.
    let forced_walk = |start: usize| -> (Vec<usize>, bool) {
        let mut walk = vec![start];
        let mut prev = start;
        let mut cur = forced[start][0];
        loop {
            if cur == start {
                return (walk, true);
            }
            walk.push(cur);
            if forced[cur].len() != 2 {
                return (walk, false);
            }
            let next = if forced[cur][0] == prev {
                forced[cur][1]
            } else {
                forced[cur][0]
            };
            prev = cur;
            cur = next;
        }
    };
    let mut seen = vec![false; n];
    for s in 0..n {
        if seen[s] || forced[s].len() != 2 {
            continue;
        }
        let (walk, closed) = forced_walk(s);
        for &v in &walk {
            seen[v] = true;
        }
        if closed {
            if walk.len() != n {
                return None;
            }
            let start = walk.iter().position(|&v| v == 0).expect("spans all");
            let mut cycle: Vec<usize> = walk[start..].to_vec();
            cycle.extend_from_slice(&walk[..start]);
            return Some(cycle);
        }
    }
    let req_adj = forced;
    struct Search<'a> {
        n: usize,
        nbrs: &'a [Vec<usize>],
        req_adj: &'a [Vec<usize>],
        path: Vec<usize>,
        visited: Vec<bool>,
        avail: Vec<usize>,
        reach: Vec<u32>,
        stamp: u32,
    }
    impl Search<'_> {
        /// The rest of the cycle is a path from `head` through every
        /// unvisited vertex to 0, so all of them must be connected in the
        /// graph induced on the unvisited vertices plus those two
        /// endpoints, without travelling through either endpoint.
        fn disconnected(&mut self, head: usize) -> bool {
            self.stamp += 1;
            self.reach[head] = self.stamp;
            let mut stack = vec![head];
            let mut reached_zero = head == 0;
            let mut reached_unvisited = 0usize;
            while let Some(x) = stack.pop() {
                for &v in &self.nbrs[x] {
                    if self.reach[v] == self.stamp {
                        continue;
                    }
                    if v == 0 && x != head {
                        self.reach[v] = self.stamp;
                        reached_zero = true;
                    } else if !self.visited[v] {
                        self.reach[v] = self.stamp;
                        reached_unvisited += 1;
                        stack.push(v);
                    }
                }
            }
            !reached_zero || reached_unvisited != self.n - self.path.len()
        }

        fn forced_edges_fit(&self, head: usize, mut edges: Vec<(usize, usize)>) -> bool {
            edges.sort_unstable();
            edges.dedup();
            let mut deg = vec![0u8; self.n];
            let mut parent: Vec<usize> = (0..self.n).collect();
            fn find(parent: &mut [usize], mut x: usize) -> usize {
                while parent[x] != x {
                    parent[x] = parent[parent[x]];
                    x = parent[x];
                }
                x
            }
            for (a, b) in edges {
                deg[a] += 1;
                deg[b] += 1;
                let cap_a = if a == head || a == 0 { 1 } else { 2 };
                let cap_b = if b == head || b == 0 { 1 } else { 2 };
                if deg[a] > cap_a || deg[b] > cap_b {
                    return false;
                }
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if ra == rb {
                    return false;
                }
                parent[ra] = rb;
            }
            true
        }

        fn dfs(&mut self) -> bool {
            let u = *self.path.last().unwrap();
            if self.path.len() == self.n {
                let closes = self.nbrs[u].contains(&0);
                let u_req_ok = self.req_adj[u]
                    .iter()
                    .all(|&y| y == self.path[self.n - 2] || y == 0);
                let start_req_ok = self.req_adj[0].iter().all(|&y| y == self.path[1] || y == u);
                return closes && u_req_ok && start_req_ok;
            }
            if self.disconnected(u) {
                return false;
            }
            // Every unvisited vertex still needs two usable cycle edges, to
            // unvisited vertices, the current path head, or vertex 0. If it
            // has exactly two and one is the head, the head's next edge is
            // forced there; two distinct such forces are a dead end.
            let mut forced: Option<usize> = None;
            let mut forced_edges: Vec<(usize, usize)> = Vec::new();
            for y in 0..self.n {
                if self.visited[y] {
                    continue;
                }
                let mut avail = 0;
                let mut head_usable = false;
                for &z in &self.nbrs[y] {
                    if !self.visited[z] || z == u || z == 0 {
                        avail += 1;
                        head_usable |= z == u;
                        if avail <= 2 {
                            forced_edges.push((y.min(z), y.max(z)));
                        }
                    }
                }
                if avail < 2 {
                    return false;
                }
                if avail > 2 {
                    forced_edges.truncate(forced_edges.len() - 2);
                }
                // At the start vertex an edge to the head may instead be
                // the closing edge, so forcing applies only later.
                if avail == 2 && head_usable && u != 0 {
                    if forced.is_some_and(|f| f != y) {
                        return false;
                    }
                    forced = Some(y);
                }
                self.avail[y] = avail;
            }
            // The rest of the cycle is a simple path from the head to
            // vertex 0, so the forced edges must fit on one: at most one at
            // either endpoint, at most two elsewhere, and no cycle.
            if u != 0 && !self.forced_edges_fit(u, forced_edges) {
                return false;
            }
            let candidates: Vec<usize> = match forced {
                Some(f) => vec![f],
                None => {
                    // Fail-first: extend toward the most constrained vertex,
                    // so forced chains are followed without branching.
                    let mut c: Vec<usize> = self.nbrs[u]
                        .iter()
                        .copied()
                        .filter(|&v| !self.visited[v])
                        .collect();
                    c.sort_by_key(|&v| self.avail[v]);
                    c
                }
            };
            let prev = if self.path.len() >= 2 {
                Some(self.path[self.path.len() - 2])
            } else {
                None
            };
            for v in candidates {
                // Once both cycle edges at u are fixed they must cover u's
                // required partners. At the start vertex the second edge is
                // the closing edge, checked at the end.
                if let Some(p) = prev {
                    if !self.req_adj[u].iter().all(|&y| y == p || y == v) {
                        continue;
                    }
                }
                self.visited[v] = true;
                self.path.push(v);
                if self.dfs() {
                    return true;
                }
                self.path.pop();
                self.visited[v] = false;
            }
            false
        }
    }
    let mut s = Search {
        n,
        nbrs: &nbrs,
        req_adj: &req_adj,
        path: vec![0],
        visited: vec![false; n],
        avail: vec![0; n],
        reach: vec![0; n],
        stamp: 0,
    };
    s.visited[0] = true;
    s.dfs().then_some(s.path)
}

/// One row of the for-all-exists witness table.
#[derive(Debug, Clone, Serialize)]
pub struct PatternRow {
    /// The chosen arc of each pair, in pair order.
    pub pattern: Vec<(usize, usize)>,
    /// A Hamiltonian cycle whose intersection with the pair arcs is
    /// exactly the pattern, or `None` as a refutation.
    pub cycle: Option<Vec<usize>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ForallExistsReport {
    pub holds: bool,
    pub rows: Vec<PatternRow>,
}

/// Decides whether every pattern (one arc per pair) is respected by some
/// Hamiltonian cycle, by enumerating all `2^k` patterns against the exact
/// solver. A cycle respects a pattern when its intersection with the pair
/// arcs is exactly the pattern, so the unchosen arcs are forbidden.
pub fn forall_exists_decision(
    g: &DirectedGraph,
    pairs: &[[(usize, usize); 2]],
) -> Result<ForallExistsReport, OracleError> {
    let k = pairs.len();
    if k > 20 {
        return Err(OracleError::TooManyPairs(k));
    }
    let mut rows = Vec::with_capacity(1 << k);
    for mask in 0u32..(1 << k) {
        let mut required = Vec::with_capacity(k);
        let mut forbidden = Vec::with_capacity(k);
        for (i, pair) in pairs.iter().enumerate() {
            let pick = usize::from((mask >> i) & 1 == 1);
            required.push(pair[pick]);
            forbidden.push(pair[1 - pick]);
        }
        let cycle = ham_cycle_directed(g, &forbidden, &required);
        if let Some(c) = &cycle {
            debug_assert!(respects(c, &required, &forbidden));
        }
        rows.push(PatternRow {
            pattern: required,
            cycle,
        });
    }
    Ok(ForallExistsReport {
        holds: rows.iter().all(|r| r.cycle.is_some()),
        rows,
    })
}

fn respects(cycle: &[usize], required: &[(usize, usize)], forbidden: &[(usize, usize)]) -> bool {
    let arcs: HashSet<(usize, usize)> = (0..cycle.len())
        .map(|i| (cycle[i], cycle[(i + 1) % cycle.len()]))
        .collect();
    required.iter().all(|a| arcs.contains(a)) && !forbidden.iter().any(|a| arcs.contains(a))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CnfReport {
    pub satisfiable: bool,
    /// Maximum number of simultaneously satisfied clauses.
    pub max_satisfied: usize,
    /// Lexicographically first assignment attaining the maximum; bit `i-1`
    /// is the value of variable `x_i`.
    pub best_assignment: u32,
}

/// Exact Max-SAT by enumerating all assignments.
pub fn cnf_brute_force(f: &CnfFormula) -> Result<CnfReport, OracleError> {
    if f.num_vars > 24 {
        return Err(OracleError::TooManyVariables(f.num_vars));
    }
    let mut best = (0usize, 0u32);
    for mask in 0u32..(1 << f.num_vars) {
        let sat = f.satisfied_count(mask);
        if sat > best.0 {
            best = (sat, mask);
        }
    }
    Ok(CnfReport {
        satisfiable: best.0 == f.clauses.len(),
        max_satisfied: best.0,
        best_assignment: best.1,
    })
}

/// A validated closed walk in an undirected graph, with visit counts.
#[derive(Debug, Clone, Serialize)]
pub struct WalkRecord {
    pub walk: Vec<usize>,
    /// Vertex count of the host graph.
    pub n: usize,
    /// `counts[v]` = number of times the walk visits `v`.
    pub counts: Vec<usize>,
}

/// Validates that `walk` is a closed walk of `g` (cyclically consecutive
/// vertices joined by edges) and records its visit counts.
pub fn walk_record(g: &UndirectedGraph, walk: &[usize]) -> Result<WalkRecord, OracleError> {
    if walk.is_empty() {
        return Err(OracleError::InvalidWalk("walk is empty".into()));
    }
    let n = g.vertex_count();
    let mut counts = vec![0usize; n];
    for (i, &v) in walk.iter().enumerate() {
        if v >= n {
            return Err(OracleError::InvalidWalk(format!("vertex {v} out of range")));
        }
        counts[v] += 1;
        let next = walk[(i + 1) % walk.len()];
        if g.edge_between(v, next).is_none() {
            return Err(OracleError::InvalidWalk(format!(
                "consecutive vertices {v}, {next} are not adjacent"
            )));
        }
    }
    Ok(WalkRecord {
        walk: walk.to_vec(),
        n,
        counts,
    })
}

impl WalkRecord {
    /// The set `W_i` of vertices visited exactly `i` times.
    pub fn w_set(&self, i: usize) -> Vec<usize> {
        (0..self.n).filter(|&v| self.counts[v] == i).collect()
    }

    pub fn w1_size(&self) -> usize {
        self.counts.iter().filter(|&&c| c == 1).count()
    }
}

/// Exact test of `|W₁| >= (1 - ε)·n`; returns the verdict and `|W₁|`.
pub fn eps_good_check(w: &WalkRecord, eps: Ratio<u64>) -> (bool, usize) {
    let w1 = w.w1_size();
    let good = Ratio::from_integer(w1 as u64)
        >= (Ratio::from_integer(1) - eps) * Ratio::from_integer(w.n as u64);
    (good, w1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn digraph(n: usize, arcs: &[(usize, usize)]) -> DirectedGraph {
        DirectedGraph::build(n, arcs.to_vec()).unwrap()
    }

    fn ugraph(n: usize, edges: &[(usize, usize)]) -> UndirectedGraph {
        UndirectedGraph::build(n, edges.to_vec()).unwrap()
    }

    #[test]
    fn directed_triangle() {
        let g = digraph(3, &[(0, 1), (1, 2), (2, 0)]);
        assert_eq!(ham_cycle_directed(&g, &[], &[]), Some(vec![0, 1, 2]));
        assert_eq!(ham_cycle_directed(&g, &[(1, 2)], &[]), None);
        assert_eq!(ham_cycle_directed(&g, &[], &[(1, 2)]), Some(vec![0, 1, 2]));
        assert_eq!(ham_cycle_directed(&g, &[], &[(2, 1)]), None);
    }

    #[test]
    fn directed_required_arcs_steer_the_search() {
        // Two Hamiltonian cycles exist; the required arc selects one.
        let g = digraph(
            4,
            &[(0, 1), (0, 2), (1, 2), (2, 1), (1, 3), (2, 3), (3, 0)],
        );
        assert_eq!(
            ham_cycle_directed(&g, &[], &[(0, 1)]),
            Some(vec![0, 1, 2, 3])
        );
        assert_eq!(
            ham_cycle_directed(&g, &[], &[(0, 2)]),
            Some(vec![0, 2, 1, 3])
        );
    }

    #[test]
    fn undirected_search_with_constraints() {
        let c5 = ugraph(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]);
        assert_eq!(ham_cycle_undirected(&c5, &[], &[]), Some(vec![0, 1, 2, 3, 4]));
        assert_eq!(ham_cycle_undirected(&c5, &[(2, 3)], &[]), None);
        let k4 = ugraph(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        assert_eq!(ham_cycle_undirected(&k4, &[], &[]), Some(vec![0, 1, 2, 3]));
        // Forbidding an edge forces the other route through it.
        assert_eq!(
            ham_cycle_undirected(&k4, &[(0, 1)], &[]),
            Some(vec![0, 2, 1, 3])
        );
        // Requiring both diagonals at vertex 0 leaves no room for a cycle
        // through edge (1, 2).
        assert_eq!(
            ham_cycle_undirected(&k4, &[], &[(0, 2), (0, 3), (1, 2), (1, 3)]),
            Some(vec![0, 2, 1, 3])
        );
        assert_eq!(
            ham_cycle_undirected(&k4, &[], &[(0, 2), (0, 3), (1, 2), (2, 3)]),
            None
        );
    }

    #[test]
    fn results_invariant_under_relabeling() {
        let g = ugraph(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (1, 3)]);
        // Relabel via v -> (v + 2) % 5.
        let relabeled = ugraph(
            5,
            &[(2, 3), (3, 4), (4, 0), (0, 1), (1, 2), (3, 0)],
        );
        assert_eq!(
            ham_cycle_undirected(&g, &[], &[]).is_some(),
            ham_cycle_undirected(&relabeled, &[], &[]).is_some()
        );
    }

    #[test]
    fn forall_exists_examples() {
        // Both arcs out of vertex 0 extend to Hamiltonian cycles.
        let g = digraph(
            4,
            &[(0, 1), (0, 2), (1, 2), (2, 1), (1, 3), (2, 3), (3, 0)],
        );
        let pairs = [[(0, 1), (0, 2)]];
        let report = forall_exists_decision(&g, &pairs).unwrap();
        assert!(report.holds);
        assert_eq!(report.rows.len(), 2);
        // Removing (2, 1) strands the pattern that picks (0, 2).
        let g2 = digraph(4, &[(0, 1), (0, 2), (1, 2), (1, 3), (2, 3), (3, 0)]);
        let report2 = forall_exists_decision(&g2, &pairs).unwrap();
        assert!(!report2.holds);
        let failing: Vec<_> = report2
            .rows
            .iter()
            .filter(|r| r.cycle.is_none())
            .map(|r| r.pattern.clone())
            .collect();
        assert_eq!(failing, vec![vec![(0, 2)]]);
        // k = 0 reduces to plain Hamiltonicity.
        let report3 = forall_exists_decision(&g2, &[]).unwrap();
        assert!(report3.holds);
        assert_eq!(report3.rows.len(), 1);
    }

    #[test]
    fn too_many_pairs_is_an_error() {
        let g = digraph(3, &[(0, 1), (1, 2), (2, 0)]);
        let pairs = vec![[(0, 1), (1, 2)]; 21];
        assert!(matches!(
            forall_exists_decision(&g, &pairs),
            Err(OracleError::TooManyPairs(21))
        ));
    }

    #[test]
    fn cnf_brute_force_examples() {
        let sat = CnfFormula::new(1, vec![vec![1]]).unwrap();
        let r = cnf_brute_force(&sat).unwrap();
        assert!(r.satisfiable);
        assert_eq!(r.max_satisfied, 1);
        let unsat = CnfFormula::new(1, vec![vec![1], vec![-1]]).unwrap();
        let r = cnf_brute_force(&unsat).unwrap();
        assert!(!r.satisfiable);
        assert_eq!(r.max_satisfied, 1);
        let wide = CnfFormula::new(25, vec![vec![1]]).unwrap();
        assert!(matches!(
            cnf_brute_force(&wide),
            Err(OracleError::TooManyVariables(25))
        ));
    }

    #[test]
    fn walk_records_and_eps_goodness() {
        let c5 = ugraph(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]);
        let ham = walk_record(&c5, &[0, 1, 2, 3, 4]).unwrap();
        assert_eq!(eps_good_check(&ham, Ratio::new(0, 1)), (true, 5));
        assert_eq!(ham.w_set(1).len(), 5);
        // Walk length equals the weighted visit-count sum.
        let m: usize = (1..=ham.walk.len()).map(|i| i * ham.w_set(i).len()).sum();
        assert_eq!(m, ham.walk.len());
        // A revisiting walk drops below the threshold.
        let g = ugraph(4, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 0)]);
        let w = walk_record(&g, &[0, 1, 2, 0, 3, 2, 0, 3]).unwrap();
        let (good, w1) = eps_good_check(&w, Ratio::new(1, 4));
        assert_eq!(w1, 1);
        assert!(!good);
        assert!(matches!(
            walk_record(&g, &[0, 2, 1, 3]),
            Err(OracleError::InvalidWalk(_))
        ));
        assert!(matches!(
            walk_record(&g, &[]),
            Err(OracleError::InvalidWalk(_))
        ));
    }
}
