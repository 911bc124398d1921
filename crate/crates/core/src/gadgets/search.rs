//! Search procedures over gadget states: harness graphs, minimum
//! well-behaved flip sequences, ladder transfer plans, and simple-cycle
//! enumeration.
//!
//! A *harness* closes a gadget's boundary with explicit edges so that the
//! gadget's behavior inside a larger graph can be simulated exactly on a
//! small free-standing graph: a closing edge stands in for "the boundary
//! vertex is matched outside". A well-behaved ambient cycle restricted to
//! the gadget plus the appropriate closing edge is an alternating cycle of
//! the harness, and vice versa, so flip-distance questions about gadget
//! states reduce to breadth-first search over harness matchings.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::graph::{BipartiteGraph, GraphBuilder, Side};
use crate::matching::{alternating_cycle_neighbors, PerfectMatching};

use super::build::CityScale;
use super::{Dir, GadgetRegistry, LadderHandle, TowerHandle};

/// A gadget closed off by boundary edges. `reg` holds exactly the one
/// tower or ladder handle describing the gadget inside `graph`.
#[derive(Debug, Clone)]
pub struct Harness {
    pub graph: BipartiteGraph,
    pub reg: GadgetRegistry,
    /// Closing edge ids. Towers: `[vw]`. Ladders: `[a0 b0, a6 b6]`
    /// (bottom first, top second).
    pub closing: Vec<usize>,
}

/// A tower of height `h` whose boundary vertices are joined by an edge
/// `w v`; flipping alternating cycles through that edge simulates
/// well-behaved ambient cycles.
pub fn tower_harness(h: usize) -> Harness {
    let mut gb = GraphBuilder::new();
    let mut reg = GadgetRegistry::new();
    let v = gb.add_vertex(Side::Left);
    let w = gb.add_vertex(Side::Right);
    super::build::attach_tower(&mut gb, &mut reg, v, w, h, "tower").unwrap();
    gb.add_edge(v, w).unwrap();
    let graph = gb.build();
    let closing = vec![graph.edge_between(v, w).unwrap()];
    Harness {
        graph,
        reg,
        closing,
    }
}

/// A ladder whose boundary pairs are closed by the edges `a0 b0` and
/// `a6 b6`; a closing edge matched means the pair is matched outside.
pub fn ladder_harness() -> Harness {
    let mut gb = GraphBuilder::new();
    let mut reg = GadgetRegistry::new();
    let a0 = gb.add_vertex(Side::Left);
    let b0 = gb.add_vertex(Side::Right);
    let a6 = gb.add_vertex(Side::Left);
    let b6 = gb.add_vertex(Side::Right);
    super::build::attach_ladder(&mut gb, &mut reg, a6, b6, a0, b0, "ladder").unwrap();
    gb.add_edge(a0, b0).unwrap();
    gb.add_edge(a6, b6).unwrap();
    let graph = gb.build();
    let closing = vec![
        graph.edge_between(a0, b0).unwrap(),
        graph.edge_between(a6, b6).unwrap(),
    ];
    Harness {
        graph,
        reg,
        closing,
    }
}

impl Harness {
    fn e(&self, u: usize, v: usize) -> usize {
        self.graph.edge_between(u, v).expect("harness edge present")
    }

    fn closing_for(&self, dir: Dir) -> usize {
        match dir {
            Dir::Bottom => self.closing[0],
            Dir::Top => *self.closing.last().unwrap(),
        }
    }

    /// The default tower matching: boundary edges plus horizontals 1..=h.
    pub fn tower_default(&self) -> PerfectMatching {
        let t = &self.reg.towers[0];
        let mut edges = vec![self.e(t.v, t.a[0]), self.e(t.b[0], t.w)];
        edges.extend((1..=t.h).map(|i| self.e(t.a[i], t.b[i])));
        PerfectMatching::new(&self.graph, edges).expect("default tower matching")
    }

    /// The locked tower matching: default with the top two rows matched
    /// vertically instead of horizontally.
    pub fn tower_locked(&self) -> PerfectMatching {
        let t = &self.reg.towers[0];
        assert!(t.h >= 2, "locked state needs height at least 2");
        let mut edges = vec![self.e(t.v, t.a[0]), self.e(t.b[0], t.w)];
        edges.extend((1..=t.h - 2).map(|i| self.e(t.a[i], t.b[i])));
        edges.push(self.e(t.a[t.h], t.a[t.h - 1]));
        edges.push(self.e(t.b[t.h], t.b[t.h - 1]));
        PerfectMatching::new(&self.graph, edges).expect("locked tower matching")
    }

    /// The semi-default ladder matching with the given horizontal set;
    /// skipped rows pair vertically in consecutive pairs.
    pub fn ladder_matching(&self, horizontals: &BTreeSet<usize>) -> PerfectMatching {
        let l = &self.reg.ladders[0];
        let mut edges = self.closing.clone();
        let mut i = 1;
        while i <= 5 {
            if horizontals.contains(&i) {
                edges.push(self.e(l.a[i], l.b[i]));
                i += 1;
            } else {
                edges.push(self.e(l.a[i], l.a[i + 1]));
                edges.push(self.e(l.b[i], l.b[i + 1]));
                i += 2;
            }
        }
        PerfectMatching::new(&self.graph, edges).expect("semi-default ladder matching")
    }

    pub fn ladder_default(&self) -> PerfectMatching {
        self.ladder_matching(&(1..=5).collect())
    }

    pub fn ladder_bottom_open(&self) -> PerfectMatching {
        self.ladder_matching(&BTreeSet::from([5]))
    }

    pub fn ladder_top_open(&self) -> PerfectMatching {
        self.ladder_matching(&BTreeSet::from([1]))
    }

    /// Harness-vertex to ambient-vertex map for a tower instance.
    pub fn tower_vertex_map(&self, ambient: &TowerHandle) -> Vec<usize> {
        let t = &self.reg.towers[0];
        assert_eq!(t.h, ambient.h, "tower heights must agree");
        let mut map = vec![usize::MAX; self.graph.vertex_count()];
        map[t.v] = ambient.v;
        map[t.w] = ambient.w;
        for i in 0..=t.h {
            map[t.a[i]] = ambient.a[i];
            map[t.b[i]] = ambient.b[i];
        }
        map
    }

    /// Harness-vertex to ambient-vertex map for a ladder instance.
    pub fn ladder_vertex_map(&self, ambient: &LadderHandle) -> Vec<usize> {
        let l = &self.reg.ladders[0];
        let mut map = vec![usize::MAX; self.graph.vertex_count()];
        for i in 0..7 {
            map[l.a[i]] = ambient.a[i];
            map[l.b[i]] = ambient.b[i];
        }
        map
    }

    /// Translates a harness flip cycle into ambient edge ids, dropping the
    /// closing edges (the ambient cycle continues outside the gadget
    /// there). The result is the gadget-internal path of the ambient cycle.
    pub fn map_cycle(
        &self,
        map: &[usize],
        ambient: &BipartiteGraph,
        cycle: &[usize],
    ) -> Vec<usize> {
        cycle
            .iter()
            .filter(|e| !self.closing.contains(e))
            .map(|&e| {
                let (p, q) = self.graph.edge(e);
                ambient
                    .edge_between(map[p], map[q])
                    .expect("gadget edge exists in ambient graph")
            })
            .collect()
    }

    /// All flip moves from `m` whose cycle passes through exactly the
    /// closing edges selected by `filter`.
    fn moves<F: Fn(&[usize]) -> bool>(
        &self,
        m: &PerfectMatching,
        filter: F,
    ) -> Vec<(Vec<usize>, PerfectMatching)> {
        let mut out = Vec::new();
        alternating_cycle_neighbors(&self.graph, m, |cycle, next| {
            if filter(cycle) {
                out.push((cycle.to_vec(), next));
            }
            true
        });
        out.sort_by(|a, b| a.1.edges().cmp(b.1.edges()));
        out
    }
}

/// Breadth-first search over harness matchings under a move filter.
/// Returns the cycles of a shortest move sequence from `from` to `to`.
fn harness_bfs<F: Fn(&[usize]) -> bool + Copy>(
    har: &Harness,
    from: &PerfectMatching,
    to: &PerfectMatching,
    filter: F,
) -> Option<Vec<Vec<usize>>> {
    let mut ids: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut states: Vec<PerfectMatching> = vec![from.clone()];
    let mut parent: Vec<Option<(usize, Vec<usize>)>> = vec![None];
    ids.insert(from.edges().to_vec(), 0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(cur) = queue.pop_front() {
        if states[cur].edges() == to.edges() {
            let mut cycles = Vec::new();
            let mut at = cur;
            while let Some((p, cycle)) = parent[at].clone() {
                cycles.push(cycle);
                at = p;
            }
            cycles.reverse();
            return Some(cycles);
        }
        for (cycle, next) in har.moves(&states[cur], filter) {
            if !ids.contains_key(next.edges()) {
                let id = states.len();
                ids.insert(next.edges().to_vec(), id);
                states.push(next);
                parent.push(Some((cur, cycle)));
                queue.push_back(id);
            }
        }
    }
    None
}

/// Shortest sequence of well-behaved flips (harness cycles through the
/// boundary edge) transforming one tower state into another.
pub fn min_well_behaved_tower_sequence(
    har: &Harness,
    from: &PerfectMatching,
    to: &PerfectMatching,
) -> Option<Vec<Vec<usize>>> {
    let closing = har.closing[0];
    harness_bfs(har, from, to, move |cycle| cycle.contains(&closing))
}

/// A well-behaved flip sequence of *exactly* `len` moves from `from` to
/// `to`: a shortest sequence padded at the end with idle pairs (a flip
/// through the boundary edge and its immediate inverse).
pub fn tower_plan(
    har: &Harness,
    from: &PerfectMatching,
    to: &PerfectMatching,
    len: usize,
) -> Option<Vec<Vec<usize>>> {
    let mut cycles = min_well_behaved_tower_sequence(har, from, to)?;
    if cycles.len() > len || !(len - cycles.len()).is_multiple_of(2) {
        return None;
    }
    if cycles.len() < len {
        let closing = har.closing[0];
        let idle = har
            .moves(to, |cycle| cycle.contains(&closing))
            .into_iter()
            .next()
            .map(|(cycle, _)| cycle)?;
        while cycles.len() < len {
            cycles.push(idle.clone());
            cycles.push(idle.clone());
        }
    }
    Some(cycles)
}

/// Shortest sequence of single-boundary flips between two ladder states.
/// Each move's cycle passes through exactly one closing edge; `allowed`
/// restricts which end may be used.
pub fn min_well_behaved_ladder_sequence(
    har: &Harness,
    from: &PerfectMatching,
    to: &PerfectMatching,
    allowed: Option<Dir>,
) -> Option<Vec<Vec<usize>>> {
    let (bottom, top) = (har.closing[0], har.closing[1]);
    harness_bfs(har, from, to, move |cycle| {
        let (b, t) = (cycle.contains(&bottom), cycle.contains(&top));
        match allowed {
            None => b != t,
            Some(Dir::Bottom) => b && !t,
            Some(Dir::Top) => t && !b,
        }
    })
}

/// The eight semi-default ladder states (both closing edges matched), in a
/// deterministic order.
pub fn enumerate_semi_default_ladder_states(har: &Harness) -> Vec<PerfectMatching> {
    let all = crate::matching::enumerate_perfect_matchings(&har.graph, 100_000)
        .expect("ladder harness is tiny");
    all.into_iter()
        .filter(|m| har.closing.iter().all(|&c| m.contains(c)))
        .collect()
}

/// A labeled move of the ladder transfer graph: two consecutive flips
/// through the same end carry one semi-default state to another.
#[derive(Debug, Clone)]
pub struct LadderMove {
    /// Indices into the state list of [`enumerate_semi_default_ladder_states`].
    pub from: usize,
    pub to: usize,
    pub dir: Dir,
    pub cycles: [Vec<usize>; 2],
}

/// All pair-moves between semi-default ladder states. Returns the state
/// list and the move list; only the first witness per `(from, to, dir)` is
/// kept.
pub fn ladder_transfer_graph(har: &Harness) -> (Vec<PerfectMatching>, Vec<LadderMove>) {
    let states = enumerate_semi_default_ladder_states(har);
    let index: HashMap<Vec<usize>, usize> = states
        .iter()
        .enumerate()
        .map(|(i, m)| (m.edges().to_vec(), i))
        .collect();
    let mut moves: Vec<LadderMove> = Vec::new();
    let mut seen: BTreeSet<(usize, usize, char)> = BTreeSet::new();
    for (si, s) in states.iter().enumerate() {
        for dir in [Dir::Bottom, Dir::Top] {
            let c = har.closing_for(dir);
            let other = har.closing[usize::from(dir == Dir::Bottom)];
            let single = move |cycle: &[usize]| cycle.contains(&c) && !cycle.contains(&other);
            for (cy1, mid) in har.moves(s, single) {
                for (cy2, end) in har.moves(&mid, single) {
                    let Some(&ti) = index.get(end.edges()) else {
                        continue;
                    };
                    if ti != si && seen.insert((si, ti, dir.letter())) {
                        moves.push(LadderMove {
                            from: si,
                            to: ti,
                            dir,
                            cycles: [cy1.clone(), cy2],
                        });
                    }
                }
            }
        }
    }
    (states, moves)
}

/// Exactly four single-boundary flips (two pair-moves with the given
/// direction labels) carrying `from` to `to`, allowing idle pairs (a flip
/// repeated twice) at either position.
pub fn ladder_pair_plan(
    har: &Harness,
    from: &PerfectMatching,
    to: &PerfectMatching,
    dirs: [Dir; 2],
) -> Option<[Vec<usize>; 4]> {
    let (states, moves) = ladder_transfer_graph(har);
    let index = |m: &PerfectMatching| {
        states
            .iter()
            .position(|s| s.edges() == m.edges())
            .expect("state must be semi-default")
    };
    let (si, ti) = (index(from), index(to));
    // Available pair-moves from a state with a given label, including the
    // idle self-loop.
    let options = |state: usize, dir: Dir| -> Vec<(usize, [Vec<usize>; 2])> {
        let mut out: Vec<(usize, [Vec<usize>; 2])> = moves
            .iter()
            .filter(|mv| mv.from == state && mv.dir == dir)
            .map(|mv| (mv.to, mv.cycles.clone()))
            .collect();
        let c = har.closing_for(dir);
        let other = har.closing[usize::from(dir == Dir::Bottom)];
        if let Some((idle, _)) = har
            .moves(&states[state], |cycle| {
                cycle.contains(&c) && !cycle.contains(&other)
            })
            .into_iter()
            .next()
        {
            out.push((state, [idle.clone(), idle]));
        }
        out
    };
    for (mid, first) in options(si, dirs[0]) {
        for (end, second) in options(mid, dirs[1]) {
            if end == ti {
                let [f1, f2] = first;
                let [s1, s2] = second;
                return Some([f1, f2, s1, s2]);
            }
        }
    }
    None
}

/// A theta-shaped host with two coupled logical edges, for exhaustive
/// cycle checks. Three routes join the hubs `s` and `t`: one through each
/// logical edge and a plain bypass, so a simple cycle can traverse either
/// coupled edge and close through the bypass. `mirrored` selects whether
/// the coupled edges' first endpoints share a side. No closing edges: the
/// host routes close every traversal.
pub fn xor_harness(mirrored: bool) -> Harness {
    let mut gb = GraphBuilder::new();
    let mut reg = GadgetRegistry::new();
    let s = gb.add_vertex(Side::Left);
    let t = gb.add_vertex(Side::Right);
    // Plain bypass route s - r2 - l2 - t.
    let r2 = gb.add_vertex(Side::Right);
    let l2 = gb.add_vertex(Side::Left);
    gb.add_edge(s, r2).unwrap();
    gb.add_edge(r2, l2).unwrap();
    gb.add_edge(l2, t).unwrap();
    // Second logical route s - rb - lb - t with the logical edge placed to
    // control the orientation of the coupling.
    let rb = gb.add_vertex(Side::Right);
    let lb = gb.add_vertex(Side::Left);
    gb.add_edge(s, rb).unwrap();
    let le0 = super::build::new_logical_edge(&mut gb, &mut reg, s, t).unwrap();
    let le1 = if mirrored {
        gb.add_edge(rb, lb).unwrap();
        super::build::new_logical_edge(&mut gb, &mut reg, lb, t).unwrap()
    } else {
        gb.add_edge(lb, t).unwrap();
        super::build::new_logical_edge(&mut gb, &mut reg, rb, lb).unwrap()
    };
    super::build::insert_xor(&mut gb, &mut reg, le0, le1, CityScale::MINIMAL, "X").unwrap();
    assert_eq!(reg.xors[0].mirrored, mirrored);
    Harness {
        graph: gb.build(),
        reg,
        closing: Vec::new(),
    }
}

/// One branch gadget of the given width whose three boundary vertices are
/// joined by two closing edges `u_in v_out` and `w_in v_out`, so regular
/// traversals close into simple cycles.
pub fn forall_harness(width: usize, scale: CityScale) -> Harness {
    let mut gb = GraphBuilder::new();
    let mut reg = GadgetRegistry::new();
    let v_out = gb.add_vertex(Side::Right);
    let u_in = gb.add_vertex(Side::Left);
    let w_in = gb.add_vertex(Side::Left);
    super::build::attach_forall(&mut gb, &mut reg, v_out, u_in, w_in, width, scale, "A").unwrap();
    gb.add_edge(u_in, v_out).unwrap();
    gb.add_edge(w_in, v_out).unwrap();
    let graph = gb.build();
    let closing = vec![
        graph.edge_between(u_in, v_out).unwrap(),
        graph.edge_between(w_in, v_out).unwrap(),
    ];
    Harness {
        graph,
        reg,
        closing,
    }
}

/// Enumerates simple cycles with every city treated as atomic: each city
/// is contracted to a single virtual edge between its endpoints, cycles
/// are enumerated on the contracted graph, and each virtual edge is
/// expanded back to a canonical through-path before the callback runs, so
/// the callback sees edge ids of the original graph. Gadget-level verdicts
/// (cities visited, ladder and coupler usage) are invariant under the
/// choice of path inside a city, so this loses nothing while avoiding the
/// exponentially many interior routes.
pub fn enumerate_city_reduced_cycles<F: FnMut(&[usize]) -> bool>(
    g: &BipartiteGraph,
    reg: &GadgetRegistry,
    mut cb: F,
) -> usize {
    let e = |u: usize, v: usize| g.edge_between(u, v).expect("gadget edge present");
    let mut interior = vec![false; g.vertex_count()];
    let mut city_paths: Vec<(usize, usize, Vec<usize>)> = Vec::new();
    for c in &reg.cities {
        let towers: Vec<&TowerHandle> = c.towers.iter().map(|&t| &reg.towers[t]).collect();
        let (x, y) = (towers[0].v, towers[towers.len() - 1].w);
        let mut path = Vec::new();
        for t in &towers {
            for &v in t.a.iter().chain(&t.b) {
                interior[v] = true;
            }
            if t.v != x {
                interior[t.v] = true;
            }
            if t.w != y {
                interior[t.w] = true;
            }
            path.push(e(t.v, t.a[0]));
            for i in 0..t.h {
                path.push(e(t.a[i], t.a[i + 1]));
            }
            path.push(e(t.a[t.h], t.b[t.h]));
            for i in (0..t.h).rev() {
                path.push(e(t.b[i + 1], t.b[i]));
            }
            path.push(e(t.b[0], t.w));
        }
        city_paths.push((x, y, path));
    }
    let vertices: Vec<(Side, Vec<String>)> = (0..g.vertex_count())
        .map(|v| (g.side(v), Vec::new()))
        .collect();
    let mut reduced_edges: Vec<(usize, usize)> = Vec::new();
    // Original edge per reduced edge id; virtual city edges come last.
    let mut back: Vec<Option<usize>> = Vec::new();
    for (eid, &(u, v)) in g.edges().iter().enumerate() {
        if !interior[u] && !interior[v] {
            reduced_edges.push((u, v));
            back.push(Some(eid));
        }
    }
    let first_virtual = reduced_edges.len();
    for &(x, y, _) in &city_paths {
        reduced_edges.push((x, y));
        back.push(None);
    }
    let reduced =
        BipartiteGraph::build(vertices, reduced_edges).expect("contraction keeps bipartiteness");
    enumerate_simple_cycles(&reduced, |cycle| {
        let mut expanded = Vec::new();
        for &re in cycle {
            match back[re] {
                Some(eid) => expanded.push(eid),
                None => expanded.extend_from_slice(&city_paths[re - first_virtual].2),
            }
        }
        cb(&expanded)
    })
}

/// Enumerates every simple cycle of the graph exactly once (rooted at its
/// minimum vertex, one direction per cycle), invoking the callback with the
/// cycle's edge ids in traversal order. The callback returns `false` to
/// abort. Returns the number of cycles visited.
pub fn enumerate_simple_cycles<F: FnMut(&[usize]) -> bool>(g: &BipartiteGraph, mut cb: F) -> usize {
    struct State<'a, F> {
        g: &'a BipartiteGraph,
        root: usize,
        path_v: Vec<usize>,
        path_e: Vec<usize>,
        on_path: Vec<bool>,
        count: usize,
        stop: bool,
        cb: &'a mut F,
    }
    fn dfs<F: FnMut(&[usize]) -> bool>(s: &mut State<'_, F>, at: usize) {
        for &e in s.g.adjacency(at) {
            if s.stop {
                return;
            }
            let nb = s.g.other_end(e, at);
            if nb == s.root {
                if s.path_v.len() >= 3 && s.path_v[1] < at {
                    s.path_e.push(e);
                    s.count += 1;
                    if !(s.cb)(&s.path_e) {
                        s.stop = true;
                    }
                    s.path_e.pop();
                }
            } else if nb > s.root && !s.on_path[nb] {
                s.on_path[nb] = true;
                s.path_v.push(nb);
                s.path_e.push(e);
                dfs(s, nb);
                s.path_e.pop();
                s.path_v.pop();
                s.on_path[nb] = false;
            }
        }
    }
    let n = g.vertex_count();
    let mut total = 0;
    for root in 0..n {
        let mut st = State {
            g,
            root,
            path_v: vec![root],
            path_e: Vec::new(),
            on_path: vec![false; n],
            count: 0,
            stop: false,
            cb: &mut cb,
        };
        st.on_path[root] = true;
        dfs(&mut st, root);
        total += st.count;
        if st.stop {
            break;
        }
    }
    total
}
