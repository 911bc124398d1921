//! The classic reduction from 3SAT to the Hamiltonian cycle problem on an
//! undirected graph.
//!
//! Variables become pairs of parallel logical edges `e_i`, `ē_i` between
//! chain vertices `z_{2i-1} z_{2i}`, coupled by a vertex-based exclusive-or
//! gadget so every Hamiltonian cycle uses exactly one of them. Each clause
//! becomes a cycle of one edge per literal, each coupled to the literal's
//! variable edge; a clause whose literals are all false would close that
//! small cycle, which no Hamiltonian cycle can contain. Clause vertices and
//! the entry/exit vertices form a clique so satisfying routes can always be
//! completed. All logical edges are realized as subdivided spines, so the
//! final graph is simple even where the description uses parallel edges or
//! loops.

use crate::error::ReductionError;
use crate::graph::UndirectedGraph;
use crate::oracle::ham_cycle_undirected;

use super::cnf::CnfFormula;

/// A logical edge of the construction: a spine `a - interior... - b`
/// produced by repeated subdivision.
#[derive(Debug, Clone)]
pub struct Spine {
    pub a: usize,
    pub b: usize,
    pub interior: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct FolkloreGraph {
    pub graph: UndirectedGraph,
    pub cnf: CnfFormula,
    /// Entry/exit vertices `v1, v2, v3`.
    pub v: [usize; 3],
    /// The variable chain `z_1 .. z_{2k}`.
    pub z: Vec<usize>,
    /// Per variable, the spines of `e_i` (the positive literal) and `ē_i`.
    pub literal_spines: Vec<[Spine; 2]>,
    /// Per clause, its cycle vertices `u_1 .. u_{t_j}`.
    pub clause_vertices: Vec<Vec<usize>>,
}

struct Builder {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Builder {
    fn vertex(&mut self) -> usize {
        self.n += 1;
        self.n - 1
    }

    fn edge(&mut self, u: usize, v: usize) {
        self.edges.push((u, v));
    }

    /// Subdivides the last spine segment four times.
    fn subdivide4(&mut self, s: &mut Spine) -> [usize; 4] {
        let fresh = [self.vertex(), self.vertex(), self.vertex(), self.vertex()];
        s.interior.extend_from_slice(&fresh);
        fresh
    }

    /// The exclusive-or coupling: four fresh spine vertices on each edge,
    /// joined pairwise through middle vertices. In any cycle visiting all
    /// these vertices exactly once, the middle vertices force the subwalks
    /// `(top_i, mid_i, bottom_i)`, so exactly one spine is traversed.
    fn xor(&mut self, s1: &mut Spine, s2: &mut Spine) {
        let top = self.subdivide4(s1);
        let bottom = self.subdivide4(s2);
        for i in 0..4 {
            let mid = self.vertex();
            self.edge(top[i], mid);
            self.edge(mid, bottom[i]);
        }
    }

    /// Materializes a spine as a simple path.
    fn realize(&mut self, s: &Spine) {
        let mut prev = s.a;
        for &v in &s.interior {
            self.edge(prev, v);
            prev = v;
        }
        self.edge(prev, s.b);
    }
}

pub fn build_folklore_hc(cnf: &CnfFormula) -> Result<FolkloreGraph, ReductionError> {
    for (j, clause) in cnf.clauses.iter().enumerate() {
        if clause.len() > 3 {
            return Err(ReductionError::ClauseTooLarge(j));
        }
    }
    let k = cnf.num_vars;
    let mut b = Builder {
        n: 0,
        edges: Vec::new(),
    };
    let v = [b.vertex(), b.vertex(), b.vertex()];
    let z: Vec<usize> = (0..2 * k).map(|_| b.vertex()).collect();
    let mut literal_spines: Vec<[Spine; 2]> = (0..k)
        .map(|i| {
            let mk = || Spine {
                a: z[2 * i],
                b: z[2 * i + 1],
                interior: Vec::new(),
            };
            [mk(), mk()]
        })
        .collect();
    // Couple each variable's two parallel edges first, then its clause
    // occurrences in clause order.
    for spines in &mut literal_spines {
        let [e, eb] = spines;
        b.xor(e, eb);
    }
    let mut clause_vertices = Vec::with_capacity(cnf.clauses.len());
    for clause in &cnf.clauses {
        let t = clause.len();
        let u: Vec<usize> = (0..t).map(|_| b.vertex()).collect();
        for (i, &lit) in clause.iter().enumerate() {
            let var = lit.unsigned_abs() as usize - 1;
            let polarity = usize::from(lit < 0);
            let mut clause_edge = Spine {
                a: u[i],
                b: u[(i + 1) % t],
                interior: Vec::new(),
            };
            b.xor(&mut clause_edge, &mut literal_spines[var][polarity]);
            b.realize(&clause_edge);
        }
        clause_vertices.push(u);
    }
    for spines in &literal_spines {
        b.realize(&spines[0]);
        b.realize(&spines[1]);
    }
    // The chain through the variable gadgets.
    b.edge(v[0], v[1]);
    if k == 0 {
        b.edge(v[1], v[2]);
    } else {
        b.edge(v[1], z[0]);
        b.edge(z[2 * k - 1], v[2]);
        for i in 0..k - 1 {
            b.edge(z[2 * i + 1], z[2 * i + 2]);
        }
    }
    // Clique on the clause vertices together with v1 and v3.
    let mut v_prime: Vec<usize> = clause_vertices.iter().flatten().copied().collect();
    v_prime.push(v[0]);
    v_prime.push(v[2]);
    for (i, &p) in v_prime.iter().enumerate() {
        for &q in &v_prime[i + 1..] {
            b.edge(p, q);
        }
    }
    let graph = UndirectedGraph::build(b.n, b.edges)
        .map_err(|e| ReductionError::InstanceInvalid(e.to_string()))?;
    Ok(FolkloreGraph {
        graph,
        cnf: cnf.clone(),
        v,
        z,
        literal_spines,
        clause_vertices,
    })
}

impl FolkloreGraph {
    /// A Hamiltonian cycle of the construction, if one exists.
    pub fn hamiltonian_cycle(&self) -> Option<Vec<usize>> {
        ham_cycle_undirected(&self.graph, &[], &[])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::cnf_brute_force;

    fn agree(cnf: &CnfFormula) {
        let fg = build_folklore_hc(cnf).unwrap();
        let sat = cnf_brute_force(cnf).unwrap().satisfiable;
        let ham = fg.hamiltonian_cycle().is_some();
        assert_eq!(
            sat, ham,
            "satisfiability and Hamiltonicity must coincide for {:?}",
            cnf.clauses
        );
    }

    #[test]
    fn vertex_count_formula() {
        let cnf = CnfFormula::new(2, vec![vec![1, -2], vec![-1, 2]]).unwrap();
        let fg = build_folklore_hc(&cnf).unwrap();
        let (k, sum_t) = (2, 4);
        let xors = k + sum_t;
        assert_eq!(fg.graph.vertex_count(), 3 + 2 * k + sum_t + 12 * xors);
    }

    #[test]
    fn single_positive_clause_is_hamiltonian() {
        agree(&CnfFormula::new(1, vec![vec![1]]).unwrap());
    }

    #[test]
    fn contradiction_is_not_hamiltonian() {
        agree(&CnfFormula::new(1, vec![vec![1], vec![-1]]).unwrap());
    }

    #[test]
    fn empty_formula_is_a_triangle() {
        let cnf = CnfFormula::new(0, vec![]).unwrap();
        let fg = build_folklore_hc(&cnf).unwrap();
        assert_eq!(fg.graph.vertex_count(), 3);
        assert!(fg.hamiltonian_cycle().is_some());
    }

    #[test]
    fn two_variable_formulas_agree_with_brute_force() {
        agree(&CnfFormula::new(2, vec![vec![1, 2], vec![-1, -2]]).unwrap());
        agree(&CnfFormula::new(2, vec![vec![1], vec![-1, 2], vec![-2]]).unwrap());
    }

    /// The complete contradiction over two variables; refuting it requires
    /// an exhaustive search, so this is the stress case for the cycle
    /// oracle's pruning.
    #[test]
    fn full_two_variable_contradiction_is_not_hamiltonian() {
        agree(
            &CnfFormula::new(2, vec![vec![1, 2], vec![1, -2], vec![-1, 2], vec![-1, -2]]).unwrap(),
        );
    }

    #[test]
    fn oversized_clause_is_rejected() {
        let cnf = CnfFormula::new(4, vec![vec![1, 2, 3, 4]]).unwrap();
        assert!(matches!(
            build_folklore_hc(&cnf),
            Err(ReductionError::ClauseTooLarge(0))
        ));
    }
}
