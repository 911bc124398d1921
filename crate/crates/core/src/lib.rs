//! Exact computations on the bipartite perfect-matching polytope.
//!
//! The polytope's vertices are the perfect matchings of a bipartite graph;
//! two vertices are adjacent exactly when the matchings' symmetric
//! difference is a single alternating cycle. This crate provides:
//!
//! - brute-force enumeration, adjacency, flip-distance, and diameter
//!   computation on small graphs ([`matching`], [`skeleton`]);
//! - the gadget library used by the hardness constructions — towers,
//!   cities, XOR couplers, ladders, and the branching gadget — with
//!   exhaustive state classifiers and minimum-sequence searchers
//!   ([`gadgets`]);
//! - the two end-to-end reductions: pattern-constrained Hamiltonicity to
//!   flip distance, and 3SAT to Hamiltonicity to diameter
//!   inapproximability ([`reduction`]);
//! - independent brute-force oracles for Hamiltonian cycles, CNF
//!   satisfiability, and walk quality ([`oracle`]);
//! - a CLI front end (`matchpoly`) for diameter reports, gadget property
//!   verification, and reduction round trips ([`cli`]).

pub mod cli;
pub mod error;
pub mod gadgets;
pub mod graph;
pub mod io;
pub mod matching;
pub mod oracle;
pub mod reduction;
pub mod skeleton;
