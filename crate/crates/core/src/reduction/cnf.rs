//! CNF formulas with DIMACS parsing and serialization.

use crate::error::GraphError;

/// A CNF formula. Clauses hold DIMACS-style literals: `i` for variable
/// `x_i`, `-i` for its negation, with `1 <= i <= num_vars`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfFormula {
    pub num_vars: usize,
    pub clauses: Vec<Vec<i32>>,
}

impl CnfFormula {
    pub fn new(num_vars: usize, clauses: Vec<Vec<i32>>) -> Result<Self, GraphError> {
        for (ci, clause) in clauses.iter().enumerate() {
            if clause.is_empty() {
                return Err(GraphError::Parse {
                    offset: 0,
                    message: format!("clause {ci} is empty"),
                });
            }
            for &lit in clause {
                if lit == 0 || lit.unsigned_abs() as usize > num_vars {
                    return Err(GraphError::Parse {
                        offset: 0,
                        message: format!("literal {lit} out of range in clause {ci}"),
                    });
                }
            }
        }
        Ok(CnfFormula { num_vars, clauses })
    }

    /// `true` when the assignment (bit `i-1` of `mask` is `x_i`) satisfies
    /// the clause.
    pub fn clause_satisfied(clause: &[i32], mask: u32) -> bool {
        clause.iter().any(|&lit| {
            let v = lit.unsigned_abs() as usize - 1;
            (mask >> v) & 1 == u32::from(lit > 0)
        })
    }

    /// Number of clauses satisfied by the assignment.
    pub fn satisfied_count(&self, mask: u32) -> usize {
        self.clauses
            .iter()
            .filter(|c| Self::clause_satisfied(c, mask))
            .count()
    }

    /// Parses the DIMACS CNF format: optional `c` comment lines, one
    /// `p cnf <vars> <clauses>` header, then zero-terminated clauses.
    pub fn parse_dimacs(input: &str) -> Result<Self, GraphError> {
        let mut offset = 0usize;
        let mut header: Option<(usize, usize)> = None;
        let mut clauses: Vec<Vec<i32>> = Vec::new();
        let mut current: Vec<i32> = Vec::new();
        for line in input.lines() {
            let line_offset = offset;
            offset += line.len() + 1;
            let line = line.trim();
            if line.is_empty() || line.starts_with('c') {
                continue;
            }
            if line.starts_with('p') {
                if header.is_some() {
                    return Err(GraphError::Parse {
                        offset: line_offset,
                        message: "duplicate problem line".into(),
                    });
                }
                let fields: Vec<&str> = line.split_whitespace().collect();
                match fields.as_slice() {
                    ["p", "cnf", vars, cls] => {
                        let parse = |s: &str| {
                            s.parse::<usize>().map_err(|e| GraphError::Parse {
                                offset: line_offset,
                                message: format!("bad problem line field {s:?}: {e}"),
                            })
                        };
                        header = Some((parse(vars)?, parse(cls)?));
                    }
                    _ => {
                        return Err(GraphError::Parse {
                            offset: line_offset,
                            message: format!("malformed problem line {line:?}"),
                        })
                    }
                }
                continue;
            }
            if header.is_none() {
                return Err(GraphError::Parse {
                    offset: line_offset,
                    message: "clause before problem line".into(),
                });
            }
            for tok in line.split_whitespace() {
                let lit: i32 = tok.parse().map_err(|e| GraphError::Parse {
                    offset: line_offset,
                    message: format!("bad literal {tok:?}: {e}"),
                })?;
                if lit == 0 {
                    clauses.push(std::mem::take(&mut current));
                } else {
                    current.push(lit);
                }
            }
        }
        if !current.is_empty() {
            clauses.push(current);
        }
        let (num_vars, num_clauses) = header.ok_or(GraphError::Parse {
            offset: 0,
            message: "missing problem line".into(),
        })?;
        if clauses.len() != num_clauses {
            return Err(GraphError::Parse {
                offset: 0,
                message: format!(
                    "problem line declares {num_clauses} clauses, found {}",
                    clauses.len()
                ),
            });
        }
        CnfFormula::new(num_vars, clauses)
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for clause in &self.clauses {
            for lit in clause {
                out.push_str(&format!("{lit} "));
            }
            out.push_str("0\n");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimacs_round_trip() {
        let f = CnfFormula::new(3, vec![vec![1, -2, 3], vec![-1], vec![2, 3]]).unwrap();
        let text = f.to_dimacs();
        assert_eq!(CnfFormula::parse_dimacs(&text).unwrap(), f);
    }

    #[test]
    fn dimacs_with_comments_and_multiline_clauses() {
        let text = "c a comment\np cnf 2 2\n1 -2 0\n-1\n2 0\n";
        let f = CnfFormula::parse_dimacs(text).unwrap();
        assert_eq!(f.num_vars, 2);
        assert_eq!(f.clauses, vec![vec![1, -2], vec![-1, 2]]);
    }

    #[test]
    fn malformed_inputs_are_parse_errors() {
        for bad in [
            "1 2 0\n",                 // clause before header
            "p cnf 2 1\n3 0\n",        // literal out of range
            "p cnf 2 2\n1 0\n",        // clause count mismatch
            "p cnf x 1\n1 0\n",        // bad header field
            "p cnf 1 2\n1 0\n0\n",     // empty clause
        ] {
            assert!(
                matches!(CnfFormula::parse_dimacs(bad), Err(GraphError::Parse { .. })),
                "expected parse error for {bad:?}"
            );
        }
    }

    #[test]
    fn satisfied_count_is_exact() {
        let f = CnfFormula::new(2, vec![vec![1], vec![-1], vec![1, 2]]).unwrap();
        assert_eq!(f.satisfied_count(0b00), 1); // -1 true, (1 2) false
        assert_eq!(f.satisfied_count(0b01), 2); // 1 true, (1 2) true
        assert_eq!(f.satisfied_count(0b10), 2); // -1 true, (1 2) true
        assert_eq!(f.satisfied_count(0b11), 2);
    }
}
