//! Graph serialization: the JSON interchange schema and DOT rendering.
//!
//! Schema:
//! ```json
//! {
//!   "vertices": [{"id": 0, "side": "left", "roles": ["tower1.v"]}, ...],
//!   "edges": [[0, 1], ...],
//!   "gadgets": [{"kind": "tower", "params": {"h": 3}, "role_map": {...}}]
//! }
//! ```
//! Matchings serialize separately as sorted edge-index arrays plus the
//! graph's content hash (see [`crate::matching::PerfectMatching`]).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::GraphError;
use crate::graph::{BipartiteGraph, Side};
use crate::matching::PerfectMatching;

#[derive(Debug, Clone, Serialize, Deserialize)]
struct VertexDoc {
    id: usize,
    side: Side,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    roles: Vec<String>,
}

/// A registered gadget instance as it appears in the JSON "gadgets" array.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GadgetDoc {
    pub kind: String,
    pub params: serde_json::Value,
    pub role_map: BTreeMap<String, usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct GraphDoc {
    vertices: Vec<VertexDoc>,
    edges: Vec<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    gadgets: Vec<GadgetDoc>,
}

/// Serializes a graph (and optional gadget registry entries) to JSON.
pub fn export_graph_json(g: &BipartiteGraph, gadgets: &[GadgetDoc]) -> String {
    let doc = GraphDoc {
        vertices: (0..g.vertex_count())
            .map(|v| VertexDoc {
                id: v,
                side: g.side(v),
                roles: g.vertex(v).roles.clone(),
            })
            .collect(),
        edges: g.edges().to_vec(),
        gadgets: gadgets.to_vec(),
    };
    serde_json::to_string_pretty(&doc).expect("graph serialization cannot fail")
}

/// Parses the JSON schema back into a validated graph. Vertex ids must be a
/// permutation of `0..n`; vertices may appear in any order.
pub fn import_graph_json(bytes: &[u8]) -> Result<(BipartiteGraph, Vec<GadgetDoc>), GraphError> {
    let doc: GraphDoc = serde_json::from_slice(bytes).map_err(|e| GraphError::Parse {
        offset: byte_offset(bytes, e.line(), e.column()),
        message: e.to_string(),
    })?;
    let n = doc.vertices.len();
    let mut slots: Vec<Option<(Side, Vec<String>)>> = vec![None; n];
    for v in doc.vertices {
        if v.id >= n || slots[v.id].is_some() {
            return Err(GraphError::Parse {
                offset: 0,
                message: format!("vertex ids must form a permutation of 0..{n} (bad id {})", v.id),
            });
        }
        slots[v.id] = Some((v.side, v.roles));
    }
    let vertices = slots.into_iter().map(Option::unwrap).collect();
    let g = BipartiteGraph::build(vertices, doc.edges)?;
    Ok((g, doc.gadgets))
}

fn byte_offset(bytes: &[u8], line: usize, column: usize) -> usize {
    let mut offset = 0usize;
    let mut cur_line = 1usize;
    for &b in bytes {
        if cur_line == line {
            break;
        }
        offset += 1;
        if b == b'\n' {
            cur_line += 1;
        }
    }
    offset + column.saturating_sub(1)
}

/// Renders the graph in Graphviz DOT. With a matching overlay, matched
/// edges are drawn bold.
pub fn export_dot(g: &BipartiteGraph, matching: Option<&PerfectMatching>) -> String {
    let matched = matching.map(|m| m.edge_bitmap(g));
    let mut out = String::from("graph G {\n  node [shape=circle, fontsize=10];\n");
    for v in 0..g.vertex_count() {
        let shape = match g.side(v) {
            Side::Left => "circle",
            Side::Right => "box",
        };
        let roles = g.vertex(v).roles.join("\\n");
        let label = if roles.is_empty() {
            format!("{v}")
        } else {
            format!("{v}\\n{roles}")
        };
        out.push_str(&format!("  v{v} [shape={shape}, label=\"{label}\"];\n"));
    }
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        let style = match &matched {
            Some(map) if map[e] => " [style=bold, penwidth=2.5]",
            _ => "",
        };
        out.push_str(&format!("  v{u} -- v{v}{style};\n"));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matching::enumerate_perfect_matchings;
    use crate::matching::test_graphs::{complete, cycle};

    #[test]
    fn json_round_trip_is_identity() {
        let g = cycle(4);
        let json = export_graph_json(&g, &[]);
        let (back, gadgets) = import_graph_json(json.as_bytes()).unwrap();
        assert_eq!(back.hash(), g.hash());
        assert_eq!(back.edges(), g.edges());
        assert!(gadgets.is_empty());
    }

    #[test]
    fn gadget_docs_round_trip() {
        let g = cycle(4);
        let doc = GadgetDoc {
            kind: "tower".into(),
            params: serde_json::json!({"h": 3}),
            role_map: [("v".to_string(), 0usize)].into_iter().collect(),
        };
        let json = export_graph_json(&g, std::slice::from_ref(&doc));
        let (_, gadgets) = import_graph_json(json.as_bytes()).unwrap();
        assert_eq!(gadgets, vec![doc]);
    }

    #[test]
    fn truncated_json_is_a_parse_error() {
        let g = cycle(4);
        let json = export_graph_json(&g, &[]);
        let truncated = &json.as_bytes()[..json.len() / 2];
        match import_graph_json(truncated) {
            Err(GraphError::Parse { .. }) => {}
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn dot_output_lists_all_nodes_and_bolds_matched_edges() {
        let g = complete(3);
        let m = &enumerate_perfect_matchings(&g, 10).unwrap()[0];
        let dot = export_dot(&g, Some(m));
        assert!(dot.starts_with("graph G {"));
        for v in 0..6 {
            assert!(dot.contains(&format!("v{v} [")));
        }
        assert_eq!(dot.matches("style=bold").count(), 3);
        assert!(!dot.contains("digraph"));
    }
}
