//! DOT export of the homology graph: vertices carry graded dimensions,
//! edges carry their degree-1 matrices, and self-loops whose matrix powers
//! vanish (nilpotent cycles, not part of the subshift) are drawn dashed.

use crate::cocyclic::{periodic_allowed, HomGraph};
use crate::homology::Matrix;

fn matrix_label(m: &Matrix) -> String {
    if m.rows() == 0 || m.cols() == 0 {
        return "0".to_string();
    }
    let mut rows = Vec::new();
    for i in 0..m.rows() {
        let entries: Vec<String> = (0..m.cols())
            .map(|j| crate::scalar::format_scalar(m.get(i, j)))
            .collect();
        rows.push(format!("[{}]", entries.join(",")));
    }
    if m.rows() == 1 {
        rows.pop().unwrap()
    } else {
        format!("[{}]", rows.join(","))
    }
}

pub fn homgraph_to_dot(graph: &HomGraph) -> String {
    let mut out = String::from("digraph index_system {\n");
    out.push_str("  rankdir=LR;\n");
    for label in graph.labels() {
        let space = graph.vertex(label).expect("listed vertex");
        let dims: Vec<String> = space
            .dims
            .iter()
            .enumerate()
            .map(|(k, d)| format!("H{k}={d}"))
            .collect();
        out.push_str(&format!(
            "  \"{label}\" [label=\"{label}\\n{}\"];\n",
            dims.join(" ")
        ));
    }
    for ((a, b), map) in graph.edges() {
        let mut attrs = format!("label=\"{}\"", matrix_label(map.degree(1)));
        if a == b {
            let admissible = periodic_allowed(graph, std::slice::from_ref(a)).unwrap_or(false);
            if !admissible {
                attrs.push_str(", style=dashed");
            }
        }
        out.push_str(&format!("  \"{a}\" -> \"{b}\" [{attrs}];\n"));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn dot_marks_nilpotent_self_loops() {
        let eps = fixtures::default_eps();
        let trivial = HomGraph::from_system(
            &fixtures::trivial_tent_system(&eps),
            &fixtures::tent_map(),
        )
        .unwrap();
        let dot = homgraph_to_dot(&trivial);
        assert!(dot.contains("style=dashed"));
        assert!(dot.contains("[[1,-1],[1,-1]]"));

        let tent =
            HomGraph::from_system(&fixtures::tent_system(&eps), &fixtures::tent_map()).unwrap();
        let dot = homgraph_to_dot(&tent);
        assert!(!dot.contains("dashed"));
        assert!(dot.contains("\"1\" -> \"2\" [label=\"[1]\"]"));
        assert!(dot.contains("\"3\" -> \"4\" [label=\"[-1]\"]"));
    }
}
