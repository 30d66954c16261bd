//! Graphviz output.

use std::fmt::Write as _;
use std::path::Path;

use omega_core::sst::{OutputGraph, Side};

fn id(s: &str) -> String {
    if !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') && !s.starts_with(|c: char| c.is_ascii_digit()) {
        s.to_string()
    } else {
        format!("\"{}\"", escape(s))
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn node_name(g: &OutputGraph, var: usize, col: usize, side: Side) -> String {
    let side = match side {
        Side::In => "in",
        Side::Out => "out",
    };
    id(&format!("{}{side}_{col}", g.vars[var]))
}

/// Renders an output graph with nodes `Xin_i` / `Xout_i` and edges labelled
/// by their constant strings (`ε` when empty).
pub fn output_graph_dot(g: &OutputGraph) -> String {
    let mut out = String::from("digraph output {\n  rankdir=LR;\n");
    for n in &g.nodes {
        let _ = writeln!(out, "  {};", node_name(g, n.var, n.col, n.side));
    }
    for ((a, b), label) in &g.edges {
        let text: String = if label.is_empty() { "ε".into() } else { label.iter().collect() };
        let _ = writeln!(
            out,
            "  {} -> {} [label=\"{}\"];",
            node_name(g, a.var, a.col, a.side),
            node_name(g, b.var, b.col, b.side),
            escape(&text)
        );
    }
    out.push_str("}\n");
    out
}

pub fn emit_dot(g: &OutputGraph, path: &Path) -> std::io::Result<()> {
    std::fs::write(path, output_graph_dot(g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use omega_core::fixtures;
    use omega_core::monoid::DEFAULT_CAP;
    use omega_core::sst::build_output_graph;
    use omega_core::UpWord;
    use std::collections::{BTreeMap, BTreeSet};

    #[test]
    fn example_graph_has_the_epsilon_edge() {
        let t = fixtures::output_graph_sst();
        let g = build_output_graph(&t, &UpWord::from_strs("", "a"), 6, DEFAULT_CAP).unwrap();
        let dot = output_graph_dot(&g);
        assert!(dot.contains("Zin_0 -> Zout_0 [label=\"ε\"];"), "{dot}");
        assert_eq!(dot, output_graph_dot(&g));
    }

    #[test]
    fn empty_graph() {
        let g = OutputGraph { vars: vec![], horizon: 0, nodes: BTreeSet::new(), edges: BTreeMap::new(), labels: BTreeSet::new() };
        assert_eq!(output_graph_dot(&g), "digraph output {\n  rankdir=LR;\n}\n");
    }

    #[test]
    fn odd_names_are_quoted() {
        assert_eq!(id("x@1"), "\"x@1\"");
        assert_eq!(id("Zin_0"), "Zin_0");
    }

    #[test]
    fn f1_snapshot() {
        let g = build_output_graph(&fixtures::f1_sst(), &UpWord::parse("ab#(a)^w").unwrap(), 4, DEFAULT_CAP).unwrap();
        let dot = output_graph_dot(&g);
        let expected = include_str!("../tests/data/f1_ab#a_h4.dot");
        assert_eq!(dot, expected);
    }
}
