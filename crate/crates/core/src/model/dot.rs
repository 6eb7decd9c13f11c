use std::fmt::Write;

use super::{MegaModel, NodeKind};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// GraphViz rendering: one statement per node and per edge, in model order.
pub fn export_dot(model: &MegaModel) -> String {
    let mut out = String::from("digraph model {\n");
    for n in model.nodes() {
        let mut attrs = format!("label={}", quote(&format!("{}@{}", n.label, n.screen)));
        if model.end_nodes().contains(&n.id) {
            attrs.push_str(", shape=doublecircle");
        } else if n.kind == NodeKind::Sink {
            attrs.push_str(", shape=octagon");
        }
        if n.id == model.start() {
            attrs.push_str(", style=bold");
        }
        let _ = writeln!(out, "  {} [{attrs}];", quote(&n.id));
    }
    for e in model.edges() {
        let _ = writeln!(out, "  {} -> {} [label={}];", quote(&e.source), quote(&e.target), quote(e.key.name()));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::tests::graph;
    use crate::tvsim::Key;

    #[test]
    fn single_node() {
        let dot = export_dot(&graph(&["a"], &[], "a", &[]));
        assert_eq!(dot, "digraph model {\n  \"a\" [label=\"a@s\", style=bold];\n}\n");
    }

    #[test]
    fn end_nodes_and_escaping() {
        let g = graph(&["a", "say \"hi\""], &[("a", Key::Ok, "say \"hi\"")], "a", &["say \"hi\""]);
        let dot = export_dot(&g);
        assert!(dot.contains(r#""say \"hi\"" [label="say \"hi\"@s", shape=doublecircle];"#));
        assert!(dot.contains(r#""a" -> "say \"hi\"" [label="OK"];"#));
    }
}
