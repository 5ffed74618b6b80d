use std::fmt::Write;

use super::edges::EdgeKind;
use super::truncation::Truncation;
use crate::system::{PushdownSystem, Run};

fn node_name(run: &Run) -> String {
    let steps = run.steps();
    let idx: Vec<String> = steps.iter().map(|d| d.to_string()).collect();
    format!("n{}_{}", run.len(), idx.join("_"))
}

/// DOT text for a truncation. Plus edges are not drawn.
pub fn to_dot(sys: &PushdownSystem, t: &Truncation) -> String {
    let mut out = String::from("digraph npt {\n");
    for node in &t.nodes {
        let last = node.last();
        let label = format!(
            "{}|{}|{}",
            sys.state_name(last.state),
            last.width(),
            sys.format_word(last.stack.top_word())
        );
        writeln!(out, "  {} [label=\"{}\"];", node_name(node), label.replace('"', "\\\"")).expect("string write");
    }
    for &(s, d, kind) in &t.edges {
        let (a, b) = (node_name(&t.nodes[s]), node_name(&t.nodes[d]));
        match kind {
            EdgeKind::Delta(i) => writeln!(out, "  {a} -> {b} [label=\"{i}\"];"),
            EdgeKind::Jump => writeln!(out, "  {a} -> {b} [style=dashed];"),
            EdgeKind::Plus => Ok(()),
        }
        .expect("string write");
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::npt::truncate;
    use crate::system::testing::fig1;

    #[test]
    fn fig1_dot() {
        let sys = fig1();
        let text = to_dot(&sys, &truncate(&sys, 3).unwrap());
        let node_lines = text
            .lines()
            .filter(|l| l.contains("[label=") && !l.contains("->"))
            .count();
        assert_eq!(node_lines, 5);
        assert_eq!(text.matches("->").count(), 5);
        assert_eq!(text.matches("dashed").count(), 1);
        assert_eq!(text, to_dot(&sys, &truncate(&sys, 3).unwrap()));
        assert_eq!(to_dot(&sys, &truncate(&sys, 0).unwrap()).lines().count(), 3);
    }
}
