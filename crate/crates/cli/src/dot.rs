//! Graphviz output for Hasse diagrams.

use std::fmt::Write as _;

/// A bottom-to-top digraph with one node per label and one edge per
/// covering pair `(lower, upper)`.
pub fn hasse(name: &str, labels: &[String], covers: &[(usize, usize)]) -> String {
    let mut out = format!("digraph {name} {{\n  rankdir=BT;\n");
    for l in labels {
        writeln!(out, "  \"{l}\";").expect("write to string");
    }
    for &(a, b) in covers {
        writeln!(out, "  \"{}\" -> \"{}\";", labels[a], labels[b]).expect("write to string");
    }
    out.push_str("}\n");
    out
}
