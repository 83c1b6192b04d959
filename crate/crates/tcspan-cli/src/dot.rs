//! Graphviz export: emitters light, collectors dark, vertices playing both
//! roles in a third shade; spanner edges bold with their labels, discarded
//! edges dashed and dimmed.

use std::collections::BTreeSet;

use tcspan::core::{EdgeId, SimpleClique, VertexId};

pub fn render(
    c: &SimpleClique,
    spanner: &BTreeSet<EdgeId>,
    emitters: &BTreeSet<VertexId>,
    collectors: &BTreeSet<VertexId>,
) -> String {
    let mut out = String::from("graph tcspan {\n");
    out.push_str("  layout=circo;\n");
    out.push_str("  node [style=filled, fontname=\"Helvetica\"];\n");
    for v in 0..c.n() {
        let style = match (emitters.contains(&v), collectors.contains(&v)) {
            (true, true) => " [fillcolor=\"darkolivegreen3\"]",
            (true, false) => " [fillcolor=\"lightgoldenrod1\"]",
            (false, true) => " [fillcolor=\"gray35\", fontcolor=\"white\"]",
            (false, false) => " [fillcolor=\"white\"]",
        };
        out.push_str(&format!("  {v}{style};\n"));
    }
    for (e, l) in c.labeled_edges() {
        let style = if spanner.contains(&e) {
            "style=bold".to_string()
        } else {
            "style=dashed, color=\"gray60\", fontcolor=\"gray60\"".to_string()
        };
        out.push_str(&format!("  {} -- {} [label=\"{l}\", {style}];\n", e.u(), e.v()));
    }
    out.push_str("}\n");
    out
}
