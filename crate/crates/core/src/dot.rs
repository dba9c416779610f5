//! Graphviz rendering.

use std::fmt::Write;
use std::path::Path;

use crate::automata::Fst;
use crate::io::{write_atomic, IoError};

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// DOT text for `a`: one node per state, finals drawn as double circles,
/// edges labelled `in:out`.
pub fn to_dot(a: &Fst) -> String {
    let sym = a.symbols();
    let mut out = String::from("digraph fst {\n  rankdir=LR;\n  node [shape=circle];\n");
    out += "  __start [shape=point];\n";
    let _ = writeln!(out, "  __start -> {};", a.start());
    for q in a.states() {
        let shape = if a.is_final(q) { "doublecircle" } else { "circle" };
        let _ = writeln!(out, "  {q} [shape={shape}];");
    }
    for t in a.transitions() {
        let label = format!("{}:{}", sym.label(t.input), sym.label(t.output));
        let _ = writeln!(out, "  {} -> {} [label=\"{}\"];", t.src, t.dst, escape(&label));
    }
    out += "}\n";
    out
}

pub fn export_dot(a: &Fst, path: &Path) -> Result<(), IoError> {
    write_atomic(path, to_dot(a).as_bytes())
}
