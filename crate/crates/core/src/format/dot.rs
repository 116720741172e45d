//! Graphviz export of block graphs.

use std::collections::BTreeSet;
use std::fmt::Write;

use sha2::{Digest, Sha256};

use super::json::block_compact;
use crate::blockgraph::BlockGraph;
use crate::geometry::Block;

/// First 8 hex digits of the SHA-256 of the block's compact JSON.
pub fn block_hash(block: &Block) -> String {
    let digest = Sha256::digest(block_compact(block).as_bytes());
    digest[..4].iter().map(|b| format!("{b:02x}")).collect()
}

/// DOT text for `graph`. Vertices in `highlight` are filled.
pub fn graph_to_dot(graph: &BlockGraph, highlight: &[usize]) -> String {
    let marked: BTreeSet<usize> = highlight.iter().copied().collect();
    let [k, n] = graph.layer().span();
    let mut out = String::new();
    writeln!(out, "graph blocks {{").unwrap();
    writeln!(out, "  label=\"{} <{k} -> {n}>, d = {}\";", graph.layer().seq(), graph.target()).unwrap();
    writeln!(out, "  node [shape=box, fontname=monospace];").unwrap();
    for (v, block) in graph.vertices().iter().enumerate() {
        let style = if marked.contains(&v) {
            ", style=filled, fillcolor=\"#f4a261\""
        } else {
            ""
        };
        writeln!(out, "  v{v} [label=\"{}\"{style}];", block_hash(block)).unwrap();
    }
    for (u, v) in graph.edges() {
        writeln!(out, "  v{u} -- v{v};").unwrap();
    }
    out.push_str("}\n");
    out
}

/// One clique per line, vertices separated by spaces.
pub fn cliques_to_text(cliques: &[Vec<usize>]) -> String {
    cliques
        .iter()
        .map(|c| c.iter().map(|v| format!("v{v}")).collect::<Vec<_>>().join(" ") + "\n")
        .collect()
}
