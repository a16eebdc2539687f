//! Deterministic DOT output for tree balls and Cayley balls: nodes sorted
//! by canonical label, edges sorted by index pairs.

use npc_core::error::{Error, Result};

pub struct Graph {
    pub labels: Vec<String>,
    pub edges: Vec<(usize, usize)>,
}

impl Graph {
    /// Reorder nodes by canonical label and remap the edges.
    pub fn canonicalize(mut self) -> Graph {
        let mut order: Vec<usize> = (0..self.labels.len()).collect();
        order.sort_by(|&a, &b| self.labels[a].cmp(&self.labels[b]));
        let mut position = vec![0usize; self.labels.len()];
        for (new, &old) in order.iter().enumerate() {
            position[old] = new;
        }
        let labels = order.iter().map(|&i| self.labels[i].clone()).collect();
        for e in &mut self.edges {
            let (a, b) = (position[e.0], position[e.1]);
            *e = (a.min(b), a.max(b));
        }
        self.edges.sort_unstable();
        self.edges.dedup();
        Graph { labels, edges: self.edges }
    }

    pub fn to_dot(&self, name: &str) -> String {
        let mut out = String::new();
        out.push_str(&format!("graph {name} {{\n"));
        for (i, l) in self.labels.iter().enumerate() {
            out.push_str(&format!("  {i} [label=\"{}\"];\n", l.replace('"', "\\\"")));
        }
        for &(a, b) in &self.edges {
            out.push_str(&format!("  {a} -- {b};\n"));
        }
        out.push_str("}\n");
        out
    }
}

/// Write DOT to a file, or to stdout when the path is "-".
pub fn emit(graph: &Graph, path: &str, name: &str) -> Result<()> {
    if graph.labels.is_empty() {
        return Err(Error::domain("refusing to emit an empty graph"));
    }
    let text = graph.to_dot(name);
    if path == "-" {
        print!("{text}");
        Ok(())
    } else {
        std::fs::write(path, text).map_err(|e| Error::parse(format!("cannot write {path}: {e}")))
    }
}
