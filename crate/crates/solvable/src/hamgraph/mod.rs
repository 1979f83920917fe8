//! Anti-compatibility graph machinery: construction from a Hamiltonian,
//! connected components, twin classes, quotient graphs, and line-graph
//! recognition via Krausz decompositions (see [`krausz`]).

use std::collections::HashMap;

use thiserror::Error;

use crate::pauli::{Hamiltonian, PauliOp};

pub mod krausz;

pub use krausz::{recognize_line_graph, root_graph, KrauszDecomposition, RootGraph};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("classes do not form a partition of the vertex set")]
    InvalidPartition,
    #[error("classes are not twin classes: cross edges between {0} and {1} are inconsistent")]
    InconsistentCrossEdges(usize, usize),
}

/// Undirected graph with one vertex per Pauli term; edges join anticommuting
/// pairs. Adjacency rows are packed bitsets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AntiGraph {
    n: usize,
    words: usize,
    adj: Vec<u64>, // n rows of `words` words
    /// vertex -> index into the source Hamiltonian's term list
    pub vertex_labels: Vec<usize>,
}

impl AntiGraph {
    pub fn empty(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        AntiGraph {
            n,
            words,
            adj: vec![0; n * words],
            vertex_labels: (0..n).collect(),
        }
    }

    /// Build from an explicit edge list (used by tests and fixtures).
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = AntiGraph::empty(n);
        for &(u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u != v, "no self-loops");
        assert!(u < self.n && v < self.n);
        self.adj[u * self.words + v / 64] |= 1 << (v % 64);
        self.adj[v * self.words + u / 64] |= 1 << (u % 64);
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        (self.adj[u * self.words + v / 64] >> (v % 64)) & 1 == 1
    }

    pub fn row(&self, u: usize) -> &[u64] {
        &self.adj[u * self.words..(u + 1) * self.words]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.row(u).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|u| self.degree(u)).sum::<usize>() / 2
    }

    pub fn neighbors(&self, u: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for (w, &bits) in self.row(u).iter().enumerate() {
            let mut b = bits;
            while b != 0 {
                let q = b.trailing_zeros() as usize;
                out.push(w * 64 + q);
                b &= b - 1;
            }
        }
        out
    }

    pub fn is_empty_graph(&self) -> bool {
        self.adj.iter().all(|&w| w == 0)
    }

    pub fn is_complete(&self) -> bool {
        (0..self.n).all(|u| self.degree(u) == self.n - 1)
    }

    /// Induced subgraph on `vertices` (in the given order); vertex labels
    /// are mapped through.
    pub fn induced(&self, vertices: &[usize]) -> AntiGraph {
        let mut g = AntiGraph::empty(vertices.len());
        g.vertex_labels = vertices
            .iter()
            .map(|&v| self.vertex_labels[v])
            .collect();
        for (i, &u) in vertices.iter().enumerate() {
            for (j, &v) in vertices.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    /// DOT-format export; `labels` supplies the text per vertex (falls back
    /// to the vertex index).
    pub fn to_dot(&self, labels: Option<&[String]>) -> String {
        let mut out = String::from("graph anti_compatibility {\n");
        for v in 0..self.n {
            let label = labels
                .and_then(|l| l.get(v).cloned())
                .unwrap_or_else(|| v.to_string());
            out.push_str(&format!("  {v} [label=\"{label}\"];\n"));
        }
        for u in 0..self.n {
            for v in u + 1..self.n {
                if self.has_edge(u, v) {
                    out.push_str(&format!("  {u} -- {v};\n"));
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

/// One vertex per Hamiltonian term; edge iff the terms anticommute.
pub fn build_anti_graph(h: &Hamiltonian) -> AntiGraph {
    anti_graph_of(&h.ops())
}

/// Anti-compatibility graph of an explicit operator list.
pub fn anti_graph_of(ops: &[&PauliOp]) -> AntiGraph {
    let n = ops.len();
    let mut g = AntiGraph::empty(n);
    for i in 0..n {
        for j in i + 1..n {
            if !ops[i].commutes_with(ops[j]) {
                g.add_edge(i, j);
            }
        }
    }
    g
}

/// Connected components as sorted vertex lists, ordered by smallest member.
pub fn connected_components(g: &AntiGraph) -> Vec<Vec<usize>> {
    let n = g.vertex_count();
    let mut seen = vec![false; n];
    let mut comps = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut stack = vec![start];
        let mut comp = Vec::new();
        seen[start] = true;
        while let Some(u) = stack.pop() {
            comp.push(u);
            for v in g.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        comp.sort_unstable();
        comps.push(comp);
    }
    comps
}

/// Disjoint classes of mutually twin vertices (identical open
/// neighborhoods), each sorted, ordered by smallest member. Twin vertices
/// are necessarily non-adjacent, so grouping rows by equality suffices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwinPartition {
    pub classes: Vec<Vec<usize>>,
}

pub fn twin_partition(g: &AntiGraph) -> TwinPartition {
    let mut groups: HashMap<&[u64], Vec<usize>> = HashMap::new();
    for v in 0..g.vertex_count() {
        groups.entry(g.row(v)).or_default().push(v);
    }
    let mut classes: Vec<Vec<usize>> = groups.into_values().collect();
    for c in &mut classes {
        c.sort_unstable();
    }
    classes.sort_by_key(|c| c[0]);
    TwinPartition { classes }
}

/// Quotient by a twin partition: one vertex per class, classes adjacent iff
/// their members are. Validates that `t` is a partition and that cross
/// edges are all-or-nothing.
pub fn quotient_graph(g: &AntiGraph, t: &TwinPartition) -> Result<AntiGraph, GraphError> {
    let n = g.vertex_count();
    let mut seen = vec![false; n];
    for class in &t.classes {
        for &v in class {
            if v >= n || seen[v] {
                return Err(GraphError::InvalidPartition);
            }
            seen[v] = true;
        }
    }
    if !seen.iter().all(|&s| s) {
        return Err(GraphError::InvalidPartition);
    }
    let k = t.classes.len();
    let mut q = AntiGraph::empty(k);
    q.vertex_labels = t
        .classes
        .iter()
        .map(|c| g.vertex_labels[c[0]])
        .collect();
    for i in 0..k {
        for j in i + 1..k {
            let adj = g.has_edge(t.classes[i][0], t.classes[j][0]);
            for &u in &t.classes[i] {
                for &v in &t.classes[j] {
                    if g.has_edge(u, v) != adj {
                        return Err(GraphError::InconsistentCrossEdges(i, j));
                    }
                }
            }
            if adj {
                q.add_edge(i, j);
            }
        }
    }
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::WeightedTerm;

    fn ham(n: usize, strs: &[&str]) -> Hamiltonian {
        Hamiltonian::new(
            n,
            strs.iter()
                .enumerate()
                .map(|(i, s)| {
                    WeightedTerm::new(PauliOp::parse(s, n).unwrap(), 1.0 + i as f64)
                })
                .collect(),
        )
    }

    #[test]
    fn triangle_from_single_qubit_paulis() {
        let g = build_anti_graph(&ham(1, &["X0", "Y0", "Z0"]));
        assert!(g.is_complete());
        assert_eq!(g.edge_count(), 3);
    }

    #[test]
    fn commuting_pair_no_edges() {
        let g = build_anti_graph(&ham(2, &["Z0", "Z1"]));
        assert!(g.is_empty_graph());
    }

    #[test]
    fn path_graph_z0_x0_z0z1() {
        let g = build_anti_graph(&ham(2, &["Z0", "Z0 Z1", "X0"]));
        // X0 (vertex 2) adjacent to both Z0 and Z0Z1; those two commute
        assert!(g.has_edge(0, 2));
        assert!(g.has_edge(1, 2));
        assert!(!g.has_edge(0, 1));
    }

    #[test]
    fn components_empty_and_complete() {
        let g = AntiGraph::empty(5);
        assert_eq!(connected_components(&g).len(), 5);
        let k3 = AntiGraph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]);
        let comps = connected_components(&k3);
        assert_eq!(comps, vec![vec![0, 1, 2]]);
    }

    #[test]
    fn twins_on_path() {
        let g = build_anti_graph(&ham(2, &["Z0", "Z0 Z1", "X0"]));
        let t = twin_partition(&g);
        assert_eq!(t.classes, vec![vec![0, 1], vec![2]]);
        let q = quotient_graph(&g, &t).unwrap();
        assert_eq!(q.vertex_count(), 2);
        assert_eq!(q.edge_count(), 1);
    }

    #[test]
    fn k3_has_singleton_twins() {
        let g = AntiGraph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]);
        let t = twin_partition(&g);
        assert_eq!(t.classes.len(), 3);
    }

    #[test]
    fn twin_free_quotient_is_isomorphic() {
        let g = AntiGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]);
        let t = twin_partition(&g);
        // P4 is twin-free
        assert_eq!(t.classes.len(), 4);
        let q = quotient_graph(&g, &t).unwrap();
        assert_eq!(q.edge_count(), g.edge_count());
    }

    #[test]
    fn quotient_rejects_garbage() {
        let g = AntiGraph::from_edges(3, &[(0, 1)]);
        let bad = TwinPartition {
            classes: vec![vec![0], vec![1]],
        };
        assert_eq!(
            quotient_graph(&g, &bad),
            Err(GraphError::InvalidPartition)
        );
        let not_twins = TwinPartition {
            classes: vec![vec![0, 2], vec![1]],
        };
        // 0 adjacent to 1 but 2 is not: inconsistent cross edges
        assert!(quotient_graph(&g, &not_twins).is_err());
    }

    #[test]
    fn twins_commute_when_pulled_back() {
        // any two twins anticommute with the same set, hence commute
        let h = ham(3, &["Z0", "Z0 Z1", "X0", "X0 X1", "Z2"]);
        let g = build_anti_graph(&h);
        let t = twin_partition(&g);
        let ops = h.ops();
        for class in &t.classes {
            for (i, &a) in class.iter().enumerate() {
                for &b in &class[i + 1..] {
                    assert!(ops[a].commutes_with(ops[b]));
                }
            }
        }
    }
}
