//! Line-graph recognition and root-graph extraction.
//!
//! Recognition follows the classical local-reconstruction approach: pick a
//! starting cell (a clique that must be one cell of a Krausz decomposition,
//! located through the odd-triangle case analysis), then propagate — once
//! one cell is fixed, the remaining edges at each covered vertex must form
//! exactly one further cell. The produced decomposition is validated
//! outright (edge-disjoint cliques covering all edges, every vertex in at
//! most two cells), so an accepted certificate is always sound.
//!
//! K3 is the one connected graph with two non-isomorphic roots (triangle
//! and claw); the triangle root is returned canonically.

use super::AntiGraph;

/// Certificate that a graph is a line graph: edge-disjoint cliques covering
/// the edge set, every vertex in exactly two cliques after padding with
/// empty cliques (padding assigns fresh clique indices in vertex order).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KrauszDecomposition {
    pub cliques: Vec<Vec<usize>>,
    /// vertex -> exactly two clique indices (sorted)
    pub membership: Vec<[usize; 2]>,
}

/// Graph whose line graph is the source graph; edge `i` corresponds to the
/// source vertex `edge_labels[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootGraph {
    pub vertex_count: usize,
    pub edges: Vec<(usize, usize)>,
    pub edge_labels: Vec<usize>,
}

impl RootGraph {
    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .filter(|&&(a, b)| a == v || b == v)
            .count()
    }

    pub fn to_dot(&self, edge_names: Option<&[String]>) -> String {
        let mut out = String::from("graph root {\n");
        for v in 0..self.vertex_count {
            out.push_str(&format!("  {v};\n"));
        }
        for (i, &(a, b)) in self.edges.iter().enumerate() {
            let label = edge_names
                .and_then(|l| l.get(self.edge_labels[i]).cloned())
                .unwrap_or_else(|| self.edge_labels[i].to_string());
            out.push_str(&format!("  {a} -- {b} [label=\"{label}\"];\n"));
        }
        out.push_str("}\n");
        out
    }
}

/// The line graph L(R): one vertex per edge of `root` (in edge order),
/// adjacent iff the edges share an endpoint.
pub fn line_graph_of(root: &RootGraph) -> AntiGraph {
    let m = root.edges.len();
    let mut g = AntiGraph::empty(m);
    for i in 0..m {
        for j in i + 1..m {
            let (a, b) = root.edges[i];
            let (c, d) = root.edges[j];
            if a == c || a == d || b == c || b == d {
                g.add_edge(i, j);
            }
        }
    }
    g
}

fn triangles_at(g: &AntiGraph, u: usize, v: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for w in g.neighbors(u) {
        if w != v && g.has_edge(w, v) {
            out.push([u, v, w]);
        }
    }
    out
}

/// A triangle is odd iff some vertex outside it is adjacent to an odd
/// number (1 or 3) of its vertices.
fn odd_triangle(g: &AntiGraph, t: &[usize; 3]) -> bool {
    let n = g.vertex_count();
    for w in 0..n {
        if t.contains(&w) {
            continue;
        }
        let cnt = t.iter().filter(|&&v| g.has_edge(w, v)).count();
        if cnt == 1 || cnt == 3 {
            return true;
        }
    }
    false
}

fn is_clique(g: &AntiGraph, nodes: &[usize]) -> bool {
    for (i, &u) in nodes.iter().enumerate() {
        for &v in &nodes[i + 1..] {
            if !g.has_edge(u, v) {
                return false;
            }
        }
    }
    true
}

/// Locate one cell of the (essentially unique) Krausz decomposition, or
/// None when the local structure already rules out a line graph.
fn select_starting_cell(g: &AntiGraph, first_edge: (usize, usize)) -> Option<Vec<usize>> {
    let mut edge = first_edge;
    let mut visited = std::collections::HashSet::new();
    loop {
        if !visited.insert((edge.0.min(edge.1), edge.0.max(edge.1))) {
            return None; // cycling through candidate edges: reject
        }
        let (a, b) = edge;
        let tri = triangles_at(g, a, b);
        match tri.len() {
            0 => return Some(vec![a.min(b), a.max(b)]),
            1 => {
                let c = tri[0][2];
                let ac = triangles_at(g, a, c).len();
                let bc = triangles_at(g, b, c).len();
                if ac == 1 {
                    if bc == 1 {
                        let mut cell = vec![a, b, c];
                        cell.sort_unstable();
                        return Some(cell);
                    }
                    edge = (b, c);
                } else {
                    edge = (a, c);
                }
            }
            r => {
                let odd: Vec<&[usize; 3]> =
                    tri.iter().filter(|t| odd_triangle(g, t)).collect();
                let s = odd.len();
                if r == 2 && s == 0 {
                    let mut cell = tri[0].to_vec();
                    cell.sort_unstable();
                    return Some(cell);
                }
                if s == r || s + 1 == r {
                    let mut nodes: Vec<usize> = odd
                        .iter()
                        .flat_map(|t| t.iter().copied())
                        .collect();
                    nodes.sort_unstable();
                    nodes.dedup();
                    if is_clique(g, &nodes) {
                        return Some(nodes);
                    }
                    return None;
                }
                return None;
            }
        }
    }
}

/// Propagate from the starting cell: the remaining edges at any covered
/// vertex must form one further cell together with that vertex.
fn find_partition(g: &AntiGraph, starting_cell: Vec<usize>) -> Option<Vec<Vec<usize>>> {
    let n = g.vertex_count();
    let mut remaining = g.clone();
    let remove_cell_edges = |gr: &mut AntiGraph, cell: &[usize]| {
        for (i, &u) in cell.iter().enumerate() {
            for &v in &cell[i + 1..] {
                let words = gr.words;
                gr.adj[u * words + v / 64] &= !(1 << (v % 64));
                gr.adj[v * words + u / 64] &= !(1 << (u % 64));
            }
        }
    };
    remove_cell_edges(&mut remaining, &starting_cell);
    let mut cells = vec![starting_cell.clone()];
    let mut stack: Vec<usize> = starting_cell;
    let mut edges_left = remaining.edge_count();
    while edges_left > 0 {
        let u = stack.pop()?; // empty stack with edges left: not reachable => reject
        let nbrs = remaining.neighbors(u);
        if nbrs.is_empty() {
            continue;
        }
        let mut cell = vec![u];
        cell.extend(nbrs);
        cell.sort_unstable();
        if !is_clique(g, &cell) {
            return None;
        }
        remove_cell_edges(&mut remaining, &cell);
        edges_left = remaining.edge_count();
        stack.extend(cell.iter().copied());
        cells.push(cell);
    }
    let _ = n;
    Some(cells)
}

/// Check the Krausz properties on unpadded cells: each vertex in at most
/// two cells and every edge covered exactly once.
fn validate_cells(g: &AntiGraph, cells: &[Vec<usize>]) -> bool {
    let n = g.vertex_count();
    let mut count = vec![0usize; n];
    let mut covered = std::collections::HashSet::new();
    for cell in cells {
        for (i, &u) in cell.iter().enumerate() {
            count[u] += 1;
            for &v in &cell[i + 1..] {
                if !g.has_edge(u, v) {
                    return false;
                }
                if !covered.insert((u.min(v), u.max(v))) {
                    return false; // edge covered twice
                }
            }
        }
    }
    if covered.len() != g.edge_count() {
        return false;
    }
    count.iter().all(|&c| c <= 2)
}

/// Pad with fresh empty cliques (vertex order) so every vertex is in
/// exactly two cliques, and record the membership map.
fn pad_and_finish(n: usize, mut cells: Vec<Vec<usize>>) -> KrauszDecomposition {
    let mut membership: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (ci, cell) in cells.iter().enumerate() {
        for &v in cell {
            membership[v].push(ci);
        }
    }
    for v in 0..n {
        while membership[v].len() < 2 {
            membership[v].push(cells.len());
            cells.push(Vec::new());
        }
    }
    let membership = membership
        .into_iter()
        .map(|mut m| {
            m.sort_unstable();
            [m[0], m[1]]
        })
        .collect();
    KrauszDecomposition {
        cliques: cells,
        membership,
    }
}

/// Recognize whether a connected graph is a line graph; returns the Krausz
/// certificate if so. The caller must split components first; the
/// single-vertex graph is accepted (line graph of a single edge).
pub fn recognize_line_graph(g: &AntiGraph) -> Option<KrauszDecomposition> {
    let n = g.vertex_count();
    if n == 0 {
        return None;
    }
    debug_assert_eq!(
        super::connected_components(g).len(),
        1,
        "recognize_line_graph requires a connected input"
    );
    if n == 1 {
        return Some(pad_and_finish(1, Vec::new()));
    }
    // K3's two Krausz decompositions: return the triangle root canonically.
    if n == 3 && g.is_complete() {
        return Some(pad_and_finish(
            3,
            vec![vec![0, 1], vec![1, 2], vec![0, 2]],
        ));
    }
    let first_edge = (0..n)
        .find_map(|u| g.neighbors(u).first().map(|&v| (u, v)))
        .expect("connected graph with >= 2 vertices has an edge");
    let start = select_starting_cell(g, first_edge)?;
    let cells = find_partition(g, start)?;
    if !validate_cells(g, &cells) {
        return None;
    }
    Some(pad_and_finish(n, cells))
}

/// Root graph of a Krausz decomposition: one vertex per clique, one edge
/// per source vertex joining its two cliques.
pub fn root_graph(k: &KrauszDecomposition) -> RootGraph {
    let mut edges = Vec::with_capacity(k.membership.len());
    let mut edge_labels = Vec::with_capacity(k.membership.len());
    let mut seen = std::collections::HashSet::new();
    for (v, &[c1, c2]) in k.membership.iter().enumerate() {
        assert!(c1 != c2, "vertex {v} assigned twice to one clique");
        assert!(
            seen.insert((c1, c2)),
            "parallel root edge for vertex {v}"
        );
        edges.push((c1, c2));
        edge_labels.push(v);
    }
    RootGraph {
        vertex_count: k.cliques.len(),
        edges,
        edge_labels,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p3_is_line_graph_of_p4() {
        let g = AntiGraph::from_edges(3, &[(0, 1), (1, 2)]);
        let k = recognize_line_graph(&g).unwrap();
        let r = root_graph(&k);
        assert_eq!(r.vertex_count, 4);
        assert_eq!(r.edges.len(), 3);
        // path: two vertices of degree 1, two of degree 2
        let mut degs: Vec<usize> = (0..4).map(|v| r.degree(v)).collect();
        degs.sort_unstable();
        assert_eq!(degs, vec![1, 1, 2, 2]);
    }

    #[test]
    fn claw_is_rejected() {
        let g = AntiGraph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]);
        assert!(recognize_line_graph(&g).is_none());
    }

    #[test]
    fn k3_triangle_root() {
        let g = AntiGraph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]);
        let k = recognize_line_graph(&g).unwrap();
        let r = root_graph(&k);
        assert_eq!(r.vertex_count, 3);
        assert_eq!(r.edges.len(), 3);
        assert!((0..3).all(|v| r.degree(v) == 2));
    }

    #[test]
    fn single_vertex_root_is_one_edge() {
        let g = AntiGraph::empty(1);
        let k = recognize_line_graph(&g).unwrap();
        assert_eq!(k.cliques.len(), 2);
        assert!(k.cliques.iter().all(|c| c.is_empty()));
        let r = root_graph(&k);
        assert_eq!(r.vertex_count, 2);
        assert_eq!(r.edges, vec![(0, 1)]);
        assert_eq!(r.degree(0), 1);
        assert_eq!(r.degree(1), 1);
    }

    #[test]
    fn k4_is_line_graph_of_star() {
        let g = AntiGraph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        let k = recognize_line_graph(&g).unwrap();
        let r = root_graph(&k);
        // K4 = L(K_{1,4}): root is a star on 5 vertices
        assert_eq!(r.vertex_count, 5);
        let mut degs: Vec<usize> = (0..5).map(|v| r.degree(v)).collect();
        degs.sort_unstable();
        assert_eq!(degs, vec![1, 1, 1, 1, 4]);
    }

    #[test]
    fn roundtrip_line_of_root_matches() {
        for edges in [
            vec![(0, 1), (1, 2), (2, 3), (3, 0)], // C4 -> L(C4) = C4
            vec![(0, 1), (1, 2), (2, 0), (2, 3)], // paw
            vec![(0, 1), (1, 2), (1, 3), (3, 4), (3, 5)],
        ] {
            let nv = edges.iter().flat_map(|&(a, b)| [a, b]).max().unwrap() + 1;
            let root_in = RootGraph {
                vertex_count: nv,
                edges: edges.clone(),
                edge_labels: (0..edges.len()).collect(),
            };
            let lg = line_graph_of(&root_in);
            let k = recognize_line_graph(&lg).unwrap();
            let r = root_graph(&k);
            let lg2 = line_graph_of(&r);
            // edge_labels give the isomorphism: vertex i of lg2 corresponds
            // to source vertex r.edge_labels[i]
            assert_eq!(lg2.vertex_count(), lg.vertex_count());
            for i in 0..lg2.vertex_count() {
                for j in 0..lg2.vertex_count() {
                    if i != j {
                        assert_eq!(
                            lg2.has_edge(i, j),
                            lg.has_edge(r.edge_labels[i], r.edge_labels[j]),
                            "mismatch at {i},{j} for root {edges:?}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn diamond_is_line_graph_of_paw() {
        let g = AntiGraph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]);
        let k = recognize_line_graph(&g).unwrap();
        let r = root_graph(&k);
        assert_eq!(r.vertex_count, 4);
        let mut degs: Vec<usize> = (0..4).map(|v| r.degree(v)).collect();
        degs.sort_unstable();
        assert_eq!(degs, vec![1, 2, 2, 3]);
    }

    #[test]
    fn four_wheel_accepted_five_wheel_rejected() {
        // the 4-wheel is L(diamond); the 5-wheel's hub has degree 5, which
        // cannot be split into two cliques along a 5-cycle
        let w4 = AntiGraph::from_edges(
            5,
            &[(0, 1), (1, 2), (2, 3), (3, 0), (4, 0), (4, 1), (4, 2), (4, 3)],
        );
        assert!(recognize_line_graph(&w4).is_some());
        let w5 = AntiGraph::from_edges(
            6,
            &[
                (0, 1),
                (1, 2),
                (2, 3),
                (3, 4),
                (4, 0),
                (5, 0),
                (5, 1),
                (5, 2),
                (5, 3),
                (5, 4),
            ],
        );
        assert!(recognize_line_graph(&w5).is_none());
    }
}
