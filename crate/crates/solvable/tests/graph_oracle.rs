//! Line-graph recognition against the brute-force clique-cover oracle on
//! small graphs, plus round-trip and quotient invariants. The exhaustive
//! seven-vertex run and the figure fixtures live in the acceptance suite.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use solvable::hamgraph::{
    connected_components, krausz::line_graph_of, quotient_graph, recognize_line_graph,
    root_graph, twin_partition, AntiGraph,
};
use solvable::oracle::{brute_force_is_line_graph, connected_graph_masks, graph_from_mask};

#[test]
fn recognizer_agrees_with_brute_force_up_to_six_vertices() {
    for n in 1..=6usize {
        let mut checked = 0u64;
        for mask in connected_graph_masks(n) {
            let g = graph_from_mask(n, mask);
            let fast = recognize_line_graph(&g).is_some();
            let slow = brute_force_is_line_graph(&g);
            assert_eq!(fast, slow, "disagreement on n={n} mask={mask:#b}");
            checked += 1;
        }
        assert!(checked > 0);
    }
}

#[test]
fn recognized_certificates_are_valid_krausz() {
    for n in 2..=6usize {
        for mask in connected_graph_masks(n) {
            let g = graph_from_mask(n, mask);
            if let Some(k) = recognize_line_graph(&g) {
                // membership: exactly two cliques per vertex
                assert_eq!(k.membership.len(), n);
                // cliques edge-disjoint and covering
                let mut covered = std::collections::HashSet::new();
                for cell in &k.cliques {
                    for (i, &u) in cell.iter().enumerate() {
                        for &v in &cell[i + 1..] {
                            assert!(g.has_edge(u, v));
                            assert!(covered.insert((u.min(v), u.max(v))));
                        }
                    }
                }
                assert_eq!(covered.len(), g.edge_count());
            }
        }
    }
}

#[test]
fn roundtrip_on_random_line_graphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..300 {
        // random connected root graph with up to 9 vertices
        let nv = rng.gen_range(2..=9usize);
        let mut edges: Vec<(usize, usize)> = Vec::new();
        for v in 1..nv {
            let u = rng.gen_range(0..v);
            edges.push((u, v));
        }
        for _ in 0..rng.gen_range(0..4) {
            let u = rng.gen_range(0..nv);
            let v = rng.gen_range(0..nv);
            if u != v && !edges.contains(&(u.min(v), u.max(v))) {
                edges.push((u.min(v), u.max(v)));
            }
        }
        let root_in = solvable::hamgraph::RootGraph {
            vertex_count: nv,
            edges: edges.clone(),
            edge_labels: (0..edges.len()).collect(),
        };
        let lg = line_graph_of(&root_in);
        if connected_components(&lg).len() != 1 {
            continue; // disconnected line graph (root had a cut structure)
        }
        let k = recognize_line_graph(&lg)
            .unwrap_or_else(|| panic!("line graph of {edges:?} rejected"));
        let r = root_graph(&k);
        let lg2 = line_graph_of(&r);
        // the edge labels give the isomorphism back to lg
        for i in 0..lg2.vertex_count() {
            for j in 0..lg2.vertex_count() {
                if i != j {
                    assert_eq!(
                        lg2.has_edge(i, j),
                        lg.has_edge(r.edge_labels[i], r.edge_labels[j])
                    );
                }
            }
        }
    }
}

#[test]
fn quotient_of_quotient_is_twin_free() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..200 {
        let n = rng.gen_range(1..=9usize);
        let mut g = AntiGraph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(0.4) {
                    g.add_edge(u, v);
                }
            }
        }
        let t = twin_partition(&g);
        let q = quotient_graph(&g, &t).unwrap();
        // among non-isolated vertices the quotient has no twin pair
        let t2 = twin_partition(&q);
        for class in &t2.classes {
            let non_isolated: Vec<_> =
                class.iter().filter(|&&v| q.degree(v) > 0).collect();
            assert!(
                non_isolated.len() <= 1,
                "quotient retains twins among non-isolated vertices"
            );
        }
    }
}
