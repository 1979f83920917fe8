//! Brute-force reference implementations for the test suites.
//!
//! Everything here is deliberately independent of the production code
//! paths it is used to check: line-graph membership is decided by exhaustive
//! edge-clique-cover search straight from the definition, and fragment
//! spectra come from dense diagonalization. Kept in the library (rather
//! than per-test-target copies) so the unit, integration, and acceptance
//! suites share one implementation.

use rand::prelude::*;

use crate::hamgraph::AntiGraph;
use crate::pauli::{PauliOp, WeightedTerm};

/// Exhaustive search for a Krausz decomposition: can the edge set be
/// partitioned into cliques with every vertex in at most two of them?
/// Straight from the definition; exponential, for small graphs only.
pub fn brute_force_is_line_graph(g: &AntiGraph) -> bool {
    let n = g.vertex_count();
    assert!(n <= 16, "brute force oracle is for small graphs");
    if n == 0 {
        return false;
    }
    let mut adj = vec![0u16; n];
    for u in 0..n {
        for v in 0..n {
            if u != v && g.has_edge(u, v) {
                adj[u] |= 1 << v;
            }
        }
    }
    let mut uncovered: Vec<u16> = adj.clone();
    let mut cell_count = vec![0u8; n];
    search(&adj, &mut uncovered, &mut cell_count, n)
}

fn search(adj: &[u16], uncovered: &mut [u16], cell_count: &mut [u8], n: usize) -> bool {
    // find the lowest uncovered edge
    let mut edge = None;
    'outer: for u in 0..n {
        let rest = uncovered[u] >> (u + 1) << (u + 1);
        if rest != 0 {
            let v = rest.trailing_zeros() as usize;
            edge = Some((u, v));
            break 'outer;
        }
    }
    let Some((u, v)) = edge else {
        return true; // all edges covered
    };
    if cell_count[u] >= 2 || cell_count[v] >= 2 {
        return false;
    }
    // candidate cells: {u, v} plus any clique inside their common
    // uncovered neighborhood whose members still have spare cell slots
    let mut pool: Vec<usize> = (0..n)
        .filter(|&w| {
            w != u
                && w != v
                && (adj[u] >> w) & 1 == 1
                && (adj[v] >> w) & 1 == 1
                && (uncovered[u] >> w) & 1 == 1
                && (uncovered[v] >> w) & 1 == 1
                && cell_count[w] < 2
        })
        .collect();
    pool.sort_unstable();
    let mut cell = vec![u, v];
    try_cells(adj, uncovered, cell_count, n, &mut cell, &pool, 0)
}

fn try_cells(
    adj: &[u16],
    uncovered: &mut [u16],
    cell_count: &mut [u8],
    n: usize,
    cell: &mut Vec<usize>,
    pool: &[usize],
    from: usize,
) -> bool {
    // try the current cell as-is
    if cell_is_usable(uncovered, cell) {
        apply_cell(uncovered, cell_count, cell, true);
        if search(adj, uncovered, cell_count, n) {
            apply_cell(uncovered, cell_count, cell, false);
            return true;
        }
        apply_cell(uncovered, cell_count, cell, false);
    }
    // or extend it with a further pool vertex keeping it a clique with
    // all its edges uncovered
    for (i, &w) in pool.iter().enumerate().skip(from) {
        if cell
            .iter()
            .all(|&x| (adj[x] >> w) & 1 == 1 && (uncovered[x] >> w) & 1 == 1)
        {
            cell.push(w);
            if try_cells(adj, uncovered, cell_count, n, cell, pool, i + 1) {
                cell.pop();
                return true;
            }
            cell.pop();
        }
    }
    false
}

fn cell_is_usable(uncovered: &[u16], cell: &[usize]) -> bool {
    for (i, &a) in cell.iter().enumerate() {
        for &b in &cell[i + 1..] {
            if (uncovered[a] >> b) & 1 == 0 {
                return false;
            }
        }
    }
    true
}

fn apply_cell(uncovered: &mut [u16], cell_count: &mut [u8], cell: &[usize], cover: bool) {
    for (i, &a) in cell.iter().enumerate() {
        for &b in &cell[i + 1..] {
            if cover {
                uncovered[a] &= !(1 << b);
                uncovered[b] &= !(1 << a);
            } else {
                uncovered[a] |= 1 << b;
                uncovered[b] |= 1 << a;
            }
        }
        if cover {
            cell_count[a] += 1;
        } else {
            cell_count[a] -= 1;
        }
    }
}

/// All connected graphs on `n` labeled vertices, as edge-mask iterators.
pub fn connected_graph_masks(n: usize) -> impl Iterator<Item = u64> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| ((u + 1)..n).map(move |v| (u, v)))
        .collect();
    let count = pairs.len();
    (0u64..(1 << count)).filter_map(move |mask| {
        let mut adj = vec![0u32; n];
        for (i, &(u, v)) in pairs.iter().enumerate() {
            if (mask >> i) & 1 == 1 {
                adj[u] |= 1 << v;
                adj[v] |= 1 << u;
            }
        }
        // connectivity
        let mut seen = 1u32;
        let mut stack = vec![0usize];
        while let Some(u) = stack.pop() {
            let mut rest = adj[u] & !seen;
            while rest != 0 {
                let v = rest.trailing_zeros() as usize;
                seen |= 1 << v;
                stack.push(v);
                rest &= rest - 1;
            }
        }
        (seen.count_ones() as usize == n).then_some(mask)
    })
}

pub fn graph_from_mask(n: usize, mask: u64) -> AntiGraph {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| ((u + 1)..n).map(move |v| (u, v)))
        .collect();
    let edges: Vec<(usize, usize)> = pairs
        .iter()
        .enumerate()
        .filter(|(i, _)| (mask >> i) & 1 == 1)
        .map(|(_, &e)| e)
        .collect();
    AntiGraph::from_edges(n, &edges)
}

/// A Pauli realization of an arbitrary graph: vertex v becomes
/// X_v * prod_{u < v, u ~ v} Z_u, which anticommutes with vertex w exactly
/// when v ~ w. Uses one qubit per vertex.
pub fn realize_graph(g: &AntiGraph) -> Vec<PauliOp> {
    let n = g.vertex_count();
    (0..n)
        .map(|v| {
            let mut toks = vec![format!("X{v}")];
            for u in 0..v {
                if g.has_edge(u, v) {
                    toks.push(format!("Z{u}"));
                }
            }
            PauliOp::parse(&toks.join(" "), n).unwrap()
        })
        .collect()
}

/// Configuration for the random solvable-fragment generator.
#[derive(Debug, Clone)]
pub struct RandomFragmentConfig {
    pub max_qubits: usize,
    pub max_root_vertices: usize,
    pub max_symmetry_qubits: usize,
    /// Sometimes include the Jordan-Wigner chirality string as an extra
    /// symmetry, which manufactures residual parity relations.
    pub allow_chirality_symmetry: bool,
}

impl Default for RandomFragmentConfig {
    fn default() -> Self {
        RandomFragmentConfig {
            max_qubits: 8,
            max_root_vertices: 7,
            max_symmetry_qubits: 2,
            allow_chirality_symmetry: true,
        }
    }
}

/// Generate a random symmetry-augmented free-fermionic fragment: a random
/// connected root graph realized through Jordan-Wigner Majorana bilinears,
/// its terms dressed with random symmetry monomials on extra qubits (twin
/// copies included), plus free-standing symmetry terms.
pub fn random_sym_twc_ff_terms(
    rng: &mut impl Rng,
    cfg: &RandomFragmentConfig,
) -> Vec<WeightedTerm> {
    // random connected root graph
    let m = rng.gen_range(2..=cfg.max_root_vertices);
    let core_qubits = m.div_ceil(2);
    let sym_qubits = rng.gen_range(0..=cfg.max_symmetry_qubits.min(
        cfg.max_qubits.saturating_sub(core_qubits),
    ));
    let n = core_qubits + sym_qubits;
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for v in 1..m {
        let u = rng.gen_range(0..v);
        edges.push((u, v));
    }
    let extra = rng.gen_range(0..=m.min(3));
    for _ in 0..extra {
        let u = rng.gen_range(0..m);
        let v = rng.gen_range(0..m);
        if u != v && !edges.contains(&(u.min(v), u.max(v))) {
            edges.push((u.min(v), u.max(v)));
        }
    }

    // Jordan-Wigner Majoranas on the core qubits: gamma_{2q} = Z..Z X_q,
    // gamma_{2q+1} = Z..Z Y_q
    let gamma = |k: usize| -> PauliOp {
        let q = k / 2;
        let mut toks: Vec<String> = (0..q).map(|j| format!("Z{j}")).collect();
        toks.push(format!("{}{q}", if k % 2 == 0 { 'X' } else { 'Y' }));
        PauliOp::parse(&toks.join(" "), n).unwrap()
    };
    let bilinear = |u: usize, w: usize| -> PauliOp {
        // i g_u g_w as a unit-phase string (sign absorbed by the caller's
        // random coefficient)
        gamma(u).mul(&gamma(w)).with_unit_phase()
    };

    // random symmetry monomial generators
    let mut sym_gens: Vec<PauliOp> = Vec::new();
    for q in 0..sym_qubits {
        let letter = if rng.gen_bool(0.5) { 'Z' } else { 'X' };
        sym_gens.push(PauliOp::single(n, core_qubits + q, letter));
    }
    if cfg.allow_chirality_symmetry && rng.gen_bool(0.4) {
        // the JW chirality string commutes with every bilinear
        let toks: Vec<String> = (0..core_qubits).map(|q| format!("Z{q}")).collect();
        sym_gens.push(PauliOp::parse(&toks.join(" "), n).unwrap());
    }
    let random_monomial = |rng: &mut dyn RngCore| -> PauliOp {
        let mut p = PauliOp::identity(n);
        for g in &sym_gens {
            if rng.gen_bool(0.5) {
                p = p.mul(g);
            }
        }
        p.with_unit_phase()
    };

    let mut terms: Vec<WeightedTerm> = Vec::new();
    let mut seen: std::collections::HashSet<String> = std::collections::HashSet::new();
    for &(u, w) in &edges {
        let base = bilinear(u, w);
        // one or more twin copies with distinct dressings
        let copies = if rng.gen_bool(0.3) { 2 } else { 1 };
        let mut used: Vec<PauliOp> = Vec::new();
        for _ in 0..copies {
            let dress = random_monomial(rng);
            if used.iter().any(|d| d == &dress) {
                continue;
            }
            used.push(dress.clone());
            let op = base.mul(&dress).with_unit_phase();
            if seen.insert(op.to_string()) {
                terms.push(WeightedTerm::new(op, random_coeff(rng)));
            }
        }
    }
    // free-standing symmetry terms
    let extras = rng.gen_range(0..=2);
    for _ in 0..extras {
        let op = random_monomial(rng);
        if !op.is_identity_string() && seen.insert(op.to_string()) {
            terms.push(WeightedTerm::new(op, random_coeff(rng)));
        }
    }
    terms
}

fn random_coeff(rng: &mut impl Rng) -> f64 {
    let mag = rng.gen_range(0.1..1.5);
    if rng.gen_bool(0.5) {
        mag
    } else {
        -mag
    }
}
