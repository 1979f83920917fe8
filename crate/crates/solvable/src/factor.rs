//! Factorization of a symmetry-augmented fragment into Pauli symmetries,
//! per-component so-algebra generators, and symmetry polynomials.
//!
//! Pipeline: split off the terms that commute with everything (the constant
//! polynomial), split the rest into connected components, partition each
//! component into twin classes, pick the lowest-index representative per
//! class, recognize the quotient as a line graph and extract its root,
//! assign symmetry factors by spanning-tree gauge fixing (cycle products
//! become symmetries), build the minimal symmetry generating set, and
//! express every coefficient as a polynomial over it.
//!
//! The factorization also records, per component, the exact data the sector
//! solver needs: an orientation sign per root edge making the Pauli algebra
//! match the Majorana bilinear algebra phase-for-phase, and the residual
//! GF(2) relation (if any) that pins the fermion parity within a sector.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classify::{is_sym_variant, SolvabilityClass};
use crate::hamgraph::{
    anti_graph_of, connected_components, quotient_graph, recognize_line_graph, root_graph,
    twin_partition, RootGraph,
};
use crate::partition::Fragment;
use crate::pauli::gf2::{express_in_generators, independent_generators};
use crate::pauli::{PauliOp, Phase, WeightedTerm};

#[derive(Debug, Error)]
pub enum FactorError {
    #[error("fragment is not symmetry-augmented term-wise-commuting free-fermionic")]
    NotSymTwcFf,
    #[error("component quotient failed line-graph recognition")]
    QuotientNotLineGraph,
    #[error("imaginary residual in coefficient for {pauli}: phase {phase}")]
    ImaginaryCoefficient { pauli: String, phase: Phase },
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
    #[error("too many symmetry generators ({0} > 64)")]
    TooManyGenerators(usize),
}

/// Real polynomial over the symmetry generators: monomials are GF(2)
/// exponent vectors packed into a u64 mask.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymPolynomial {
    pub n_generators: usize,
    pub terms: BTreeMap<u64, f64>,
}

impl SymPolynomial {
    pub fn zero(n_generators: usize) -> Self {
        SymPolynomial {
            n_generators,
            terms: BTreeMap::new(),
        }
    }

    pub fn add_monomial(&mut self, mask: u64, coeff: f64) {
        let entry = self.terms.entry(mask).or_insert(0.0);
        *entry += coeff;
        if entry.abs() == 0.0 {
            self.terms.remove(&mask);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Evaluate at a sector sign vector (entries +1/-1).
    pub fn evaluate(&self, signs: &[i8]) -> f64 {
        assert_eq!(signs.len(), self.n_generators, "sector length mismatch");
        let mut acc = 0.0;
        for (&mask, &c) in &self.terms {
            let mut s = 1.0;
            for (k, &v) in signs.iter().enumerate() {
                if (mask >> k) & 1 == 1 {
                    s *= f64::from(v);
                }
            }
            acc += c * s;
        }
        acc
    }
}

/// One so-algebra generator: the undressed Pauli, its root edge, the
/// orientation sign eta with `pauli ~ eta * i g_u g_w` in the Majorana
/// picture, and its symmetry-polynomial coefficient.
#[derive(Debug, Clone)]
pub struct SoGenerator {
    pub pauli: PauliOp,
    pub root_edge: (usize, usize),
    pub orientation: f64,
    pub coeff_poly: SymPolynomial,
}

/// Residual GF(2) relation among a component's generators beyond the cycle
/// space: the product of the generators over `edge_subset` equals
/// `phase * prod_k G_k^{exponents_k}`, while the same product of Majorana
/// bilinears reduces to `kappa * g_0 g_1 ... g_{m-1}`. Within a symmetry
/// sector this pins the component's fermion parity.
#[derive(Debug, Clone)]
pub struct ChiralityRelation {
    pub edge_subset: Vec<usize>,
    pub exponents: u64,
    pub phase: Phase,
    pub kappa: Phase,
}

#[derive(Debug, Clone)]
pub struct SoComponent {
    pub generators: Vec<SoGenerator>,
    pub root: RootGraph,
    pub chirality: Option<ChiralityRelation>,
}

#[derive(Debug, Clone)]
pub struct FactorizedFragment {
    pub n_qubits: usize,
    /// Minimal generating set of the symmetry group (unit-phase strings).
    pub symmetry_generators: Vec<PauliOp>,
    pub components: Vec<SoComponent>,
    /// p_0: the polynomial of terms commuting with everything.
    pub constant_poly: SymPolynomial,
}

/// Formal product of Majorana monomials with exact phase: maintains an
/// ascending mode word and an exponent of i.
struct MajoranaWord {
    present: Vec<bool>,
    e: u8,
}

impl MajoranaWord {
    fn new(modes: usize) -> Self {
        MajoranaWord {
            present: vec![false; modes],
            e: 0,
        }
    }

    fn mul_gamma(&mut self, m: usize) {
        let greater = self.present[m + 1..].iter().filter(|&&b| b).count();
        if greater % 2 == 1 {
            self.e = (self.e + 2) & 3;
        }
        self.present[m] = !self.present[m];
    }

    /// Multiply on the right by i g_u g_w.
    fn mul_bilinear(&mut self, u: usize, w: usize) {
        self.e = (self.e + 1) & 3;
        self.mul_gamma(u);
        self.mul_gamma(w);
    }

    fn is_identity(&self) -> bool {
        self.present.iter().all(|&b| !b)
    }

    fn is_full(&self) -> bool {
        self.present.iter().all(|&b| b)
    }

    fn phase(&self) -> Phase {
        Phase::from_exponent(self.e)
    }
}

/// Spanning tree of a root graph via breadth-first search from vertex 0:
/// returns (tree edge flags, parent vertex, parent edge index per vertex).
pub(crate) fn spanning_tree(root: &RootGraph) -> (Vec<bool>, Vec<usize>, Vec<usize>) {
    let m = root.vertex_count;
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); m]; // (neighbor, edge idx)
    for (i, &(a, b)) in root.edges.iter().enumerate() {
        adj[a].push((b, i));
        adj[b].push((a, i));
    }
    for l in &mut adj {
        l.sort_unstable();
    }
    let mut is_tree = vec![false; root.edges.len()];
    let mut parent = vec![usize::MAX; m];
    let mut parent_edge = vec![usize::MAX; m];
    let mut seen = vec![false; m];
    let mut queue = std::collections::VecDeque::new();
    seen[0] = true;
    queue.push_back(0);
    while let Some(u) = queue.pop_front() {
        for &(v, e) in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                parent[v] = u;
                parent_edge[v] = e;
                is_tree[e] = true;
                queue.push_back(v);
            }
        }
    }
    assert!(seen.iter().all(|&s| s), "root graph is disconnected");
    (is_tree, parent, parent_edge)
}

/// Tree path from `from` up to the root-ward meeting point with `to`,
/// returned as the edge sequence from `from` to `to`.
pub(crate) fn tree_path(
    parent: &[usize],
    parent_edge: &[usize],
    from: usize,
    to: usize,
) -> Vec<usize> {
    // collect ancestors of both, walk up to the lowest common ancestor
    let depth = |mut v: usize| {
        let mut d = 0;
        while parent[v] != usize::MAX {
            v = parent[v];
            d += 1;
        }
        d
    };
    let (mut a, mut b) = (from, to);
    let (mut da, mut db) = (depth(a), depth(b));
    let mut left = Vec::new();
    let mut right = Vec::new();
    while da > db {
        left.push(parent_edge[a]);
        a = parent[a];
        da -= 1;
    }
    while db > da {
        right.push(parent_edge[b]);
        b = parent[b];
        db -= 1;
    }
    while a != b {
        left.push(parent_edge[a]);
        a = parent[a];
        right.push(parent_edge[b]);
        b = parent[b];
    }
    right.reverse();
    left.extend(right);
    left
}

/// Symmetry factors for a line-graph realization: identity on a spanning
/// tree of root edges; for each remaining edge, the Pauli string of the
/// fundamental-cycle product. `component_paulis[i]` realizes root edge i.
pub fn symmetry_factors(
    component_paulis: &[PauliOp],
    root: &RootGraph,
) -> Result<Vec<PauliOp>, FactorError> {
    assert_eq!(component_paulis.len(), root.edges.len());
    let n = match component_paulis.first() {
        Some(p) => p.n_qubits(),
        None => return Ok(Vec::new()),
    };
    let (is_tree, parent, parent_edge) = spanning_tree(root);
    let mut factors = vec![PauliOp::identity(n); component_paulis.len()];
    for (a, &(u, w)) in root.edges.iter().enumerate() {
        if is_tree[a] {
            continue;
        }
        // fundamental cycle: edge a from u to w, then tree path w -> u
        let mut prod = component_paulis[a].clone();
        for e in tree_path(&parent, &parent_edge, w, u) {
            prod = prod.mul(&component_paulis[e]);
        }
        let s = prod.with_unit_phase();
        for (b, p) in component_paulis.iter().enumerate() {
            if !s.commutes_with(p) {
                return Err(FactorError::Inconsistent(format!(
                    "cycle symmetry {s} anticommutes with generator {b} ({p})"
                )));
            }
        }
        factors[a] = s;
    }
    Ok(factors)
}

/// Orientation signs eta with `dressed[i] ~ eta_i * i g_u g_w`: +1 on tree
/// edges, fixed on the remaining edges by matching the exact phase of each
/// fundamental-cycle product against its Majorana reduction.
fn orientation_signs(
    dressed: &[PauliOp],
    root: &RootGraph,
) -> Result<Vec<f64>, FactorError> {
    let (is_tree, parent, parent_edge) = spanning_tree(root);
    let mut eta = vec![1.0; dressed.len()];
    for (a, &(u, w)) in root.edges.iter().enumerate() {
        if is_tree[a] {
            continue;
        }
        let path = tree_path(&parent, &parent_edge, w, u);
        let mut pauli = dressed[a].clone();
        let mut word = MajoranaWord::new(root.vertex_count);
        word.mul_bilinear(root.edges[a].0, root.edges[a].1);
        for &e in &path {
            pauli = pauli.mul(&dressed[e]);
            word.mul_bilinear(root.edges[e].0, root.edges[e].1);
        }
        let _ = (u, w);
        if !pauli.is_identity_string() {
            return Err(FactorError::Inconsistent(format!(
                "cycle product is not a scalar after symmetry extraction: {pauli}"
            )));
        }
        if !word.is_identity() {
            return Err(FactorError::Inconsistent(
                "cycle reduction left a Majorana residue".into(),
            ));
        }
        // pauli = phi * I ; majorana with eta=+1 elsewhere = mu * I:
        // eta_a = phi / mu must be +-1
        let ratio = pauli.phase() * word.phase().inverse();
        if !ratio.is_real() {
            return Err(FactorError::Inconsistent(format!(
                "cycle phase mismatch is imaginary: {ratio}"
            )));
        }
        eta[a] = ratio.real_value();
    }
    Ok(eta)
}

/// GF(2) kernel of the component generators modulo the symmetry span:
/// returns a relation subset with odd vertex degrees if one exists.
fn chirality_relation(
    dressed: &[PauliOp],
    eta: &[f64],
    root: &RootGraph,
    sym_gens: &[PauliOp],
) -> Result<Option<ChiralityRelation>, FactorError> {
    let f = dressed.len();
    if f == 0 || root.vertex_count % 2 == 1 {
        return Ok(None);
    }
    // reduce each generator's symplectic vector modulo the symmetry span,
    // tracking combinations; kernel vectors are relations modulo <G>
    let n_words = dressed[0].symplectic_words().len();
    let mut sym_rows: Vec<Vec<u64>> = Vec::new();
    for g in sym_gens {
        let mut v = g.symplectic_words();
        for row in &sym_rows {
            let pivot = row
                .iter()
                .enumerate()
                .find_map(|(i, &w)| (w != 0).then(|| i * 64 + w.trailing_zeros() as usize))
                .unwrap();
            if (v[pivot / 64] >> (pivot % 64)) & 1 == 1 {
                for (d, s) in v.iter_mut().zip(row) {
                    *d ^= s;
                }
            }
        }
        if v.iter().any(|&w| w != 0) {
            sym_rows.push(v);
            sym_rows.sort_by_key(|r| {
                r.iter()
                    .enumerate()
                    .find_map(|(i, &w)| (w != 0).then(|| i * 64 + w.trailing_zeros() as usize))
                    .unwrap()
            });
        }
    }
    let reduce_mod_sym = |vec: &mut Vec<u64>| {
        for row in &sym_rows {
            let pivot = row
                .iter()
                .enumerate()
                .find_map(|(i, &w)| (w != 0).then(|| i * 64 + w.trailing_zeros() as usize))
                .unwrap();
            if (vec[pivot / 64] >> (pivot % 64)) & 1 == 1 {
                for (d, s) in vec.iter_mut().zip(row) {
                    *d ^= s;
                }
            }
        }
    };
    // eliminate generator vectors with combination tracking
    let comb_words = f.div_ceil(64);
    let mut rows: Vec<(Vec<u64>, Vec<u64>)> = Vec::new();
    let mut kernel: Vec<Vec<u64>> = Vec::new();
    for (i, p) in dressed.iter().enumerate() {
        let mut v = p.symplectic_words();
        reduce_mod_sym(&mut v);
        let mut comb = vec![0u64; comb_words];
        comb[i / 64] = 1 << (i % 64);
        for (row, rcomb) in &rows {
            let pivot = row
                .iter()
                .enumerate()
                .find_map(|(k, &w)| (w != 0).then(|| k * 64 + w.trailing_zeros() as usize))
                .unwrap();
            if (v[pivot / 64] >> (pivot % 64)) & 1 == 1 {
                for (d, s) in v.iter_mut().zip(row) {
                    *d ^= s;
                }
                for (d, s) in comb.iter_mut().zip(rcomb) {
                    *d ^= s;
                }
            }
        }
        if v.iter().all(|&w| w == 0) {
            kernel.push(comb);
        } else {
            rows.push((v, comb));
            rows.sort_by_key(|(r, _)| {
                r.iter()
                    .enumerate()
                    .find_map(|(k, &w)| (w != 0).then(|| k * 64 + w.trailing_zeros() as usize))
                    .unwrap()
            });
        }
    }
    let _ = n_words;
    let cycle_dim = f + 1 - root.vertex_count;
    if kernel.len() == cycle_dim {
        return Ok(None);
    }
    if kernel.len() != cycle_dim + 1 {
        return Err(FactorError::Inconsistent(format!(
            "relation space dimension {} (expected {} or {})",
            kernel.len(),
            cycle_dim,
            cycle_dim + 1
        )));
    }
    // find a kernel element with odd vertex degrees (a non-cycle relation)
    let m = root.vertex_count;
    let bit = |comb: &[u64], i: usize| (comb[i / 64] >> (i % 64)) & 1 == 1;
    let odd_subset = kernel.iter().find(|comb| {
        let mut deg = vec![0usize; m];
        for (i, &(u, w)) in root.edges.iter().enumerate() {
            if bit(comb, i) {
                deg[u] += 1;
                deg[w] += 1;
            }
        }
        deg.iter().any(|d| d % 2 == 1)
    });
    let comb = odd_subset.ok_or_else(|| {
        FactorError::Inconsistent("extra relation exists but all kernel vectors are cycles".into())
    })?;
    // the odd-degree set must be every vertex (connectivity argument)
    let mut deg = vec![0usize; m];
    let mut subset = Vec::new();
    for (i, &(u, w)) in root.edges.iter().enumerate() {
        if bit(comb, i) {
            subset.push(i);
            deg[u] += 1;
            deg[w] += 1;
        }
    }
    if deg.iter().any(|d| d % 2 == 0) {
        return Err(FactorError::Inconsistent(
            "relation subset has an even-degree vertex".into(),
        ));
    }
    // Pauli side: product over the subset in ascending edge order
    let n = dressed[0].n_qubits();
    let mut prod = PauliOp::identity(n);
    let mut word = MajoranaWord::new(m);
    for &i in &subset {
        prod = prod.mul(&dressed[i]);
        word.mul_bilinear(root.edges[i].0, root.edges[i].1);
        if eta[i] < 0.0 {
            word.e = (word.e + 2) & 3;
        }
    }
    if !word.is_full() {
        return Err(FactorError::Inconsistent(
            "relation reduction did not produce the full Majorana word".into(),
        ));
    }
    let (exps, phase) = express_in_generators(&prod, sym_gens).map_err(|_| {
        FactorError::Inconsistent(format!(
            "relation product {prod} not in the symmetry span"
        ))
    })?;
    let mut mask = 0u64;
    for (k, &e) in exps.iter().enumerate() {
        if e {
            mask |= 1 << k;
        }
    }
    Ok(Some(ChiralityRelation {
        edge_subset: subset,
        exponents: mask,
        phase,
        kappa: word.phase(),
    }))
}

/// Factorize a fragment satisfying the symmetry-augmented TWC-FF predicate.
pub fn factorize(frag: &Fragment) -> Result<FactorizedFragment, FactorError> {
    let ops: Vec<&PauliOp> = frag.terms.iter().map(|t| &t.op).collect();
    if !is_sym_variant(&ops, SolvabilityClass::TwcFf) {
        return Err(FactorError::NotSymTwcFf);
    }
    let n = match ops.first() {
        Some(p) => p.n_qubits(),
        None => {
            return Ok(FactorizedFragment {
                n_qubits: 1,
                symmetry_generators: Vec::new(),
                components: Vec::new(),
                constant_poly: SymPolynomial::zero(0),
            })
        }
    };
    let graph = anti_graph_of(&ops);
    let isolated: Vec<usize> = (0..ops.len()).filter(|&v| graph.degree(v) == 0).collect();
    let rest: Vec<usize> = (0..ops.len()).filter(|&v| graph.degree(v) > 0).collect();
    let sub = graph.induced(&rest);

    struct CompData {
        class_members: Vec<Vec<usize>>, // term indices per twin class
        reps: Vec<usize>,
        dressed: Vec<PauliOp>, // X_a after symmetry extraction
        factors: Vec<PauliOp>, // S_a
        root: RootGraph,
    }

    let mut comps: Vec<CompData> = Vec::new();
    let mut dressing_strings: Vec<PauliOp> = Vec::new();
    for comp in connected_components(&sub) {
        let term_idx: Vec<usize> = comp.iter().map(|&v| rest[v]).collect();
        let cg = graph.induced(&term_idx);
        let tw = twin_partition(&cg);
        let q = quotient_graph(&cg, &tw).expect("twin partition is valid");
        let k = recognize_line_graph(&q).ok_or(FactorError::QuotientNotLineGraph)?;
        let root = root_graph(&k);
        // classes in quotient-vertex order; representatives are the lowest
        // input index in each class
        let class_members: Vec<Vec<usize>> = tw
            .classes
            .iter()
            .map(|c| c.iter().map(|&v| term_idx[v]).collect())
            .collect();
        let reps: Vec<usize> = class_members.iter().map(|c| c[0]).collect();
        for members in &class_members {
            for &b in &members[1..] {
                let c_ab = frag.terms[b].op.mul(&frag.terms[members[0]].op);
                dressing_strings.push(c_ab.with_unit_phase());
            }
        }
        let rep_ops: Vec<PauliOp> = reps.iter().map(|&i| frag.terms[i].op.clone()).collect();
        // root edge i corresponds to quotient vertex i = class i
        let factors = symmetry_factors(&rep_ops, &root)?;
        let dressed: Vec<PauliOp> = rep_ops
            .iter()
            .zip(&factors)
            .map(|(a, s)| s.mul(a))
            .collect();
        comps.push(CompData {
            class_members,
            reps,
            dressed,
            factors,
            root,
        });
    }

    // symmetry generating set: Z class, then dressings, then cycle factors
    let mut candidates: Vec<PauliOp> = Vec::new();
    for &v in &isolated {
        candidates.push(frag.terms[v].op.clone());
    }
    candidates.extend(dressing_strings);
    for c in &comps {
        for s in &c.factors {
            if !s.is_identity_string() {
                candidates.push(s.clone());
            }
        }
    }
    let sym_gens = independent_generators(&candidates);
    if sym_gens.len() > 64 {
        return Err(FactorError::TooManyGenerators(sym_gens.len()));
    }
    let kgen = sym_gens.len();
    // symmetries must commute with one another and with every term
    for (i, g) in sym_gens.iter().enumerate() {
        for h in &sym_gens[i + 1..] {
            if !g.commutes_with(h) {
                return Err(FactorError::Inconsistent(format!(
                    "symmetry generators anticommute: {g} vs {h}"
                )));
            }
        }
        for op in &ops {
            if !g.commutes_with(op) {
                return Err(FactorError::Inconsistent(format!(
                    "symmetry {g} anticommutes with term {op}"
                )));
            }
        }
    }

    let express = |op: &PauliOp| -> Result<(u64, f64), FactorError> {
        let (exps, phase) =
            express_in_generators(op, &sym_gens).map_err(|_| {
                FactorError::Inconsistent(format!("{op} outside the symmetry span"))
            })?;
        if !phase.is_real() {
            return Err(FactorError::ImaginaryCoefficient {
                pauli: op.to_string(),
                phase,
            });
        }
        let mut mask = 0u64;
        for (k, &e) in exps.iter().enumerate() {
            if e {
                mask |= 1 << k;
            }
        }
        Ok((mask, phase.real_value()))
    };

    let mut constant_poly = SymPolynomial::zero(kgen);
    for &v in &isolated {
        let (mask, sign) = express(&frag.terms[v].op)?;
        constant_poly.add_monomial(mask, sign * frag.terms[v].coeff);
    }

    let mut components = Vec::new();
    for c in comps {
        let eta = orientation_signs(&c.dressed, &c.root)?;
        let chirality = chirality_relation(&c.dressed, &eta, &c.root, &sym_gens)?;
        let mut generators = Vec::new();
        for (a, &rep) in c.reps.iter().enumerate() {
            let mut poly = SymPolynomial::zero(kgen);
            for &b in &c.class_members[a] {
                // member = (member * rep) * S_a * X_a ; coefficient Pauli is
                // (member * rep) * S_a
                let coeff_pauli = frag.terms[b]
                    .op
                    .mul(&frag.terms[rep].op)
                    .mul(&c.factors[a]);
                let (mask, sign) = express(&coeff_pauli)?;
                poly.add_monomial(mask, sign * frag.terms[b].coeff);
            }
            generators.push(SoGenerator {
                pauli: c.dressed[a].clone(),
                root_edge: c.root.edges[a],
                orientation: eta[a],
                coeff_poly: poly,
            });
        }
        components.push(SoComponent {
            generators,
            root: c.root,
            chirality,
        });
    }

    let ff = FactorizedFragment {
        n_qubits: n,
        symmetry_generators: sym_gens,
        components,
        constant_poly,
    };
    validate(&ff, frag)?;
    Ok(ff)
}

impl FactorizedFragment {
    /// Expand the factorized form back into weighted Pauli strings.
    pub fn reconstruct(&self) -> Result<Vec<WeightedTerm>, FactorError> {
        let n = self.n_qubits;
        let expand = |poly: &SymPolynomial,
                      base: Option<&PauliOp>|
         -> Result<Vec<WeightedTerm>, FactorError> {
            let mut out = Vec::new();
            for (&mask, &c) in &poly.terms {
                let mut op = PauliOp::identity(n);
                for (k, g) in self.symmetry_generators.iter().enumerate() {
                    if (mask >> k) & 1 == 1 {
                        op = op.mul(g);
                    }
                }
                if let Some(b) = base {
                    op = op.mul(b);
                }
                if !op.phase().is_real() {
                    return Err(FactorError::ImaginaryCoefficient {
                        pauli: op.to_string(),
                        phase: op.phase(),
                    });
                }
                out.push(WeightedTerm::new(op, c));
            }
            Ok(out)
        };
        let mut terms = expand(&self.constant_poly, None)?;
        for comp in &self.components {
            for g in &comp.generators {
                terms.extend(expand(&g.coeff_poly, Some(&g.pauli))?);
            }
        }
        Ok(terms)
    }
}

/// Structural checks plus exact (bit-identical) reconstruction.
fn validate(ff: &FactorizedFragment, frag: &Fragment) -> Result<(), FactorError> {
    // cross-component commutation and root-edge anticommutation pattern
    for (ci, comp) in ff.components.iter().enumerate() {
        for (a, ga) in comp.generators.iter().enumerate() {
            for g in &ff.symmetry_generators {
                if !g.commutes_with(&ga.pauli) {
                    return Err(FactorError::Inconsistent(format!(
                        "symmetry {g} anticommutes with generator {}",
                        ga.pauli
                    )));
                }
            }
            for gb in &comp.generators[a + 1..] {
                let (u1, w1) = ga.root_edge;
                let (u2, w2) = gb.root_edge;
                let share = u1 == u2 || u1 == w2 || w1 == u2 || w1 == w2;
                if ga.pauli.commutes_with(&gb.pauli) == share {
                    return Err(FactorError::Inconsistent(format!(
                        "root incidence does not match commutation: {} vs {}",
                        ga.pauli, gb.pauli
                    )));
                }
            }
            for other in &ff.components[ci + 1..] {
                for gb in &other.generators {
                    if !ga.pauli.commutes_with(&gb.pauli) {
                        return Err(FactorError::Inconsistent(format!(
                            "cross-component generators anticommute: {} vs {}",
                            ga.pauli, gb.pauli
                        )));
                    }
                }
            }
        }
    }
    // exact reconstruction
    let mut rebuilt: BTreeMap<String, f64> = BTreeMap::new();
    for t in ff.reconstruct()? {
        *rebuilt.entry(t.op.to_string()).or_insert(0.0) += t.coeff;
    }
    let mut original: BTreeMap<String, f64> = BTreeMap::new();
    for t in &frag.terms {
        *original.entry(t.op.to_string()).or_insert(0.0) += t.coeff;
    }
    if rebuilt.len() != original.len() {
        return Err(FactorError::Inconsistent(format!(
            "reconstruction term count {} vs {}",
            rebuilt.len(),
            original.len()
        )));
    }
    for (k, v) in &original {
        match rebuilt.get(k) {
            Some(w) if w == v => {}
            other => {
                return Err(FactorError::Inconsistent(format!(
                    "reconstruction mismatch on {k}: {other:?} vs {v}"
                )))
            }
        }
    }
    Ok(())
}

/// Convenience: factorize a bare term list (builds a fragment wrapper).
pub fn factorize_terms(
    terms: Vec<WeightedTerm>,
    class: SolvabilityClass,
) -> Result<FactorizedFragment, FactorError> {
    let k = terms.len();
    factorize(&Fragment {
        terms,
        class_tag: class,
        source_indices: (0..k).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frag(n: usize, terms: &[(&str, f64)]) -> Fragment {
        Fragment {
            terms: terms
                .iter()
                .map(|(s, c)| WeightedTerm::new(PauliOp::parse(s, n).unwrap(), *c))
                .collect(),
            class_tag: SolvabilityClass::SymTwcFf,
            source_indices: (0..terms.len()).collect(),
        }
    }

    #[test]
    fn twin_dressed_pair() {
        // c1 X0 + c2 Y0 + c3 X0Z1: twins {X0, X0Z1}, symmetry {Z1}var
        let f = frag(2, &[("X0", 0.5), ("Y0", -0.25), ("X0 Z1", 0.125)]);
        let ff = factorize(&f).unwrap();
        assert_eq!(ff.symmetry_generators.len(), 1);
        assert_eq!(ff.symmetry_generators[0].to_string(), "Z1");
        assert_eq!(ff.components.len(), 1);
        assert!(ff.constant_poly.is_zero());
        let gens = &ff.components[0].generators;
        assert_eq!(gens.len(), 2);
        // p for the X0 representative: 0.5 + 0.125 * Z1
        let p1 = &gens[0].coeff_poly;
        assert_eq!(p1.terms.get(&0), Some(&0.5));
        assert_eq!(p1.terms.get(&1), Some(&0.125));
        assert!((p1.evaluate(&[1]) - 0.625).abs() < 1e-15);
        assert!((p1.evaluate(&[-1]) - 0.375).abs() < 1e-15);
        // p for Y0: constant -0.25
        let p2 = &gens[1].coeff_poly;
        assert_eq!(p2.terms.get(&0), Some(&-0.25));
    }

    #[test]
    fn pure_symmetry_term() {
        let f = frag(1, &[("Z0", 0.75)]);
        let ff = factorize(&f).unwrap();
        assert!(ff.components.is_empty());
        assert_eq!(ff.symmetry_generators.len(), 1);
        assert_eq!(ff.constant_poly.terms.get(&1), Some(&0.75));
    }

    #[test]
    fn k3_no_symmetries() {
        let f = frag(1, &[("X0", 0.1), ("Y0", 0.2), ("Z0", 0.3)]);
        let ff = factorize(&f).unwrap();
        assert!(ff.symmetry_generators.is_empty());
        assert_eq!(ff.components.len(), 1);
        let comp = &ff.components[0];
        assert_eq!(comp.generators.len(), 3);
        // triangle root
        assert_eq!(comp.root.vertex_count, 3);
        for g in &comp.generators {
            assert_eq!(g.coeff_poly.terms.len(), 1);
            assert!(g.coeff_poly.terms.contains_key(&0));
        }
    }

    #[test]
    fn symmetry_factors_tree_is_trivial() {
        // two disjoint anticommuting pairs: P3-root trees per component
        let reps = vec![
            PauliOp::parse("Z0", 2).unwrap(),
            PauliOp::parse("X0", 2).unwrap(),
        ];
        let root = RootGraph {
            vertex_count: 3,
            edges: vec![(0, 1), (1, 2)],
            edge_labels: vec![0, 1],
        };
        let s = symmetry_factors(&reps, &root).unwrap();
        assert!(s.iter().all(|p| p.is_identity_string()));
    }

    #[test]
    fn four_term_claw_is_sym_ac() {
        // a 4-term claw realization has twin leaves, so its quotient is K2:
        // it is symmetry-augmented solvable even though the bare graph is
        // not a line graph
        let f = frag(
            3,
            &[
                ("X0 X1 X2", 1.0),
                ("Z0", 0.5),
                ("Z1", 0.25),
                ("Z2", 0.125),
            ],
        );
        let ff = factorize(&f).unwrap();
        assert_eq!(ff.components.len(), 1);
        assert_eq!(ff.components[0].generators.len(), 2);
        assert_eq!(ff.symmetry_generators.len(), 2);
    }

    #[test]
    fn rejects_non_sym_twc_ff() {
        // subdivided claw (spider): twin-free, contains an induced claw, so
        // the quotient itself fails line-graph recognition
        let f = frag(
            7,
            &[
                ("X0", 1.0),
                ("X1 Z0", 0.9),
                ("X2 Z0", 0.8),
                ("X3 Z0", 0.7),
                ("X4 Z1", 0.6),
                ("X5 Z2", 0.5),
                ("X6 Z3", 0.4),
            ],
        );
        assert!(matches!(factorize(&f), Err(FactorError::NotSymTwcFf)));
    }

    #[test]
    fn reconstruction_exact_bits() {
        let f = frag(
            3,
            &[
                ("X0", 0.1 + 0.2), // deliberately non-representable cleanly
                ("Y0", -1.0 / 3.0),
                ("X0 Z1", 0.7),
                ("Z1 Z2", 0.3),
                ("Z2", -0.4),
            ],
        );
        let ff = factorize(&f).unwrap();
        let rebuilt = ff.reconstruct().unwrap();
        let mut map: BTreeMap<String, f64> = BTreeMap::new();
        for t in rebuilt {
            *map.entry(t.op.to_string()).or_insert(0.0) += t.coeff;
        }
        for t in &f.terms {
            assert_eq!(map.get(&t.op.to_string()).copied(), Some(t.coeff));
        }
    }

    #[test]
    fn cycle_symmetry_extracted() {
        // C4 anti-compatibility graph from dressed pair: quotient is K2,
        // opposite vertices are twins, product Z0Z1 is the symmetry
        let f = frag(
            2,
            &[("Z0", 0.4), ("X0 X1", 0.3), ("Z1", 0.2), ("Y0 Y1", 0.1)],
        );
        let ff = factorize(&f).unwrap();
        assert_eq!(ff.symmetry_generators.len(), 1);
        assert_eq!(ff.symmetry_generators[0].to_string(), "Z0 Z1");
        assert_eq!(ff.components.len(), 1);
        assert_eq!(ff.components[0].generators.len(), 2);
    }

    #[test]
    fn chirality_relation_detected() {
        // five-term path whose matching product Z1 * Z0 * Z0Z1 = I is a
        // relation beyond the cycle space (tree root, even mode count)
        let f = frag(
            2,
            &[
                ("Z1", 0.11),
                ("X0 X1", 0.23),
                ("Z0", 0.31),
                ("X0", 0.41),
                ("Z0 Z1", 0.53),
            ],
        );
        let ff = factorize(&f).unwrap();
        assert_eq!(ff.components.len(), 1);
        let comp = &ff.components[0];
        assert_eq!(comp.root.vertex_count, 6);
        let ch = comp.chirality.as_ref().expect("relation must be detected");
        assert_eq!(ch.exponents, 0, "relation product is a scalar");
        assert_eq!(ch.edge_subset.len(), 3);
    }

    #[test]
    fn empty_fragment() {
        let f = Fragment {
            terms: vec![],
            class_tag: SolvabilityClass::SymTwcFf,
            source_indices: vec![],
        };
        let ff = factorize(&f).unwrap();
        assert!(ff.components.is_empty());
        assert!(ff.constant_poly.is_zero());
    }
}
