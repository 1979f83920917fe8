//! GF(2) linear algebra over symplectic Pauli vectors.
//!
//! Phases are ignored for rank/membership questions; where a caller needs
//! the phase of a product it is recomputed exactly with `PauliOp::mul`.

use thiserror::Error;

use super::{PauliOp, Phase};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum Gf2Error {
    #[error("operator is not in the GF(2) span of the generators")]
    NotInSpan,
    #[error("mismatched qubit counts")]
    QubitMismatch,
}

/// Row-echelon basis of symplectic vectors with elimination bookkeeping.
struct Echelon {
    /// (reduced vector, combination over inputs that produced it)
    rows: Vec<(Vec<u64>, Vec<u64>)>,
    comb_words: usize,
}

impl Echelon {
    fn new(n_inputs: usize) -> Self {
        Echelon {
            rows: Vec::new(),
            comb_words: n_inputs.div_ceil(64).max(1),
        }
    }

    /// Reduce `vec` against the basis; returns (remainder, combination used).
    fn reduce(&self, vec: &[u64]) -> (Vec<u64>, Vec<u64>) {
        let mut v = vec.to_vec();
        let mut comb = vec![0u64; self.comb_words];
        for (row, rcomb) in &self.rows {
            let pivot = leading_bit(row).unwrap();
            if get_bit(&v, pivot) {
                xor_into(&mut v, row);
                xor_into(&mut comb, rcomb);
            }
        }
        (v, comb)
    }

    /// Insert input index `idx` with vector `vec`. Returns true if it was
    /// independent of the rows already present.
    fn insert(&mut self, idx: usize, vec: &[u64]) -> bool {
        let (v, mut comb) = self.reduce(vec);
        if v.iter().all(|&w| w == 0) {
            return false;
        }
        comb[idx / 64] ^= 1 << (idx % 64);
        self.rows.push((v, comb));
        // keep rows ordered by leading bit for deterministic reduction
        self.rows
            .sort_by_key(|(row, _)| leading_bit(row).unwrap());
        true
    }
}

fn get_bit(v: &[u64], bit: usize) -> bool {
    (v[bit / 64] >> (bit % 64)) & 1 == 1
}

fn xor_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= s;
    }
}

fn leading_bit(v: &[u64]) -> Option<usize> {
    for (i, &w) in v.iter().enumerate() {
        if w != 0 {
            return Some(i * 64 + w.trailing_zeros() as usize);
        }
    }
    None
}

/// A minimal generating set of the GF(2) span of `ops`: the subsequence of
/// inputs that are independent of their predecessors. Phases are ignored;
/// duplicate strings collapse.
pub fn independent_generators(ops: &[PauliOp]) -> Vec<PauliOp> {
    let mut ech = Echelon::new(ops.len());
    let mut gens = Vec::new();
    for (i, op) in ops.iter().enumerate() {
        if ech.insert(i, &op.symplectic_words()) {
            gens.push(op.clone());
        }
    }
    gens
}

/// Exponents `e` and phase `ph` with `op = ph * prod_k gens[k]^e[k]`, the
/// product taken in index order. Fails if `op` is outside the span.
pub fn express_in_generators(
    op: &PauliOp,
    gens: &[PauliOp],
) -> Result<(Vec<bool>, Phase), Gf2Error> {
    for g in gens {
        if g.n_qubits() != op.n_qubits() {
            return Err(Gf2Error::QubitMismatch);
        }
    }
    let mut ech = Echelon::new(gens.len());
    for (i, g) in gens.iter().enumerate() {
        ech.insert(i, &g.symplectic_words());
    }
    let (rem, comb) = ech.reduce(&op.symplectic_words());
    if rem.iter().any(|&w| w != 0) {
        return Err(Gf2Error::NotInSpan);
    }
    let exps: Vec<bool> = (0..gens.len()).map(|i| get_bit(&comb, i)).collect();
    // recompute the exact phase of the selected product
    let mut prod = PauliOp::identity(op.n_qubits());
    for (g, &used) in gens.iter().zip(&exps) {
        if used {
            prod = prod.mul(g);
        }
    }
    debug_assert_eq!(prod.string_key(), op.string_key());
    let ph = Phase::from_exponent(
        (op.word_exponent() + 4 - prod.word_exponent()) & 3,
    );
    Ok((exps, ph))
}
