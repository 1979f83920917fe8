//! Clifford tableaus: images of the single-qubit X/Z generators under
//! conjugation, plus synthesis of a Clifford mapping a commuting independent
//! set of Paulis to z operators on the leading qubits.
//!
//! Synthesis works by symplectic Gaussian elimination realized as a gate
//! sequence (H, S, S-dagger, CNOT, CZ, SWAP); the gate list is retained so
//! the same Clifford can later be applied to a statevector.

use thiserror::Error;

use super::{PauliOp, Phase};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SynthesisError {
    #[error("inputs {0} and {1} do not commute")]
    NonCommuting(usize, usize),
    #[error("input {0} is GF(2)-dependent on earlier inputs")]
    Dependent(usize),
    #[error("more inputs than qubits ({inputs} > {qubits})")]
    TooManyInputs { inputs: usize, qubits: usize },
}

/// An elementary Clifford gate acting on one or two qubits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gate {
    H(usize),
    S(usize),
    Sdag(usize),
    Cnot(usize, usize),
    Cz(usize, usize),
    Swap(usize, usize),
}

/// A Clifford unitary U, stored as the images U g U^dagger of the 2n
/// generators x_q, z_q, together with the gate sequence that builds it.
#[derive(Debug, Clone)]
pub struct CliffordTableau {
    n_qubits: usize,
    x_images: Vec<PauliOp>,
    z_images: Vec<PauliOp>,
    gates: Vec<Gate>,
}

impl CliffordTableau {
    pub fn identity(n_qubits: usize) -> Self {
        CliffordTableau {
            n_qubits,
            x_images: (0..n_qubits).map(|q| PauliOp::single(n_qubits, q, 'X')).collect(),
            z_images: (0..n_qubits).map(|q| PauliOp::single(n_qubits, q, 'Z')).collect(),
            gates: Vec::new(),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn x_image(&self, q: usize) -> &PauliOp {
        &self.x_images[q]
    }

    pub fn z_image(&self, q: usize) -> &PauliOp {
        &self.z_images[q]
    }

    /// Gate sequence realizing the tableau (first gate applied first).
    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    /// Append `gate` to the unitary: U <- G U. Images transform by the
    /// elementary conjugation rules in the i^e X^x Z^z word representation.
    pub fn push_gate(&mut self, gate: Gate) {
        for img in self.x_images.iter_mut().chain(self.z_images.iter_mut()) {
            elementary_conjugate(img, gate);
        }
        self.gates.push(gate);
    }

    /// Image of `p` under conjugation by the tableau, with exact phase.
    pub fn conjugate(&self, p: &PauliOp) -> PauliOp {
        assert_eq!(p.n_qubits(), self.n_qubits, "conjugate: mismatched qubit counts");
        let mut out = PauliOp::identity(self.n_qubits).scaled_by(Phase::from_exponent(p.word_exponent()));
        for q in 0..self.n_qubits {
            if p.x_bit(q) {
                out = out.mul(&self.x_images[q]);
            }
        }
        for q in 0..self.n_qubits {
            if p.z_bit(q) {
                out = out.mul(&self.z_images[q]);
            }
        }
        out
    }
}

/// In-place conjugation of the word `i^e X^x Z^z` by an elementary gate.
fn elementary_conjugate(p: &mut PauliOp, gate: Gate) {
    let (mut x, mut z, mut e) = decompose(p);
    match gate {
        Gate::H(q) => {
            let (xb, zb) = (bit(&x, q), bit(&z, q));
            if xb && zb {
                e = (e + 2) & 3;
            }
            set(&mut x, q, zb);
            set(&mut z, q, xb);
        }
        Gate::S(q) => {
            if bit(&x, q) {
                flip(&mut z, q);
                e = (e + 1) & 3;
            }
        }
        Gate::Sdag(q) => {
            if bit(&x, q) {
                flip(&mut z, q);
                e = (e + 3) & 3;
            }
        }
        Gate::Cnot(c, t) => {
            if bit(&x, c) {
                flip(&mut x, t);
            }
            if bit(&z, t) {
                flip(&mut z, c);
            }
        }
        Gate::Cz(a, b) => {
            if bit(&x, a) && bit(&x, b) {
                e = (e + 2) & 3;
            }
            if bit(&x, a) {
                flip(&mut z, b);
            }
            if bit(&x, b) {
                flip(&mut z, a);
            }
        }
        Gate::Swap(a, b) => {
            let (xa, za) = (bit(&x, a), bit(&z, a));
            let (xb, zb) = (bit(&x, b), bit(&z, b));
            set(&mut x, a, xb);
            set(&mut z, a, zb);
            set(&mut x, b, xa);
            set(&mut z, b, za);
        }
    }
    *p = recompose(p.n_qubits(), x, z, e);
}

fn decompose(p: &PauliOp) -> (Vec<u64>, Vec<u64>, u8) {
    (p.x_words().to_vec(), p.z_words().to_vec(), p.word_exponent())
}

fn recompose(n: usize, x: Vec<u64>, z: Vec<u64>, e: u8) -> PauliOp {
    PauliOp::from_words(n, x, z, e)
}

fn bit(v: &[u64], q: usize) -> bool {
    (v[q / 64] >> (q % 64)) & 1 == 1
}

fn set(v: &mut [u64], q: usize, val: bool) {
    if val {
        v[q / 64] |= 1 << (q % 64);
    } else {
        v[q / 64] &= !(1 << (q % 64));
    }
}

fn flip(v: &mut [u64], q: usize) {
    v[q / 64] ^= 1 << (q % 64);
}

/// Synthesize a Clifford mapping `inputs[k]` to plus-or-minus z_k for
/// k = 0..K-1. Inputs must pairwise commute and be GF(2)-independent;
/// `n_qubits` is needed explicitly so the empty set yields an identity
/// tableau of the right size. Among valid pivots the lowest qubit index is
/// chosen, so the result is deterministic. The postcondition (each image is
/// a single Z on the expected qubit) is verified before returning.
pub fn synthesize_clifford_on(
    n_qubits: usize,
    inputs: &[PauliOp],
) -> Result<CliffordTableau, SynthesisError> {
    let n = n_qubits;
    if inputs.len() > n {
        return Err(SynthesisError::TooManyInputs {
            inputs: inputs.len(),
            qubits: n,
        });
    }
    for i in 0..inputs.len() {
        for j in i + 1..inputs.len() {
            if !inputs[i].commutes_with(&inputs[j]) {
                return Err(SynthesisError::NonCommuting(i, j));
            }
        }
    }
    let mut t = CliffordTableau::identity(n);
    for (k, input) in inputs.iter().enumerate() {
        let p = t.conjugate(input);
        // Commutation with the already-fixed z_0..z_{k-1} forces the x part
        // to vanish there, so all X/Y structure lives on qubits >= k.
        let mut has_support = false;
        for q in k..n {
            if p.x_bit(q) || p.z_bit(q) {
                has_support = true;
            }
            debug_assert!(q >= k);
        }
        for q in 0..k {
            debug_assert!(!p.x_bit(q), "x support below pivot row");
        }
        if !has_support {
            return Err(SynthesisError::Dependent(k));
        }
        if p.weight() == 1 && p.letter(k) == 'Z' {
            continue; // already in target form
        }

        // Turn Y letters into X on qubits >= k.
        let mut p = p;
        for q in k..n {
            if p.x_bit(q) && p.z_bit(q) {
                t.push_gate(Gate::Sdag(q));
            }
        }
        p = t.conjugate(input);
        // Pivot: lowest X-support qubit >= k, else lowest Z-support qubit
        // (turned into X by a Hadamard).
        let pivot = match (k..n).find(|&q| p.x_bit(q)) {
            Some(q) => q,
            None => {
                let q = (k..n).find(|&q| p.z_bit(q)).unwrap();
                t.push_gate(Gate::H(q));
                q
            }
        };
        p = t.conjugate(input);
        // Clear other X columns into the pivot.
        for q in k..n {
            if q != pivot && p.x_bit(q) {
                t.push_gate(Gate::Cnot(pivot, q));
            }
        }
        p = t.conjugate(input);
        // The CNOTs may have moved Z factors onto the pivot; clean up.
        if p.z_bit(pivot) {
            t.push_gate(Gate::Sdag(pivot));
            p = t.conjugate(input);
        }
        // Clear residual Z factors anywhere (CZ leaves every z_j image fixed).
        for q in 0..n {
            if q != pivot && p.z_bit(q) {
                t.push_gate(Gate::Cz(pivot, q));
            }
        }
        // X on pivot -> Z on pivot, then move into row k.
        t.push_gate(Gate::H(pivot));
        if pivot != k {
            t.push_gate(Gate::Swap(pivot, k));
        }
        let img = t.conjugate(input);
        assert!(
            img.letter(k) == 'Z' && img.weight() == 1 && img.phase().is_real(),
            "synthesis postcondition failed: input {k} maps to {} (phase {})",
            img,
            img.phase()
        );
    }
    Ok(t)
}

/// `synthesize_clifford_on` with the qubit count taken from the first input.
/// Panics on an empty input list.
pub fn synthesize_clifford(inputs: &[PauliOp]) -> Result<CliffordTableau, SynthesisError> {
    let n = inputs
        .first()
        .expect("synthesize_clifford: empty input list; use synthesize_clifford_on")
        .n_qubits();
    synthesize_clifford_on(n, inputs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, n: usize) -> PauliOp {
        PauliOp::parse(s, n).unwrap()
    }

    #[test]
    fn identity_tableau_conjugation() {
        let t = CliffordTableau::identity(3);
        for s in ["X0 Y1 Z2", "Y0", "Z1 X2"] {
            let op = p(s, 3);
            assert_eq!(t.conjugate(&op), op);
        }
    }

    #[test]
    fn hadamard_swaps_x_and_z() {
        let mut t = CliffordTableau::identity(1);
        t.push_gate(Gate::H(0));
        assert_eq!(t.conjugate(&p("X0", 1)), p("Z0", 1));
        assert_eq!(t.conjugate(&p("Z0", 1)), p("X0", 1));
        // H Y H = -Y
        let y = t.conjugate(&p("Y0", 1));
        assert_eq!(y.to_string(), "Y0");
        assert_eq!(y.phase(), Phase::MINUS_ONE);
    }

    #[test]
    fn cnot_images() {
        let mut t = CliffordTableau::identity(2);
        t.push_gate(Gate::Cnot(0, 1));
        assert_eq!(t.conjugate(&p("X0", 2)), p("X0 X1", 2));
        assert_eq!(t.conjugate(&p("Z1", 2)), p("Z0 Z1", 2));
        assert_eq!(t.conjugate(&p("X1", 2)), p("X1", 2));
        assert_eq!(t.conjugate(&p("Z0", 2)), p("Z0", 2));
    }

    #[test]
    fn synth_z0_is_identity() {
        let t = synthesize_clifford(&[p("Z0", 2)]).unwrap();
        assert!(t.gates().is_empty());
    }

    #[test]
    fn synth_zz() {
        let input = p("Z0 Z1", 2);
        let t = synthesize_clifford(std::slice::from_ref(&input)).unwrap();
        let img = t.conjugate(&input);
        assert_eq!(img.to_string(), "Z0");
        assert!(img.phase().is_real());
    }

    #[test]
    fn synth_x0_hadamard_style() {
        let input = p("X0", 1);
        let t = synthesize_clifford(std::slice::from_ref(&input)).unwrap();
        assert_eq!(t.conjugate(&input).to_string(), "Z0");
    }

    #[test]
    fn synth_multiple_symmetries() {
        let inputs = vec![p("Z0 Z1", 4), p("Z1 Z2", 4), p("X0 X1 X2 X3", 4)];
        let t = synthesize_clifford(&inputs).unwrap();
        for (k, input) in inputs.iter().enumerate() {
            let img = t.conjugate(input);
            assert_eq!(img.weight(), 1);
            assert_eq!(img.letter(k), 'Z');
        }
    }

    #[test]
    fn synth_rejects_bad_inputs() {
        assert!(matches!(
            synthesize_clifford(&[p("X0", 2), p("Z0", 2)]),
            Err(SynthesisError::NonCommuting(0, 1))
        ));
        assert!(matches!(
            synthesize_clifford(&[p("Z0", 2), p("Z1", 2), p("Z0 Z1", 2)]),
            Err(SynthesisError::TooManyInputs { .. })
        ));
        assert!(matches!(
            synthesize_clifford(&[p("Z0", 3), p("Z1", 3), p("Z0 Z1", 3)]),
            Err(SynthesisError::Dependent(2))
        ));
    }

    #[test]
    fn conjugation_preserves_commutation() {
        let inputs = vec![p("X0 Y1", 3), p("Z1 Z2", 3)];
        let t = synthesize_clifford(&[p("Z0 Z1 Z2", 3)]).unwrap();
        let a = t.conjugate(&inputs[0]);
        let b = t.conjugate(&inputs[1]);
        assert_eq!(
            inputs[0].commutes_with(&inputs[1]),
            a.commutes_with(&b)
        );
    }
}
