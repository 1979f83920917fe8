//! Pauli-string algebra in the symplectic GF(2) representation.
//!
//! An n-qubit Pauli operator is stored as `i^e * X^x * Z^z` where `x` and `z`
//! are length-n bit-vectors and `e` is an exponent of `i` tracked exactly
//! modulo 4. A `Y` on qubit q corresponds to `x[q] = z[q] = 1` (with one
//! factor of `i` folded into `e`, since `Y = i X Z`). Commutation is the
//! symplectic form `x_p.z_q + z_p.x_q (mod 2)`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub mod gf2;
pub mod tableau;

pub use tableau::CliffordTableau;

/// Errors from parsing Pauli strings or Hamiltonian construction.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum PauliParseError {
    #[error("malformed Pauli token `{0}`")]
    MalformedToken(String),
    #[error("qubit index {index} out of range for {n_qubits} qubits in token `{token}`")]
    IndexOutOfRange {
        token: String,
        index: usize,
        n_qubits: usize,
    },
    #[error("repeated qubit index {0} in Pauli string")]
    RepeatedIndex(usize),
}

/// A power of `i`, tracked exactly as an exponent modulo 4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn from_exponent(e: u8) -> Self {
        Phase(e & 3)
    }

    pub fn exponent(self) -> u8 {
        self.0
    }

    pub fn is_real(self) -> bool {
        self.0 % 2 == 0
    }

    /// The phase as a complex pair (re, im); entries are -1, 0 or 1.
    pub fn as_complex(self) -> (f64, f64) {
        match self.0 {
            0 => (1.0, 0.0),
            1 => (0.0, 1.0),
            2 => (-1.0, 0.0),
            _ => (0.0, -1.0),
        }
    }

    /// Real value of the phase; panics if the phase is imaginary.
    pub fn real_value(self) -> f64 {
        match self.0 {
            0 => 1.0,
            2 => -1.0,
            _ => panic!("phase i^{} is not real", self.0),
        }
    }

    pub fn inverse(self) -> Phase {
        Phase((4 - self.0) & 3)
    }
}

impl std::ops::Mul for Phase {
    type Output = Phase;
    fn mul(self, rhs: Phase) -> Phase {
        Phase((self.0 + rhs.0) & 3)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self.0 {
            0 => "+1",
            1 => "+i",
            2 => "-1",
            _ => "-i",
        })
    }
}

pub(crate) const WORD_BITS: usize = 64;

pub(crate) fn words_for(n: usize) -> usize {
    n.div_ceil(WORD_BITS)
}

/// An n-qubit Pauli operator with exact phase.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliOp {
    n_qubits: usize,
    x: Vec<u64>,
    z: Vec<u64>,
    /// exponent of i in `i^e X^x Z^z`, modulo 4
    e: u8,
}

impl PauliOp {
    pub fn identity(n_qubits: usize) -> Self {
        assert!(n_qubits > 0, "PauliOp requires at least one qubit");
        let w = words_for(n_qubits);
        PauliOp {
            n_qubits,
            x: vec![0; w],
            z: vec![0; w],
            e: 0,
        }
    }

    /// Single-letter Pauli with phase +1; `letter` is one of 'X', 'Y', 'Z'.
    pub fn single(n_qubits: usize, qubit: usize, letter: char) -> Self {
        let mut p = PauliOp::identity(n_qubits);
        p.set_letter(qubit, letter);
        p
    }

    pub(crate) fn from_words(n_qubits: usize, x: Vec<u64>, z: Vec<u64>, e: u8) -> Self {
        debug_assert_eq!(x.len(), words_for(n_qubits));
        debug_assert_eq!(z.len(), words_for(n_qubits));
        PauliOp {
            n_qubits,
            x,
            z,
            e: e & 3,
        }
    }

    fn set_letter(&mut self, qubit: usize, letter: char) {
        assert!(qubit < self.n_qubits);
        let (w, b) = (qubit / WORD_BITS, qubit % WORD_BITS);
        match letter {
            'X' => self.x[w] |= 1 << b,
            'Z' => self.z[w] |= 1 << b,
            'Y' => {
                self.x[w] |= 1 << b;
                self.z[w] |= 1 << b;
                self.e = (self.e + 1) & 3;
            }
            _ => panic!("invalid Pauli letter {letter}"),
        }
    }

    /// Parse a whitespace-separated token list such as `"X0 Z3"`. The empty
    /// string is the identity. Tokens are `X<q>`, `Y<q>`, `Z<q>` with
    /// distinct in-range qubit indices; the result carries phase +1.
    pub fn parse(text: &str, n_qubits: usize) -> Result<Self, PauliParseError> {
        let mut p = PauliOp::identity(n_qubits);
        for tok in text.split_whitespace() {
            let mut chars = tok.chars();
            let letter = chars.next().unwrap();
            if !matches!(letter, 'X' | 'Y' | 'Z') {
                return Err(PauliParseError::MalformedToken(tok.to_string()));
            }
            let idx: usize = chars
                .as_str()
                .parse()
                .map_err(|_| PauliParseError::MalformedToken(tok.to_string()))?;
            if idx >= n_qubits {
                return Err(PauliParseError::IndexOutOfRange {
                    token: tok.to_string(),
                    index: idx,
                    n_qubits,
                });
            }
            if p.x_bit(idx) || p.z_bit(idx) {
                return Err(PauliParseError::RepeatedIndex(idx));
            }
            p.set_letter(idx, letter);
        }
        Ok(p)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn x_bit(&self, q: usize) -> bool {
        (self.x[q / WORD_BITS] >> (q % WORD_BITS)) & 1 == 1
    }

    pub fn z_bit(&self, q: usize) -> bool {
        (self.z[q / WORD_BITS] >> (q % WORD_BITS)) & 1 == 1
    }

    pub(crate) fn x_words(&self) -> &[u64] {
        &self.x
    }

    pub(crate) fn z_words(&self) -> &[u64] {
        &self.z
    }

    /// Letter at qubit q: 'I', 'X', 'Y', or 'Z'.
    pub fn letter(&self, q: usize) -> char {
        match (self.x_bit(q), self.z_bit(q)) {
            (false, false) => 'I',
            (true, false) => 'X',
            (true, true) => 'Y',
            (false, true) => 'Z',
        }
    }

    pub fn is_identity_string(&self) -> bool {
        self.x.iter().all(|&w| w == 0) && self.z.iter().all(|&w| w == 0)
    }

    /// Number of qubits on which the operator acts non-trivially.
    pub fn weight(&self) -> usize {
        self.x
            .iter()
            .zip(&self.z)
            .map(|(a, b)| (a | b).count_ones() as usize)
            .sum()
    }

    pub fn y_count(&self) -> usize {
        self.x
            .iter()
            .zip(&self.z)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// Phase prefactor relative to the plain Pauli string (product of
    /// X/Y/Z letters). A freshly parsed string has phase +1.
    pub fn phase(&self) -> Phase {
        let y = (self.y_count() % 4) as u8;
        Phase((self.e + 4 - y) & 3)
    }

    /// Raw exponent of i in the internal `i^e X^x Z^z` form.
    pub(crate) fn word_exponent(&self) -> u8 {
        self.e
    }

    /// Same Pauli string with the phase reset to +1.
    pub fn with_unit_phase(&self) -> PauliOp {
        let mut p = self.clone();
        p.e = (self.y_count() % 4) as u8;
        p
    }

    /// Multiply the operator's phase by an extra factor of `i^k`.
    pub fn scaled_by(&self, phase: Phase) -> PauliOp {
        let mut p = self.clone();
        p.e = (p.e + phase.exponent()) & 3;
        p
    }

    /// True iff the symplectic form `x_p.z_q + z_p.x_q` vanishes mod 2.
    pub fn commutes_with(&self, other: &PauliOp) -> bool {
        assert_eq!(
            self.n_qubits, other.n_qubits,
            "commutes_with: mismatched qubit counts"
        );
        let mut acc = 0u32;
        for i in 0..self.x.len() {
            acc ^= (self.x[i] & other.z[i]).count_ones();
            acc ^= (self.z[i] & other.x[i]).count_ones();
        }
        acc & 1 == 0
    }

    /// Operator product with exact phase tracking.
    pub fn mul(&self, other: &PauliOp) -> PauliOp {
        assert_eq!(
            self.n_qubits, other.n_qubits,
            "mul: mismatched qubit counts"
        );
        // (i^a X^x1 Z^z1)(i^b X^x2 Z^z2): commuting Z^z1 past X^x2 picks up
        // (-1)^(z1.x2).
        let mut swap = 0u32;
        for i in 0..self.x.len() {
            swap ^= (self.z[i] & other.x[i]).count_ones();
        }
        let e = (self.e + other.e + 2 * ((swap & 1) as u8)) & 3;
        let x = self
            .x
            .iter()
            .zip(&other.x)
            .map(|(a, b)| a ^ b)
            .collect();
        let z = self
            .z
            .iter()
            .zip(&other.z)
            .map(|(a, b)| a ^ b)
            .collect();
        PauliOp {
            n_qubits: self.n_qubits,
            x,
            z,
            e,
        }
    }

    /// True iff the operator is real and symmetric as a matrix: the number
    /// of Y letters is even and the phase is real.
    pub fn is_real_symmetric(&self) -> bool {
        self.y_count() % 2 == 0 && self.phase().is_real()
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase().is_real()
    }

    /// The Pauli string and phase, ignoring qubit count: used as a dedup key.
    pub fn string_key(&self) -> (Vec<u64>, Vec<u64>) {
        (self.x.clone(), self.z.clone())
    }

    /// The symplectic GF(2) vector (x || z) of length 2n, packed in words.
    pub fn symplectic_words(&self) -> Vec<u64> {
        let mut v = Vec::with_capacity(2 * self.x.len());
        v.extend_from_slice(&self.x);
        v.extend_from_slice(&self.z);
        v
    }
}

impl fmt::Display for PauliOp {
    /// The bare string form, e.g. `"X0 Z3"`; the identity prints as `""`.
    /// The phase is not printed; callers that need it use `phase()`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for q in 0..self.n_qubits {
            let l = self.letter(q);
            if l != 'I' {
                if !first {
                    f.write_str(" ")?;
                }
                write!(f, "{l}{q}")?;
                first = false;
            }
        }
        Ok(())
    }
}

/// A Pauli string with a real coefficient; the op always has phase +1.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedTerm {
    pub op: PauliOp,
    pub coeff: f64,
}

impl WeightedTerm {
    pub fn new(op: PauliOp, coeff: f64) -> Self {
        assert!(coeff.is_finite(), "non-finite coefficient");
        // phases are absorbed into the coefficient
        let phase = op.phase();
        let coeff = coeff * phase.real_value();
        WeightedTerm {
            op: op.with_unit_phase(),
            coeff,
        }
    }
}

/// Threshold below which coefficients are treated as numeric noise and
/// dropped at construction time.
pub const DEDUP_THRESHOLD: f64 = 1e-12;

/// A real linear combination of distinct Pauli strings.
#[derive(Debug, Clone, PartialEq)]
pub struct Hamiltonian {
    n_qubits: usize,
    terms: Vec<WeightedTerm>,
}

impl Hamiltonian {
    /// Build from terms, merging duplicate strings and dropping merged
    /// coefficients with |c| <= `DEDUP_THRESHOLD`.
    pub fn new(n_qubits: usize, terms: Vec<WeightedTerm>) -> Self {
        assert!(n_qubits > 0);
        let mut order: Vec<(Vec<u64>, Vec<u64>)> = Vec::new();
        let mut merged: std::collections::HashMap<(Vec<u64>, Vec<u64>), WeightedTerm> =
            std::collections::HashMap::new();
        for t in terms {
            assert_eq!(t.op.n_qubits(), n_qubits);
            let key = t.op.string_key();
            match merged.get_mut(&key) {
                Some(existing) => existing.coeff += t.coeff,
                None => {
                    order.push(key.clone());
                    merged.insert(key, t);
                }
            }
        }
        let terms = order
            .into_iter()
            .filter_map(|k| {
                let t = merged.remove(&k).unwrap();
                (t.coeff.abs() > DEDUP_THRESHOLD).then_some(t)
            })
            .collect();
        Hamiltonian { n_qubits, terms }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn terms(&self) -> &[WeightedTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Sum of |coefficient| over all terms.
    pub fn l1_norm(&self) -> f64 {
        self.terms.iter().map(|t| t.coeff.abs()).sum()
    }

    pub fn ops(&self) -> Vec<&PauliOp> {
        self.terms.iter().map(|t| &t.op).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_identity_and_strings() {
        let id = PauliOp::parse("", 2).unwrap();
        assert!(id.is_identity_string());
        assert_eq!(id.phase(), Phase::ONE);

        let p = PauliOp::parse("X0 Z1", 2).unwrap();
        assert!(p.x_bit(0) && !p.z_bit(0));
        assert!(!p.x_bit(1) && p.z_bit(1));
        assert_eq!(p.to_string(), "X0 Z1");

        let y = PauliOp::parse("Y3", 4).unwrap();
        assert!(y.x_bit(3) && y.z_bit(3));
        assert_eq!(y.phase(), Phase::ONE);
    }

    #[test]
    fn parse_errors_name_offender() {
        match PauliOp::parse("X0 Q1", 2) {
            Err(PauliParseError::MalformedToken(t)) => assert_eq!(t, "Q1"),
            other => panic!("expected malformed token, got {other:?}"),
        }
        assert!(matches!(
            PauliOp::parse("X5", 2),
            Err(PauliParseError::IndexOutOfRange { index: 5, .. })
        ));
        assert!(matches!(
            PauliOp::parse("X0 Z0", 2),
            Err(PauliParseError::RepeatedIndex(0))
        ));
        assert!(matches!(
            PauliOp::parse("X", 2),
            Err(PauliParseError::MalformedToken(_))
        ));
    }

    #[test]
    fn commutation_examples() {
        let n = 2;
        let x0 = PauliOp::parse("X0", n).unwrap();
        let z0 = PauliOp::parse("Z0", n).unwrap();
        let z1 = PauliOp::parse("Z1", n).unwrap();
        let xx = PauliOp::parse("X0 X1", n).unwrap();
        let zz = PauliOp::parse("Z0 Z1", n).unwrap();
        assert!(!x0.commutes_with(&z0));
        assert!(xx.commutes_with(&zz));
        assert!(x0.commutes_with(&z1));
    }

    #[test]
    fn multiplication_phases() {
        let x0 = PauliOp::parse("X0", 1).unwrap();
        let z0 = PauliOp::parse("Z0", 1).unwrap();
        let y0 = PauliOp::parse("Y0", 1).unwrap();

        // XZ = -iY
        let xz = x0.mul(&z0);
        assert_eq!(xz.letter(0), 'Y');
        assert_eq!(xz.phase(), Phase::MINUS_I);

        // P.P = +identity
        for p in [&x0, &z0, &y0] {
            let sq = p.mul(p);
            assert!(sq.is_identity_string());
            assert_eq!(sq.phase(), Phase::ONE);
        }

        // disjoint support: plain product
        let x0b = PauliOp::parse("X0", 2).unwrap();
        let z1 = PauliOp::parse("Z1", 2).unwrap();
        let prod = x0b.mul(&z1);
        assert_eq!(prod.to_string(), "X0 Z1");
        assert_eq!(prod.phase(), Phase::ONE);
    }

    #[test]
    fn real_symmetric() {
        assert!(PauliOp::parse("Y0 Y1", 2).unwrap().is_real_symmetric());
        assert!(!PauliOp::parse("Y0", 2).unwrap().is_real_symmetric());
        assert!(PauliOp::parse("X0 Z1", 2).unwrap().is_real_symmetric());
    }

    #[test]
    fn hamiltonian_merges_duplicates() {
        let n = 2;
        let t = |s: &str, c: f64| WeightedTerm::new(PauliOp::parse(s, n).unwrap(), c);
        let h = Hamiltonian::new(n, vec![t("X0", 1.0), t("Z1", 0.5), t("X0", -1.0 + 1e-15)]);
        // X0 merged to ~0 and dropped
        assert_eq!(h.len(), 1);
        assert_eq!(h.terms()[0].op.to_string(), "Z1");
    }

    #[test]
    fn weighted_term_absorbs_phase() {
        let y = PauliOp::parse("Y0", 1).unwrap();
        let minus_y = y.scaled_by(Phase::MINUS_ONE);
        let t = WeightedTerm::new(minus_y, 2.0);
        assert_eq!(t.coeff, -2.0);
        assert_eq!(t.op.phase(), Phase::ONE);
    }
}
