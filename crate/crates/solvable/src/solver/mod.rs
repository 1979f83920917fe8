//! Exact solving and benchmarking.
//!
//! The dense statevector machinery here is the brute-force oracle for the
//! whole crate: Pauli application, expectations, variances, dense matrices
//! for small qubit counts, iterative ground states, sector spectra of
//! factorized fragments, measurement plans, and the variance metric.

use num_complex::Complex64;
use thiserror::Error;

use crate::partition::Fragment;
use crate::pauli::{tableau::Gate, Hamiltonian, PauliOp};

pub mod lanczos;
pub mod linalg;
pub mod metric;
pub mod plan;
pub mod sector;

pub use lanczos::{ground_state, GroundStateOptions, GroundStateResult};
pub use metric::{variance_metric, MeasurementBudget};
pub use plan::{build_measurement_plan, simulate_measurements, MeasurementPlan};
pub use sector::{sector_solutions, SectorComponent, SectorSolution};

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("dimension mismatch: state has {state} qubits, operator has {op}")]
    DimensionMismatch { state: usize, op: usize },
    #[error("dense matrix cap exceeded: {n} qubits > {cap}")]
    DenseCapExceeded { n: usize, cap: usize },
    #[error("eigensolver did not converge after {0} iterations")]
    NonConvergence(usize),
    #[error("qubit cap exceeded: {n} qubits > {cap}")]
    QubitCapExceeded { n: usize, cap: usize },
    #[error("sector enumeration over {k} symmetries exceeds the cap of {cap}")]
    SectorCapExceeded { k: usize, cap: usize },
    #[error("invalid shot count: {0}")]
    InvalidShots(u64),
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
}

/// Maximum qubit count for dense 2^n x 2^n matrices.
pub const DENSE_QUBIT_CAP: usize = 10;

/// A normalized n-qubit statevector.
#[derive(Debug, Clone)]
pub struct StateVector {
    n_qubits: usize,
    pub amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn new(n_qubits: usize, amplitudes: Vec<Complex64>) -> Self {
        assert_eq!(amplitudes.len(), 1 << n_qubits);
        let s = StateVector {
            n_qubits,
            amplitudes,
        };
        debug_assert!((s.norm() - 1.0).abs() < 1e-10, "statevector not normalized");
        s
    }

    /// Computational basis state |index>.
    pub fn basis(n_qubits: usize, index: usize) -> Self {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        StateVector {
            n_qubits,
            amplitudes,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn dot(&self, other: &StateVector) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn normalize(&mut self) {
        let n = self.norm();
        for a in &mut self.amplitudes {
            *a /= n;
        }
    }
}

/// Action of a Pauli word on basis index `i`: the target index and the
/// accumulated phase exponent of i (0..3).
#[inline]
fn pauli_action(p: &PauliOp, i: usize) -> (usize, u8) {
    let mut j = i;
    let mut zpar = 0u32;
    let xw = p.x_words();
    let zw = p.z_words();
    for (w, (&xm, &zm)) in xw.iter().zip(zw).enumerate() {
        let chunk = (i >> (w * 64)) as u64;
        zpar ^= (chunk & zm).count_ones();
        j ^= (xm as usize) << (w * 64);
    }
    let e = p.word_exponent() + 2 * ((zpar & 1) as u8);
    (j, e & 3)
}

/// Apply a Pauli operator to a statevector (phase included).
pub fn apply_pauli(p: &PauliOp, s: &StateVector) -> StateVector {
    assert_eq!(
        p.n_qubits(),
        s.n_qubits(),
        "apply_pauli: dimension mismatch"
    );
    let dim = s.amplitudes.len();
    let mut out = vec![Complex64::new(0.0, 0.0); dim];
    for i in 0..dim {
        let (j, e) = pauli_action(p, i);
        out[j] = mul_i_pow(s.amplitudes[i], e);
    }
    StateVector {
        n_qubits: s.n_qubits,
        amplitudes: out,
    }
}

#[inline]
pub(crate) fn mul_i_pow(a: Complex64, e: u8) -> Complex64 {
    match e & 3 {
        0 => a,
        1 => Complex64::new(-a.im, a.re),
        2 => -a,
        _ => Complex64::new(a.im, -a.re),
    }
}

/// Apply a weighted Pauli sum: w += sum_t coeff_t * P_t |s>.
pub fn apply_terms(terms: &[(PauliOp, f64)], s: &StateVector) -> StateVector {
    let dim = s.amplitudes.len();
    let mut out = vec![Complex64::new(0.0, 0.0); dim];
    for (p, c) in terms {
        assert_eq!(p.n_qubits(), s.n_qubits());
        for i in 0..dim {
            let (j, e) = pauli_action(p, i);
            out[j] += mul_i_pow(s.amplitudes[i], e) * *c;
        }
    }
    StateVector {
        n_qubits: s.n_qubits,
        amplitudes: out,
    }
}

/// <s| sum_t c_t P_t |s>, asserting a negligible imaginary residue.
pub fn expectation_terms(terms: &[(PauliOp, f64)], s: &StateVector) -> f64 {
    let hs = apply_terms(terms, s);
    let v = s.dot(&hs);
    assert!(
        v.im.abs() < 1e-10,
        "expectation has imaginary residue {}",
        v.im
    );
    v.re
}

pub fn expectation(h: &Hamiltonian, s: &StateVector) -> f64 {
    expectation_terms(&term_pairs(h), s)
}

pub fn expectation_fragment(f: &Fragment, s: &StateVector) -> f64 {
    expectation_terms(&fragment_pairs(f), s)
}

/// Var_s(F) = <F^2> - <F>^2, clipped at zero within -1e-12.
pub fn variance(f: &Fragment, s: &StateVector) -> f64 {
    variance_terms(&fragment_pairs(f), s)
}

pub fn variance_terms(terms: &[(PauliOp, f64)], s: &StateVector) -> f64 {
    let hs = apply_terms(terms, s);
    let e = s.dot(&hs);
    assert!(e.im.abs() < 1e-10);
    let h2 = hs.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>();
    let var = h2 - e.re * e.re;
    if var < 0.0 {
        assert!(var > -1e-12, "variance significantly negative: {var}");
        0.0
    } else {
        var
    }
}

pub(crate) fn term_pairs(h: &Hamiltonian) -> Vec<(PauliOp, f64)> {
    h.terms()
        .iter()
        .map(|t| (t.op.clone(), t.coeff))
        .collect()
}

pub(crate) fn fragment_pairs(f: &Fragment) -> Vec<(PauliOp, f64)> {
    f.terms
        .iter()
        .map(|t| (t.op.clone(), t.coeff))
        .collect()
}

/// Explicit 2^n x 2^n matrix of a weighted Pauli sum (row-major). Only for
/// tests and small-instance oracles; capped at `DENSE_QUBIT_CAP` qubits.
pub fn dense_matrix_terms(
    terms: &[(PauliOp, f64)],
    n_qubits: usize,
) -> Result<Vec<Complex64>, SolverError> {
    if n_qubits > DENSE_QUBIT_CAP {
        return Err(SolverError::DenseCapExceeded {
            n: n_qubits,
            cap: DENSE_QUBIT_CAP,
        });
    }
    let dim = 1usize << n_qubits;
    let mut m = vec![Complex64::new(0.0, 0.0); dim * dim];
    for (p, c) in terms {
        assert_eq!(p.n_qubits(), n_qubits);
        for i in 0..dim {
            let (j, e) = pauli_action(p, i);
            m[j * dim + i] += mul_i_pow(Complex64::new(*c, 0.0), e);
        }
    }
    Ok(m)
}

pub fn dense_matrix(h: &Hamiltonian) -> Result<Vec<Complex64>, SolverError> {
    dense_matrix_terms(&term_pairs(h), h.n_qubits())
}

pub fn dense_matrix_fragment(f: &Fragment, n_qubits: usize) -> Result<Vec<Complex64>, SolverError> {
    dense_matrix_terms(&fragment_pairs(f), n_qubits)
}

/// Dense matrix of a single Pauli operator (phase included).
pub fn dense_matrix_pauli(p: &PauliOp) -> Result<Vec<Complex64>, SolverError> {
    dense_matrix_terms(std::slice::from_ref(&(p.clone(), 1.0)), p.n_qubits())
}

/// Apply an elementary Clifford gate to a statevector in place.
pub fn apply_gate(gate: Gate, s: &mut StateVector) {
    let amps = &mut s.amplitudes;
    let dim = amps.len();
    match gate {
        Gate::H(q) => {
            let mask = 1usize << q;
            let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
            for i in 0..dim {
                if i & mask == 0 {
                    let a = amps[i];
                    let b = amps[i | mask];
                    amps[i] = (a + b) * inv_sqrt2;
                    amps[i | mask] = (a - b) * inv_sqrt2;
                }
            }
        }
        Gate::S(q) => {
            let mask = 1usize << q;
            for (i, a) in amps.iter_mut().enumerate() {
                if i & mask != 0 {
                    *a = Complex64::new(-a.im, a.re);
                }
            }
        }
        Gate::Sdag(q) => {
            let mask = 1usize << q;
            for (i, a) in amps.iter_mut().enumerate() {
                if i & mask != 0 {
                    *a = Complex64::new(a.im, -a.re);
                }
            }
        }
        Gate::Cnot(c, t) => {
            let cm = 1usize << c;
            let tm = 1usize << t;
            for i in 0..dim {
                if i & cm != 0 && i & tm == 0 {
                    amps.swap(i, i | tm);
                }
            }
        }
        Gate::Cz(a, b) => {
            let am = 1usize << a;
            let bm = 1usize << b;
            for (i, amp) in amps.iter_mut().enumerate() {
                if i & am != 0 && i & bm != 0 {
                    *amp = -*amp;
                }
            }
        }
        Gate::Swap(a, b) => {
            let am = 1usize << a;
            let bm = 1usize << b;
            for i in 0..dim {
                if i & am != 0 && i & bm == 0 {
                    amps.swap(i, (i & !am) | bm);
                }
            }
        }
    }
}

/// Apply a whole Clifford gate sequence.
pub fn apply_clifford(t: &crate::pauli::CliffordTableau, s: &mut StateVector) {
    for &g in t.gates() {
        apply_gate(g, s);
    }
}

/// exp(-i theta P) |s> = cos(theta)|s> - i sin(theta) P|s>.
pub fn apply_pauli_exponential(p: &PauliOp, theta: f64, s: &StateVector) -> StateVector {
    let ps = apply_pauli(p, s);
    let (c, sn) = (theta.cos(), theta.sin());
    let mut out = s.clone();
    for (o, (a, b)) in out
        .amplitudes
        .iter_mut()
        .zip(s.amplitudes.iter().zip(&ps.amplitudes))
    {
        *o = a * c - Complex64::new(0.0, 1.0) * b * sn;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::Phase;

    fn p(s: &str, n: usize) -> PauliOp {
        PauliOp::parse(s, n).unwrap()
    }

    #[test]
    fn pauli_matrices() {
        // Z0 on 1 qubit: diag(1, -1)
        let m = dense_matrix_pauli(&p("Z0", 1)).unwrap();
        assert_eq!(m[0], Complex64::new(1.0, 0.0));
        assert_eq!(m[3], Complex64::new(-1.0, 0.0));
        assert_eq!(m[1], Complex64::new(0.0, 0.0));
        // X0: off-diagonal ones
        let m = dense_matrix_pauli(&p("X0", 1)).unwrap();
        assert_eq!(m[1], Complex64::new(1.0, 0.0));
        assert_eq!(m[2], Complex64::new(1.0, 0.0));
        // Y0 |0> = i|1>
        let s = apply_pauli(&p("Y0", 1), &StateVector::basis(1, 0));
        assert_eq!(s.amplitudes[1], Complex64::new(0.0, 1.0));
    }

    #[test]
    fn apply_examples() {
        let s0 = StateVector::basis(1, 0);
        let z = apply_pauli(&p("Z0", 1), &s0);
        assert_eq!(z.amplitudes[0], Complex64::new(1.0, 0.0));
        let x = apply_pauli(&p("X0", 1), &s0);
        assert_eq!(x.amplitudes[1], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn expectation_examples() {
        let s0 = StateVector::basis(1, 0);
        assert_eq!(expectation_terms(&[(p("Z0", 1), 1.0)], &s0), 1.0);
        assert_eq!(expectation_terms(&[(p("X0", 1), 1.0)], &s0), 0.0);
        let plus = StateVector::new(
            1,
            vec![
                Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
                Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
            ],
        );
        let e = expectation_terms(&[(p("Z0", 1), 0.7), (p("X0", 1), 0.3)], &plus);
        assert!((e - 0.3).abs() < 1e-12);
    }

    #[test]
    fn variance_examples() {
        let s0 = StateVector::basis(1, 0);
        assert_eq!(variance_terms(&[(p("Z0", 1), 1.0)], &s0), 0.0);
        assert!((variance_terms(&[(p("X0", 1), 1.0)], &s0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn phase_times_state() {
        let s0 = StateVector::basis(1, 0);
        let y = p("Y0", 1);
        // applying Y twice gives back the state (Y^2 = I)
        let s2 = apply_pauli(&y, &apply_pauli(&y, &s0));
        assert_eq!(s2.amplitudes[0], Complex64::new(1.0, 0.0));
        assert_eq!(y.mul(&y).phase(), Phase::ONE);
    }

    #[test]
    fn gates_match_tableau_conjugation() {
        use crate::pauli::tableau::CliffordTableau;
        // <s| U^dag P U |s> must equal <s'| P' |s'> with s' = U s, P' = U P U^dag.
        let gates = [
            Gate::H(0),
            Gate::S(1),
            Gate::Cnot(0, 2),
            Gate::Cz(1, 2),
            Gate::Swap(0, 1),
            Gate::Sdag(2),
        ];
        let mut t = CliffordTableau::identity(3);
        for g in gates {
            t.push_gate(g);
        }
        for (i, pat) in ["X0", "Y1 Z2", "Z0 X1 Y2"].iter().enumerate() {
            let op = p(pat, 3);
            let conj = t.conjugate(&op);
            let mut s = StateVector::basis(3, (i * 3 + 1) % 8);
            let before = s.clone();
            apply_clifford(&t, &mut s);
            // <Us| UPU^dag |Us> == <s|P|s>
            let lhs = before.dot(&apply_pauli(&op, &before));
            let rhs = s.dot(&apply_pauli(&conj, &s));
            assert!((lhs - rhs).norm() < 1e-12, "{pat}: {lhs} vs {rhs}");
        }
    }
}
