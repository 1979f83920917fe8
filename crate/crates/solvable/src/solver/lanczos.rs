//! Ground states via Lanczos with full reorthogonalization (dense
//! diagonalization fallback for small qubit counts).

use num_complex::Complex64;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use super::linalg::{eigh_hermitian, eigh_real_symmetric};
use super::{mul_i_pow, SolverError, StateVector};
use crate::pauli::{Hamiltonian, PauliOp};

#[derive(Debug, Clone)]
pub struct GroundStateOptions {
    /// Refuse instances larger than this (statevector memory cap).
    pub max_qubits: usize,
    /// Required residual norm ||H s - E s||.
    pub tol: f64,
    /// Total matrix-vector product budget.
    pub max_iters: usize,
    /// Krylov dimension per restart cycle.
    pub krylov_dim: usize,
    pub seed: u64,
}

impl Default for GroundStateOptions {
    fn default() -> Self {
        GroundStateOptions {
            max_qubits: 16,
            tol: 1e-8,
            max_iters: 10_000,
            krylov_dim: 160,
            seed: 0x5eed,
        }
    }
}

#[derive(Debug, Clone)]
pub struct GroundStateResult {
    pub energy: f64,
    pub state: StateVector,
    pub residual: f64,
    /// True when the lowest Ritz values are within 1e-8 of each other: the
    /// returned state is then an arbitrary member of the ground space.
    pub degenerate: bool,
    pub matvecs: usize,
}

/// Weighted Pauli sum prepared for fast repeated application: the diagonal
/// (Z-only) part is pre-summed into a single vector.
pub(crate) struct PreparedSum {
    n_qubits: usize,
    diagonal: Vec<f64>,
    offdiag: Vec<(usize, u8, Vec<u64>, f64)>, // (xmask, phase exp, z words, coeff)
}

impl PreparedSum {
    pub(crate) fn new(terms: &[(PauliOp, f64)], n_qubits: usize) -> Self {
        let dim = 1usize << n_qubits;
        let mut diagonal = vec![0.0; dim];
        let mut offdiag = Vec::new();
        for (p, c) in terms {
            assert_eq!(p.n_qubits(), n_qubits);
            let xw = p.x_words();
            if xw.iter().all(|&w| w == 0) {
                let zw = p.z_words();
                debug_assert!(p.word_exponent() % 2 == 0);
                let sign0 = if p.word_exponent() == 2 { -1.0 } else { 1.0 };
                for (i, d) in diagonal.iter_mut().enumerate() {
                    let mut par = 0u32;
                    for (w, &zm) in zw.iter().enumerate() {
                        par ^= ((i >> (w * 64)) as u64 & zm).count_ones();
                    }
                    *d += if par & 1 == 1 { -c * sign0 } else { c * sign0 };
                }
            } else {
                let mut xmask = 0usize;
                for (w, &xm) in xw.iter().enumerate() {
                    xmask |= (xm as usize) << (w * 64);
                }
                offdiag.push((xmask, p.word_exponent(), p.z_words().to_vec(), *c));
            }
        }
        PreparedSum {
            n_qubits,
            diagonal,
            offdiag,
        }
    }

    pub(crate) fn apply(&self, v: &[Complex64], out: &mut [Complex64]) {
        let dim = 1usize << self.n_qubits;
        for i in 0..dim {
            out[i] = v[i] * self.diagonal[i];
        }
        for (xmask, e, zw, c) in &self.offdiag {
            if zw.len() == 1 {
                let zm = zw[0];
                for (i, vi) in v.iter().enumerate() {
                    let par = ((i as u64 & zm).count_ones() & 1) as u8;
                    out[i ^ xmask] += mul_i_pow(vi * *c, e + 2 * par);
                }
            } else {
                for (i, vi) in v.iter().enumerate() {
                    let mut par = 0u32;
                    for (w, &zm) in zw.iter().enumerate() {
                        par ^= ((i >> (w * 64)) as u64 & zm).count_ones();
                    }
                    out[i ^ xmask] += mul_i_pow(vi * *c, e + 2 * (par & 1) as u8);
                }
            }
        }
    }
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Lowest eigenpair of `h`. Dense diagonalization for n <= 10 qubits,
/// otherwise restarted Lanczos with full reorthogonalization on a
/// matrix-free Pauli-sum application.
pub fn ground_state(
    h: &Hamiltonian,
    opts: &GroundStateOptions,
) -> Result<GroundStateResult, SolverError> {
    let n = h.n_qubits();
    if n > opts.max_qubits {
        return Err(SolverError::QubitCapExceeded {
            n,
            cap: opts.max_qubits,
        });
    }
    let terms = super::term_pairs(h);
    if n <= super::DENSE_QUBIT_CAP {
        return dense_ground_state(&terms, n);
    }
    let dim = 1usize << n;
    let prep = PreparedSum::new(&terms, n);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut x: Vec<Complex64> = (0..dim)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let nx = norm(&x);
    x.iter_mut().for_each(|a| *a /= nx);

    let mut matvecs = 0usize;
    let mut degenerate = false;
    loop {
        // one Krylov cycle starting from x
        let mut basis: Vec<Vec<Complex64>> = vec![x.clone()];
        let mut alphas: Vec<f64> = Vec::new();
        let mut betas: Vec<f64> = Vec::new();
        let mut w = vec![Complex64::new(0.0, 0.0); dim];
        let mut exhausted = false;
        for k in 0..opts.krylov_dim {
            if matvecs >= opts.max_iters {
                return Err(SolverError::NonConvergence(matvecs));
            }
            prep.apply(&basis[k], &mut w);
            matvecs += 1;
            let alpha = dot(&basis[k], &w).re;
            alphas.push(alpha);
            // full reorthogonalization, twice for stability
            for _ in 0..2 {
                for b in &basis {
                    let d = dot(b, &w);
                    for (wi, bi) in w.iter_mut().zip(b) {
                        *wi -= d * bi;
                    }
                }
            }
            let beta = norm(&w);
            if beta < 1e-13 {
                exhausted = true;
                break;
            }
            betas.push(beta);
            let next: Vec<Complex64> = w.iter().map(|a| a / beta).collect();
            basis.push(next);
        }
        let m = alphas.len();
        let mut t = vec![0.0; m * m];
        for k in 0..m {
            t[k * m + k] = alphas[k];
            if k + 1 < m {
                t[k * m + k + 1] = betas[k];
                t[(k + 1) * m + k] = betas[k];
            }
        }
        let (vals, vecs) = eigh_real_symmetric(&t, m);
        let theta = vals[0];
        if m > 1 && (vals[1] - vals[0]).abs() < 1e-8 {
            degenerate = true;
        }
        // Ritz vector
        let mut ritz = vec![Complex64::new(0.0, 0.0); dim];
        for (k, b) in basis.iter().take(m).enumerate() {
            let y = vecs[k * m];
            for (r, bi) in ritz.iter_mut().zip(b) {
                *r += bi * y;
            }
        }
        let nr = norm(&ritz);
        ritz.iter_mut().for_each(|a| *a /= nr);
        // explicit residual
        prep.apply(&ritz, &mut w);
        matvecs += 1;
        let mut res = 0.0;
        for (wi, ri) in w.iter().zip(&ritz) {
            res += (wi - ri * theta).norm_sqr();
        }
        let res = res.sqrt();
        if res < opts.tol || exhausted {
            if res >= opts.tol {
                return Err(SolverError::NonConvergence(matvecs));
            }
            let state = StateVector {
                n_qubits: n,
                amplitudes: ritz,
            };
            return Ok(GroundStateResult {
                energy: theta,
                state,
                residual: res,
                degenerate,
                matvecs,
            });
        }
        if matvecs >= opts.max_iters {
            return Err(SolverError::NonConvergence(matvecs));
        }
        x = ritz;
    }
}

fn dense_ground_state(
    terms: &[(PauliOp, f64)],
    n: usize,
) -> Result<GroundStateResult, SolverError> {
    let dim = 1usize << n;
    let m = super::dense_matrix_terms(terms, n)?;
    let (vals, vecs) = eigh_hermitian(&m, dim);
    let energy = vals[0];
    let degenerate = dim > 1 && (vals[1] - vals[0]).abs() < 1e-8;
    let amplitudes: Vec<Complex64> = (0..dim).map(|r| vecs[r * dim]).collect();
    let mut state = StateVector {
        n_qubits: n,
        amplitudes,
    };
    state.normalize();
    // residual check
    let hs = super::apply_terms(terms, &state);
    let mut res = 0.0;
    for (a, b) in hs.amplitudes.iter().zip(&state.amplitudes) {
        res += (a - b * energy).norm_sqr();
    }
    Ok(GroundStateResult {
        energy,
        state,
        residual: res.sqrt(),
        degenerate,
        matvecs: 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::WeightedTerm;

    fn ham(n: usize, terms: &[(&str, f64)]) -> Hamiltonian {
        Hamiltonian::new(
            n,
            terms
                .iter()
                .map(|(s, c)| WeightedTerm::new(PauliOp::parse(s, n).unwrap(), *c))
                .collect(),
        )
    }

    #[test]
    fn minus_z_ground() {
        let h = ham(1, &[("Z0", -1.0)]);
        let r = ground_state(&h, &GroundStateOptions::default()).unwrap();
        assert!((r.energy + 1.0).abs() < 1e-10);
        assert!((r.state.amplitudes[0].norm() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn x_ground_is_minus() {
        let h = ham(1, &[("X0", 1.0)]);
        let r = ground_state(&h, &GroundStateOptions::default()).unwrap();
        assert!((r.energy + 1.0).abs() < 1e-10);
        // (|0> - |1>)/sqrt(2) up to global phase
        let a = r.state.amplitudes[0];
        let b = r.state.amplitudes[1];
        assert!((a + b).norm() < 1e-8);
    }

    #[test]
    fn lanczos_path_analytic_product_hamiltonian() {
        // 11 qubits forces the iterative path; H = sum_q c_q X_q + d_q Z_q
        // has ground energy -sum_q sqrt(c_q^2 + d_q^2).
        let n = 11;
        let mut terms = Vec::new();
        let mut expect = 0.0;
        for q in 0..n {
            let c = 0.3 + 0.07 * q as f64;
            let d = 0.9 - 0.05 * q as f64;
            terms.push(WeightedTerm::new(
                PauliOp::parse(&format!("X{q}"), n).unwrap(),
                c,
            ));
            terms.push(WeightedTerm::new(
                PauliOp::parse(&format!("Z{q}"), n).unwrap(),
                d,
            ));
            expect -= (c * c + d * d).sqrt();
        }
        let h = Hamiltonian::new(n, terms);
        let r = ground_state(&h, &GroundStateOptions::default()).unwrap();
        assert!(
            (r.energy - expect).abs() < 1e-7,
            "lanczos {} vs analytic {expect}",
            r.energy
        );
        assert!(r.residual < 1e-8);
    }

    #[test]
    fn ising_chain_lanczos_vs_dense() {
        // 11-qubit transverse-field Ising chain compared against the dense
        // diagonalization of the same chain on a 9-qubit instance plus the
        // residual contract on the large one.
        let n = 9;
        let mut terms = Vec::new();
        for q in 0..n - 1 {
            terms.push(WeightedTerm::new(
                PauliOp::parse(&format!("Z{q} Z{}", q + 1), n).unwrap(),
                -1.0,
            ));
        }
        for q in 0..n {
            terms.push(WeightedTerm::new(
                PauliOp::parse(&format!("X{q}"), n).unwrap(),
                -0.8,
            ));
        }
        let h = Hamiltonian::new(n, terms);
        let dense = ground_state(&h, &GroundStateOptions::default()).unwrap();
        // now rebuild with an artificially lowered dense cap by calling the
        // iterative machinery at 11 qubits on an embedded copy
        let n2 = 11;
        let mut terms2 = Vec::new();
        for q in 0..n - 1 {
            terms2.push(WeightedTerm::new(
                PauliOp::parse(&format!("Z{q} Z{}", q + 1), n2).unwrap(),
                -1.0,
            ));
        }
        for q in 0..n {
            terms2.push(WeightedTerm::new(
                PauliOp::parse(&format!("X{q}"), n2).unwrap(),
                -0.8,
            ));
        }
        // two idle qubits shift nothing
        let h2 = Hamiltonian::new(n2, terms2);
        let r = ground_state(&h2, &GroundStateOptions::default()).unwrap();
        assert!(
            (r.energy - dense.energy).abs() < 1e-7,
            "embedded lanczos {} vs dense {}",
            r.energy,
            dense.energy
        );
    }
}
