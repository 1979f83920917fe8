//! Self-contained dense eigensolvers: cyclic Jacobi for real-symmetric and
//! complex-Hermitian matrices, plus the canonical form of a real
//! skew-symmetric matrix (2x2 rotation blocks with nonnegative strengths).
//!
//! Sizes here are small (dense oracles up to 2^10, component matrices up to
//! a few hundred), so Jacobi's robustness and determinism beat anything
//! fancier.

use num_complex::Complex64;

const MAX_SWEEPS: usize = 64;

/// Eigen-decomposition of a real symmetric matrix (row-major, dim x dim).
/// Returns eigenvalues ascending with matching eigenvector columns
/// (`vecs[r * dim + c]` = component r of eigenvector c).
pub fn eigh_real_symmetric(a: &[f64], dim: usize) -> (Vec<f64>, Vec<f64>) {
    assert_eq!(a.len(), dim * dim);
    let mut m = a.to_vec();
    let mut v = vec![0.0; dim * dim];
    for i in 0..dim {
        v[i * dim + i] = 1.0;
    }
    let scale: f64 = m.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-300);
    for _sweep in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..dim {
            for q in p + 1..dim {
                off += m[p * dim + q] * m[p * dim + q];
            }
        }
        if off.sqrt() < 1e-14 * scale {
            break;
        }
        for p in 0..dim {
            for q in p + 1..dim {
                let apq = m[p * dim + q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let app = m[p * dim + p];
                let aqq = m[q * dim + q];
                let tau = (aqq - app) / (2.0 * apq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for r in 0..dim {
                    let arp = m[r * dim + p];
                    let arq = m[r * dim + q];
                    m[r * dim + p] = c * arp - s * arq;
                    m[r * dim + q] = s * arp + c * arq;
                }
                for r in 0..dim {
                    let apr = m[p * dim + r];
                    let aqr = m[q * dim + r];
                    m[p * dim + r] = c * apr - s * aqr;
                    m[q * dim + r] = s * apr + c * aqr;
                }
                for r in 0..dim {
                    let vrp = v[r * dim + p];
                    let vrq = v[r * dim + q];
                    v[r * dim + p] = c * vrp - s * vrq;
                    v[r * dim + q] = s * vrp + c * vrq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&i, &j| m[i * dim + i].partial_cmp(&m[j * dim + j]).unwrap());
    let vals: Vec<f64> = order.iter().map(|&i| m[i * dim + i]).collect();
    let mut vecs = vec![0.0; dim * dim];
    for (c, &i) in order.iter().enumerate() {
        for r in 0..dim {
            vecs[r * dim + c] = v[r * dim + i];
        }
    }
    (vals, vecs)
}

/// Eigen-decomposition of a complex Hermitian matrix (row-major).
/// Eigenvalues ascending; eigenvector columns.
pub fn eigh_hermitian(a: &[Complex64], dim: usize) -> (Vec<f64>, Vec<Complex64>) {
    assert_eq!(a.len(), dim * dim);
    let mut m = a.to_vec();
    let mut v = vec![Complex64::new(0.0, 0.0); dim * dim];
    for i in 0..dim {
        v[i * dim + i] = Complex64::new(1.0, 0.0);
    }
    let scale: f64 = m.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt().max(1e-300);
    for _sweep in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..dim {
            for q in p + 1..dim {
                off += m[p * dim + q].norm_sqr();
            }
        }
        if off.sqrt() < 1e-14 * scale {
            break;
        }
        for p in 0..dim {
            for q in p + 1..dim {
                let apq = m[p * dim + q];
                let abs = apq.norm();
                if abs < 1e-300 {
                    continue;
                }
                let u = apq / abs;
                let app = m[p * dim + p].re;
                let aqq = m[q * dim + q].re;
                let tau = (aqq - app) / (2.0 * abs);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // columns: col_p' = c*col_p - s*conj(u)*col_q ; col_q' = s*u*col_p + c*col_q
                let su = s * u;
                let suc = s * u.conj();
                for r in 0..dim {
                    let arp = m[r * dim + p];
                    let arq = m[r * dim + q];
                    m[r * dim + p] = arp * c - arq * suc;
                    m[r * dim + q] = arp * su + arq * c;
                }
                for r in 0..dim {
                    let apr = m[p * dim + r];
                    let aqr = m[q * dim + r];
                    m[p * dim + r] = apr * c - aqr * su;
                    m[q * dim + r] = apr * suc + aqr * c;
                }
                for r in 0..dim {
                    let vrp = v[r * dim + p];
                    let vrq = v[r * dim + q];
                    v[r * dim + p] = vrp * c - vrq * suc;
                    v[r * dim + q] = vrp * su + vrq * c;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&i, &j| {
        m[i * dim + i]
            .re
            .partial_cmp(&m[j * dim + j].re)
            .unwrap()
    });
    let vals: Vec<f64> = order.iter().map(|&i| m[i * dim + i].re).collect();
    let mut vecs = vec![Complex64::new(0.0, 0.0); dim * dim];
    for (c, &i) in order.iter().enumerate() {
        for r in 0..dim {
            vecs[r * dim + c] = v[r * dim + i];
        }
    }
    (vals, vecs)
}

/// Canonical form of a real skew-symmetric matrix M: an orthogonal basis O
/// with O^T M O block-diagonal, blocks [[0, eps], [-eps, 0]] with eps >= 0
/// in descending order (zero blocks last, one unpaired null column if the
/// dimension is odd).
#[derive(Debug, Clone)]
pub struct SkewCanonical {
    /// Block strengths, one per 2x2 block (floor(dim/2) entries).
    pub epsilons: Vec<f64>,
    /// Orthogonal matrix, row-major; columns ordered u_1 v_1 u_2 v_2 ...
    pub basis: Vec<f64>,
    pub dim: usize,
    /// Sign of det(basis).
    pub det_sign: f64,
}

/// Singular values below this are treated as exact zero modes.
pub const ZERO_MODE_TOL: f64 = 1e-12;

pub fn skew_canonical(m: &[f64], dim: usize) -> SkewCanonical {
    assert_eq!(m.len(), dim * dim);
    for r in 0..dim {
        for c in 0..dim {
            debug_assert!(
                (m[r * dim + c] + m[c * dim + r]).abs() < 1e-12,
                "matrix is not skew-symmetric"
            );
        }
    }
    // S = M^T M is symmetric PSD with doubly degenerate eigenvalues eps^2.
    let mut s = vec![0.0; dim * dim];
    for r in 0..dim {
        for c in 0..dim {
            let mut acc = 0.0;
            for k in 0..dim {
                acc += m[k * dim + r] * m[k * dim + c];
            }
            s[r * dim + c] = acc;
        }
    }
    let (_vals, vecs) = eigh_real_symmetric(&s, dim);
    let scale = {
        let fro: f64 = m.iter().map(|x| x * x).sum::<f64>().sqrt();
        fro.max(1.0)
    };

    let col = |v: &[f64], c: usize| -> Vec<f64> { (0..dim).map(|r| v[r * dim + c]).collect() };
    let mul_m = |x: &[f64]| -> Vec<f64> {
        (0..dim)
            .map(|r| (0..dim).map(|k| m[r * dim + k] * x[k]).sum())
            .collect()
    };

    // Process eigenvectors of S in descending eigenvalue order; each pair is
    // (u, v = -Mu/|Mu|). The strength is taken as |Mu| directly, which is
    // accurate to machine precision even where sqrt(eigenvalue) is not.
    let mut selected: Vec<Vec<f64>> = Vec::new();
    let mut epsilons = Vec::new();
    let mut kernel: Vec<Vec<f64>> = Vec::new();
    for i in (0..dim).rev() {
        let mut u = col(&vecs, i);
        for w in &selected {
            let d: f64 = u.iter().zip(w).map(|(a, b)| a * b).sum();
            for (uu, ww) in u.iter_mut().zip(w) {
                *uu -= d * ww;
            }
        }
        let norm: f64 = u.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm < 0.5 {
            continue; // already spanned by a selected pair
        }
        for x in &mut u {
            *x /= norm;
        }
        let w = mul_m(&u);
        let eps: f64 = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if eps <= ZERO_MODE_TOL * scale {
            kernel.push(u);
            continue;
        }
        let mut v: Vec<f64> = w.iter().map(|x| -x / eps).collect();
        for sel in &selected {
            let d: f64 = v.iter().zip(sel).map(|(a, b)| a * b).sum();
            for (vv, ss) in v.iter_mut().zip(sel) {
                *vv -= d * ss;
            }
        }
        let vn: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        assert!(
            (vn - 1.0).abs() < 1e-6,
            "pair vector not unit after orthogonalization: {vn}"
        );
        for x in &mut v {
            *x /= vn;
        }
        selected.push(u);
        selected.push(v);
        epsilons.push(eps);
    }
    // re-orthonormalize kernel vectors against the pairs
    let kernel: Vec<Vec<f64>> = {
        let mut out: Vec<Vec<f64>> = Vec::new();
        for mut kv in kernel {
            for w in selected.iter().chain(out.iter()) {
                let d: f64 = kv.iter().zip(w).map(|(a, b)| a * b).sum();
                for (a, b) in kv.iter_mut().zip(w) {
                    *a -= d * b;
                }
            }
            let n: f64 = kv.iter().map(|x| x * x).sum::<f64>().sqrt();
            if n > 0.5 {
                for x in &mut kv {
                    *x /= n;
                }
                out.push(kv);
            }
        }
        out
    };
    assert_eq!(
        selected.len() + kernel.len(),
        dim,
        "pairing lost dimensions"
    );
    // zero modes: pair arbitrarily in order, possibly one unpaired
    let n_kernel = kernel.len();
    for k in (0..n_kernel).step_by(2) {
        if k + 1 < n_kernel {
            epsilons.push(0.0);
            selected.push(kernel[k].clone());
            selected.push(kernel[k + 1].clone());
        } else {
            selected.push(kernel[k].clone());
        }
    }
    assert_eq!(selected.len(), dim);
    let mut basis = vec![0.0; dim * dim];
    for (c, colv) in selected.iter().enumerate() {
        for r in 0..dim {
            basis[r * dim + c] = colv[r];
        }
    }
    let det_sign = det_sign(&basis, dim);
    SkewCanonical {
        epsilons,
        basis,
        dim,
        det_sign,
    }
}

impl SkewCanonical {
    /// Flip the orientation of pair `k` (swap u_k and v_k), flipping the
    /// sign of the measured block and of the determinant.
    pub fn flip_pair(&mut self, k: usize) {
        let dim = self.dim;
        for r in 0..dim {
            self.basis.swap(r * dim + 2 * k, r * dim + 2 * k + 1);
        }
        self.det_sign = -self.det_sign;
    }

    /// Negate an unpaired trailing column (odd dimension only).
    pub fn flip_unpaired(&mut self) {
        assert!(self.dim % 2 == 1);
        let dim = self.dim;
        for r in 0..dim {
            self.basis[r * dim + dim - 1] = -self.basis[r * dim + dim - 1];
        }
        self.det_sign = -self.det_sign;
    }
}

fn det_sign(a: &[f64], dim: usize) -> f64 {
    let mut m = a.to_vec();
    let mut sign = 1.0;
    for c in 0..dim {
        let mut piv = c;
        for r in c + 1..dim {
            if m[r * dim + c].abs() > m[piv * dim + c].abs() {
                piv = r;
            }
        }
        if m[piv * dim + c].abs() < 1e-12 {
            return 0.0;
        }
        if piv != c {
            for k in 0..dim {
                m.swap(c * dim + k, piv * dim + k);
            }
            sign = -sign;
        }
        if m[c * dim + c] < 0.0 {
            sign = -sign;
        }
        for r in c + 1..dim {
            let f = m[r * dim + c] / m[c * dim + c];
            for k in c..dim {
                m[r * dim + k] -= f * m[c * dim + k];
            }
        }
    }
    sign
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn real_symmetric_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for dim in [1, 2, 3, 5, 8, 13] {
            let mut a = vec![0.0; dim * dim];
            for r in 0..dim {
                for c in 0..=r {
                    let v: f64 = rng.gen_range(-1.0..1.0);
                    a[r * dim + c] = v;
                    a[c * dim + r] = v;
                }
            }
            let (vals, vecs) = eigh_real_symmetric(&a, dim);
            for k in 0..dim {
                // ||A v - lambda v||
                let mut res: f64 = 0.0;
                for r in 0..dim {
                    let av: f64 = (0..dim).map(|c| a[r * dim + c] * vecs[c * dim + k]).sum();
                    res += (av - vals[k] * vecs[r * dim + k]).powi(2);
                }
                assert!(res.sqrt() < 1e-10, "residual {res}");
            }
            for k in 1..dim {
                assert!(vals[k] >= vals[k - 1]);
            }
        }
    }

    #[test]
    fn hermitian_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for dim in [2, 3, 6, 10] {
            let mut a = vec![Complex64::new(0.0, 0.0); dim * dim];
            for r in 0..dim {
                for c in 0..r {
                    let v = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                    a[r * dim + c] = v;
                    a[c * dim + r] = v.conj();
                }
                a[r * dim + r] = Complex64::new(rng.gen_range(-1.0..1.0), 0.0);
            }
            let (vals, vecs) = eigh_hermitian(&a, dim);
            for k in 0..dim {
                let mut res: f64 = 0.0;
                for r in 0..dim {
                    let av: Complex64 =
                        (0..dim).map(|c| a[r * dim + c] * vecs[c * dim + k]).sum();
                    res += (av - vecs[r * dim + k] * vals[k]).norm_sqr();
                }
                assert!(res.sqrt() < 1e-10);
            }
        }
    }

    #[test]
    fn skew_canonical_blocks() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for dim in [2, 3, 4, 5, 7, 10] {
            let mut m = vec![0.0; dim * dim];
            for r in 0..dim {
                for c in 0..r {
                    let v: f64 = rng.gen_range(-1.0..1.0);
                    m[r * dim + c] = -v;
                    m[c * dim + r] = v;
                }
            }
            let sk = skew_canonical(&m, dim);
            // check O^T M O equals the block form
            let dimf = dim;
            let mut b = vec![0.0; dim * dim];
            for r in 0..dim {
                for c in 0..dim {
                    let mut acc = 0.0;
                    for i in 0..dim {
                        for j in 0..dim {
                            acc += sk.basis[i * dimf + r] * m[i * dimf + j] * sk.basis[j * dimf + c];
                        }
                    }
                    b[r * dim + c] = acc;
                }
            }
            for (k, eps) in sk.epsilons.iter().enumerate() {
                assert!((b[(2 * k) * dim + 2 * k + 1] - eps).abs() < 1e-8);
                assert!((b[(2 * k + 1) * dim + 2 * k] + eps).abs() < 1e-8);
            }
            for r in 0..dim {
                for c in 0..dim {
                    let expected = if r / 2 == c / 2 && r != c && r / 2 < sk.epsilons.len() {
                        if r < c {
                            sk.epsilons[r / 2]
                        } else {
                            -sk.epsilons[r / 2]
                        }
                    } else {
                        0.0
                    };
                    assert!(
                        (b[r * dim + c] - expected).abs() < 1e-8,
                        "block form violated at ({r},{c}): {} vs {expected}",
                        b[r * dim + c]
                    );
                }
            }
            assert!((sk.det_sign.abs() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn skew_degenerate_pairs() {
        // two equal strengths: 4x4 built from two identical blocks rotated
        let dim = 4;
        let mut m = vec![0.0; dim * dim];
        m[1] = 1.3;
        m[dim] = -1.3;
        m[2 * dim + 3] = 1.3;
        m[3 * dim + 2] = -1.3;
        // rotate by a random orthogonal mix of coordinates 0 and 2
        let (c, s) = (0.6f64, 0.8f64);
        let rot = |v: &mut Vec<f64>| {
            let n = dim;
            let mut out = vec![0.0; n * n];
            let r = |i: usize, j: usize| -> f64 {
                match (i, j) {
                    (0, 0) => c,
                    (0, 2) => -s,
                    (2, 0) => s,
                    (2, 2) => c,
                    (1, 1) | (3, 3) => 1.0,
                    _ => 0.0,
                }
            };
            for i in 0..n {
                for j in 0..n {
                    let mut acc = 0.0;
                    for a in 0..n {
                        for b in 0..n {
                            acc += r(i, a) * v[a * n + b] * r(j, b);
                        }
                    }
                    out[i * n + j] = acc;
                }
            }
            *v = out;
        };
        rot(&mut m);
        let sk = skew_canonical(&m, dim);
        assert_eq!(sk.epsilons.len(), 2);
        assert!((sk.epsilons[0] - 1.3).abs() < 1e-9);
        assert!((sk.epsilons[1] - 1.3).abs() < 1e-9);
    }
}
