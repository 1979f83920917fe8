//! Per-sector solutions of a factorized fragment.
//!
//! In the simultaneous eigenspace labeled by a sign vector v over the
//! symmetry generators, the fragment acts as a constant p_0(v) plus, per
//! component, a quadratic Majorana Hamiltonian whose skew-symmetric
//! coefficient matrix carries the evaluated polynomial of each generator on
//! its root edge (with the gauge orientation sign). Eigenvalues within the
//! sector are p_0(v) + sum_k s_k eps_k over admitted sign patterns; when a
//! component carries a residual relation its fermion parity is pinned and
//! only half the patterns occur.

use super::linalg::{skew_canonical, SkewCanonical, ZERO_MODE_TOL};
use super::SolverError;
use crate::factor::FactorizedFragment;
use crate::pauli::Phase;

/// Default cap on full sector enumeration (2^K sectors).
pub const SECTOR_ENUMERATION_CAP: usize = 20;

#[derive(Debug, Clone)]
pub struct SectorComponent {
    /// Skew-symmetric coefficient matrix (row-major, dim x dim) indexed by
    /// root-graph vertices.
    pub matrix: Vec<f64>,
    pub dim: usize,
    /// Block strengths of the canonical form, one per mode pair,
    /// descending; zero modes last.
    pub singular_values: Vec<f64>,
    /// Per-pair sign folding the canonical-form orientation into measured
    /// outcomes (entries +-1; -1 at most once, when the basis determinant
    /// had to be repaired without a zero mode).
    pub measure_signs: Vec<f64>,
    /// If set: admitted sign patterns satisfy prod_k (s_k) = target over
    /// all pairs (zero-mode pairs included).
    pub parity_target: Option<f64>,
    /// Canonical-form basis (determinant +1 after repair).
    pub skew: SkewCanonical,
}

impl SectorComponent {
    /// Number of active (nonzero) strengths.
    pub fn active_count(&self) -> usize {
        self.singular_values
            .iter()
            .filter(|&&e| e > self.zero_tol())
            .count()
    }

    pub fn zero_tol(&self) -> f64 {
        let scale = self
            .singular_values
            .first()
            .copied()
            .unwrap_or(0.0)
            .max(1.0);
        ZERO_MODE_TOL * scale
    }

    /// log2 of the dimension of one irreducible block of this component's
    /// algebra within the sector.
    pub fn irrep_log2(&self) -> usize {
        let pairs = self.singular_values.len();
        if self.parity_target.is_some() {
            pairs - 1
        } else {
            pairs
        }
    }

    /// Eigenvalue offsets with weights: (sum_k s_k eps_k, count of pattern
    /// completions on zero modes).
    pub fn offsets(&self) -> Vec<(f64, u64)> {
        let tol = self.zero_tol();
        let active: Vec<(usize, f64)> = self
            .singular_values
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > tol)
            .map(|(k, &e)| (k, e))
            .collect();
        let f = active.len();
        let z = self.singular_values.len() - f;
        let mut out = Vec::with_capacity(1 << f);
        for pattern in 0u64..(1 << f) {
            let mut val = 0.0;
            let mut prod = 1.0;
            for (bit, &(k, e)) in active.iter().enumerate() {
                let s = if (pattern >> bit) & 1 == 1 { -1.0 } else { 1.0 };
                val += s * self.measure_signs[k] * e;
                prod *= s;
            }
            match self.parity_target {
                Some(target) if z == 0 => {
                    // parity fixed entirely by the active pattern
                    let zero_signs: f64 = self
                        .singular_values
                        .iter()
                        .enumerate()
                        .filter(|(_, &e)| e <= tol)
                        .map(|(k, _)| self.measure_signs[k])
                        .product();
                    let _ = zero_signs;
                    if (prod - target).abs() < 0.5 {
                        out.push((val, 1));
                    }
                }
                Some(_) => {
                    // zero modes absorb the parity constraint
                    out.push((val, 1u64 << (z - 1)));
                }
                None => {
                    out.push((val, 1u64 << z));
                }
            }
        }
        out
    }
}

/// Solution of one symmetry sector.
#[derive(Debug, Clone)]
pub struct SectorSolution {
    /// Sign per symmetry generator.
    pub sector: Vec<i8>,
    /// p_0 evaluated at the sector.
    pub evaluated_constant: f64,
    pub components: Vec<SectorComponent>,
}

impl SectorSolution {
    /// All candidate eigenvalues of the fragment within this sector with
    /// multiplicities; `n_qubits` fixes the sector dimension.
    pub fn eigenvalues(&self, n_qubits: usize, k_sym: usize) -> Vec<(f64, u64)> {
        let irrep_log: usize = self.components.iter().map(|c| c.irrep_log2()).sum();
        assert!(
            n_qubits >= k_sym && n_qubits - k_sym >= irrep_log,
            "sector dimension underflows its irreducible content"
        );
        let mu_log = (n_qubits - k_sym) - irrep_log;
        let mut acc: Vec<(f64, u64)> = vec![(self.evaluated_constant, 1u64 << mu_log)];
        for comp in &self.components {
            let offs = comp.offsets();
            let mut next = Vec::with_capacity(acc.len() * offs.len());
            for &(v, w) in &acc {
                for &(o, ow) in &offs {
                    next.push((v + o, w * ow));
                }
            }
            acc = next;
            assert!(acc.len() <= (1 << 22), "sector spectrum enumeration too large");
        }
        acc
    }
}

/// Solve one sector given its sign vector over the symmetry generators.
pub fn sector_solution(ff: &FactorizedFragment, sector: &[i8]) -> SectorSolution {
    let k = ff.symmetry_generators.len();
    assert_eq!(sector.len(), k, "sector length mismatch");
    assert!(sector.iter().all(|&s| s == 1 || s == -1));
    let evaluated_constant = ff.constant_poly.evaluate(sector);
    let mut components = Vec::new();
    for comp in &ff.components {
        let m = comp.root.vertex_count;
        let mut matrix = vec![0.0; m * m];
        for g in &comp.generators {
            let val = g.orientation * g.coeff_poly.evaluate(sector);
            let (u, w) = g.root_edge;
            matrix[u * m + w] += val;
            matrix[w * m + u] -= val;
        }
        let mut skew = skew_canonical(&matrix, m);
        let pairs = skew.epsilons.len();
        let mut measure_signs = vec![1.0; pairs];
        if skew.det_sign < 0.0 {
            if m % 2 == 1 {
                skew.flip_unpaired();
            } else {
                let scale = skew.epsilons.first().copied().unwrap_or(0.0).max(1.0);
                let zero_pair = skew
                    .epsilons
                    .iter()
                    .rposition(|&e| e <= ZERO_MODE_TOL * scale);
                match zero_pair {
                    Some(kz) => skew.flip_pair(kz),
                    None => {
                        skew.flip_pair(pairs - 1);
                        measure_signs[pairs - 1] = -1.0;
                    }
                }
            }
        }
        debug_assert!(skew.det_sign > 0.0);
        let parity_target = comp.chirality.as_ref().map(|ch| {
            let mut monomial = 1.0;
            for (kk, &s) in sector.iter().enumerate() {
                if (ch.exponents >> kk) & 1 == 1 {
                    monomial *= f64::from(s);
                }
            }
            // prod_k J_k = i^(m/2) det(O) * (relation scalar)/kappa
            let ph = Phase::from_exponent(((m / 2) % 4) as u8)
                * ch.phase
                * ch.kappa.inverse();
            assert!(
                ph.is_real(),
                "parity constraint has imaginary phase {ph} (m = {m})"
            );
            ph.real_value() * monomial
        });
        components.push(SectorComponent {
            matrix,
            dim: m,
            singular_values: skew.epsilons.clone(),
            measure_signs,
            parity_target,
            skew,
        });
    }
    SectorSolution {
        sector: sector.to_vec(),
        evaluated_constant,
        components,
    }
}

/// Solve all 2^K sectors (K capped by `SECTOR_ENUMERATION_CAP`); sector k
/// of the output enumerates signs by binary counting, bit k of the index
/// giving generator k's sign (-1 when set).
pub fn sector_solutions(ff: &FactorizedFragment) -> Result<Vec<SectorSolution>, SolverError> {
    let k = ff.symmetry_generators.len();
    if k > SECTOR_ENUMERATION_CAP {
        return Err(SolverError::SectorCapExceeded {
            k,
            cap: SECTOR_ENUMERATION_CAP,
        });
    }
    let mut out = Vec::with_capacity(1 << k);
    for mask in 0u64..(1 << k) {
        let sector: Vec<i8> = (0..k)
            .map(|b| if (mask >> b) & 1 == 1 { -1 } else { 1 })
            .collect();
        out.push(sector_solution(ff, &sector));
    }
    Ok(out)
}

/// Full eigenvalue multiset over all sectors, sorted ascending, as
/// (value, multiplicity) pairs.
pub fn full_spectrum(ff: &FactorizedFragment) -> Result<Vec<(f64, u64)>, SolverError> {
    let k = ff.symmetry_generators.len();
    let mut out = Vec::new();
    for sol in sector_solutions(ff)? {
        out.extend(sol.eigenvalues(ff.n_qubits, k));
    }
    out.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    Ok(out)
}
