//! Measurement plans and shot simulation.
//!
//! The measurement of a factorized fragment is a two-stage circuit: a
//! Clifford maps the symmetry generators to z operators on the leading
//! qubits, those are measured (projecting into a sector), a product of
//! Majorana-pair rotations maps the sector Hamiltonian to commuting pair
//! operators, and a final Clifford maps those to z operators, which are
//! measured. A classical rule assembles the eigenvalue from the outcome
//! bits. Shot simulation applies the actual plan to the statevector, so
//! every stage is exercised end to end.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use super::sector::{sector_solution, SectorSolution};
use super::{apply_clifford, apply_pauli_exponential, SolverError, StateVector};
use crate::factor::{spanning_tree, tree_path, FactorizedFragment, SoComponent};
use crate::pauli::tableau::{synthesize_clifford_on, CliffordTableau};
use crate::pauli::{PauliOp, Phase};

#[derive(Debug, Clone)]
pub struct MeasurementPlan {
    pub clifford_pre: CliffordTableau,
    /// sign_k with clifford_pre mapping generator k to sign_k * z_k; the
    /// measured z value mu relates to the sector sign by v_k = sign_k * mu.
    pub symmetry_signs: Vec<f64>,
}

/// One measured pair observable: z on `qubit` after the final Clifford,
/// entering the eigenvalue as `coefficient * sign * mu`.
#[derive(Debug, Clone)]
pub struct OutcomeBit {
    pub qubit: usize,
    pub sign: f64,
    pub coefficient: f64,
}

/// A pair whose sign is fixed by the component's parity constraint rather
/// than measured: j = parity_sign * product of the component's measured js.
#[derive(Debug, Clone)]
pub struct DependentOutcome {
    pub coefficient: f64,
    pub parity_sign: f64,
    /// Indices into the sector plan's `outcomes` participating in the
    /// parity product.
    pub measured: Vec<usize>,
}

/// The per-sector stage of the plan.
#[derive(Debug, Clone)]
pub struct SectorPlan {
    pub sector: Vec<i8>,
    pub constant: f64,
    /// Pauli-exponential rotations exp(-i theta P), applied in order.
    pub rotations: Vec<(PauliOp, f64)>,
    pub clifford_post: CliffordTableau,
    pub outcomes: Vec<OutcomeBit>,
    pub dependents: Vec<DependentOutcome>,
    pub solution: SectorSolution,
}

/// Build the sector-independent stage: the Clifford mapping the symmetry
/// generators to z_0..z_{K-1}.
pub fn build_measurement_plan(ff: &FactorizedFragment) -> Result<MeasurementPlan, SolverError> {
    let n = ff.n_qubits;
    let clifford_pre = synthesize_clifford_on(n, &ff.symmetry_generators)
        .map_err(|e| SolverError::Inconsistent(format!("symmetry Clifford synthesis: {e}")))?;
    let symmetry_signs = ff
        .symmetry_generators
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let img = clifford_pre.conjugate(c);
            debug_assert_eq!(img.letter(k), 'Z');
            img.phase().real_value()
        })
        .collect();
    Ok(MeasurementPlan {
        clifford_pre,
        symmetry_signs,
    })
}

/// The Hermitian Pauli realizing i g_p g_q for root vertices p, q of a
/// component, as the tree-path product of edge generators; returns the
/// unit-phase string and its +-1 prefactor.
fn pair_pauli(
    comp: &SoComponent,
    parent: &[usize],
    parent_edge: &[usize],
    p: usize,
    q: usize,
    n: usize,
) -> Result<(PauliOp, f64), SolverError> {
    let path = tree_path(parent, parent_edge, p, q);
    assert!(!path.is_empty());
    let mut prod = PauliOp::identity(n);
    let mut hops = 0u32;
    let mut vertex = p;
    let mut sign = 1.0f64;
    for &e in &path {
        let g = &comp.generators[e];
        let (u, w) = g.root_edge;
        let forward = vertex == u;
        let next = if forward { w } else { u };
        // X = eta * i g_u g_w, so i g_vertex g_next = (traversal sign) eta X
        if !forward {
            sign = -sign;
        }
        sign *= g.orientation;
        prod = prod.mul(&g.pauli);
        hops += 1;
        vertex = next;
    }
    assert_eq!(vertex, q);
    // product of L bilinears i g g telescopes to i^(L-1) * (i g_p g_q)
    let corr = Phase::from_exponent(((4 - ((hops - 1) % 4)) % 4) as u8);
    let total = prod.scaled_by(corr);
    let phase = total.phase();
    if !phase.is_real() {
        return Err(SolverError::Inconsistent(format!(
            "pair operator for ({p},{q}) has imaginary phase {phase}"
        )));
    }
    Ok((total.with_unit_phase(), sign * phase.real_value()))
}

/// Build the per-sector stage: rotations, the final Clifford, and the
/// outcome table.
pub fn sector_plan(
    ff: &FactorizedFragment,
    plan: &MeasurementPlan,
    sector: &[i8],
) -> Result<SectorPlan, SolverError> {
    let n = ff.n_qubits;
    let k_sym = ff.symmetry_generators.len();
    let solution = sector_solution(ff, sector);
    // z eigenvalues on the leading qubits within this sector
    let mu: Vec<f64> = (0..k_sym)
        .map(|k| f64::from(sector[k]) * plan.symmetry_signs[k])
        .collect();

    let mut rotations: Vec<(PauliOp, f64)> = Vec::new();
    let mut measured_paulis: Vec<PauliOp> = Vec::new(); // stripped, unit phase
    let mut outcome_meta: Vec<(f64, f64)> = Vec::new(); // (sign so far, coefficient)
    struct PendingDependent {
        coefficient: f64,
        parity_sign: f64,
        measured: Vec<usize>,
    }
    let mut dependents: Vec<PendingDependent> = Vec::new();

    for (comp, sol) in ff.components.iter().zip(&solution.components) {
        let m = comp.root.vertex_count;
        let (_, parent, parent_edge) = spanning_tree(&comp.root);
        // Givens sequence reducing O^T to the identity; the conjugation
        // matrices of the applied rotations compose to O^T when replayed in
        // reverse order.
        let dim = m;
        let mut a = vec![0.0; dim * dim];
        for r in 0..dim {
            for c in 0..dim {
                a[r * dim + c] = sol.skew.basis[c * dim + r]; // O^T
            }
        }
        let mut givens: Vec<(usize, usize, f64, f64)> = Vec::new(); // (p, q, c, s)
        for col in 0..dim {
            for row in (col + 1..dim).rev() {
                let x = a[col * dim + col];
                let y = a[row * dim + col];
                if y.abs() < 1e-14 {
                    continue;
                }
                let r = (x * x + y * y).sqrt();
                let (c, s) = (x / r, y / r);
                for k in 0..dim {
                    let top = a[col * dim + k];
                    let bot = a[row * dim + k];
                    a[col * dim + k] = c * top + s * bot;
                    a[row * dim + k] = -s * top + c * bot;
                }
                givens.push((col, row, c, s));
            }
        }
        // elimination leaves a diagonal of +-1; det +1 means an even number
        // of -1 entries, removed pairwise by half-turn rotations
        let negatives: Vec<usize> = (0..dim)
            .filter(|&r| a[r * dim + r] < 0.0)
            .collect();
        if negatives.len() % 2 != 0 {
            return Err(SolverError::Inconsistent(
                "orthogonal basis has determinant -1 after repair".into(),
            ));
        }
        for pair in negatives.chunks(2) {
            let (p, q) = (pair[0], pair[1]);
            for k in 0..dim {
                a[p * dim + k] = -a[p * dim + k];
                a[q * dim + k] = -a[q * dim + k];
            }
            givens.push((p, q, -1.0, 0.0));
        }
        for r in 0..dim {
            for c in 0..dim {
                let expect = if r == c { 1.0 } else { 0.0 };
                if (a[r * dim + c] - expect).abs() > 1e-8 {
                    return Err(SolverError::Inconsistent(format!(
                        "Givens reduction left residue {} at ({r},{c})",
                        a[r * dim + c]
                    )));
                }
            }
        }
        // Rotation for G(p,q,c,s)^T is exp(t g_p g_q) with (cos 2t, sin 2t)
        // = (c, -s); as a Pauli exponential exp(-i t B_pq).
        for &(p, q, c, s) in givens.iter().rev() {
            let theta2 = (-s).atan2(c);
            let t = theta2 / 2.0;
            if t.abs() < 1e-15 {
                continue;
            }
            let (pauli, beta) = pair_pauli(comp, &parent, &parent_edge, p, q, n)?;
            let primed = plan.clifford_pre.conjugate(&pauli);
            debug_assert!(primed.phase().is_real());
            let sgn = primed.phase().real_value();
            rotations.push((primed.with_unit_phase(), t * beta * sgn));
        }
        // measured pair operators: i g_{2k} g_{2k+1} (original modes)
        let tol = sol.zero_tol();
        let actives: Vec<usize> = sol
            .singular_values
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > tol)
            .map(|(k, _)| k)
            .collect();
        let constrained = sol.parity_target.is_some() && actives.len() == sol.singular_values.len();
        let (measure_set, dependent_pair) = if constrained && !actives.is_empty() {
            (
                &actives[..actives.len() - 1],
                Some(actives[actives.len() - 1]),
            )
        } else {
            (&actives[..], None)
        };
        let base_index = measured_paulis.len();
        for &k in measure_set {
            let (pauli, beta) = pair_pauli(comp, &parent, &parent_edge, 2 * k, 2 * k + 1, n)?;
            let primed = plan.clifford_pre.conjugate(&pauli);
            if !primed.phase().is_real() {
                return Err(SolverError::Inconsistent(
                    "pair operator picked up an imaginary phase".into(),
                ));
            }
            let mut sign = beta * primed.phase().real_value();
            // strip z factors on the measured symmetry qubits: they are
            // scalars inside the sector
            let mut stripped = primed.with_unit_phase();
            for (j, &m_j) in mu.iter().enumerate() {
                if stripped.x_bit(j) {
                    return Err(SolverError::Inconsistent(
                        "pair operator has x support on a symmetry qubit".into(),
                    ));
                }
                if stripped.z_bit(j) {
                    stripped = stripped.mul(&PauliOp::single(n, j, 'Z'));
                    sign *= m_j;
                }
            }
            let stripped = stripped.with_unit_phase();
            if stripped.is_identity_string() {
                return Err(SolverError::Inconsistent(
                    "pair operator reduced to a scalar".into(),
                ));
            }
            measured_paulis.push(stripped);
            outcome_meta.push((sign, sol.measure_signs[k] * sol.singular_values[k]));
        }
        if let Some(kd) = dependent_pair {
            dependents.push(PendingDependent {
                coefficient: sol.measure_signs[kd] * sol.singular_values[kd],
                parity_sign: sol.parity_target.expect("constrained component"),
                measured: (base_index..base_index + measure_set.len()).collect(),
            });
        }
    }

    // final Clifford: keep z_0..z_{K-1} fixed, map the measured pair
    // operators to z on the following qubits
    let mut vc_inputs: Vec<PauliOp> = (0..k_sym).map(|q| PauliOp::single(n, q, 'Z')).collect();
    vc_inputs.extend(measured_paulis.iter().cloned());
    let clifford_post = synthesize_clifford_on(n, &vc_inputs)
        .map_err(|e| SolverError::Inconsistent(format!("final Clifford synthesis: {e}")))?;
    let mut outcomes = Vec::new();
    for (i, p) in measured_paulis.iter().enumerate() {
        let img = clifford_post.conjugate(p);
        let qubit = k_sym + i;
        debug_assert_eq!(img.letter(qubit), 'Z');
        let (sign, coefficient) = outcome_meta[i];
        outcomes.push(OutcomeBit {
            qubit,
            sign: sign * img.phase().real_value(),
            coefficient,
        });
    }
    let dependents = dependents
        .into_iter()
        .map(|d| DependentOutcome {
            coefficient: d.coefficient,
            parity_sign: d.parity_sign,
            measured: d.measured,
        })
        .collect();
    Ok(SectorPlan {
        sector: sector.to_vec(),
        constant: solution.evaluated_constant,
        rotations,
        clifford_post,
        outcomes,
        dependents,
        solution,
    })
}

impl SectorPlan {
    /// Measured eigenvalue for a computational-basis outcome (bit q set
    /// means z_q = -1).
    pub fn eigenvalue_for_bits(&self, bits: usize) -> f64 {
        let mut value = self.constant;
        let mut js = Vec::with_capacity(self.outcomes.len());
        for o in &self.outcomes {
            let mu = if (bits >> o.qubit) & 1 == 1 { -1.0 } else { 1.0 };
            let j = o.sign * mu;
            js.push(j);
            value += o.coefficient * j;
        }
        for d in &self.dependents {
            let mut j = d.parity_sign;
            for &i in &d.measured {
                j *= js[i];
            }
            value += d.coefficient * j;
        }
        value
    }
}

/// Simulate `shots` two-stage projective measurements of the fragment on
/// `state`, returning (estimate, standard error). Deterministic for a fixed
/// seed. The estimator is unbiased for the fragment expectation.
pub fn simulate_measurements(
    plan: &MeasurementPlan,
    ff: &FactorizedFragment,
    state: &StateVector,
    shots: u64,
    seed: u64,
) -> Result<(f64, f64), SolverError> {
    if shots == 0 {
        return Err(SolverError::InvalidShots(0));
    }
    if state.n_qubits() != ff.n_qubits {
        return Err(SolverError::DimensionMismatch {
            state: state.n_qubits(),
            op: ff.n_qubits,
        });
    }
    let n = ff.n_qubits;
    let k_sym = ff.symmetry_generators.len();
    let mut pre_state = state.clone();
    apply_clifford(&plan.clifford_pre, &mut pre_state);

    // sector probabilities from the leading-qubit marginal
    let kmask: usize = (1usize << k_sym) - 1;
    let mut sector_probs: BTreeMap<usize, f64> = BTreeMap::new();
    for (i, a) in pre_state.amplitudes.iter().enumerate() {
        let p = a.norm_sqr();
        if p > 0.0 {
            *sector_probs.entry(i & kmask).or_insert(0.0) += p;
        }
    }
    let sectors: Vec<(usize, f64)> = sector_probs
        .iter()
        .filter(|(_, &p)| p > 1e-15)
        .map(|(&b, &p)| (b, p))
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // multinomial sector counts via sequential binomial sampling
    let mut counts: Vec<u64> = Vec::with_capacity(sectors.len());
    {
        let mut remaining = shots;
        let mut prob_left = 1.0;
        for (idx, &(_, p)) in sectors.iter().enumerate() {
            if idx == sectors.len() - 1 {
                counts.push(remaining);
                break;
            }
            let q = (p / prob_left).clamp(0.0, 1.0);
            let mut c = 0u64;
            for _ in 0..remaining {
                if rng.gen::<f64>() < q {
                    c += 1;
                }
            }
            counts.push(c);
            remaining -= c;
            prob_left -= p;
            if remaining == 0 {
                // fill the rest with zeros
                for _ in idx + 1..sectors.len() {
                    counts.push(0);
                }
                break;
            }
        }
        while counts.len() < sectors.len() {
            counts.push(0);
        }
    }

    let mut count = 0u64;
    let mut mean = 0.0f64;
    let mut m2 = 0.0f64;
    let mut push = |value: f64, times: u64| {
        for _ in 0..times {
            count += 1;
            let delta = value - mean;
            mean += delta / count as f64;
            m2 += delta * (value - mean);
        }
    };

    for (&(bits, prob), &shot_count) in sectors.iter().zip(&counts) {
        if shot_count == 0 {
            continue;
        }
        // project onto the sector and normalize
        let mut proj = pre_state.clone();
        for (i, a) in proj.amplitudes.iter_mut().enumerate() {
            if i & kmask != bits {
                *a = Complex64::new(0.0, 0.0);
            }
        }
        let nrm = prob.sqrt();
        for a in &mut proj.amplitudes {
            *a /= nrm;
        }
        let sector: Vec<i8> = (0..k_sym)
            .map(|k| {
                let muv = if (bits >> k) & 1 == 1 { -1.0 } else { 1.0 };
                if muv * plan.symmetry_signs[k] > 0.0 {
                    1
                } else {
                    -1
                }
            })
            .collect();
        let sp = sector_plan(ff, plan, &sector)?;
        let mut rotated = proj;
        for (pauli, theta) in &sp.rotations {
            rotated = apply_pauli_exponential(pauli, *theta, &rotated);
        }
        apply_clifford(&sp.clifford_post, &mut rotated);
        // cumulative distribution over basis outcomes
        let dim = 1usize << n;
        let mut cdf = Vec::with_capacity(dim);
        let mut acc = 0.0;
        for a in &rotated.amplitudes {
            acc += a.norm_sqr();
            cdf.push(acc);
        }
        let total = acc;
        for _ in 0..shot_count {
            let r = rng.gen::<f64>() * total;
            let idx = cdf.partition_point(|&c| c < r).min(dim - 1);
            push(sp.eigenvalue_for_bits(idx), 1);
        }
    }
    let estimate = mean;
    let stderr = if count > 1 {
        (m2 / (count as f64 - 1.0)).sqrt() / (count as f64).sqrt()
    } else {
        0.0
    };
    Ok((estimate, stderr))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::SolvabilityClass;
    use crate::factor::factorize_terms;
    use crate::pauli::WeightedTerm;
    use crate::solver::expectation_terms;

    fn ffrag(n: usize, list: &[(&str, f64)]) -> FactorizedFragment {
        factorize_terms(
            list.iter()
                .map(|(s, c)| WeightedTerm::new(PauliOp::parse(s, n).unwrap(), *c))
                .collect(),
            SolvabilityClass::SymTwcFf,
        )
        .unwrap()
    }

    fn pairs(n: usize, list: &[(&str, f64)]) -> Vec<(PauliOp, f64)> {
        list.iter()
            .map(|(s, c)| (PauliOp::parse(s, n).unwrap(), *c))
            .collect()
    }

    #[test]
    fn single_symmetry_plan() {
        let ff = ffrag(2, &[("Z0 Z1", 0.8)]);
        let plan = build_measurement_plan(&ff).unwrap();
        let img = plan.clifford_pre.conjugate(&PauliOp::parse("Z0 Z1", 2).unwrap());
        assert_eq!(img.weight(), 1);
        assert_eq!(img.letter(0), 'Z');
        // plus state of both qubits: expectation 0
        let amp = 0.5;
        let s = StateVector::new(2, vec![Complex64::new(amp, 0.0); 4]);
        let (est, err) = simulate_measurements(&plan, &ff, &s, 40_000, 7).unwrap();
        assert!(est.abs() < 5.0 * (err + 1e-3), "est {est} err {err}");
    }

    #[test]
    fn ac_pair_estimates_expectation() {
        let (a, b) = (0.7, 0.45);
        let ff = ffrag(1, &[("X0", a), ("Z0", b)]);
        let plan = build_measurement_plan(&ff).unwrap();
        let s = StateVector::basis(1, 0);
        let exact = expectation_terms(&pairs(1, &[("X0", a), ("Z0", b)]), &s);
        let (est, err) = simulate_measurements(&plan, &ff, &s, 200_000, 3).unwrap();
        assert!(
            (est - exact).abs() < 5.0 * err.max(1e-3),
            "est {est} exact {exact} err {err}"
        );
        // outcomes are the two eigenvalues +-sqrt(a^2+b^2)
        let r = (a * a + b * b).sqrt();
        let sp = sector_plan(&ff, &plan, &[]).unwrap();
        for bits in [0usize, 1, 2, 3] {
            let v = sp.eigenvalue_for_bits(bits & 1);
            assert!((v.abs() - r).abs() < 1e-10);
        }
    }

    #[test]
    fn eigenstate_gives_zero_stderr() {
        // fragment Z0 with eigenstate |0>
        let ff = ffrag(1, &[("Z0", 1.3)]);
        let plan = build_measurement_plan(&ff).unwrap();
        let s = StateVector::basis(1, 0);
        let (est, err) = simulate_measurements(&plan, &ff, &s, 1000, 1).unwrap();
        assert_eq!(err, 0.0);
        assert!((est - 1.3).abs() < 1e-12);
    }

    #[test]
    fn parity_constrained_fragment_unbiased() {
        let list = [
            ("Z1", 0.11),
            ("X0 X1", 0.23),
            ("Z0", 0.31),
            ("X0", 0.41),
            ("Z0 Z1", 0.53),
        ];
        let ff = ffrag(2, &list);
        let plan = build_measurement_plan(&ff).unwrap();
        // random-ish normalized state
        let amps = vec![
            Complex64::new(0.5, 0.1),
            Complex64::new(-0.3, 0.2),
            Complex64::new(0.4, -0.4),
            Complex64::new(0.2, 0.47780420163945),
        ];
        let nrm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        let s = StateVector::new(2, amps.iter().map(|a| a / nrm).collect());
        let exact = expectation_terms(&pairs(2, &list), &s);
        let (est, err) = simulate_measurements(&plan, &ff, &s, 400_000, 11).unwrap();
        assert!(
            (est - exact).abs() < 5.0 * err.max(5e-4),
            "est {est} exact {exact} err {err}"
        );
    }

    #[test]
    fn deterministic_under_seed() {
        let ff = ffrag(1, &[("X0", 0.7), ("Z0", 0.45)]);
        let plan = build_measurement_plan(&ff).unwrap();
        let s = StateVector::basis(1, 0);
        let r1 = simulate_measurements(&plan, &ff, &s, 5000, 42).unwrap();
        let r2 = simulate_measurements(&plan, &ff, &s, 5000, 42).unwrap();
        assert_eq!(r1, r2);
    }
}
