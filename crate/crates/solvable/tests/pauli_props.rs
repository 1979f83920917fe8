//! Property tests for the Pauli algebra, GF(2) machinery, and tableaus.

use proptest::prelude::*;

use solvable::pauli::gf2::{express_in_generators, independent_generators};
use solvable::pauli::tableau::{synthesize_clifford_on, CliffordTableau, Gate};
use solvable::pauli::{PauliOp, Phase};

fn arb_pauli(n: usize) -> impl Strategy<Value = PauliOp> {
    proptest::collection::vec(0u8..4, n).prop_map(move |letters| {
        let mut toks = Vec::new();
        for (q, &l) in letters.iter().enumerate() {
            match l {
                1 => toks.push(format!("X{q}")),
                2 => toks.push(format!("Y{q}")),
                3 => toks.push(format!("Z{q}")),
                _ => {}
            }
        }
        PauliOp::parse(&toks.join(" "), n).unwrap()
    })
}

fn arb_gates(n: usize) -> impl Strategy<Value = Vec<Gate>> {
    proptest::collection::vec((0u8..6, 0..n, 0..n), 0..12).prop_map(move |ops| {
        ops.into_iter()
            .filter_map(|(kind, a, b)| match kind {
                0 => Some(Gate::H(a)),
                1 => Some(Gate::S(a)),
                2 => Some(Gate::Sdag(a)),
                3 if a != b => Some(Gate::Cnot(a, b)),
                4 if a != b => Some(Gate::Cz(a, b)),
                5 if a != b => Some(Gate::Swap(a, b)),
                _ => None,
            })
            .collect()
    })
}

proptest! {
    #[test]
    fn commutation_matches_product_phases(p in arb_pauli(5), q in arb_pauli(5)) {
        let pq = p.mul(&q);
        let qp = q.mul(&p);
        prop_assert_eq!(pq.string_key(), qp.string_key());
        let rel = Phase::from_exponent(
            (pq.phase().exponent() + 4 - qp.phase().exponent()) & 3,
        );
        if p.commutes_with(&q) {
            prop_assert_eq!(rel, Phase::ONE);
        } else {
            prop_assert_eq!(rel, Phase::MINUS_ONE);
        }
    }

    #[test]
    fn multiplication_associative(
        a in arb_pauli(4),
        b in arb_pauli(4),
        c in arb_pauli(4),
    ) {
        let left = a.mul(&b).mul(&c);
        let right = a.mul(&b.mul(&c));
        prop_assert_eq!(left, right);
    }

    #[test]
    fn generator_span_roundtrip(ops in proptest::collection::vec(arb_pauli(4), 1..8)) {
        let gens = independent_generators(&ops);
        // same span: every input re-expresses exactly
        for op in &ops {
            let (exps, ph) = express_in_generators(op, &gens).unwrap();
            let mut prod = PauliOp::identity(4);
            for (g, &e) in gens.iter().zip(&exps) {
                if e {
                    prod = prod.mul(g);
                }
            }
            prop_assert_eq!(prod.scaled_by(ph), op.clone());
        }
        // generators are independent: none expressible by the others
        for (i, g) in gens.iter().enumerate() {
            let others: Vec<PauliOp> = gens
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, x)| x.clone())
                .collect();
            prop_assert!(express_in_generators(g, &others).is_err());
        }
    }

    #[test]
    fn clifford_preserves_symplectic_form(
        gates in arb_gates(4),
        p in arb_pauli(4),
        q in arb_pauli(4),
    ) {
        let mut t = CliffordTableau::identity(4);
        for g in gates {
            t.push_gate(g);
        }
        let (cp, cq) = (t.conjugate(&p), t.conjugate(&q));
        prop_assert_eq!(p.commutes_with(&q), cp.commutes_with(&cq));
        // conjugation is an algebra homomorphism
        prop_assert_eq!(t.conjugate(&p.mul(&q)), cp.mul(&cq));
    }

    #[test]
    fn synthesis_maps_commuting_sets(seed in 0u64..500) {
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = 5;
        // random commuting independent set built by rejection
        let mut gens: Vec<PauliOp> = Vec::new();
        for _ in 0..40 {
            if gens.len() == 3 {
                break;
            }
            let mut toks = Vec::new();
            for q in 0..n {
                match rng.gen_range(0..4) {
                    1 => toks.push(format!("X{q}")),
                    2 => toks.push(format!("Y{q}")),
                    3 => toks.push(format!("Z{q}")),
                    _ => {}
                }
            }
            let cand = PauliOp::parse(&toks.join(" "), n).unwrap();
            if cand.is_identity_string() || !gens.iter().all(|g| g.commutes_with(&cand)) {
                continue;
            }
            let mut with = gens.clone();
            with.push(cand.clone());
            if independent_generators(&with).len() == with.len() {
                gens = with;
            }
        }
        let t = synthesize_clifford_on(n, &gens).unwrap();
        for (k, g) in gens.iter().enumerate() {
            let img = t.conjugate(g);
            prop_assert_eq!(img.weight(), 1);
            prop_assert_eq!(img.letter(k), 'Z');
            prop_assert!(img.phase().is_real());
        }
    }
}
