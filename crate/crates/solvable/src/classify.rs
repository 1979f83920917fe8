//! Solvability-class predicates over anti-compatibility graphs.
//!
//! Every predicate is a pure function of the graph. The symmetry-augmented
//! variants delete vertices that commute with everything, pass to the
//! twin-free quotient, and test the base class there.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::hamgraph::{
    anti_graph_of, connected_components, quotient_graph, recognize_line_graph, twin_partition,
    AntiGraph,
};
use crate::pauli::PauliOp;

/// The solvability classes. `Nc` (non-contextual) is the symmetry-augmented
/// anticommuting class; `Pauli` is the degenerate single-term class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SolvabilityClass {
    Pauli,
    Fc,
    Ac,
    /// Sym-AC, identical to the non-contextual class.
    Nc,
    TwcAc,
    SymTwcAc,
    Ff,
    SymFf,
    TwcFf,
    SymTwcFf,
}

impl SolvabilityClass {
    pub const ALL: [SolvabilityClass; 10] = [
        SolvabilityClass::Pauli,
        SolvabilityClass::Fc,
        SolvabilityClass::Ac,
        SolvabilityClass::Nc,
        SolvabilityClass::TwcAc,
        SolvabilityClass::SymTwcAc,
        SolvabilityClass::Ff,
        SolvabilityClass::SymFf,
        SolvabilityClass::TwcFf,
        SolvabilityClass::SymTwcFf,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SolvabilityClass::Pauli => "Pauli",
            SolvabilityClass::Fc => "FC",
            SolvabilityClass::Ac => "AC",
            SolvabilityClass::Nc => "NC",
            SolvabilityClass::TwcAc => "TWC-AC",
            SolvabilityClass::SymTwcAc => "Sym-TWC-AC",
            SolvabilityClass::Ff => "FF",
            SolvabilityClass::SymFf => "Sym-FF",
            SolvabilityClass::TwcFf => "TWC-FF",
            SolvabilityClass::SymTwcFf => "Sym-TWC-FF",
        }
    }

    /// Direct containments; the full order is their transitive closure.
    fn direct_implies(self) -> &'static [SolvabilityClass] {
        use SolvabilityClass::*;
        match self {
            Pauli => &[Fc, Ac],
            Fc => &[TwcAc, Nc],
            Ac => &[TwcAc, Ff, Nc],
            Nc => &[SymTwcAc, SymFf],
            TwcAc => &[SymTwcAc, TwcFf],
            SymTwcAc => &[SymTwcFf],
            Ff => &[TwcFf, SymFf],
            SymFf => &[SymTwcFf],
            TwcFf => &[SymTwcFf],
            SymTwcFf => &[],
        }
    }

    /// True when membership in `self` implies membership in `other`.
    pub fn is_subclass_of(self, other: SolvabilityClass) -> bool {
        if self == other {
            return true;
        }
        let mut stack = vec![self];
        let mut seen = vec![self];
        while let Some(c) = stack.pop() {
            for &next in c.direct_implies() {
                if next == other {
                    return true;
                }
                if !seen.contains(&next) {
                    seen.push(next);
                    stack.push(next);
                }
            }
        }
        false
    }
}

impl fmt::Display for SolvabilityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SolvabilityClass {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = s.to_ascii_lowercase().replace(['_', ' '], "-");
        Ok(match norm.as_str() {
            "pauli" => SolvabilityClass::Pauli,
            "fc" => SolvabilityClass::Fc,
            "ac" => SolvabilityClass::Ac,
            "nc" | "sym-ac" => SolvabilityClass::Nc,
            "twc-ac" => SolvabilityClass::TwcAc,
            "sym-twc-ac" => SolvabilityClass::SymTwcAc,
            "ff" => SolvabilityClass::Ff,
            "sym-ff" => SolvabilityClass::SymFf,
            "twc-ff" => SolvabilityClass::TwcFf,
            "sym-twc-ff" => SolvabilityClass::SymTwcFf,
            _ => return Err(format!("unknown solvability class `{s}`")),
        })
    }
}

// ---------------------------------------------------------------------
// Graph-level predicates
// ---------------------------------------------------------------------

pub fn graph_is_fc(g: &AntiGraph) -> bool {
    g.is_empty_graph()
}

pub fn graph_is_ac(g: &AntiGraph) -> bool {
    g.is_complete()
}

pub fn graph_is_twc_ac(g: &AntiGraph) -> bool {
    connected_components(g)
        .into_iter()
        .all(|c| g.induced(&c).is_complete())
}

/// FF demands the whole graph (a single component) be a line graph; a
/// disconnected union of line graphs is TWC-FF instead.
pub fn graph_is_ff(g: &AntiGraph) -> bool {
    if g.vertex_count() == 0 {
        return true;
    }
    let comps = connected_components(g);
    if comps.len() != 1 {
        return false;
    }
    recognize_line_graph(g).is_some()
}

pub fn graph_is_twc_ff(g: &AntiGraph) -> bool {
    connected_components(g)
        .into_iter()
        .all(|c| recognize_line_graph(&g.induced(&c)).is_some())
}

/// Delete isolated vertices, take the twin-free quotient, and test the base
/// predicate there.
pub fn graph_is_sym_variant(g: &AntiGraph, base: SolvabilityClass) -> bool {
    let keep: Vec<usize> = (0..g.vertex_count())
        .filter(|&v| g.degree(v) > 0)
        .collect();
    let sub = g.induced(&keep);
    let t = twin_partition(&sub);
    let q = quotient_graph(&sub, &t).expect("twin partition is always valid");
    match base {
        SolvabilityClass::Ac => graph_is_ac(&q),
        SolvabilityClass::TwcAc => graph_is_twc_ac(&q),
        SolvabilityClass::Ff => graph_is_ff(&q),
        SolvabilityClass::TwcFf => graph_is_twc_ff(&q),
        other => panic!("unsupported base class for symmetry augmentation: {other}"),
    }
}

pub fn graph_satisfies(g: &AntiGraph, cls: SolvabilityClass) -> bool {
    match cls {
        SolvabilityClass::Pauli => g.vertex_count() <= 1,
        SolvabilityClass::Fc => graph_is_fc(g),
        SolvabilityClass::Ac => graph_is_ac(g),
        SolvabilityClass::Nc => graph_is_sym_variant(g, SolvabilityClass::Ac),
        SolvabilityClass::TwcAc => graph_is_twc_ac(g),
        SolvabilityClass::SymTwcAc => graph_is_sym_variant(g, SolvabilityClass::TwcAc),
        SolvabilityClass::Ff => graph_is_ff(g),
        SolvabilityClass::SymFf => graph_is_sym_variant(g, SolvabilityClass::Ff),
        SolvabilityClass::TwcFf => graph_is_twc_ff(g),
        SolvabilityClass::SymTwcFf => graph_is_sym_variant(g, SolvabilityClass::TwcFf),
    }
}

// ---------------------------------------------------------------------
// Term-level predicates
// ---------------------------------------------------------------------

pub fn is_fc(ops: &[&PauliOp]) -> bool {
    graph_is_fc(&anti_graph_of(ops))
}

pub fn is_ac(ops: &[&PauliOp]) -> bool {
    graph_is_ac(&anti_graph_of(ops))
}

pub fn is_twc_ac(ops: &[&PauliOp]) -> bool {
    graph_is_twc_ac(&anti_graph_of(ops))
}

pub fn is_ff(ops: &[&PauliOp]) -> bool {
    graph_is_ff(&anti_graph_of(ops))
}

pub fn is_twc_ff(ops: &[&PauliOp]) -> bool {
    graph_is_twc_ff(&anti_graph_of(ops))
}

pub fn is_sym_variant(ops: &[&PauliOp], base: SolvabilityClass) -> bool {
    graph_is_sym_variant(&anti_graph_of(ops), base)
}

/// Membership of a term set in a solvability class.
pub fn satisfies(ops: &[&PauliOp], cls: SolvabilityClass) -> bool {
    graph_satisfies(&anti_graph_of(ops), cls)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ops(n: usize, strs: &[&str]) -> Vec<PauliOp> {
        strs.iter().map(|s| PauliOp::parse(s, n).unwrap()).collect()
    }

    fn refs(v: &[PauliOp]) -> Vec<&PauliOp> {
        v.iter().collect()
    }

    #[test]
    fn fc_examples() {
        let diag = ops(2, &["Z0", "Z1", "Z0 Z1"]);
        assert!(is_fc(&refs(&diag)));
        let mixed = ops(1, &["X0", "Z0"]);
        assert!(!is_fc(&refs(&mixed)));
        assert!(is_fc(&[]));
    }

    #[test]
    fn ac_examples() {
        let k3 = ops(1, &["X0", "Y0", "Z0"]);
        assert!(is_ac(&refs(&k3)));
        let not = ops(2, &["X0", "Z0", "Z1"]);
        assert!(!is_ac(&refs(&not)));
        let single = ops(1, &["X0"]);
        assert!(is_ac(&refs(&single)));
    }

    #[test]
    fn twc_ac_examples() {
        // two disjoint anticommuting pairs
        let two = ops(2, &["X0", "Z0", "X1", "Z1"]);
        assert!(is_twc_ac(&refs(&two)));
        // path P3 has a non-clique component
        let p3 = ops(2, &["Z0", "X0", "Z0 Z1"]);
        assert!(!is_twc_ac(&refs(&p3)));
        let fc = ops(2, &["Z0", "Z1"]);
        assert!(is_twc_ac(&refs(&fc)));
    }

    #[test]
    fn ff_claw_realization_rejected() {
        // center anticommutes with three leaves; leaves pairwise commute
        let claw = ops(3, &["X0 X1 X2", "Z0", "Z1", "Z2"]);
        let g = anti_graph_of(&refs(&claw));
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.degree(0), 3);
        assert!(!is_ff(&refs(&claw)));
        // K3 is a line graph
        let k3 = ops(1, &["X0", "Y0", "Z0"]);
        assert!(is_ff(&refs(&k3)));
    }

    #[test]
    fn twc_ff_examples() {
        // disjoint K3 and P3 components
        let mix = ops(
            3,
            &["X0", "Y0", "Z0", "Z1", "X1", "Z1 Z2"],
        );
        assert!(is_twc_ff(&refs(&mix)));
        assert!(!is_ff(&refs(&mix)));
        let claw = ops(3, &["X0 X1 X2", "Z0", "Z1", "Z2"]);
        assert!(!is_twc_ff(&refs(&claw)));
        let twc_ac = ops(2, &["X0", "Z0", "X1", "Z1"]);
        assert!(is_twc_ff(&refs(&twc_ac)));
    }

    #[test]
    fn sym_variant_examples() {
        // {Z0, X0, Y0}: no symmetries, already AC
        let k3 = ops(1, &["Z0", "X0", "Y0"]);
        assert!(is_sym_variant(&refs(&k3), SolvabilityClass::Ac));
        // twins {X0, X0 Z1} quotient to K2: Sym-AC
        let tw = ops(2, &["X0", "Y0", "X0 Z1"]);
        assert!(is_sym_variant(&refs(&tw), SolvabilityClass::Ac));
        assert!(!is_ac(&refs(&tw)));
    }

    #[test]
    fn monotonic_along_containment() {
        use SolvabilityClass::*;
        let families = [
            ops(2, &["Z0", "Z1"]),
            ops(1, &["X0", "Y0", "Z0"]),
            ops(2, &["X0", "Z0", "X1", "Z1"]),
            ops(2, &["Z0", "X0", "Z0 Z1"]),
            ops(2, &["X0", "Y0", "X0 Z1"]),
        ];
        for f in &families {
            let r = refs(f);
            for a in SolvabilityClass::ALL {
                for b in SolvabilityClass::ALL {
                    if a.is_subclass_of(b) && satisfies(&r, a) {
                        assert!(
                            satisfies(&r, b),
                            "{a} holds but {b} fails on {f:?}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn containment_order() {
        use SolvabilityClass::*;
        assert!(Fc.is_subclass_of(TwcAc));
        assert!(TwcAc.is_subclass_of(TwcFf));
        assert!(Ac.is_subclass_of(TwcAc));
        assert!(Ff.is_subclass_of(TwcFf));
        assert!(Ac.is_subclass_of(Nc));
        assert!(TwcAc.is_subclass_of(SymTwcAc));
        assert!(Fc.is_subclass_of(SymTwcFf));
        assert!(!TwcFf.is_subclass_of(Ff));
        assert!(!Nc.is_subclass_of(Ac));
        assert!(!SymTwcAc.is_subclass_of(TwcFf));
    }

    #[test]
    fn empty_set_accepted_everywhere() {
        for cls in SolvabilityClass::ALL {
            assert!(satisfies(&[], cls), "empty set rejected by {cls}");
        }
    }

    #[test]
    fn symmetry_dressing_invariance() {
        // multiplying every term by a commuting fixed Pauli leaves all
        // predicates unchanged
        let base = ops(3, &["X0", "Y0", "Z0 X1", "X1"]);
        let dress = PauliOp::parse("Z2", 3).unwrap();
        let dressed: Vec<PauliOp> = base
            .iter()
            .map(|p| p.mul(&dress).with_unit_phase())
            .collect();
        for p in &base {
            assert!(p.commutes_with(&dress));
        }
        for cls in SolvabilityClass::ALL {
            assert_eq!(
                satisfies(&refs(&base), cls),
                satisfies(&refs(&dressed), cls),
                "dressing changed predicate {cls}"
            );
        }
    }
}
