//! The Hamiltonian text-file format.
//!
//! ```text
//! # comment / provenance lines
//! n_qubits: 4
//! label: H2
//! <coefficient>\t<pauli-string>
//! ...
//! ```
//!
//! Coefficients are decimal floats written with 17 significant digits so the
//! parse/serialize round trip is bit-exact; pauli-strings follow
//! [`PauliOp::parse`] (the empty string is the identity). Duplicate strings
//! are rejected.

use std::fmt::Write as _;

use thiserror::Error;

use crate::pauli::{Hamiltonian, PauliOp, PauliParseError, WeightedTerm};

#[derive(Debug, Error)]
pub enum HamFileError {
    #[error("line {line}: {source}")]
    Pauli {
        line: usize,
        #[source]
        source: PauliParseError,
    },
    #[error("line {line}: bad coefficient `{text}`")]
    BadCoefficient { line: usize, text: String },
    #[error("line {line}: expected `<coefficient>\\t<pauli-string>`")]
    BadTermLine { line: usize },
    #[error("line {line}: duplicate Pauli string `{term}`")]
    DuplicateTerm { line: usize, term: String },
    #[error("line {line}: bad header entry")]
    BadHeader { line: usize },
    #[error("missing n_qubits header")]
    MissingNQubits,
    #[error("n_qubits must be positive")]
    BadNQubits,
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone)]
pub struct HamiltonianFile {
    pub n_qubits: usize,
    pub label: String,
    pub hamiltonian: Hamiltonian,
}

/// Parse the text format. Errors carry 1-based line numbers.
pub fn parse_hamiltonian_text(text: &str) -> Result<HamiltonianFile, HamFileError> {
    let mut n_qubits: Option<usize> = None;
    let mut label = String::new();
    let mut terms: Vec<WeightedTerm> = Vec::new();
    let mut seen: std::collections::HashSet<String> = std::collections::HashSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim_end_matches('\r');
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("n_qubits:") {
            n_qubits = Some(
                rest.trim()
                    .parse()
                    .map_err(|_| HamFileError::BadHeader { line: line_no })?,
            );
            continue;
        }
        if let Some(rest) = line.strip_prefix("label:") {
            label = rest.trim().to_string();
            continue;
        }
        let n = n_qubits.ok_or(HamFileError::MissingNQubits)?;
        if n == 0 {
            return Err(HamFileError::BadNQubits);
        }
        let (coeff_text, pauli_text) = line
            .split_once('\t')
            .ok_or(HamFileError::BadTermLine { line: line_no })?;
        let coeff: f64 = coeff_text
            .trim()
            .parse()
            .map_err(|_| HamFileError::BadCoefficient {
                line: line_no,
                text: coeff_text.to_string(),
            })?;
        if !coeff.is_finite() {
            return Err(HamFileError::BadCoefficient {
                line: line_no,
                text: coeff_text.to_string(),
            });
        }
        let op = PauliOp::parse(pauli_text, n).map_err(|source| HamFileError::Pauli {
            line: line_no,
            source,
        })?;
        if !seen.insert(op.to_string()) {
            return Err(HamFileError::DuplicateTerm {
                line: line_no,
                term: op.to_string(),
            });
        }
        terms.push(WeightedTerm::new(op, coeff));
    }
    let n_qubits = n_qubits.ok_or(HamFileError::MissingNQubits)?;
    if n_qubits == 0 {
        return Err(HamFileError::BadNQubits);
    }
    Ok(HamiltonianFile {
        n_qubits,
        label,
        hamiltonian: Hamiltonian::new(n_qubits, terms),
    })
}

pub fn read_hamiltonian_file(path: &std::path::Path) -> Result<HamiltonianFile, HamFileError> {
    let text = std::fs::read_to_string(path)?;
    parse_hamiltonian_text(&text)
}

/// Serialize back to the text format, preserving term order and printing
/// coefficients with 17 significant digits.
pub fn hamiltonian_to_text(h: &Hamiltonian, label: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "n_qubits: {}", h.n_qubits());
    if !label.is_empty() {
        let _ = writeln!(out, "label: {label}");
    }
    for t in h.terms() {
        let _ = writeln!(out, "{:.17e}\t{}", t.coeff, t.op);
    }
    out
}
