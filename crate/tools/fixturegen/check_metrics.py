#!/usr/bin/env python3
"""Cross-check the generated fixtures: per-Pauli-term variance metric.

For each fixture, computes the exact ground state of the term list and the
measurement-cost metric (sum_P |h_P| sqrt(1 - <P>^2))^2 obtained when every
Pauli term is measured as its own fragment. Values are recorded in
fixtures/README.md for downstream reference.
"""

import sys
import numpy as np
import scipy.sparse.linalg as spla


def load(path):
    n_qubits = None
    terms = []
    for line in open(path):
        line = line.rstrip("\n")
        if not line or line.startswith("#"):
            continue
        if line.startswith("n_qubits:"):
            n_qubits = int(line.split(":")[1])
            continue
        if line.startswith("label:"):
            continue
        coeff, ps = line.split("\t")
        x = z = 0
        for tok in ps.split():
            q = int(tok[1:])
            if tok[0] in "XY":
                x |= 1 << q
            if tok[0] in "ZY":
                z |= 1 << q
        terms.append((float(coeff), x, z))
    return n_qubits, terms


def ground_state(n, terms):
    dim = 1 << n
    idx = np.arange(dim)
    data = []
    for coeff, x, z in terms:
        bits = np.zeros(dim, dtype=np.int64)
        for q in range(n):
            if (z >> q) & 1:
                bits += (idx >> q) & 1
        phase = 1.0j ** (bin(x & z).count("1") % 4)
        data.append((x, coeff * phase * (-1.0) ** bits))

    def matvec(v):
        w = np.zeros(dim, dtype=complex)
        for x, f in data:
            w[idx ^ x] += f * v
        return w

    op = spla.LinearOperator((dim, dim), matvec=matvec, dtype=complex)
    vals, vecs = spla.eigsh(op, k=1, which="SA", tol=1e-10, maxiter=5000)
    return vals[0], vecs[:, 0]


def pauli_metric(n, terms, psi):
    dim = 1 << n
    idx = np.arange(dim)
    total = 0.0
    for coeff, x, z in terms:
        bits = np.zeros(dim, dtype=np.int64)
        for q in range(n):
            if (z >> q) & 1:
                bits += (idx >> q) & 1
        phase = 1.0j ** (bin(x & z).count("1") % 4)
        pv = np.zeros(dim, dtype=complex)
        pv[idx ^ x] = phase * (-1.0) ** bits * psi
        exp = np.vdot(psi, pv).real
        total += abs(coeff) * np.sqrt(max(0.0, 1.0 - exp * exp))
    return total * total


for name in sys.argv[1:]:
    n, terms = load(f"../../fixtures/{name}.ham")
    e0, psi = ground_state(n, terms)
    m = pauli_metric(n, terms, psi)
    print(f"{name}: n={n} terms={len(terms)} ground={e0:.10f} pauli_metric={m:.4f}")
