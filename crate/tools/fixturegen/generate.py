#!/usr/bin/env python3
"""Generate the molecular Hamiltonian data files under fixtures/.

Pipeline: STO-3G Gaussian integrals (McMurchie-Davidson recursions) -> RHF
with DIIS -> MO-basis integral transform -> second-quantized spin-orbital
Hamiltonian -> Bravyi-Kitaev qubit encoding (Fenwick-tree update/parity/flip
sets, interleaved alpha/beta spin orbitals) -> text data file.

Self-checks (enabled with --check):
  * integral values against Szabo-Ostlund H2 reference numbers
  * RHF energy against the second-quantized Hamiltonian on the HF determinant
  * Jordan-Wigner vs Bravyi-Kitaev dense spectra on small systems
  * canonical anticommutation relations of the encoded Majorana operators

Run `python3 generate.py --all --check` from this directory to regenerate
everything. Only numpy/scipy are required.
"""

import argparse
import math
import sys
import time
from functools import lru_cache

import numpy as np
from scipy.special import hyp1f1

ANGSTROM_TO_BOHR = 1.0 / 0.529177210903

# ---------------------------------------------------------------------------
# STO-3G basis data (exponents, contraction coefficients per shell)
# ---------------------------------------------------------------------------

STO3G = {
    "H": [
        ("S", [3.42525091, 0.62391373, 0.16885540],
              [0.15432897, 0.53532814, 0.44463454]),
    ],
    "Li": [
        ("S", [16.1195750, 2.9362007, 0.7946505],
              [0.15432897, 0.53532814, 0.44463454]),
        ("SP", [0.6362897, 0.1478601, 0.0480887],
               [-0.09996723, 0.39951283, 0.70011547],
               [0.15591627, 0.60768372, 0.39195739]),
    ],
    "Be": [
        ("S", [30.1678710, 5.4951153, 1.4871927],
              [0.15432897, 0.53532814, 0.44463454]),
        ("SP", [1.3148331, 0.3055389, 0.0993707],
               [-0.09996723, 0.39951283, 0.70011547],
               [0.15591627, 0.60768372, 0.39195739]),
    ],
    "N": [
        ("S", [99.1061690, 18.0523120, 4.8856602],
              [0.15432897, 0.53532814, 0.44463454]),
        ("SP", [3.7804559, 0.8784966, 0.2857144],
               [-0.09996723, 0.39951283, 0.70011547],
               [0.15591627, 0.60768372, 0.39195739]),
    ],
    "O": [
        ("S", [130.7093200, 23.8088610, 6.4436083],
              [0.15432897, 0.53532814, 0.44463454]),
        ("SP", [5.0331513, 1.1695961, 0.3803890],
               [-0.09996723, 0.39951283, 0.70011547],
               [0.15591627, 0.60768372, 0.39195739]),
    ],
}

NUCLEAR_CHARGE = {"H": 1, "Li": 3, "Be": 4, "N": 7, "O": 8}


class ContractedGaussian:
    """A normalized contracted Cartesian Gaussian basis function."""

    def __init__(self, center, lmn, exps, coefs):
        self.center = np.asarray(center, dtype=float)
        self.lmn = tuple(lmn)
        self.exps = list(exps)
        self.coefs = [c * prim_norm(a, lmn) for a, c in zip(exps, coefs)]
        s = overlap_contracted(self, self)
        self.coefs = [c / math.sqrt(s) for c in self.coefs]


def fact2(n):
    if n <= 0:
        return 1
    r = 1
    while n > 1:
        r *= n
        n -= 2
    return r


def prim_norm(a, lmn):
    l, m, n = lmn
    return ((2 * a / math.pi) ** 0.75 * (4 * a) ** ((l + m + n) / 2.0)
            / math.sqrt(fact2(2 * l - 1) * fact2(2 * m - 1) * fact2(2 * n - 1)))


def hermite_expansion(i, j, t, Qx, a, b):
    """Hermite Gaussian expansion coefficient E_t^{ij}."""
    p = a + b
    q = a * b / p
    if t < 0 or t > i + j:
        return 0.0
    if i == j == t == 0:
        return math.exp(-q * Qx * Qx)
    if j == 0:
        return ((1.0 / (2 * p)) * hermite_expansion(i - 1, j, t - 1, Qx, a, b)
                - (q * Qx / a) * hermite_expansion(i - 1, j, t, Qx, a, b)
                + (t + 1) * hermite_expansion(i - 1, j, t + 1, Qx, a, b))
    return ((1.0 / (2 * p)) * hermite_expansion(i, j - 1, t - 1, Qx, a, b)
            + (q * Qx / b) * hermite_expansion(i, j - 1, t, Qx, a, b)
            + (t + 1) * hermite_expansion(i, j - 1, t + 1, Qx, a, b))


def overlap_prim(a, lmn1, A, b, lmn2, B):
    l1, m1, n1 = lmn1
    l2, m2, n2 = lmn2
    s1 = hermite_expansion(l1, l2, 0, A[0] - B[0], a, b)
    s2 = hermite_expansion(m1, m2, 0, A[1] - B[1], a, b)
    s3 = hermite_expansion(n1, n2, 0, A[2] - B[2], a, b)
    return s1 * s2 * s3 * (math.pi / (a + b)) ** 1.5


def overlap_contracted(g1, g2):
    s = 0.0
    for a, ca in zip(g1.exps, g1.coefs):
        for b, cb in zip(g2.exps, g2.coefs):
            s += ca * cb * overlap_prim(a, g1.lmn, g1.center, b, g2.lmn, g2.center)
    return s


def kinetic_prim(a, lmn1, A, b, lmn2, B):
    l2, m2, n2 = lmn2
    term0 = b * (2 * (l2 + m2 + n2) + 3) * overlap_prim(a, lmn1, A, b, lmn2, B)
    term1 = -2 * b ** 2 * (
        overlap_prim(a, lmn1, A, b, (l2 + 2, m2, n2), B)
        + overlap_prim(a, lmn1, A, b, (l2, m2 + 2, n2), B)
        + overlap_prim(a, lmn1, A, b, (l2, m2, n2 + 2), B))
    term2 = -0.5 * (
        l2 * (l2 - 1) * overlap_prim(a, lmn1, A, b, (l2 - 2, m2, n2), B)
        + m2 * (m2 - 1) * overlap_prim(a, lmn1, A, b, (l2, m2 - 2, n2), B)
        + n2 * (n2 - 1) * overlap_prim(a, lmn1, A, b, (l2, m2, n2 - 2), B))
    return term0 + term1 + term2


def kinetic_contracted(g1, g2):
    s = 0.0
    for a, ca in zip(g1.exps, g1.coefs):
        for b, cb in zip(g2.exps, g2.coefs):
            s += ca * cb * kinetic_prim(a, g1.lmn, g1.center, b, g2.lmn, g2.center)
    return s


@lru_cache(maxsize=None)
def boys(n, T):
    return hyp1f1(n + 0.5, n + 1.5, -T) / (2.0 * n + 1.0)


def hermite_coulomb(t, u, v, n, p, PCx, PCy, PCz, RPC):
    T = p * RPC * RPC
    val = 0.0
    if t == u == v == 0:
        val += (-2.0 * p) ** n * boys(n, round(T, 14))
    elif t == u == 0:
        if v > 1:
            val += (v - 1) * hermite_coulomb(t, u, v - 2, n + 1, p, PCx, PCy, PCz, RPC)
        val += PCz * hermite_coulomb(t, u, v - 1, n + 1, p, PCx, PCy, PCz, RPC)
    elif t == 0:
        if u > 1:
            val += (u - 1) * hermite_coulomb(t, u - 2, v, n + 1, p, PCx, PCy, PCz, RPC)
        val += PCy * hermite_coulomb(t, u - 1, v, n + 1, p, PCx, PCy, PCz, RPC)
    else:
        if t > 1:
            val += (t - 1) * hermite_coulomb(t - 2, u, v, n + 1, p, PCx, PCy, PCz, RPC)
        val += PCx * hermite_coulomb(t - 1, u, v, n + 1, p, PCx, PCy, PCz, RPC)
    return val


def nuclear_prim(a, lmn1, A, b, lmn2, B, C):
    l1, m1, n1 = lmn1
    l2, m2, n2 = lmn2
    p = a + b
    P = (a * A + b * B) / p
    RPC = float(np.linalg.norm(P - C))
    val = 0.0
    for t in range(l1 + l2 + 1):
        Ex = hermite_expansion(l1, l2, t, A[0] - B[0], a, b)
        for u in range(m1 + m2 + 1):
            Ey = hermite_expansion(m1, m2, u, A[1] - B[1], a, b)
            for v in range(n1 + n2 + 1):
                Ez = hermite_expansion(n1, n2, v, A[2] - B[2], a, b)
                val += Ex * Ey * Ez * hermite_coulomb(
                    t, u, v, 0, p, P[0] - C[0], P[1] - C[1], P[2] - C[2], RPC)
    return 2 * math.pi / p * val


def nuclear_contracted(g1, g2, C):
    s = 0.0
    for a, ca in zip(g1.exps, g1.coefs):
        for b, cb in zip(g2.exps, g2.coefs):
            s += ca * cb * nuclear_prim(a, g1.lmn, g1.center, b, g2.lmn, g2.center, C)
    return s


def eri_prim(a, lmn1, A, b, lmn2, B, c, lmn3, C, d, lmn4, D):
    l1, m1, n1 = lmn1
    l2, m2, n2 = lmn2
    l3, m3, n3 = lmn3
    l4, m4, n4 = lmn4
    p = a + b
    q = c + d
    alpha = p * q / (p + q)
    P = (a * A + b * B) / p
    Q = (c * C + d * D) / q
    RPQ = float(np.linalg.norm(P - Q))
    val = 0.0
    for t in range(l1 + l2 + 1):
        E1x = hermite_expansion(l1, l2, t, A[0] - B[0], a, b)
        for u in range(m1 + m2 + 1):
            E1y = hermite_expansion(m1, m2, u, A[1] - B[1], a, b)
            for v in range(n1 + n2 + 1):
                E1z = hermite_expansion(n1, n2, v, A[2] - B[2], a, b)
                for tau in range(l3 + l4 + 1):
                    E2x = hermite_expansion(l3, l4, tau, C[0] - D[0], c, d)
                    for nu in range(m3 + m4 + 1):
                        E2y = hermite_expansion(m3, m4, nu, C[1] - D[1], c, d)
                        for phi in range(n3 + n4 + 1):
                            E2z = hermite_expansion(n3, n4, phi, C[2] - D[2], c, d)
                            val += (E1x * E1y * E1z * E2x * E2y * E2z
                                    * (-1) ** (tau + nu + phi)
                                    * hermite_coulomb(
                                        t + tau, u + nu, v + phi, 0, alpha,
                                        P[0] - Q[0], P[1] - Q[1], P[2] - Q[2], RPQ))
    return val * 2 * math.pi ** 2.5 / (p * q * math.sqrt(p + q))


def eri_contracted(g1, g2, g3, g4):
    s = 0.0
    for a, ca in zip(g1.exps, g1.coefs):
        for b, cb in zip(g2.exps, g2.coefs):
            for c, cc in zip(g3.exps, g3.coefs):
                for d, cd in zip(g4.exps, g4.coefs):
                    s += ca * cb * cc * cd * eri_prim(
                        a, g1.lmn, g1.center, b, g2.lmn, g2.center,
                        c, g3.lmn, g3.center, d, g4.lmn, g4.center)
    return s


# ---------------------------------------------------------------------------
# Molecule setup and integral assembly
# ---------------------------------------------------------------------------

def build_basis(atoms):
    """atoms: list of (symbol, xyz_bohr). Returns list of ContractedGaussian."""
    basis = []
    for sym, xyz in atoms:
        for shell in STO3G[sym]:
            if shell[0] == "S":
                _, exps, coefs = shell
                basis.append(ContractedGaussian(xyz, (0, 0, 0), exps, coefs))
            else:  # SP shell: one s + three p functions sharing exponents
                _, exps, s_coefs, p_coefs = shell
                basis.append(ContractedGaussian(xyz, (0, 0, 0), exps, s_coefs))
                for lmn in [(1, 0, 0), (0, 1, 0), (0, 0, 1)]:
                    basis.append(ContractedGaussian(xyz, lmn, exps, p_coefs))
    return basis


def assemble_integrals(atoms, basis, verbose=True):
    n = len(basis)
    S = np.zeros((n, n))
    T = np.zeros((n, n))
    V = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1):
            S[i, j] = S[j, i] = overlap_contracted(basis[i], basis[j])
            T[i, j] = T[j, i] = kinetic_contracted(basis[i], basis[j])
            v = 0.0
            for sym, xyz in atoms:
                v -= NUCLEAR_CHARGE[sym] * nuclear_contracted(basis[i], basis[j], np.asarray(xyz))
            V[i, j] = V[j, i] = v
    eri = np.zeros((n, n, n, n))
    t0 = time.time()
    done = set()
    for i in range(n):
        for j in range(i + 1):
            for k in range(n):
                for l in range(k + 1):
                    if (i * n + j) < (k * n + l):
                        continue
                    val = eri_contracted(basis[i], basis[j], basis[k], basis[l])
                    for (a, b, c, d) in [(i, j, k, l), (j, i, k, l), (i, j, l, k), (j, i, l, k),
                                         (k, l, i, j), (l, k, i, j), (k, l, j, i), (l, k, j, i)]:
                        eri[a, b, c, d] = val
    if verbose:
        print(f"  integrals done in {time.time()-t0:.1f}s (n={n})")
    return S, T, V, eri


def nuclear_repulsion(atoms):
    e = 0.0
    for i, (si, xi) in enumerate(atoms):
        for j, (sj, xj) in enumerate(atoms):
            if j <= i:
                continue
            e += NUCLEAR_CHARGE[si] * NUCLEAR_CHARGE[sj] / np.linalg.norm(np.asarray(xi) - np.asarray(xj))
    return e


# ---------------------------------------------------------------------------
# Restricted Hartree-Fock with DIIS
# ---------------------------------------------------------------------------

def run_rhf(S, T, V, eri, n_elec, max_iter=200, conv=1e-12):
    n = S.shape[0]
    n_occ = n_elec // 2
    hcore = T + V
    evals, evecs = np.linalg.eigh(S)
    X = evecs @ np.diag(evals ** -0.5) @ evecs.T

    def fock(D):
        J = np.einsum("pqrs,rs->pq", eri, D)
        K = np.einsum("prqs,rs->pq", eri, D)
        return hcore + 2 * J - K

    def clean(M, tol=1e-12):
        M = M.copy()
        M[np.abs(M) < tol] = 0.0
        return M

    D = np.zeros((n, n))
    errs, focks = [], []
    e_old = 0.0
    C = None
    for it in range(max_iter):
        F = fock(D)
        err = X.T @ (F @ D @ S - S @ D @ F) @ X
        errs.append(err)
        focks.append(F)
        if len(errs) > 8:
            errs.pop(0)
            focks.pop(0)
        if len(errs) >= 2:
            m = len(errs)
            B = -np.ones((m + 1, m + 1))
            B[m, m] = 0.0
            for a in range(m):
                for b in range(m):
                    B[a, b] = np.einsum("pq,pq->", errs[a], errs[b])
            rhs = np.zeros(m + 1)
            rhs[m] = -1.0
            try:
                w = np.linalg.solve(B, rhs)[:m]
                F = sum(wi * Fi for wi, Fi in zip(w, focks))
            except np.linalg.LinAlgError:
                pass
        Fp = clean(X.T @ F @ X)
        eps, Cp = np.linalg.eigh(Fp)
        C = X @ Cp
        D = C[:, :n_occ] @ C[:, :n_occ].T
        e_elec = np.einsum("pq,pq->", D, hcore + fock(D))
        if abs(e_elec - e_old) < conv and it > 2:
            break
        e_old = e_elec
    return e_elec, C, eps


def mo_integrals(hcore, eri, C):
    h_mo = C.T @ hcore @ C
    g = np.einsum("pi,pqrs->iqrs", C, eri)
    g = np.einsum("qj,iqrs->ijrs", C, g)
    g = np.einsum("rk,ijrs->ijks", C, g)
    g_mo = np.einsum("sl,ijks->ijkl", C, g)
    return h_mo, g_mo


# ---------------------------------------------------------------------------
# Sparse Pauli algebra: operators are dicts {(x_int, z_int): coeff} over
# i^e X^x Z^z words; e is folded into the complex coefficient.
# ---------------------------------------------------------------------------

def pauli_mul(k1, c1, k2, c2):
    x1, z1 = k1
    x2, z2 = k2
    sign = -1.0 if bin(z1 & x2).count("1") % 2 else 1.0
    return (x1 ^ x2, z1 ^ z2), c1 * c2 * sign


def op_mul(A, B):
    out = {}
    for k1, c1 in A.items():
        for k2, c2 in B.items():
            k, c = pauli_mul(k1, c1, k2, c2)
            out[k] = out.get(k, 0.0) + c
    return {k: c for k, c in out.items() if abs(c) > 1e-14}


def op_add(A, B, scale=1.0):
    out = dict(A)
    for k, c in B.items():
        out[k] = out.get(k, 0.0) + scale * c
    return out


def single_pauli(n, q, kind):
    """Return {key: coeff} for X/Y/Z on qubit q; Y = i * XZ."""
    if kind == "X":
        return {(1 << q, 0): 1.0}
    if kind == "Z":
        return {(0, 1 << q): 1.0}
    return {(1 << q, 1 << q): 1.0j}


def pauli_string_op(n, xs, ys, zs):
    """Product of X on xs, Y on ys, Z on zs (disjoint qubit sets)."""
    x = 0
    z = 0
    phase = 1.0
    for q in xs:
        x |= 1 << q
    for q in zs:
        z |= 1 << q
    for q in ys:
        x |= 1 << q
        z |= 1 << q
        phase *= 1.0j
    return {(x, z): phase}


# Fenwick-tree index sets for the Bravyi-Kitaev encoding (0-based modes).

def parity_set(j):
    s = set()
    idx = j
    while idx > 0:
        s.add(idx - 1)
        idx &= idx - 1
    return s


def update_set(j, n):
    s = set()
    idx = j + 1
    idx += idx & (-idx)
    while idx <= n:
        s.add(idx - 1)
        idx += idx & (-idx)
    return s


def occupation_set(j):
    s = {j}
    idx = j + 1
    parent_floor = idx - (idx & (-idx))
    child = idx - 1
    while child > parent_floor:
        s.add(child - 1)
        child &= child - 1
    return s


def majoranas_bk(j, n):
    """(c_j, d_j) with a_j = (c_j + i d_j)/2 in the Bravyi-Kitaev encoding."""
    U = sorted(update_set(j, n))
    P = parity_set(j)
    R = sorted(P - occupation_set(j))
    c = pauli_string_op(n, xs=U + [j], ys=[], zs=sorted(P))
    d = pauli_string_op(n, xs=U, ys=[j], zs=R)
    return c, d


def majoranas_jw(j, n):
    zs = list(range(j))
    c = pauli_string_op(n, xs=[j], ys=[], zs=zs)
    d = pauli_string_op(n, xs=[], ys=[j], zs=zs)
    return c, d


def lowering_ops(n, encoding):
    ops = []
    for j in range(n):
        c, d = majoranas_bk(j, n) if encoding == "bk" else majoranas_jw(j, n)
        a = op_add(c, op_mul({(0, 0): 1.0j}, d), scale=1.0)
        a = {k: 0.5 * v for k, v in a.items()}
        ops.append(a)
    return ops


def adjoint(A):
    out = {}
    for (x, z), c in A.items():
        sign = -1.0 if bin(x & z).count("1") % 2 else 1.0
        out[(x, z)] = np.conj(c) * sign
    return out


def qubit_hamiltonian(h_so, g_so, n_so, encoding):
    """Map sum h[p,q] a+_p a_q + 1/2 g[p,q,r,s] a+_p a+_q a_r a_s to Paulis."""
    a = lowering_ops(n_so, encoding)
    ad = [adjoint(x) for x in a]
    H = {}
    for p in range(n_so):
        for q in range(n_so):
            if abs(h_so[p, q]) < 1e-13:
                continue
            H = op_add(H, op_mul(ad[p], a[q]), scale=h_so[p, q])
    for p in range(n_so):
        for q in range(n_so):
            if p == q:
                continue
            pq = op_mul(ad[p], ad[q])
            if not pq:
                continue
            for r in range(n_so):
                for s in range(n_so):
                    if r == s:
                        continue
                    c = g_so[p, q, r, s]
                    if abs(c) < 1e-13:
                        continue
                    H = op_add(H, op_mul(pq, op_mul(a[r], a[s])), scale=0.5 * c)
    return {k: c for k, c in H.items() if abs(c) > 1e-10}


def spin_orbital_integrals(h_mo, g_mo):
    """Interleaved spin orbitals: 2i = (i, alpha), 2i+1 = (i, beta).

    Returns h_so, g_so with H = sum h a+a + 1/2 sum g[p,q,r,s] a+_p a+_q a_r a_s,
    where g[p,q,r,s] = <pq|sr>_phys expressed from chemist (ps|qr) integrals.
    """
    n = h_mo.shape[0]
    n_so = 2 * n
    h_so = np.zeros((n_so, n_so))
    g_so = np.zeros((n_so, n_so, n_so, n_so))
    for p in range(n_so):
        for q in range(n_so):
            if p % 2 == q % 2:
                h_so[p, q] = h_mo[p // 2, q // 2]
    # a+_p a+_q a_r a_s with pairing (p,s) and (q,r) in chemist notation
    for p in range(n_so):
        for q in range(n_so):
            for r in range(n_so):
                for s in range(n_so):
                    if p % 2 == s % 2 and q % 2 == r % 2:
                        g_so[p, q, r, s] = g_mo[p // 2, s // 2, q // 2, r // 2]
    return h_so, g_so


# ---------------------------------------------------------------------------
# Dense utilities for self-checks
# ---------------------------------------------------------------------------

def dense_from_op(H, n):
    dim = 1 << n
    M = np.zeros((dim, dim), dtype=complex)
    idx = np.arange(dim)
    for (x, z), c in H.items():
        signs = (-1.0) ** np.array([bin(i & z).count("1") for i in idx])
        M[idx ^ x, idx] += c * signs
    return M


def bk_encode_bits(occ, n):
    """Map occupation-number bit list to Bravyi-Kitaev qubit bits."""
    bits = []
    for q in range(n):
        idx = q + 1
        lo = idx - (idx & (-idx))
        b = 0
        for j in range(lo, idx):
            b ^= occ[j]
        bits.append(b)
    return bits


def bits_to_index(bits):
    i = 0
    for q, b in enumerate(bits):
        if b:
            i |= 1 << q
    return i


# ---------------------------------------------------------------------------
# Driver
# ---------------------------------------------------------------------------

def geometry(name):
    A = ANGSTROM_TO_BOHR
    if name == "h2":
        return [("H", (0.0, 0.0, 0.0)), ("H", (0.0, 0.0, 1.0 * A))], 2
    if name == "lih":
        return [("Li", (0.0, 0.0, 0.0)), ("H", (0.0, 0.0, 1.0 * A))], 4
    if name == "beh2":
        return [("Be", (0.0, 0.0, 0.0)), ("H", (0.0, 0.0, 1.0 * A)),
                ("H", (0.0, 0.0, -1.0 * A))], 6
    if name == "h2o":
        ang = math.radians(107.6)
        return [("O", (0.0, 0.0, 0.0)),
                ("H", (0.0, 0.0, 1.0 * A)),
                ("H", (0.0, math.sin(ang) * A, math.cos(ang) * A))], 10
    if name == "nh3":
        cos_t = math.sqrt((2 * math.cos(math.radians(107.0)) + 1.0) / 3.0)
        sin_t = math.sqrt(1.0 - cos_t ** 2)
        hs = []
        for k in range(3):
            phi = 2 * math.pi * k / 3
            hs.append(("H", (sin_t * math.cos(phi) * A,
                             sin_t * math.sin(phi) * A,
                             -cos_t * A)))
        return [("N", (0.0, 0.0, 0.0))] + hs, 10
    raise ValueError(name)


def pauli_term_string(x, z, n):
    toks = []
    for q in range(n):
        xq = (x >> q) & 1
        zq = (z >> q) & 1
        if xq and zq:
            toks.append(f"Y{q}")
        elif xq:
            toks.append(f"X{q}")
        elif zq:
            toks.append(f"Z{q}")
    return " ".join(toks)


def real_coefficients(H, n):
    """Convert i^e X^x Z^z coefficients to plain Pauli-string coefficients."""
    out = {}
    for (x, z), c in H.items():
        y_count = bin(x & z).count("1")
        coeff = c / (1.0j ** (y_count % 4))
        assert abs(coeff.imag) < 1e-9, f"imaginary coefficient {coeff}"
        out[(x, z)] = coeff.real
    return out


def sort_key(x, z, n):
    toks = []
    for q in range(n):
        xq = (x >> q) & 1
        zq = (z >> q) & 1
        if xq and zq:
            toks.append((q, "Y"))
        elif xq:
            toks.append((q, "X"))
        elif zq:
            toks.append((q, "Z"))
    # weight first, then lexicographic on (qubit, letter)
    return (len(toks), toks)


def run_molecule(name, check=False):
    label = {"h2": "H2", "lih": "LiH", "beh2": "BeH2", "h2o": "H2O", "nh3": "NH3"}[name]
    print(f"== {label} ==")
    atoms, n_elec = geometry(name)
    basis = build_basis(atoms)
    S, T, V, eri = assemble_integrals(atoms, basis)
    e_nuc = nuclear_repulsion(atoms)
    e_elec, C, eps = run_rhf(S, T, V, eri, n_elec)
    e_scf = e_elec + e_nuc
    print(f"  RHF total energy: {e_scf:.10f} Ha (electronic {e_elec:.10f}, nuclear {e_nuc:.10f})")

    h_mo, g_mo = mo_integrals(T + V, eri, C)
    h_so, g_so = spin_orbital_integrals(h_mo, g_mo)
    n_so = h_so.shape[0]

    H = qubit_hamiltonian(h_so, g_so, n_so, "bk")
    Hr = real_coefficients(H, n_so)
    const = Hr.pop((0, 0), 0.0) + e_nuc
    n_terms = len(Hr)
    l1 = sum(abs(c) for c in Hr.values())
    print(f"  qubits: {n_so}, non-identity terms: {n_terms}, L1: {l1:.4f}, identity const: {const:.10f}")

    # HF determinant expectation in the BK encoding (strong end-to-end check)
    occ = [1 if j < n_elec else 0 for j in range(n_so)]
    hf_idx = bits_to_index(bk_encode_bits(occ, n_so))
    e_hf_q = const
    for (x, z), c in Hr.items():
        if x == 0:
            sgn = -1.0 if bin(hf_idx & z).count("1") % 2 else 1.0
            e_hf_q += c * sgn
    print(f"  <HF|H_qubit|HF> = {e_hf_q:.10f} (diff vs SCF {abs(e_hf_q - e_scf):.2e})")
    assert abs(e_hf_q - e_scf) < 1e-8

    fci = None
    if n_so <= 14:
        import scipy.sparse as sp
        import scipy.sparse.linalg as spla
        dim = 1 << n_so
        idx = np.arange(dim)
        zpar = {}

        def matvec(v):
            w = np.zeros_like(v, dtype=complex)
            for (x, z), c in Hr.items():
                if z not in zpar:
                    bits = np.zeros(dim)
                    for q in range(n_so):
                        if (z >> q) & 1:
                            bits += (idx >> q) & 1
                    zpar[z] = (-1.0) ** bits
                phase = 1.0j ** (bin(x & z).count("1") % 4)
                w[idx ^ x] += c * phase * zpar[z] * v
            return w

        op = spla.LinearOperator((dim, dim), matvec=matvec, dtype=complex)
        vals = spla.eigsh(op, k=1, which="SA", return_eigenvectors=False, tol=1e-11)
        fci = float(vals[0]) + const
        print(f"  FCI total energy: {fci:.10f} Ha (file ground energy {vals[0]:.10f})")

    if check and name == "h2":
        run_h2_checks(Hr, const, h_so, g_so, n_so, e_elec)

    lines = []
    lines.append("# Qubit Hamiltonian data file: sum of weighted Pauli strings.")
    lines.append("# generator: tools/fixturegen/generate.py (self-contained RHF + integral code)")
    geom = "; ".join(f"{s} ({x[0]/ANGSTROM_TO_BOHR:.6f}, {x[1]/ANGSTROM_TO_BOHR:.6f}, {x[2]/ANGSTROM_TO_BOHR:.6f})"
                     for s, x in atoms)
    lines.append(f"# molecule: {label}  geometry_angstrom: {geom}")
    lines.append("# basis: STO-3G  method: RHF  encoding: bravyi-kitaev, interleaved spin orbitals")
    lines.append(f"# scf_total_energy_hartree: {e_scf:.12f}")
    lines.append(f"# nuclear_repulsion_hartree: {e_nuc:.12f}")
    lines.append(f"# identity_coefficient_hartree: {const:.12f} (omitted from the term list)")
    if fci is not None:
        lines.append(f"# fci_total_energy_hartree: {fci:.12f}")
        lines.append(f"# file_ground_energy_hartree: {fci - const:.12f} (lowest eigenvalue of the terms below)")
    lines.append(f"n_qubits: {n_so}")
    lines.append(f"label: {label}")
    for (x, z) in sorted(Hr.keys(), key=lambda k: sort_key(k[0], k[1], n_so), reverse=True):
        lines.append(f"{Hr[(x, z)]:.17e}\t{pauli_term_string(x, z, n_so)}")
    out = f"../../fixtures/{name}.ham"
    with open(out, "w") as f:
        f.write("\n".join(lines) + "\n")
    print(f"  wrote {out} ({n_terms} terms)")
    return Hr, const, n_so


def run_h2_checks(Hr, const, h_so, g_so, n_so, e_elec):
    print("  [check] H2 JW/BK spectra and integral sanity")
    H_bk = qubit_hamiltonian(h_so, g_so, n_so, "bk")
    H_jw = qubit_hamiltonian(h_so, g_so, n_so, "jw")
    s_bk = np.sort(np.linalg.eigvalsh(dense_from_op(H_bk, n_so)))
    s_jw = np.sort(np.linalg.eigvalsh(dense_from_op(H_jw, n_so)))
    assert np.max(np.abs(s_bk - s_jw)) < 1e-9, "JW/BK spectra differ"
    print(f"    JW vs BK spectrum max diff: {np.max(np.abs(s_bk - s_jw)):.2e}")
    # CAR check for BK lowering operators
    a = lowering_ops(n_so, "bk")
    for p in range(n_so):
        for q in range(n_so):
            anti = op_add(op_mul(a[p], adjoint(a[q])), op_mul(adjoint(a[q]), a[p]))
            anti = {k: v for k, v in anti.items() if abs(v) > 1e-12}
            expect = {(0, 0): 1.0} if p == q else {}
            keys = set(anti) | set(expect)
            for k in keys:
                assert abs(anti.get(k, 0) - expect.get(k, 0)) < 1e-12, f"CAR failed {p} {q}"
    print("    CAR relations verified")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("molecules", nargs="*", default=[])
    ap.add_argument("--all", action="store_true")
    ap.add_argument("--check", action="store_true")
    args = ap.parse_args()
    names = args.molecules or []
    if args.all:
        names = ["h2", "lih", "beh2", "h2o", "nh3"]
    if not names:
        names = ["h2"]
    for name in names:
        run_molecule(name, check=args.check)


if __name__ == "__main__":
    main()
