"""Independent reference implementations used to cross-check the package.

Everything here is deliberately written the slow, obvious way (explicit
permutation sums, eigendecompositions, grid scans) and shares no code with
the library beyond numpy itself.
"""

import itertools
import math

import numpy as np


def qfi_eigen(psi: np.ndarray, hm: np.ndarray) -> float:
    """QFI via the spectral measure of H in the state: 4 Var over p_j = |<v_j|psi>|^2."""
    w, v = np.linalg.eigh(hm)
    p = np.abs(v.conj().T @ psi) ** 2
    m1 = float(p @ w)
    m2 = float(p @ (w**2))
    return 4.0 * (m2 - m1 * m1)


def qfi_fidelity(psi: np.ndarray, hm: np.ndarray, delta: float = 1e-4) -> float:
    """QFI from the small-angle fidelity drop under exp(-i H t)."""
    w, v = np.linalg.eigh(hm)
    evolved = v @ (np.exp(-1j * w * delta) * (v.conj().T @ psi))
    overlap = abs(np.vdot(psi, evolved))
    return 8.0 * (1.0 - overlap) / delta**2


def site_permutation_matrix(n: int, d: int, perm: tuple[int, ...]) -> np.ndarray:
    """V(pi) acting on (C^d)^n by sending site i's digit to slot perm[i]."""
    dim = d**n
    mat = np.zeros((dim, dim))
    for idx in range(dim):
        digits = []
        rem = idx
        for _ in range(n):
            digits.append(rem % d)
            rem //= d
        digits.reverse()  # most-significant digit = site 0
        out = [0] * n
        for i in range(n):
            out[perm[i]] = digits[i]
        target = 0
        for g in out:
            target = target * d + g
        mat[target, idx] = 1.0
    return mat


def symmetrizer(n: int, d: int) -> np.ndarray:
    """(1/n!) sum over all site permutations, as an explicit dense matrix."""
    dim = d**n
    acc = np.zeros((dim, dim))
    count = 0
    for perm in itertools.permutations(range(n)):
        acc += site_permutation_matrix(n, d, perm)
        count += 1
    return acc / count


def kron_chain(mats: list[np.ndarray]) -> np.ndarray:
    out = mats[0]
    for m in mats[1:]:
        out = np.kron(out, m)
    return out


def linear_dense(table: np.ndarray, basis: np.ndarray) -> np.ndarray:
    """Sum of one-site terms U diag(row_i) U^dag embedded at each site."""
    n, d = table.shape
    eye = np.eye(d)
    total = np.zeros((d**n, d**n), dtype=complex)
    for i in range(n):
        site = basis @ np.diag(table[i]).astype(complex) @ basis.conj().T
        total += kron_chain([site if j == i else eye for j in range(n)])
    return total


def product_diagonal_dense(coeffs: np.ndarray, bases: list[np.ndarray]) -> np.ndarray:
    frame = kron_chain(list(bases))
    return frame @ np.diag(coeffs).astype(complex) @ frame.conj().T


def mc_mean(values: list[float]) -> tuple[float, float]:
    """Sample mean and its standard error."""
    count = len(values)
    mean = math.fsum(values) / count
    var = math.fsum((v - mean) ** 2 for v in values) / (count - 1)
    return mean, math.sqrt(var / count)


def bloch_states(polar: int, azimuth: int) -> np.ndarray:
    """Dense grid of qubit pure states, rows are state vectors."""
    thetas = (np.arange(polar) + 0.5) * np.pi / polar
    phis = np.arange(azimuth) * 2.0 * np.pi / azimuth
    t, p = np.meshgrid(thetas, phis, indexing="ij")
    states = np.stack(
        [np.cos(t / 2).astype(complex), np.sin(t / 2) * np.exp(1j * p)], axis=-1
    )
    return states.reshape(-1, 2)


def max_variance_scan(site: np.ndarray, polar: int = 400, azimuth: int = 800) -> float:
    """Grid maximum of Var_psi(site) over qubit states."""
    grid = bloch_states(polar, azimuth)
    first = np.einsum("si,ij,sj->s", grid.conj(), site, grid).real
    second = np.einsum("si,ij,sj->s", grid.conj(), site @ site, grid).real
    return float(np.max(second - first**2))


def schmidt_max_overlap(amplitudes: np.ndarray, d: int) -> float:
    """Exact best squared product overlap for two sites: top Schmidt weight."""
    sigma = np.linalg.svd(amplitudes.reshape(d, d), compute_uv=False)
    return float(sigma[0] ** 2)


def product_overlap_scan(amplitudes: np.ndarray, n: int, points: int = 10) -> float:
    """Grid lower bound on the best squared product-state overlap (d = 2, n <= 3)."""
    grid = bloch_states(points, 2 * points)
    g = grid.conj()
    if n == 2:
        m = np.einsum("ai,bj,ij->ab", g, g, amplitudes.reshape(2, 2))
    elif n == 3:
        m = np.einsum("ai,bj,ck,ijk->abc", g, g, g, amplitudes.reshape(2, 2, 2))
    else:
        raise ValueError("scan oracle covers n = 2 and n = 3 only")
    return float(np.max(np.abs(m) ** 2))


def census_pairs(edges: list[tuple[int, ...]]) -> tuple[int, int, int, int]:
    """Ordered-pair counts (same, disjoint, connected, all) by direct loops."""
    sets = [frozenset(e) for e in edges]
    s = len(sets)
    same = disjoint = connected = 0
    for a in sets:
        for b in sets:
            if a == b:
                same += 1
            elif a & b:
                connected += 1
            else:
                disjoint += 1
    return same, disjoint, connected, s * s
