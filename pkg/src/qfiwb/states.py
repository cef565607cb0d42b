"""Pure states on n sites of local dimension d, and the symmetric subspace.

Basis indices follow kron order (site 1 most significant). The symmetric
subspace is handled through an explicit orthonormal frame of generalized
Dicke states; compositions are enumerated in colexicographic order, so for
n = 2, d = 2 the frame columns are |00>, (|01> + |10>)/sqrt(2), |11>.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .numerics import Rng, as_complex, basis_digits, check_power_dim
from .hamiltonians import permutation_index_map

NORM_ATOL = 1e-12


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized state vector with its (n, d) shape information."""

    n: int
    d: int
    amplitudes: np.ndarray

    def __post_init__(self):
        dim = check_power_dim(self.d, self.n)
        a = as_complex(np.ravel(self.amplitudes))
        if a.shape[0] != dim:
            raise ValueError(f"expected {dim} amplitudes, got {a.shape[0]}")
        nrm = float(np.linalg.norm(a))
        if abs(nrm - 1.0) > NORM_ATOL:
            raise ValueError(f"state norm {nrm} deviates from 1 by more than {NORM_ATOL}")
        a.setflags(write=False)
        object.__setattr__(self, "amplitudes", a)

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]


def normalized_state(n: int, d: int, amplitudes: np.ndarray) -> PureState:
    """Construct a PureState after exact normalization (errors on zero vectors)."""
    a = as_complex(np.ravel(amplitudes))
    nrm = float(np.linalg.norm(a))
    if nrm == 0.0:
        raise ValueError("cannot normalize the zero vector")
    return PureState(n, d, a / nrm)


def _power_kron(v: np.ndarray, n: int) -> np.ndarray:
    out = v
    for _ in range(n - 1):
        out = np.kron(out, v)
    return out


def product_state(site_vectors: Sequence[np.ndarray]) -> PureState:
    """Tensor product of per-site unit vectors (site 1 first)."""
    vecs = [as_complex(np.ravel(v)) for v in site_vectors]
    if not vecs:
        raise ValueError("need at least one site vector")
    d = vecs[0].shape[0]
    if any(v.shape[0] != d for v in vecs):
        raise ValueError("all site vectors must share the same local dimension")
    for i, v in enumerate(vecs, start=1):
        nrm = float(np.linalg.norm(v))
        if abs(nrm - 1.0) > NORM_ATOL:
            raise ValueError(f"site {i} vector has norm {nrm}, expected 1")
    out = vecs[0]
    for v in vecs[1:]:
        out = np.kron(out, v)
    return normalized_state(len(vecs), d, out)


def ghz(n: int, basis: tuple[np.ndarray, np.ndarray] | None = None) -> PureState:
    """Equal superposition of two extremal product states, (v0^n + v1^n)/sqrt(2).

    `basis` supplies the pair of orthonormal local vectors; by default they
    are the computational |0> and |1> of a qubit.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if basis is None:
        dim = check_power_dim(2, n)
        a = np.zeros(dim, dtype=np.complex128)
        a[0] = a[-1] = 1.0 / math.sqrt(2.0)
        return PureState(n, 2, a)
    v0, v1 = (as_complex(np.ravel(v)) for v in basis)
    d = v0.shape[0]
    if v1.shape[0] != d:
        raise ValueError("basis vectors must share one local dimension")
    gram = np.array([[np.vdot(a, b) for b in (v0, v1)] for a in (v0, v1)])
    if not np.allclose(gram, np.eye(2), atol=NORM_ATOL):
        raise ValueError("basis vectors must be orthonormal")
    total = _power_kron(v0, n) + _power_kron(v1, n)
    return PureState(n, d, total / math.sqrt(2.0))


def plus_vector() -> np.ndarray:
    return np.array([1.0, 1.0], dtype=np.complex128) / math.sqrt(2.0)


def minus_vector() -> np.ndarray:
    return np.array([1.0, -1.0], dtype=np.complex128) / math.sqrt(2.0)


def superposition_state(n: int) -> PureState:
    """Normalized |0>^n + |1>^n + |+>^n + |->^n on n qubits.

    The four branches are not orthogonal, so the normalization is computed
    from the actual vector rather than assumed to be 1/2.
    """
    e0 = np.array([1.0, 0.0], dtype=np.complex128)
    e1 = np.array([0.0, 1.0], dtype=np.complex128)
    branches = [e0, e1, plus_vector(), minus_vector()]
    dim = check_power_dim(2, n)
    total = np.zeros(dim, dtype=np.complex128)
    for v in branches:
        total += _power_kron(v, n)
    return normalized_state(n, 2, total)


def sample_haar(n: int, d: int, rng: Rng) -> PureState:
    """Haar-random pure state: normalized vector of i.i.d. complex normals."""
    dim = check_power_dim(d, n)
    z = rng.complex_normal(dim)
    return normalized_state(n, d, z)


# --- symmetric subspace ------------------------------------------------------

def dim_symmetric(n: int, d: int) -> int:
    """Dimension of the symmetric subspace, C(n + d - 1, n)."""
    return math.comb(n + d - 1, n)


def compositions_colex(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Compositions of `total` into `parts` non-negative parts, colex order.

    The last coordinate varies slowest; within a fixed tail the prefix
    recurses with the same rule.
    """
    if parts < 1:
        raise ValueError("parts must be positive")
    if parts == 1:
        yield (total,)
        return
    for last in range(total + 1):
        for prefix in compositions_colex(total - last, parts - 1):
            yield prefix + (last,)


@dataclass(frozen=True, eq=False)
class DickeBasis:
    """Orthonormal frame of the symmetric subspace in the product basis.

    Column c of `matrix` is the generalized Dicke state for compositions[c]:
    equal positive amplitude on every basis string with that letter count.
    """

    n: int
    d: int
    compositions: tuple[tuple[int, ...], ...]
    matrix: np.ndarray

    @property
    def size(self) -> int:
        return len(self.compositions)


def dicke_basis(n: int, d: int) -> DickeBasis:
    dim = check_power_dim(d, n)
    comps = tuple(compositions_colex(n, d))
    index_of = {c: i for i, c in enumerate(comps)}
    digits = basis_digits(n, d)
    counts = np.stack([(digits == j).sum(axis=1) for j in range(d)], axis=1)
    cols = np.array([index_of[tuple(row)] for row in counts], dtype=np.int64)
    mult = np.bincount(cols, minlength=len(comps))
    m = np.zeros((dim, len(comps)))
    m[np.arange(dim), cols] = 1.0 / np.sqrt(mult[cols])
    m.setflags(write=False)
    return DickeBasis(n, d, comps, m)


def dicke_state(n: int, d: int, composition: Sequence[int]) -> PureState:
    """Generalized Dicke state for one composition."""
    basis = dicke_basis(n, d)
    comp = tuple(int(k) for k in composition)
    try:
        col = basis.compositions.index(comp)
    except ValueError:
        raise ValueError(f"{comp} is not a composition of {n} into {d} parts") from None
    return PureState(n, d, basis.matrix[:, col].astype(np.complex128))


MAX_PROJECTOR_SITES = 6


def symmetric_projector(n: int, d: int) -> np.ndarray:
    """Projector onto the symmetric subspace as the permutation average.

    Built literally as the mean of all n! tensor-factor permutation
    operators, so it is an independent route from the Dicke frame; capped at
    n = 6 sites because of the factorial sum.
    """
    if n > MAX_PROJECTOR_SITES:
        raise ValueError(
            f"permutation-sum projector is capped at n = {MAX_PROJECTOR_SITES}, got {n}"
        )
    dim = check_power_dim(d, n)
    out = np.zeros((dim, dim), dtype=np.complex128)
    src = np.arange(dim)
    count = 0
    for perm in itertools.permutations(range(n)):
        imap = permutation_index_map(perm, d)
        out[imap, src] += 1.0
        count += 1
    return out / count


def sample_symmetric(n: int, d: int, rng: Rng, basis: DickeBasis | None = None) -> PureState:
    """Haar-random state of the symmetric subspace (Gaussian in the Dicke frame)."""
    if basis is None:
        basis = dicke_basis(n, d)
    c = rng.complex_normal(basis.size)
    return normalized_state(n, d, basis.matrix @ c)


# --- plain-text round trip ---------------------------------------------------

def write_state(state: PureState, path: str) -> None:
    """Dump a state as 'n d' header plus one 'index re im' row per amplitude."""
    with open(path, "w", encoding="utf-8") as f:
        f.write(f"{state.n} {state.d}\n")
        for i, z in enumerate(state.amplitudes):
            f.write(f"{i} {repr(float(z.real))} {repr(float(z.imag))}\n")


def read_state(path: str) -> PureState:
    with open(path, "r", encoding="utf-8") as f:
        lines = [ln.split("#", 1)[0].strip() for ln in f]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise ValueError("empty state file")
    head = lines[0].split()
    if len(head) != 2:
        raise ValueError("state file header must be 'n d'")
    n, d = int(head[0]), int(head[1])
    dim = check_power_dim(d, n)
    amps = np.zeros(dim, dtype=np.complex128)
    seen = np.zeros(dim, dtype=bool)
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 3:
            raise ValueError(f"bad state row: {ln!r}")
        i = int(parts[0])
        if i < 0 or i >= dim:
            raise ValueError(f"amplitude index {i} outside 0..{dim - 1}")
        if seen[i]:
            raise ValueError(f"amplitude index {i} given twice")
        seen[i] = True
        amps[i] = complex(float(parts[1]), float(parts[2]))
    if not np.all(seen):
        raise ValueError("state file must list every amplitude index exactly once")
    return PureState(n, d, amps)
