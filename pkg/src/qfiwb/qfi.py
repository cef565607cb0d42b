"""Quantum Fisher information of pure states and its ensemble expectations.

For a pure state and Hamiltonian H the QFI is 4 (<H^2> - <H>^2). Random-state
expectations come in two flavors: the full-space Haar mean and the
symmetric-subspace mean, the latter evaluated through the Dicke frame in the
form 4 (Tr[P H^2 P]/(C + 1) - Tr[P H P]^2 / (C (C + 1))) with P the symmetric
projector and C the subspace dimension.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .numerics import (
    check_power_dim,
    ensure_hermitian,
    spectral_norm,
    spectral_spread,
    unitary_with_first_column,
)
from .hamiltonians import (
    GraphHamiltonian,
    LinearHamiltonian,
    ProductDiagonalHamiltonian,
    SingleSiteOperator,
    linear_to_product_diagonal,
)
from .states import DickeBasis, PureState, dicke_basis, dim_symmetric, product_state

QFI_CLIP_ATOL = 1e-9


def _dense(h) -> np.ndarray:
    if isinstance(h, np.ndarray):
        return ensure_hermitian(h)
    if hasattr(h, "dense"):
        return ensure_hermitian(h.dense())
    raise TypeError(f"cannot interpret {type(h).__name__} as a Hamiltonian")


@dataclass(frozen=True)
class QfiReport:
    """QFI value together with the two moments behind it.

    `value` is 4 (mean_H2 - mean_H^2) with tiny negative round-off (within
    QFI_CLIP_ATOL) clipped to zero. Construction fails if the variance is
    more negative than the clip tolerance.
    """

    value: float
    mean_H: float
    mean_H2: float


def qfi_report(state: PureState, h) -> QfiReport:
    hm = _dense(h)
    psi = state.amplitudes
    if hm.shape[0] != psi.shape[0]:
        raise ValueError(f"dimension mismatch: state {psi.shape[0]}, operator {hm.shape[0]}")
    hpsi = hm @ psi
    second = float(np.real(np.vdot(hpsi, hpsi)))
    mean = float(np.real(np.vdot(psi, hpsi)))
    raw = 4.0 * (second - mean * mean)
    if raw < -QFI_CLIP_ATOL:
        raise ArithmeticError(
            f"negative variance {raw} exceeds the numerical-consistency tolerance"
        )
    return QfiReport(max(raw, 0.0), mean, second)


def qfi(state: PureState, h) -> float:
    return qfi_report(state, h).value


def qfi_batch(h, amplitudes: np.ndarray) -> np.ndarray:
    """QFI of many states at once; rows of `amplitudes` are state vectors."""
    hm = _dense(h)
    a = np.asarray(amplitudes, dtype=np.complex128)
    y = a @ hm.T
    second = np.sum(np.abs(y) ** 2, axis=1)
    mean = np.real(np.sum(np.conjugate(a) * y, axis=1))
    raw = 4.0 * (second - mean**2)
    if np.min(raw) < -QFI_CLIP_ATOL:
        raise ArithmeticError("negative variance beyond the numerical-consistency tolerance")
    return np.maximum(raw, 0.0)


# --- ensemble expectations ---------------------------------------------------

def expected_qfi_haar(h) -> float:
    """Haar mean of the QFI over the full space, exact for any Hermitian H."""
    hm = _dense(h)
    dim = hm.shape[0]
    tr1 = float(np.real(np.trace(hm)))
    tr2 = float(np.real(np.trace(hm @ hm)))
    return 4.0 * (tr2 / (dim + 1) - tr1 * tr1 / (dim * (dim + 1)))


def expected_qfi_symmetric(h, n: int, d: int, basis: DickeBasis | None = None) -> float:
    """Symmetric-subspace mean of the QFI via Dicke-frame compression.

    Uses the compressed blocks M1 = D* H D and M2 = D* H^2 D, whose traces
    equal Tr[P H P] and Tr[P H^2 P].
    """
    hm = _dense(h)
    if hm.shape[0] != check_power_dim(d, n):
        raise ValueError("operator dimension does not match (n, d)")
    if basis is None:
        basis = dicke_basis(n, d)
    dm = basis.matrix
    c = basis.size
    hd = hm @ dm
    tr1 = float(np.real(np.einsum("ic,ic->", dm.conj(), hd)))
    tr2 = float(np.real(np.einsum("ic,ic->", hd.conj(), hd)))
    return 4.0 * (tr2 / (c + 1) - tr1 * tr1 / (c * (c + 1)))


def site_variance_term(site: SingleSiteOperator) -> float:
    """Tr(h^2)/d - Tr(h)^2/d^2 for a one-site operator."""
    lv = np.asarray(site.levels)
    d = site.d
    return float(np.sum(lv**2) / d - (np.sum(lv) / d) ** 2)


def expected_qfi_haar_linear(site: SingleSiteOperator, n: int) -> float:
    """Closed-form Haar mean for an equal-row linear Hamiltonian."""
    d = site.d
    dim = check_power_dim(d, n)
    return 4.0 * n * (dim / (dim + 1)) * site_variance_term(site)


def expected_qfi_symmetric_linear(site: SingleSiteOperator, n: int) -> float:
    """Closed-form symmetric-subspace mean for an equal-row linear Hamiltonian."""
    d = site.d
    c = dim_symmetric(n, d)
    return 4.0 * (n * (n + d) / (d + 1)) * (c / (c + 1)) * site_variance_term(site)


# --- concentration -----------------------------------------------------------

def lipschitz_constant(h) -> float:
    """2 ||H^2|| + 2 sqrt(2) ||H||^2, the Levy-function Lipschitz scale."""
    hm = _dense(h)
    return 2.0 * spectral_norm(hm @ hm) + 2.0 * math.sqrt(2.0) * spectral_norm(hm) ** 2


@dataclass(frozen=True)
class ConcentrationBound:
    """Levy tail bounds for f = QFI/4 at deviation `epsilon`.

    `two_sided` bounds P(|f - E f| > eps); `one_sided` bounds a single tail
    (the upper tail over the full space, the lower tail over the symmetric
    subspace). Values are stored raw even when they exceed 1; the vacuous
    flags mark that case. `selected` repeats whichever tail the caller asked
    levy_bound for.
    """

    epsilon: float
    dim: int
    lipschitz: float
    two_sided: float
    one_sided: float
    selected: float

    @property
    def vacuous_two_sided(self) -> bool:
        return self.two_sided >= 1.0

    @property
    def vacuous_one_sided(self) -> bool:
        return self.one_sided >= 1.0


def levy_bound(h, dim: int, epsilon: float, one_sided: bool = False) -> ConcentrationBound:
    """Concentration bounds at sphere dimension `dim` (full or symmetric)."""
    if dim < 1:
        raise ValueError("dim must be positive")
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    lip = lipschitz_constant(h)
    x = 2.0 * dim * epsilon**2 / (9.0 * math.pi**3 * lip**2)
    two = 2.0 * math.exp(-x)
    one = 2.0 * math.exp(-x / math.log(2.0))
    return ConcentrationBound(
        float(epsilon), int(dim), lip, two, one, one if one_sided else two
    )


# --- extremal states ---------------------------------------------------------

def _site_shape(h, dim: int) -> tuple[int, int]:
    """(n, d) for a typed Hamiltonian; a bare matrix counts as one big site."""
    n = getattr(h, "n", None)
    d = getattr(h, "d", None)
    if n is not None and d is not None:
        return int(n), int(d)
    return 1, dim


def max_qfi_all_states(h) -> tuple[float, PureState]:
    """Maximum QFI over all pure states and a state achieving it.

    The value is the squared spectral spread; the state is the balanced
    superposition of extremal eigenvectors (tie-broken by lowest eigen-index,
    so the result is deterministic even under degeneracy).
    """
    hm = _dense(h)
    w, v = np.linalg.eigh(hm)
    n, d = _site_shape(h, hm.shape[0])
    if hm.shape[0] == 1:
        return 0.0, PureState(n, d, np.ones(1, dtype=np.complex128))
    top = (v[:, -1] + v[:, 0]) / math.sqrt(2.0)
    return float(w[-1] - w[0]) ** 2, PureState(n, d, top)


@dataclass(frozen=True)
class TransportResult:
    """Unitary that moves a given state onto an extremal-QFI configuration.

    `unitary` U satisfies U^dag psi = (v_max + v_min)/sqrt(2), so the rotated
    Hamiltonian U H U^dag has the same spectrum and gives `check` =
    QFI(psi, U H U^dag), which should equal `target` = spread(H)^2.
    """

    unitary: np.ndarray
    check: float
    target: float
    degenerate: bool


def global_unitary_transport(state: PureState, h, degeneracy_atol: float = 1e-12) -> TransportResult:
    hm = _dense(h)
    w, v = np.linalg.eigh(hm)
    scale = max(1.0, float(np.max(np.abs(w))))
    tol = degeneracy_atol * scale
    # lowest eigen-index tie-break on both extremes
    i_min = 0
    i_max = int(np.argmax(w >= w[-1] - tol))
    n_min = int(np.sum(w <= w[0] + tol))
    n_max = int(np.sum(w >= w[-1] - tol))
    degenerate = n_min > 1 or n_max > 1
    if i_max == i_min:
        tau = v[:, i_min]
    else:
        tau = (v[:, i_max] + v[:, i_min]) / math.sqrt(2.0)
    w_psi = unitary_with_first_column(state.amplitudes)
    w_tau = unitary_with_first_column(tau)
    u = w_psi @ w_tau.conj().T
    rotated = u @ hm @ u.conj().T
    check = qfi(state, rotated)
    target = float(w[-1] - w[0]) ** 2
    return TransportResult(u, check, target, degenerate)


# --- separable references ----------------------------------------------------

def _as_product_diagonal(h) -> ProductDiagonalHamiltonian:
    if isinstance(h, LinearHamiltonian):
        return linear_to_product_diagonal(h)
    if isinstance(h, ProductDiagonalHamiltonian):
        return h
    raise TypeError("this operation needs a product-diagonal (or linear) Hamiltonian")


def uniform_superposition_product(h) -> PureState:
    """Product state with each site in the uniform superposition of its basis."""
    pd = _as_product_diagonal(h)
    uniform = np.ones(pd.d, dtype=np.complex128) / math.sqrt(pd.d)
    return product_state([b @ uniform for b in pd.site_bases])


def optimal_separable_reference(h) -> float:
    """QFI of the uniform-superposition product state, by trace arithmetic.

    Equals 4 (Tr[H^2]/d^n - Tr[H]^2/d^(2n)); for any product-diagonal H this
    witnesses that the Haar expectation is attainable by a separable state.
    """
    pd = _as_product_diagonal(h)
    dim = pd.coeffs.shape[0]
    tr1 = float(np.sum(pd.coeffs))
    tr2 = float(np.sum(pd.coeffs**2))
    return 4.0 * (tr2 / dim - (tr1 / dim) ** 2)


def max_separable_linear(h: LinearHamiltonian) -> float:
    """Exact separable maximum for a linear Hamiltonian.

    Product-state QFI is additive across sites for a sum of one-site terms,
    and each site's variance is maximized by the balanced superposition of
    the extremal eigenvectors, giving sum_i spread(h_i)^2.
    """
    total = 0.0
    for i in range(h.n):
        lv = h.table[i]
        total += float(np.max(lv) - np.min(lv)) ** 2
    return total


# --- symmetric product scan for graph Hamiltonians ----------------------------

def _ordered_pair_counts(hyperedges) -> tuple[int, int]:
    """(s, connected) where connected counts ordered overlapping distinct pairs."""
    edges = [frozenset(e) for e in hyperedges]
    s = len(edges)
    connected = 0
    for a in range(s):
        for b in range(s):
            if a != b and edges[a] & edges[b]:
                connected += 1
    return s, connected


def product_qfi_closed_form(
    s: int, connected: int, lam0: float, lam1: float, p: float
) -> float:
    """QFI of the per-site state sqrt(p)|0> + sqrt(1-p)|1> under a 2-body graph.

    `s` is the edge count and `connected` the ordered count of distinct
    overlapping edge pairs. The relative phase of the site state provably
    drops out, so only p enters.
    """
    m2 = (lam0**2 - lam1**2) * p + lam1**2
    mu = (lam0 - lam1) * p + lam1
    same = s * (m2**2 - mu**4)
    conn = connected * mu**2 * (m2 - mu**2)
    return 4.0 * (same + conn)


@dataclass(frozen=True)
class ProductScan:
    """Best symmetric product state found by the closed-form scan over p."""

    p: float
    value: float
    s: int
    connected: int
    lam0: float
    lam1: float


def max_qfi_symmetric_product(
    h: GraphHamiltonian, resolution: int = 1001, refine_rounds: int = 3
) -> ProductScan:
    """Maximize the closed form over p in [0, 1] by scan plus local refinement.

    Works for 2-body graph Hamiltonians with shared levels. The refinement
    re-scans a shrinking bracket around the best point, which pins p to about
    (1/resolution)^(refine_rounds + 1).
    """
    if h.k != 2:
        raise ValueError("the symmetric product scan covers 2-body graphs")
    shared = h.shared_levels
    if shared is None:
        raise ValueError("the closed form needs shared levels across sites")
    lam0, lam1 = shared
    s, connected = _ordered_pair_counts(h.hyperedges)
    if resolution < 3:
        raise ValueError("resolution must be at least 3")

    def scan(lo: float, hi: float) -> tuple[float, float]:
        ps = np.linspace(lo, hi, resolution)
        vals = np.array(
            [product_qfi_closed_form(s, connected, lam0, lam1, p) for p in ps]
        )
        i = int(np.argmax(vals))
        return float(ps[i]), float(vals[i])

    lo, hi = 0.0, 1.0
    best_p, best_v = scan(lo, hi)
    for _ in range(refine_rounds):
        width = (hi - lo) / (resolution - 1)
        lo = max(0.0, best_p - 2 * width)
        hi = min(1.0, best_p + 2 * width)
        best_p, best_v = scan(lo, hi)
    return ProductScan(best_p, best_v, s, connected, lam0, lam1)


def symmetric_product_state(h: GraphHamiltonian, p: float) -> PureState:
    """The scanned product state itself, aligned with each site's basis."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    local = np.array([math.sqrt(p), math.sqrt(1.0 - p)], dtype=np.complex128)
    sites = [op.basis @ local for op in h.site_ops]
    return product_state(sites)
