"""Epsilon-nets over banded linear families and the union-bound calculator.

Coefficient grids and qubit basis nets are constructed concretely, so the
covering claims can be audited by direct sampling at desk scale.  For local
dimension above two the module is calculator-only: it evaluates net sizes
and the two tail-probability bounds in log domain, where the constructions
themselves would have astronomically many elements.

The proof constant relating a pure-state net's resolution to the operator
error it induces is never fixed upstream; it enters every parameter choice
here as an explicit argument with default `PROP6_C`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .hamiltonians import LinearHamiltonian, to_spec_text
from .numerics import Rng, haar_unitary, spectral_norm
from .qfi import expected_qfi_symmetric_linear, max_separable_linear, qfi
from .states import PureState, sample_haar, sample_symmetric

PROP6_C = 18.0
SQRT2 = math.sqrt(2.0)

# Materializing every frame of a fine basis net would need gigabytes; past
# this count, callers must use the per-index accessors.
MAX_MATERIALIZED_FRAMES = 200_000

EPSILON_MODES = ("prop7", "result1", "result3")
SIZE_KINDS = ("result1", "result3")
THEOREM_KINDS = ("thm7", "thm9")
PROPERTY_KINDS = ("prop8", "prop9")


# --- coefficient grid ---------------------------------------------------------

@dataclass(frozen=True, eq=False)
class CoefficientGrid:
    """Two mirrored ladders of coefficient values covering [-B,-A] u [A,B].

    Points descend from +B and ascend from -B in steps of 2*eps_c, so every
    admissible magnitude is within eps_c of a rung.  The lowest rung may
    undershoot A; that is how the printed construction reads and it only
    helps the covering.
    """

    A: float
    B: float
    eps_c: float
    points: np.ndarray

    def __post_init__(self):
        if not (self.B > self.A > 0.0):
            raise ValueError(f"need B > A > 0, got A={self.A}, B={self.B}")
        if self.eps_c <= 0.0:
            raise ValueError(f"eps_c must be positive, got {self.eps_c}")
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 1 or pts.size == 0:
            raise ValueError("points must be a non-empty 1-D array")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def count(self) -> int:
        return int(self.points.size)

    def nearest(self, x: float) -> float:
        return float(self.points[int(np.argmin(np.abs(self.points - x)))])

    def distance(self, x: float) -> float:
        return float(np.min(np.abs(self.points - x)))


def coefficient_grid(A: float, B: float, eps_c: float) -> CoefficientGrid:
    """Grid {+-B -+ 2 eps_c k, k = 0..ceil((B-A)/(2 eps_c))}, both signs."""
    if not (B > A > 0.0):
        raise ValueError(f"need B > A > 0, got A={A}, B={B}")
    if eps_c <= 0.0:
        raise ValueError(f"eps_c must be positive, got {eps_c}")
    k = np.arange(math.ceil((B - A) / (2.0 * eps_c)) + 1, dtype=float)
    ladder = B - 2.0 * eps_c * k
    return CoefficientGrid(A, B, eps_c, np.concatenate([ladder, -ladder]))


# --- qubit pure-state net -----------------------------------------------------

def trace_distance_qubit(u: np.ndarray, v: np.ndarray) -> float:
    """Trace distance between pure qubit states, sqrt(1 - |<u|v>|^2)."""
    u = np.asarray(u, dtype=np.complex128).reshape(2)
    v = np.asarray(v, dtype=np.complex128).reshape(2)
    ov = abs(np.vdot(u, v)) ** 2
    return math.sqrt(max(0.0, 1.0 - min(1.0, ov)))


@dataclass(frozen=True, eq=False)
class BasisNet:
    """Deterministic latitude/longitude net of qubit frames.

    Rows sit at polar angles `thetas`; row j carries `row_counts[j]` equally
    spaced azimuths.  Element i is the state (cos(t/2), e^{ip} sin(t/2))
    together with its phase-fixed orthogonal complement, so each index names
    a full orthonormal frame.  Frames are generated on demand: at the
    resolutions the parameter choices call for there are millions of
    elements, and `nearest_index` works by cell lookup, not enumeration.
    """

    d: int
    eps_p: float
    thetas: np.ndarray
    row_counts: np.ndarray
    offsets: np.ndarray

    @property
    def count(self) -> int:
        return int(self.offsets[-1])

    @property
    def frames(self) -> np.ndarray:
        if self.count > MAX_MATERIALIZED_FRAMES:
            raise ValueError(
                f"net has {self.count} frames; materialization is capped at "
                f"{MAX_MATERIALIZED_FRAMES}, use frame_at / nearest_index"
            )
        return np.stack([self.frame_at(i) for i in range(self.count)])

    def _locate(self, index: int) -> tuple[float, float]:
        if not (0 <= index < self.count):
            raise IndexError(f"net index {index} out of range [0, {self.count})")
        j = int(np.searchsorted(self.offsets, index, side="right")) - 1
        k = index - int(self.offsets[j])
        theta = float(self.thetas[j])
        phi = 2.0 * math.pi * k / int(self.row_counts[j])
        return theta, phi

    def state_at(self, index: int) -> np.ndarray:
        theta, phi = self._locate(index)
        return np.array(
            [math.cos(theta / 2.0), math.sin(theta / 2.0) * np.exp(1j * phi)],
            dtype=np.complex128,
        )

    def frame_at(self, index: int) -> np.ndarray:
        theta, phi = self._locate(index)
        c, s = math.cos(theta / 2.0), math.sin(theta / 2.0)
        ph = np.exp(1j * phi)
        return np.array([[c, s], [s * ph, -c * ph]], dtype=np.complex128)

    def nearest_index(self, v: np.ndarray) -> int:
        """Index of a net state within the covering radius of v.

        Snaps the Bloch angles to the containing cell and compares against
        the neighboring cells as well, so the returned element is the best
        of the local patch; the containing cell alone already realizes the
        covering guarantee.
        """
        v = np.asarray(v, dtype=np.complex128).reshape(2)
        theta = 2.0 * math.atan2(abs(v[1]), abs(v[0]))
        rel = v[1] * np.conj(v[0])
        phi = math.atan2(rel.imag, rel.real) % (2.0 * math.pi)
        rows = len(self.thetas)
        dt = math.pi / rows
        j0 = int(round(theta / dt - 0.5))
        best, best_dist = -1, math.inf
        for j in range(max(0, j0 - 1), min(rows, j0 + 2)):
            m = int(self.row_counts[j])
            k0 = int(round(phi * m / (2.0 * math.pi)))
            for dk in (-1, 0, 1):
                k = (k0 + dk) % m
                idx = int(self.offsets[j]) + k
                dist = trace_distance_qubit(v, self.state_at(idx))
                if dist < best_dist:
                    best, best_dist = idx, dist
        return best

    def nearest_frame(self, v: np.ndarray) -> np.ndarray:
        return self.frame_at(self.nearest_index(v))


def pure_state_net_qubit(eps_p: float) -> BasisNet:
    """Bloch-sphere grid whose trace-distance covering radius is <= eps_p.

    Arc budget: rows are spaced so the polar move costs at most half the
    2*eps_p chord target and the azimuthal move along the row costs the
    other half; chord <= arc and trace distance is half the Bloch chord,
    which closes the bound.
    """
    if not (0.0 < eps_p < 1.0):
        raise ValueError(f"eps_p must lie in (0, 1), got {eps_p}")
    delta = 2.0 * eps_p
    rows = math.ceil(math.pi / delta)
    dt = math.pi / rows
    thetas = (np.arange(rows) + 0.5) * dt
    row_counts = np.maximum(
        1, np.ceil(2.0 * math.pi * np.sin(thetas) / delta)
    ).astype(np.int64)
    offsets = np.concatenate([[0], np.cumsum(row_counts)])
    net = BasisNet(2, eps_p, thetas, row_counts, offsets)
    if net.count > (5.0 / eps_p) ** 4:
        raise RuntimeError("constructed net exceeds its cardinality bound")
    return net


def net_probe(net: BasisNet, trials: int, rng: Rng) -> float:
    """Worst trace distance from random qubit states to the net."""
    worst = 0.0
    for t in range(trials):
        r = rng.substream(t)
        v = r.complex_normal(2)
        v = v / np.linalg.norm(v)
        dist = trace_distance_qubit(v, net.state_at(net.nearest_index(v)))
        worst = max(worst, dist)
    return worst


# --- parameter choices and size/probability bounds ----------------------------

@dataclass(frozen=True)
class BoundParams:
    """Family description feeding the net sizes and tail bounds.

    `a` is the largest one-site operator norm over the family; record where
    it came from (a measured spectral norm or a scaling model) so reported
    bounds stay auditable.
    """

    n: int
    d: int
    s_coff: float
    s_basis: float
    A: float
    B: float
    a: float
    norm_A0: float
    c: float
    eps: float
    a_provenance: str = "measured"

    def __post_init__(self):
        if self.n < 1 or self.d < 1:
            raise ValueError("n and d must be positive integers")
        for name in ("s_coff", "s_basis", "a", "c", "eps"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be positive")
        if not (self.B > self.A > 0.0):
            raise ValueError(f"need B > A > 0, got A={self.A}, B={self.B}")
        if self.norm_A0 < 0.0:
            raise ValueError("norm_A0 must be non-negative")


def epsilon_choices(
    eps: float,
    params: BoundParams,
    mode: str,
    prop6_c: float = PROP6_C,
) -> tuple[float, float]:
    """Printed (eps_p, eps_c) pair for the selected covering guarantee.

    "prop7" targets operator-norm cover of the family itself; "result1" and
    "result3" target the two deviation functionals, whose stronger demands
    show up as the squared base in eps_p and the longer eps_c denominators.
    """
    if eps <= 0.0:
        raise ValueError(f"eps must be positive, got {eps}")
    if prop6_c <= 0.0:
        raise ValueError(f"prop6_c must be positive, got {prop6_c}")
    if mode not in EPSILON_MODES:
        raise ValueError(f"mode must be one of {EPSILON_MODES}, got {mode!r}")
    p = params
    base = p.s_coff * p.B * p.a + p.norm_A0
    if mode == "prop7":
        eps_p = eps / (2.0 * SQRT2 * p.d * prop6_c * p.s_basis * base)
        eps_c = eps / (2.0 * p.s_coff * p.a)
        return eps_p, eps_c
    eps_p = eps / (8.0 * (1.0 + 2.0 * SQRT2) * p.d * prop6_c * p.s_basis * base**2)
    common = (
        2.0 * p.s_coff * p.B * p.a
        + p.s_coff**2 * (2.0 * p.B + 2.0) * p.a**2
        + 2.0 * p.s_coff * p.norm_A0 * p.a
    )
    if mode == "result1":
        eps_c = eps / (8.0 * (common + 4.0 * p.B * p.n * (p.n + p.d) / p.d))
    else:
        eps_c = eps / (8.0 * (common + 4.0 * base * p.s_coff * p.a))
    return eps_p, eps_c


def net_size_bound(params: BoundParams, which: str, prop6_c: float = PROP6_C) -> float:
    """Log of the printed net-cardinality bound at the matching choices.

    The coefficient base keeps its literal "+4"; the whole product is
    returned in log domain because the exponents run to d*n and beyond.
    """
    if which not in SIZE_KINDS:
        raise ValueError(f"which must be one of {SIZE_KINDS}, got {which!r}")
    eps_p, eps_c = epsilon_choices(params.eps, params, which, prop6_c)
    coeff_log = math.log((params.B - params.A) / eps_c + 4.0)
    basis_log = math.log(5.0 / eps_p)
    if which == "result1":
        return params.d * params.n * coeff_log + params.d * (params.d + 1) * basis_log
    return (
        params.s_coff * coeff_log
        + params.d * (params.d + 1) * params.s_basis * basis_log
    )


@dataclass(frozen=True)
class TheoremBound:
    """Log-domain pieces of a union-bound tail probability."""

    which: str
    log_prefactor: float
    log_exponential: float
    log_total: float
    vacuous: bool


def theorem_bound(
    params: BoundParams,
    which: str,
    d_min: float = 0.0,
    prop6_c: float = PROP6_C,
) -> TheoremBound:
    """Net-size prefactor times concentration tail, in log domain.

    "thm7" concentrates over the symmetric subspace, so the dimension count
    is the composition count and the Lipschitz scale is the family's
    operator-norm bound n*B*a + norm_A0.  "thm9" concentrates over the full
    product space with dimension d^n and scale s_coff*B*a + norm_A0.  The
    deviation margin c - eps + d_min enters squared; when it is not
    positive the tail saturates at one and only the prefactor survives.
    d_min defaults to the conservative zero (the mean-gap term it stands
    for is non-negative, so dropping it can only loosen the bound).
    """
    if which not in THEOREM_KINDS:
        raise ValueError(f"which must be one of {THEOREM_KINDS}, got {which!r}")
    if d_min < 0.0:
        raise ValueError(f"d_min must be non-negative, got {d_min}")
    p = params
    if which == "thm7":
        size_log = net_size_bound(p, "result1", prop6_c)
        dim = math.comb(p.n + p.d - 1, p.n)
        scale = p.n * p.B * p.a + p.norm_A0
    else:
        size_log = net_size_bound(p, "result3", prop6_c)
        dim = p.d**p.n
        scale = p.s_coff * p.B * p.a + p.norm_A0
    log_prefactor = math.log(2.0) + size_log
    dev = p.c - p.eps + d_min
    if dev <= 0.0:
        log_exponential = 0.0
    else:
        dimf = float(dim) if dim.bit_length() < 1020 else math.inf
        denom = (
            144.0
            * math.pi**3
            * math.log(2.0)
            * (2.0 + 2.0 * SQRT2) ** 2
            * scale**4
        )
        log_exponential = -2.0 * dimf * dev * dev / denom
    log_total = log_prefactor + log_exponential
    return TheoremBound(which, log_prefactor, log_exponential, log_total, log_total >= 0.0)


# --- constructed net over a banded linear family ------------------------------

@dataclass(frozen=True, eq=False)
class LinearFamilyNet:
    """Concrete net over shared-basis linear Hamiltonians at d = 2.

    An element is a choice of basis frame from `basis_net` plus one grid
    rung per site and level, exactly the product structure the size bounds
    count.
    """

    n: int
    d: int
    grid: CoefficientGrid
    basis_net: BasisNet

    @property
    def log_count(self) -> float:
        return self.n * self.d * math.log(self.grid.count) + math.log(
            self.basis_net.count
        )

    def nearest(self, h: LinearHamiltonian) -> tuple[LinearHamiltonian, float]:
        """Snap basis and coefficients; return the element and its distance.

        The representative keeps the snapped frame even though only the
        frame's projectors matter, and the distance is the dense spectral
        norm, so the report is exactly what the covering claim promises.
        """
        if h.n != self.n or h.d != self.d:
            raise ValueError(
                f"family mismatch: net is ({self.n}, {self.d}), "
                f"Hamiltonian is ({h.n}, {h.d})"
            )
        frame = self.basis_net.nearest_frame(h.basis[:, 0])
        idx = np.argmin(np.abs(h.table[..., None] - self.grid.points), axis=-1)
        rep = LinearHamiltonian(self.grid.points[idx], frame)
        return rep, spectral_norm(h.dense() - rep.dense())


def build_linear_net(
    params: BoundParams, mode: str, prop6_c: float = PROP6_C
) -> LinearFamilyNet:
    """Constructed net at the printed choices; qubit sites only."""
    if params.d != 2:
        raise ValueError("constructive nets are implemented for d = 2 only")
    eps_p, eps_c = epsilon_choices(params.eps, params, mode, prop6_c)
    return LinearFamilyNet(
        params.n, params.d, coefficient_grid(params.A, params.B, eps_c),
        pure_state_net_qubit(eps_p),
    )


def sample_linear_banded(
    n: int, d: int, rng: Rng, A: float, B: float
) -> LinearHamiltonian:
    """Random family member: Haar shared basis, |levels| uniform in [A, B]."""
    if not (B > A > 0.0):
        raise ValueError(f"need B > A > 0, got A={A}, B={B}")
    mags = A + (B - A) * rng.random((n, d))
    signs = np.where(rng.random((n, d)) < 0.5, -1.0, 1.0)
    return LinearHamiltonian(mags * signs, haar_unitary(d, rng))


# --- audits -------------------------------------------------------------------

@dataclass(frozen=True)
class CoverAuditRow:
    trial: int
    distance: float
    eps: float
    passed: bool


@dataclass(frozen=True)
class CoverAuditReport:
    eps: float
    trials: int
    max_distance: float
    violations: int
    rows: tuple[CoverAuditRow, ...]
    counterexamples: tuple[str, ...]


def net_cover_audit(
    family_sampler: Callable[[Rng], LinearHamiltonian],
    net: LinearFamilyNet,
    eps: float,
    trials: int,
    rng: Rng,
) -> CoverAuditReport:
    """Check that sampled family members sit within eps of the net.

    Violations do not raise; they are reported with the offending
    Hamiltonian serialized, so a deliberately coarsened net shows up as a
    negative control rather than a crash.  Trial t draws from
    rng.substream(t), which keeps any parallel split over trials
    byte-identical to the serial run.
    """
    if eps <= 0.0:
        raise ValueError(f"eps must be positive, got {eps}")
    rows = []
    counterexamples = []
    worst = 0.0
    for t in range(trials):
        h = family_sampler(rng.substream(t))
        _, dist = net.nearest(h)
        ok = dist <= eps
        rows.append(CoverAuditRow(t, dist, eps, ok))
        if not ok:
            counterexamples.append(to_spec_text(h))
        worst = max(worst, dist)
    return CoverAuditReport(
        eps, trials, worst, len(counterexamples), tuple(rows), tuple(counterexamples)
    )


@dataclass(frozen=True)
class PropertyAuditRow:
    trial: int
    deviation: float
    eps: float
    passed: bool


@dataclass(frozen=True)
class PropertyAuditReport:
    which: str
    eps: float
    trials: int
    max_deviation: float
    violations: int
    rows: tuple[PropertyAuditRow, ...]
    counterexamples: tuple[str, ...]


def _symmetric_mean_gap(state: PureState, h: LinearHamiltonian) -> float:
    site = h.symmetrized().site_operator(0)
    return qfi(state, h) - expected_qfi_symmetric_linear(site, h.n)


def _separable_gap(state: PureState, h: LinearHamiltonian) -> float:
    return qfi(state, h) - max_separable_linear(h)


def property_audit(
    net: LinearFamilyNet,
    eps: float,
    trials: int,
    which: str,
    rng: Rng,
) -> PropertyAuditReport:
    """Check the deviation functional moves by at most eps under snapping.

    "prop8" compares the QFI of a random symmetric state against the
    symmetric-subspace mean at the permutation-averaged Hamiltonian;
    "prop9" compares the QFI of a random pure state against the exact
    separable maximum.  Each trial evaluates both sides at the sampled H
    and at its net representative and takes the absolute difference.
    """
    if which not in PROPERTY_KINDS:
        raise ValueError(f"which must be one of {PROPERTY_KINDS}, got {which!r}")
    if eps <= 0.0:
        raise ValueError(f"eps must be positive, got {eps}")
    rows = []
    counterexamples = []
    worst = 0.0
    for t in range(trials):
        r = rng.substream(t)
        h = sample_linear_banded(net.n, net.d, r, net.grid.A, net.grid.B)
        rep, _ = net.nearest(h)
        if which == "prop8":
            psi = sample_symmetric(net.n, net.d, r)
            deviation = abs(_symmetric_mean_gap(psi, h) - _symmetric_mean_gap(psi, rep))
        else:
            psi = sample_haar(net.n, net.d, r)
            deviation = abs(_separable_gap(psi, h) - _separable_gap(psi, rep))
        ok = deviation <= eps
        rows.append(PropertyAuditRow(t, deviation, eps, ok))
        if not ok:
            counterexamples.append(to_spec_text(h))
        worst = max(worst, deviation)
    return PropertyAuditReport(
        which, eps, trials, worst, len(counterexamples), tuple(rows),
        tuple(counterexamples),
    )
