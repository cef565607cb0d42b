"""Edge-pair combinatorics of k-body coupling graphs and their QFI witnesses.

An interaction graph lists which site tuples carry a coupling term. Ordered
pairs of hyperedges split into same / disjoint / connected classes whose
counts drive both the product-state QFI closed form and the degree-vector
scaling laws, so the same census is computed three independent ways here:
brute force over edge pairs, degree arithmetic, and per-shape closed forms.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .hamiltonians import GraphHamiltonian, _normalize_hyperedges
from .qfi import ProductScan, max_qfi_symmetric_product, product_qfi_closed_form

GAP_RATIO = 0.25
MAX_BRUTEFORCE_PAIRS = 10**8


@dataclass(frozen=True, eq=False)
class InteractionGraph:
    """Hypergraph of coupling terms: vertices 1..n, uniform-arity edge sets."""

    n: int
    edges: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = int(self.n)
        if n < 1:
            raise ValueError("need at least one vertex")
        edges = _normalize_hyperedges(self.edges, n)
        if len(edges[0]) < 2:
            raise ValueError("edges need at least two vertices (no self-loops)")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "edges", edges)

    @property
    def k(self) -> int:
        return len(self.edges[0])

    @property
    def s(self) -> int:
        return len(self.edges)


@dataclass(frozen=True)
class PairCensus:
    """Ordered edge-pair counts: same (s), disjoint, overlapping (connected)."""

    s: int
    disjoint: int
    connected: int
    all: int

    def __post_init__(self):
        if self.all != self.s**2:
            raise ValueError(f"pair total {self.all} is not s^2 = {self.s ** 2}")
        if self.all != self.s + self.disjoint + self.connected:
            raise ValueError("pair classes do not partition the total")

    @property
    def witness_counts(self) -> tuple[int, int]:
        """(s^2, s + connected): the two count-level QFI scaling witnesses."""
        return self.s**2, self.s + self.connected


@dataclass(frozen=True)
class DegreeVector:
    """Per-vertex edge membership counts."""

    d: tuple[int, ...]

    def __post_init__(self):
        d = tuple(int(x) for x in self.d)
        if any(x < 0 for x in d):
            raise ValueError("degrees are nonnegative")
        object.__setattr__(self, "d", d)


# --- builders ----------------------------------------------------------------

def star_graph(n: int) -> InteractionGraph:
    """Vertex 1 coupled to every other vertex."""
    if n < 2:
        raise ValueError("a star needs at least two vertices")
    return InteractionGraph(n, tuple((1, i) for i in range(2, n + 1)))


def chain_graph(n: int, k: int = 2) -> InteractionGraph:
    """Consecutive windows {i, ..., i+k-1} along a path."""
    if k < 2:
        raise ValueError("arity must be at least 2")
    if n < k:
        raise ValueError(f"a {k}-body chain needs at least {k} vertices")
    return InteractionGraph(
        n, tuple(tuple(range(i, i + k)) for i in range(1, n - k + 2))
    )


def ring_graph(n: int, k: int = 2) -> InteractionGraph:
    """Cyclic windows of k consecutive vertices."""
    if k < 2:
        raise ValueError("arity must be at least 2")
    if n < k + 1:
        raise ValueError(f"a {k}-body ring needs at least {k + 1} vertices")
    edges = tuple(
        tuple((i + j) % n + 1 for j in range(k)) for i in range(n)
    )
    return InteractionGraph(n, edges)


def complete_graph(n: int, k: int = 2) -> InteractionGraph:
    """Every k-subset of vertices coupled."""
    if k < 2:
        raise ValueError("arity must be at least 2")
    if n < k:
        raise ValueError(f"need at least {k} vertices")
    return InteractionGraph(n, tuple(itertools.combinations(range(1, n + 1), k)))


GRAPH_SHAPES = ("star", "chain", "ring", "complete")


def preset_graph(shape: str, n: int, k: int = 2) -> InteractionGraph:
    if shape == "star":
        if k != 2:
            raise ValueError("the star preset is 2-body only")
        return star_graph(n)
    if shape == "chain":
        return chain_graph(n, k)
    if shape == "ring":
        return ring_graph(n, k)
    if shape == "complete":
        return complete_graph(n, k)
    raise ValueError(f"unknown graph shape {shape!r}")


# --- census, three routes ------------------------------------------------------

def _census_from_masks(masks: list[int], s: int) -> PairCensus:
    disjoint = 0
    connected = 0
    for a in range(s):
        ma = masks[a]
        for b in range(a + 1, s):
            if ma & masks[b]:
                connected += 2
            else:
                disjoint += 2
    return PairCensus(s, disjoint, connected, s**2)


def census_bruteforce(g: InteractionGraph) -> PairCensus:
    """Exact ordered-pair counts by direct intersection tests."""
    s = g.s
    if s * s > MAX_BRUTEFORCE_PAIRS:
        raise ValueError(f"{s}^2 ordered pairs exceeds the brute-force cap")
    masks = [sum(1 << (v - 1) for v in e) for e in g.edges]
    if g.n <= 63 and s > 512:
        m = np.array(masks, dtype=np.uint64)
        overlap = 0
        for lo in range(0, s, 2048):
            block = m[lo : lo + 2048, None] & m[None, :]
            overlap += int(np.count_nonzero(block))
        connected = overlap - s  # the diagonal self-overlaps
        disjoint = s * s - s - connected
        return PairCensus(s, disjoint, connected, s**2)
    return _census_from_masks(masks, s)


def kbody_census(g: InteractionGraph) -> PairCensus:
    """Ordered-pair census for uniform arity k (the 2-body case included)."""
    return census_bruteforce(g)


def degree_vector(g: InteractionGraph) -> DegreeVector:
    counts = [0] * g.n
    for e in g.edges:
        for v in e:
            counts[v - 1] += 1
    return DegreeVector(tuple(counts))


def census_by_degrees(deg: DegreeVector) -> PairCensus:
    """Census of any realizing 2-body graph from the degree sequence alone.

    Connected ordered pairs correspond to picking a shared vertex and two
    distinct incident edges, hence sum d(d-1); the rest is forced by the
    partition identities.
    """
    total = sum(deg.d)
    if total % 2 != 0:
        raise ValueError(f"degree sum {total} is odd; not a 2-body graph")
    s = total // 2
    connected = sum(x * (x - 1) for x in deg.d)
    disjoint = s * s - s - connected
    return PairCensus(s, disjoint, connected, s**2)


def preset_census(shape: str, n: int, k: int = 2) -> PairCensus:
    """Closed-form census per shape; the k-body chain is enumerated exactly.

    Ring disjoint count n(n-2k+1) needs n >= 2k-1; the complete-graph count
    is C(n,k)*C(n-k,k) ordered.
    """
    if shape == "star":
        if k != 2:
            raise ValueError("the star preset is 2-body only")
        s = n - 1
        connected = (n - 1) * (n - 2)
        return PairCensus(s, s * s - s - connected, connected, s * s)
    if shape == "chain":
        if k == 2:
            s = n - 1
            disjoint = n * n - 5 * n + 6
            return PairCensus(s, disjoint, s * s - s - disjoint, s * s)
        return kbody_census(chain_graph(n, k))
    if shape == "ring":
        if n < 2 * k - 1:
            raise ValueError(f"the ring count formula needs n >= {2 * k - 1}")
        s = n
        disjoint = n * (n - 2 * k + 1)
        return PairCensus(s, disjoint, s * s - s - disjoint, s * s)
    if shape == "complete":
        s = math.comb(n, k)
        disjoint = s * math.comb(n - k, k)
        return PairCensus(s, disjoint, s * s - s - disjoint, s * s)
    raise ValueError(f"unknown graph shape {shape!r}")


# --- degree scaling ------------------------------------------------------------

@dataclass(frozen=True)
class ScalingReport:
    """Degree-norm scaling witnesses for the two QFI maxima.

    The all-states maximum scales with the squared 1-norm of the degree
    vector, the product-state maximum with its squared 2-norm; a vanishing
    ratio along a family marks a genuine precision gap between them.
    """

    norm1_sq: float
    norm2_sq: float
    ratio: float
    census: PairCensus
    verdict: str


def scaling_report(g: InteractionGraph) -> ScalingReport:
    if g.k != 2:
        raise ValueError("degree scaling applies to 2-body graphs")
    deg = degree_vector(g)
    norm1_sq = float(sum(deg.d)) ** 2
    norm2_sq = float(sum(x * x for x in deg.d))
    ratio = norm2_sq / norm1_sq
    verdict = "gap" if ratio <= GAP_RATIO else "no-gap"
    return ScalingReport(norm1_sq, norm2_sq, ratio, census_bruteforce(g), verdict)


# --- QFI witnesses ---------------------------------------------------------------

def to_hamiltonian(
    g: InteractionGraph,
    lam0: float,
    lam1: float,
    basis: np.ndarray | None = None,
) -> GraphHamiltonian:
    """Homogeneous coupling Hamiltonian on this graph with levels (lam0, lam1)."""
    return GraphHamiltonian.shared(
        g.n, g.edges, (lam0, lam1), basis=basis, positive_levels=True
    )


@dataclass(frozen=True)
class WitnessReport:
    """Both QFI maxima with the count-level witnesses they should track.

    `max_all` is exact (squared spectral spread); `max_prod` is the scanned
    product-state optimum. The envelope fields evaluate the pointwise
    sandwich at the scanned p*, so max_prod must land inside
    [prod_lower, prod_upper] and max_all equals all_constant * s^2.
    """

    max_all: float
    max_prod: float
    census: PairCensus
    scan: ProductScan
    all_count: int
    prod_count: int
    all_constant: float
    prod_lower: float
    prod_upper: float


def qfi_witnesses(g: InteractionGraph, lam0: float, lam1: float) -> WitnessReport:
    if not 0.0 < lam0 < lam1:
        raise ValueError(f"levels must satisfy 0 < lam0 < lam1, got ({lam0}, {lam1})")
    if g.k != 2:
        raise ValueError("witness evaluation covers 2-body graphs")
    if g.n > 10:
        raise ValueError("the dense cross-check path is limited to n <= 10")
    h = to_hamiltonian(g, lam0, lam1)
    diag = h.diagonal()
    spread = float(np.max(diag) - np.min(diag))
    max_all = spread**2
    scan = max_qfi_symmetric_product(h)
    census = census_bruteforce(g)
    all_count, prod_count = census.witness_counts
    p = scan.p
    mu = (lam0 - lam1) * p + lam1
    m2 = (lam0**2 - lam1**2) * p + lam1**2
    ctil = m2 - mu**2
    return WitnessReport(
        max_all,
        scan.value,
        census,
        scan,
        all_count,
        prod_count,
        max_all / all_count,
        4.0 * ctil * mu**2 * prod_count,
        4.0 * ctil * (m2 + mu**2) * prod_count,
    )


def product_qfi_at(g: InteractionGraph, lam0: float, lam1: float, p: float) -> float:
    """Closed-form product-state QFI on this graph at mixing weight p."""
    census = census_bruteforce(g)
    return product_qfi_closed_form(census.s, census.connected, lam0, lam1, p)


# --- file format -----------------------------------------------------------------

def graph_to_text(g: InteractionGraph) -> str:
    lines = [f"{g.n} {g.k}"]
    lines.extend(" ".join(str(v) for v in e) for e in g.edges)
    return "\n".join(lines) + "\n"


def graph_from_text(text: str) -> InteractionGraph:
    rows = [ln for ln in (s.strip() for s in text.splitlines()) if ln]
    if not rows:
        raise ValueError("empty graph file")
    head = rows[0].split()
    if len(head) != 2:
        raise ValueError(f"expected header 'n k', got {rows[0]!r}")
    n, k = int(head[0]), int(head[1])
    edges = []
    for ln in rows[1:]:
        e = tuple(int(t) for t in ln.split())
        if len(e) != k:
            raise ValueError(f"edge {e} does not match the declared arity {k}")
        edges.append(e)
    return InteractionGraph(n, tuple(edges))


def write_graph(path: str | Path, g: InteractionGraph) -> None:
    Path(path).write_text(graph_to_text(g))


def read_graph(path: str | Path) -> InteractionGraph:
    return graph_from_text(Path(path).read_text())


# --- random graphs (for cross-route audits) -----------------------------------------

def sample_graph(n: int, s: int, rng, k: int = 2) -> InteractionGraph:
    """Uniform sample of s distinct k-edges on n vertices."""
    pool = list(itertools.combinations(range(1, n + 1), k))
    if s < 1 or s > len(pool):
        raise ValueError(f"cannot place {s} distinct edges (pool {len(pool)})")
    chosen: list[tuple[int, ...]] = []
    remaining = list(pool)
    for _ in range(s):
        i = min(int(rng.random() * len(remaining)), len(remaining) - 1)
        chosen.append(remaining.pop(i))
    return InteractionGraph(n, tuple(chosen))
