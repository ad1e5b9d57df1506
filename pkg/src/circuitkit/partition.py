"""Exact circuit partition polynomials by transition-system enumeration.

A transition system picks, at every vertex, how entering edges continue to
leaving edges: a bijection from incoming to outgoing edge slots (directed)
or a perfect matching of the incident half-edge slots (undirected). Each
transition system induces a partition of the edges into circuits; tallying
circuit counts over all systems gives the polynomial coefficients r_t.

Enumeration is lexicographic in the per-vertex wiring indices (vertex 0 most
significant), with per-vertex wirings ordered by Lehmer code (bijections) or
by canonical smallest-first pairing (matchings). Any index range [start, stop)
of that order can be enumerated independently, so tallies may be computed in
pieces and merged by addition.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial, prod
from typing import Iterator

from .errors import GuardExceededError, NotEulerianError
from .graphs import DirectedMultigraph, Multigraph, UndirectedMultigraph, eulerian_check

DEFAULT_ENUMERATION_GUARD = 10**8

# Per-vertex wiring lists are precomputed up to this many entries; beyond it
# wirings are unranked on demand so a single high-degree vertex cannot blow
# up memory even when the total count clears the guard.
_MATERIALIZE_LIMIT = 100_000


def double_factorial(n: int) -> int:
    """n!! = n(n-2)(n-4)...; by convention 0!! = (-1)!! = 1."""
    result = 1
    while n > 1:
        result *= n
        n -= 2
    return result


# ---------------------------------------------------------------------------
# Polynomial
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IntPolynomial:
    """Coefficient vector r_0, r_1, ... of nonnegative arbitrary-precision ints.

    The variant tag records whether the polynomial counts directed or
    undirected circuit partitions; it is bookkeeping only and excluded from
    equality.
    """

    coefficients: tuple[int, ...]
    variant: str | None = field(default=None, compare=False)

    def __post_init__(self):
        coeffs = tuple(int(c) for c in self.coefficients)
        if not coeffs:
            coeffs = (0,)
        if any(c < 0 for c in coeffs):
            raise ValueError("coefficients must be nonnegative")
        while len(coeffs) > 1 and coeffs[-1] == 0:
            coeffs = coeffs[:-1]
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __mul__(self, other: "IntPolynomial") -> "IntPolynomial":
        out = [0] * (len(self.coefficients) + len(other.coefficients) - 1)
        for i, a in enumerate(self.coefficients):
            if a == 0:
                continue
            for j, b in enumerate(other.coefficients):
                out[i + j] += a * b
        variant = self.variant if self.variant == other.variant else None
        return IntPolynomial(tuple(out), variant)

    def evaluate(self, z) -> Fraction:
        """Horner evaluation at an exact rational point."""
        z = Fraction(z)
        acc = Fraction(0)
        for c in reversed(self.coefficients):
            acc = acc * z + c
        return acc

    def coefficient_sum(self) -> int:
        return sum(self.coefficients)

    def to_text(self) -> str:
        return " ".join(str(c) for c in self.coefficients)

    def to_json_dict(self) -> dict:
        return {"coefficients": [str(c) for c in self.coefficients]}

    @classmethod
    def from_json_dict(cls, data: dict) -> "IntPolynomial":
        return cls(tuple(int(c) for c in data["coefficients"]))


def evaluate(p: IntPolynomial, z) -> Fraction:
    return p.evaluate(z)


# ---------------------------------------------------------------------------
# Transition systems
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TransitionSystem:
    """Per-vertex wiring choosing one circuit partition.

    wirings[v] is a permutation tuple sigma (in-slot i continues to out-slot
    sigma[i]) for directed graphs, or a tuple of slot-index pairs forming a
    perfect matching of v's half-edge slots for undirected graphs.
    """

    wirings: tuple[tuple, ...]


def _require_eulerian(g: Multigraph) -> None:
    report = eulerian_check(g)
    if not report.is_eulerian:
        raise NotEulerianError(f"graph is not Eulerian: {report.describe()}", report)


def _directed_slots(g: DirectedMultigraph) -> tuple[list[list[int]], list[list[int]]]:
    """(incoming, outgoing) edge indices per vertex, in file order."""
    ins: list[list[int]] = [[] for _ in range(g.vertex_count)]
    outs: list[list[int]] = [[] for _ in range(g.vertex_count)]
    for e, (u, v) in enumerate(g.edges):
        outs[u].append(e)
        ins[v].append(e)
    return ins, outs


def transition_system_count(g: Multigraph) -> int:
    """prod_v d_v! (directed, d_v = in = out) or prod_v (degree_v - 1)!! (undirected)."""
    if isinstance(g, DirectedMultigraph):
        return prod(factorial(d) for d in g.in_degrees())
    return prod(double_factorial(d - 1) for d in g.degrees())


def _unrank_permutation(d: int, r: int) -> tuple[int, ...]:
    """r-th permutation of range(d) in lexicographic order (Lehmer decode)."""
    pool = list(range(d))
    image = []
    for i in range(d, 0, -1):
        block = factorial(i - 1)
        image.append(pool.pop(r // block))
        r %= block
    return tuple(image)


def _unrank_matching(count: int, r: int) -> tuple[tuple[int, int], ...]:
    """r-th perfect matching of range(count) in canonical smallest-first order."""
    slots = list(range(count))
    pairs = []
    while slots:
        a = slots.pop(0)
        block = double_factorial(len(slots) - 2)
        b = slots.pop(r // block)
        r %= block
        pairs.append((a, b))
    return tuple(pairs)


def _iter_matchings(count: int) -> Iterator[tuple[tuple[int, int], ...]]:
    """All perfect matchings of range(count), canonical order."""

    def rec(slots: tuple[int, ...]):
        if not slots:
            yield ()
            return
        a = slots[0]
        for idx in range(1, len(slots)):
            rest = slots[1:idx] + slots[idx + 1:]
            for tail in rec(rest):
                yield ((a, slots[idx]),) + tail

    return rec(tuple(range(count)))


class _VertexWirings:
    """Lazy indexed access to one vertex's wiring options."""

    def __init__(self, kind: str, size: int):
        # size is d_v (bijections of d_v slots) for directed vertices and the
        # full degree (matchings of `size` slots) for undirected ones.
        self.kind = kind
        self.size = size
        self.count = factorial(size) if kind == "directed" else double_factorial(size - 1)
        self._table = None
        if self.count <= _MATERIALIZE_LIMIT:
            if kind == "directed":
                self._table = list(itertools.permutations(range(size)))
            else:
                self._table = list(_iter_matchings(size))

    def __getitem__(self, r: int):
        if self._table is not None:
            return self._table[r]
        if self.kind == "directed":
            return _unrank_permutation(self.size, r)
        return _unrank_matching(self.size, r)


def _vertex_wirings(g: Multigraph) -> list[_VertexWirings]:
    if isinstance(g, DirectedMultigraph):
        return [_VertexWirings("directed", d) for d in g.in_degrees()]
    return [_VertexWirings("undirected", d) for d in g.degrees()]


def enumerate_transition_systems(
    g: Multigraph,
    start: int = 0,
    stop: int | None = None,
    guard: int | None = None,
) -> Iterator[TransitionSystem]:
    """Yield transition systems with lexicographic indices in [start, stop).

    Defaults cover the full range. The graph must be Eulerian (directed) or
    all-even-degree (undirected), and the total count must clear the guard.
    """
    guard = DEFAULT_ENUMERATION_GUARD if guard is None else guard
    _require_eulerian(g)
    total = transition_system_count(g)
    if total > guard:
        raise GuardExceededError("transition-system enumeration refused", total, guard)
    stop = total if stop is None else stop
    if not (0 <= start <= stop <= total):
        raise ValueError(f"invalid range [{start}, {stop}) for {total} transition systems")
    if start == stop:
        return

    per_vertex = _vertex_wirings(g)
    radices = [w.count for w in per_vertex]

    # Mixed-radix decode of `start`, vertex 0 most significant.
    digits = [0] * len(radices)
    r = start
    for v in range(len(radices) - 1, -1, -1):
        digits[v] = r % radices[v]
        r //= radices[v]

    current = [per_vertex[v][digits[v]] for v in range(len(radices))]
    for _ in range(stop - start):
        yield TransitionSystem(tuple(current))
        # Odometer increment, least significant vertex last.
        for v in range(len(radices) - 1, -1, -1):
            digits[v] += 1
            if digits[v] < radices[v]:
                current[v] = per_vertex[v][digits[v]]
                break
            digits[v] = 0
            current[v] = per_vertex[v][0]


# ---------------------------------------------------------------------------
# Circuit counting
# ---------------------------------------------------------------------------

def circuit_count(g: Multigraph, ts: TransitionSystem) -> int:
    """Number of circuits in the edge partition induced by ts."""
    if g.edge_count == 0:
        raise ValueError("circuit_count requires at least one edge")
    if len(ts.wirings) != g.vertex_count:
        raise ValueError("transition system does not match the graph's vertex count")
    if isinstance(g, DirectedMultigraph):
        return _circuit_count_directed(g, ts)
    return _circuit_count_undirected(g, ts)


def _circuit_count_directed(g: DirectedMultigraph, ts: TransitionSystem) -> int:
    ins, outs = _directed_slots(g)
    successor = [0] * g.edge_count
    for v in range(g.vertex_count):
        sigma = ts.wirings[v]
        if sorted(sigma) != list(range(len(ins[v]))):
            raise ValueError(f"wiring at vertex {v} is not a bijection on {len(ins[v])} slots")
        for slot, e in enumerate(ins[v]):
            successor[e] = outs[v][sigma[slot]]
    seen = [False] * g.edge_count
    cycles = 0
    for e in range(g.edge_count):
        if seen[e]:
            continue
        cycles += 1
        while not seen[e]:
            seen[e] = True
            e = successor[e]
    return cycles


def _circuit_count_undirected(g: UndirectedMultigraph, ts: TransitionSystem) -> int:
    # Partner of each half-edge under the per-vertex transition matchings.
    partner = [-1] * g.half_edge_count
    for v in range(g.vertex_count):
        slots = g.half_edges_at(v)
        pairs = ts.wirings[v]
        flat = sorted(i for pair in pairs for i in pair)
        if flat != list(range(len(slots))):
            raise ValueError(f"wiring at vertex {v} is not a perfect matching of {len(slots)} slots")
        for a, b in pairs:
            partner[slots[a]] = slots[b]
            partner[slots[b]] = slots[a]
    # Circuits are the alternating cycles of (twin pairs) + (transition pairs):
    # walk half-edges alternating the two pairings until the start reappears.
    seen = [False] * g.half_edge_count
    circuits = 0
    for h in range(g.half_edge_count):
        if seen[h]:
            continue
        circuits += 1
        current = h
        while not seen[current]:
            seen[current] = True
            across = current ^ 1  # other end of the same edge
            seen[across] = True
            current = partner[across]
    return circuits


def circuit_count_tally(
    g: Multigraph,
    start: int = 0,
    stop: int | None = None,
    guard: int | None = None,
) -> dict[int, int]:
    """Map circuit count -> number of transition systems, over an index range."""
    tally: dict[int, int] = {}
    for ts in enumerate_transition_systems(g, start, stop, guard):
        t = circuit_count(g, ts)
        tally[t] = tally.get(t, 0) + 1
    return tally


def circuit_partition_polynomial(g: Multigraph, guard: int | None = None) -> IntPolynomial:
    """The generating polynomial sum_t r_t z^t of circuit partitions.

    The edgeless graph yields the constant polynomial 1: its single (empty)
    partition has zero circuits, which keeps the disjoint-union product law
    and the moment identities valid in the degenerate case.
    """
    variant = "directed" if isinstance(g, DirectedMultigraph) else "undirected"
    if g.edge_count == 0:
        _require_eulerian(g)  # vacuously true, but keeps the error contract uniform
        return IntPolynomial((1,), variant)
    coeffs = [0] * (g.edge_count + 1)
    for t, count in circuit_count_tally(g, guard=guard).items():
        coeffs[t] = count
    return IntPolynomial(tuple(coeffs), variant)
