"""Core types: labeled simple graphs, motifs, coupling parameters, and
homomorphism counting.

Graphs store one adjacency bitset per node (bit j of ``rows[i]`` is the edge
i-j), which keeps edge toggles and common-neighbor counts cheap. Homomorphism
counts follow the all-maps convention: every map V(H) -> V(G), injective or
not, that sends edges to edges.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import combinations
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import DomainError, SizeCapError

MAX_MOTIF_COUNT = 8    # vertex cap for homomorphism counting
MAX_MOTIF_COLOR = 10   # vertex cap for chromatic number

MOTIF_ALIASES = {
    "edge": "0-1",
    "triangle": "0-1,1-2,2-0",
    "k4": "0-1,0-2,0-3,1-2,1-3,2-3",
    "c5": "0-1,1-2,2-3,3-4,4-0",
}


@dataclass(frozen=True)
class Params:
    """Coupling pair (beta1, beta2): beta1 weights the edge density, beta2 the
    motif density. beta2 < 0 is the repulsive regime."""

    beta1: float
    beta2: float

    def __post_init__(self):
        if not (math.isfinite(self.beta1) and math.isfinite(self.beta2)):
            raise DomainError(f"parameters must be finite, got {self}")


def as_params(p) -> Params:
    """Coerce a Params or a (beta1, beta2) pair to Params."""
    if isinstance(p, Params):
        return p
    b1, b2 = p
    return Params(float(b1), float(b2))


def strauss_to_hom(beta1_strauss: float, beta2_strauss: float) -> Params:
    """Convert edge/triangle couplings written against the count densities
    e = E/n^2 and t = T/n^3 into the homomorphism-density convention used
    everywhere in this package. Since t(edge, G) = 2e and t(triangle, G) = 6t,
    the conversion is beta1/2 and beta2/6.
    """
    return Params(beta1_strauss / 2.0, beta2_strauss / 6.0)


def node_pairs(n: int) -> list[tuple[int, int]]:
    """All unordered node pairs (i < j) in lexicographic order. This fixes the
    bit order of edge masks used by the exact-enumeration module."""
    return list(combinations(range(n), 2))


class SimpleGraph:
    """Mutable labeled simple graph on n nodes, adjacency as per-node bitsets."""

    __slots__ = ("n", "rows")

    def __init__(self, n: int, rows: list[int] | None = None):
        if n < 1:
            raise DomainError(f"node count must be positive, got {n}")
        self.n = n
        self.rows = [0] * n if rows is None else rows

    @classmethod
    def empty(cls, n: int) -> "SimpleGraph":
        return cls(n)

    @classmethod
    def complete(cls, n: int) -> "SimpleGraph":
        full = (1 << n) - 1
        return cls(n, [full ^ (1 << i) for i in range(n)])

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "SimpleGraph":
        g = cls(n)
        for i, j in edges:
            g.set_edge(i, j, True)
        return g

    @classmethod
    def from_adjacency(cls, a) -> "SimpleGraph":
        a = np.asarray(a)
        n = a.shape[0]
        if a.shape != (n, n):
            raise DomainError("adjacency must be square")
        if np.any(a != a.T) or np.any(np.diag(a) != 0):
            raise DomainError("adjacency must be symmetric with zero diagonal")
        g = cls(n)
        for i in range(n):
            for j in range(i + 1, n):
                if a[i, j]:
                    g.set_edge(i, j, True)
        return g

    @classmethod
    def complete_multipartite(cls, part_sizes: Sequence[int]) -> "SimpleGraph":
        """Complete multipartite graph; parts are consecutive label blocks."""
        n = sum(part_sizes)
        g = cls(n)
        bounds = np.cumsum([0] + list(part_sizes))
        part = np.zeros(n, dtype=int)
        for p in range(len(part_sizes)):
            part[bounds[p]:bounds[p + 1]] = p
        for i in range(n):
            for j in range(i + 1, n):
                if part[i] != part[j]:
                    g.set_edge(i, j, True)
        return g

    @classmethod
    def from_edge_mask(cls, n: int, mask: int) -> "SimpleGraph":
        g = cls(n)
        for b, (i, j) in enumerate(node_pairs(n)):
            if (mask >> b) & 1:
                g.set_edge(i, j, True)
        return g

    def _check_pair(self, i: int, j: int) -> None:
        if i == j:
            raise DomainError(f"self-loop pair ({i},{j})")
        if not (0 <= i < self.n and 0 <= j < self.n):
            raise DomainError(f"pair ({i},{j}) out of range for n={self.n}")

    def has_edge(self, i: int, j: int) -> bool:
        self._check_pair(i, j)
        return bool((self.rows[i] >> j) & 1)

    def set_edge(self, i: int, j: int, present: bool) -> None:
        self._check_pair(i, j)
        if present:
            self.rows[i] |= 1 << j
            self.rows[j] |= 1 << i
        else:
            self.rows[i] &= ~(1 << j)
            self.rows[j] &= ~(1 << i)

    def toggle_edge(self, i: int, j: int) -> None:
        self._check_pair(i, j)
        self.rows[i] ^= 1 << j
        self.rows[j] ^= 1 << i

    def edge_count(self) -> int:
        return sum(r.bit_count() for r in self.rows) // 2

    def edges(self) -> Iterator[tuple[int, int]]:
        for i in range(self.n):
            r = self.rows[i] >> (i + 1)
            j = i + 1
            while r:
                if r & 1:
                    yield (i, j)
                r >>= 1
                j += 1

    def degree(self, i: int) -> int:
        return self.rows[i].bit_count()

    def common_neighbors(self, i: int, j: int) -> int:
        """Number of nodes adjacent to both i and j (the pair bits of each
        other's rows do not overlap, so no exclusion is needed)."""
        return (self.rows[i] & self.rows[j]).bit_count()

    def edge_mask(self) -> int:
        mask = 0
        for b, (i, j) in enumerate(node_pairs(self.n)):
            if (self.rows[i] >> j) & 1:
                mask |= 1 << b
        return mask

    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=np.float64)
        for i in range(self.n):
            r = self.rows[i]
            while r:
                low = r & -r
                a[i, low.bit_length() - 1] = 1.0
                r ^= low
        return a

    def copy(self) -> "SimpleGraph":
        return SimpleGraph(self.n, list(self.rows))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SimpleGraph)
            and self.n == other.n
            and self.rows == other.rows
        )

    def __repr__(self) -> str:
        return f"SimpleGraph(n={self.n}, edges={self.edge_count()})"


@dataclass(frozen=True)
class Motif:
    """Small simple graph H given as a tuple of unordered edges. Vertex labels
    run 0..ell-1; ell defaults to max label + 1."""

    edges: tuple[tuple[int, int], ...]
    ell: int

    def __init__(self, edges: Iterable[tuple[int, int]], ell: int | None = None):
        norm = []
        seen = set()
        mx = -1
        for i, j in edges:
            if i == j:
                raise DomainError(f"motif has self-loop at vertex {i}")
            if i < 0 or j < 0:
                raise DomainError("motif vertex labels must be nonnegative")
            e = (min(i, j), max(i, j))
            if e in seen:
                raise DomainError(f"motif has duplicate edge {e}")
            seen.add(e)
            norm.append(e)
            mx = max(mx, e[1])
        if not norm:
            raise DomainError("motif needs at least one edge")
        if ell is None:
            ell = mx + 1
        elif ell <= mx:
            raise DomainError(f"ell={ell} smaller than max label {mx}")
        object.__setattr__(self, "edges", tuple(sorted(norm)))
        object.__setattr__(self, "ell", ell)

    @property
    def k(self) -> int:
        """Edge count."""
        return len(self.edges)

    @cached_property
    def chi(self) -> int:
        """Chromatic number (computed once, cached)."""
        return chromatic_number(self)

    def neighbor_lists(self) -> list[list[int]]:
        nbr = [[] for _ in range(self.ell)]
        for i, j in self.edges:
            nbr[i].append(j)
            nbr[j].append(i)
        return nbr

    def to_string(self) -> str:
        return ",".join(f"{i}-{j}" for i, j in self.edges)

    def __repr__(self) -> str:
        return f"Motif({self.to_string()!r}, ell={self.ell})"


def parse_motif(text: str) -> Motif:
    """Parse an edge-list string like "0-1,1-2,2-0"; named aliases accepted
    (edge, triangle, k4, c5). Vertex count is max label + 1."""
    spec = MOTIF_ALIASES.get(text.strip().lower(), text)
    edges = []
    for part in spec.split(","):
        part = part.strip()
        if not part:
            continue
        bits = part.split("-")
        if len(bits) != 2:
            raise DomainError(f"bad motif edge {part!r}, expected like '0-1'")
        try:
            edges.append((int(bits[0]), int(bits[1])))
        except ValueError:
            raise DomainError(f"bad motif edge {part!r}, labels must be integers") from None
    return Motif(edges)


TRIANGLE = parse_motif("triangle")
EDGE = parse_motif("edge")


@lru_cache(maxsize=None)
def _search_plan(motif: Motif):
    """Vertex visit order for homomorphism DFS: non-isolated vertices in BFS
    order (so most have an already-assigned neighbor), isolated vertex count
    kept as a free multiplier. Returns (order, earlier_nbrs, iso_count) where
    earlier_nbrs[t] lists positions s < t with an H-edge between order[s] and
    order[t]."""
    nbr = motif.neighbor_lists()
    active = [v for v in range(motif.ell) if nbr[v]]
    iso = motif.ell - len(active)
    order: list[int] = []
    placed = set()
    for start in active:
        if start in placed:
            continue
        queue = [start]
        placed.add(start)
        while queue:
            v = queue.pop(0)
            order.append(v)
            for w in nbr[v]:
                if w not in placed:
                    placed.add(w)
                    queue.append(w)
    pos = {v: t for t, v in enumerate(order)}
    earlier = []
    for t, v in enumerate(order):
        earlier.append(tuple(pos[w] for w in nbr[v] if pos[w] < t))
    return tuple(order), tuple(earlier), iso


def hom_count(motif: Motif, G: SimpleGraph) -> int:
    """Number of maps V(H) -> V(G) sending every H-edge to a G-edge."""
    if motif.ell > MAX_MOTIF_COUNT:
        raise SizeCapError(
            f"motif has {motif.ell} vertices; homomorphism counting is capped "
            f"at {MAX_MOTIF_COUNT}"
        )
    order, earlier, iso = _search_plan(motif)
    n, rows = G.n, G.rows
    full = (1 << n) - 1
    last = len(order) - 1
    assign = [0] * len(order)

    def rec(t: int) -> int:
        cand = full
        for s in earlier[t]:
            cand &= rows[assign[s]]
        if t == last:
            return cand.bit_count()
        total = 0
        while cand:
            low = cand & -cand
            cand ^= low
            assign[t] = low.bit_length() - 1
            total += rec(t + 1)
        return total

    base = rec(0) if order else 1
    return base * n**iso


def hom_density(motif: Motif, G: SimpleGraph) -> float:
    """hom_count / n^ell, a number in [0, 1]."""
    return hom_count(motif, G) / float(G.n) ** motif.ell


@lru_cache(maxsize=None)
def _pinned_plans(motif: Motif):
    """One DFS plan per H-edge index f, used to partition the homomorphisms
    that use a toggled pair by the first H-edge mapped onto it. Plan f pins
    edge f's endpoints to positions 0 and 1, orders the remaining vertices
    BFS-style, and records which earlier H-edges with index < f complete at
    each position (those must avoid the pair)."""
    nbr = motif.neighbor_lists()
    eidx = {}
    for g, (a, b) in enumerate(motif.edges):
        eidx[(a, b)] = g
        eidx[(b, a)] = g
    plans = []
    for f, (u, v) in enumerate(motif.edges):
        order = [u, v]
        placed = {u, v}
        queue = [u, v]
        while queue:
            w = queue.pop(0)
            for x in nbr[w]:
                if x not in placed:
                    placed.add(x)
                    queue.append(x)
                    order.append(x)
        for x in range(motif.ell):
            if x not in placed:
                placed.add(x)
                order.append(x)
        pos = {x: t for t, x in enumerate(order)}
        earlier = []
        forbidden = []
        for t, x in enumerate(order):
            earlier.append(tuple(pos[w] for w in nbr[x] if pos[w] < t))
            forb = []
            for w in nbr[x]:
                if pos[w] < t and eidx[(x, w)] < f:
                    forb.append(pos[w])
            forbidden.append(tuple(forb))
        plans.append((tuple(order), tuple(earlier), tuple(forbidden)))
    return tuple(plans)


def _homs_through_pair(motif: Motif, G: SimpleGraph, i: int, j: int) -> int:
    """Count homomorphisms into G-with-edge-ij-present whose image uses the
    pair {i, j} for at least one H-edge. Partitioned by the first H-edge (in
    fixed order) mapped onto the pair and by its orientation, so nothing is
    double-counted and only maps touching the pair are enumerated."""
    n = G.n
    rows = list(G.rows)
    rows[i] |= 1 << j
    rows[j] |= 1 << i
    full = (1 << n) - 1
    not_i = full ^ (1 << i)
    not_j = full ^ (1 << j)
    total = 0
    for order, earlier, forbidden in _pinned_plans(motif):
        last = len(order) - 1
        assign = [0] * len(order)

        def rec(t: int) -> int:
            cand = full
            for s in earlier[t]:
                cand &= rows[assign[s]]
            for s in forbidden[t]:
                # an H-edge with smaller index closes here; keep it off {i,j}
                if assign[s] == i:
                    cand &= not_j
                elif assign[s] == j:
                    cand &= not_i
            if t == last:
                return cand.bit_count()
            total_t = 0
            while cand:
                low = cand & -cand
                cand ^= low
                assign[t] = low.bit_length() - 1
                total_t += rec(t + 1)
            return total_t

        for a, b in ((i, j), (j, i)):
            assign[0], assign[1] = a, b
            if len(order) == 2:
                total += 1
            else:
                total += rec(2)
    return total


def edge_toggle_delta(motif: Motif, G: SimpleGraph, pair: tuple[int, int]) -> int:
    """hom_count(H, G with pair toggled) - hom_count(H, G), without a full
    recount: only homomorphisms whose image uses the toggled pair are
    enumerated."""
    if motif.ell > MAX_MOTIF_COUNT:
        raise SizeCapError(
            f"motif has {motif.ell} vertices; homomorphism counting is capped "
            f"at {MAX_MOTIF_COUNT}"
        )
    i, j = pair
    G._check_pair(i, j)
    through = _homs_through_pair(motif, G, i, j)
    return -through if G.has_edge(i, j) else through


def _colorable(order, nbr, q: int) -> bool:
    ell = len(order)
    colors = [-1] * ell

    def rec(t: int, used: int) -> bool:
        if t == ell:
            return True
        v = order[t]
        taken = {colors[w] for w in nbr[v] if colors[w] >= 0}
        # trying colors beyond used+1 only permutes color names
        for c in range(min(q, used + 1)):
            if c not in taken:
                colors[v] = c
                if rec(t + 1, max(used, c + 1)):
                    return True
        colors[v] = -1
        return False

    return rec(0, 0)


@lru_cache(maxsize=None)
def _chromatic_number_cached(motif: Motif) -> int:
    nbr = motif.neighbor_lists()
    order = sorted(range(motif.ell), key=lambda v: -len(nbr[v]))
    for q in range(1, motif.ell + 1):
        if _colorable(order, nbr, q):
            return q
    return motif.ell


def chromatic_number(motif: Motif) -> int:
    """Exact chromatic number by exhaustive coloring with symmetry pruning."""
    if motif.ell > MAX_MOTIF_COLOR:
        raise SizeCapError(
            f"motif has {motif.ell} vertices; coloring is capped at {MAX_MOTIF_COLOR}"
        )
    return _chromatic_number_cached(motif)
