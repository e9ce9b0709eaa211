"""Undirected simple graphs on vertices 1..n, generators and structural queries.

Vertices are 1-based everywhere in the public API.  Internally each vertex
``v`` also owns bit ``v - 1`` of an integer bitmask, which is how profiles
and vertex subsets are encoded by the enumeration code.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import InvalidParam, ParseError, SizeLimitExceeded

EXPANDER_MAX_N = 24


class Graph:
    """Immutable undirected simple graph.

    ``adj[v - 1]`` is the sorted tuple of neighbors of ``v`` and ``edges`` is
    the sorted tuple of pairs ``(u, v)`` with ``u < v``.
    """

    __slots__ = ("n", "adj", "edges", "_masks")

    def __init__(self, n: int, edges: Iterable[Sequence[int]] = ()):
        if n < 1:
            raise InvalidParam(f"graph needs n >= 1 vertices, got {n}")
        seen = set()
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for e in edges:
            u, v = int(e[0]), int(e[1])
            if u == v:
                raise InvalidParam(f"self-loop at vertex {u}")
            if not (1 <= u <= n and 1 <= v <= n):
                raise InvalidParam(f"edge ({u}, {v}) outside 1..{n}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise InvalidParam(f"duplicate edge {key}")
            seen.add(key)
            nbrs[u - 1].add(v)
            nbrs[v - 1].add(u)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "adj", tuple(tuple(sorted(s)) for s in nbrs))
        object.__setattr__(self, "edges", tuple(sorted(seen)))
        masks = []
        for s in nbrs:
            m = 0
            for w in s:
                m |= 1 << (w - 1)
            masks.append(m)
        object.__setattr__(self, "_masks", tuple(masks))

    def __setattr__(self, name, value):
        raise AttributeError("Graph is immutable")

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.edges == other.edges

    def __hash__(self):
        return hash((self.n, self.edges))

    def __repr__(self):
        return f"Graph(n={self.n}, m={len(self.edges)})"

    @property
    def vertices(self) -> range:
        return range(1, self.n + 1)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adj[v - 1]

    def degree(self, v: int) -> int:
        return len(self.adj[v - 1])

    def degrees(self) -> list[int]:
        return [len(a) for a in self.adj]

    def has_edge(self, u: int, v: int) -> bool:
        if not (1 <= u <= self.n and 1 <= v <= self.n):
            return False
        return (self._masks[u - 1] >> (v - 1)) & 1 == 1

    @property
    def neighbor_masks(self) -> tuple[int, ...]:
        """Bitmask of N(v) for each vertex, indexed by ``v - 1``."""
        return self._masks

    def subgraph(self, vertices: Sequence[int]) -> tuple["Graph", list[int]]:
        """Induced subgraph relabelled to 1..k in the order given.

        Returns the subgraph and the list mapping new labels (minus one) back
        to the original vertices.
        """
        order = list(vertices)
        index = {v: i + 1 for i, v in enumerate(order)}
        sub_edges = [
            (index[u], index[v]) for u, v in self.edges if u in index and v in index
        ]
        return Graph(len(order), sub_edges), order


@dataclass(frozen=True)
class GnpParams:
    n: int
    p: float
    seed: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise InvalidParam(f"n must be >= 1, got {self.n}")
        if not (0.0 <= self.p <= 1.0):
            raise InvalidParam(f"p must lie in [0, 1], got {self.p}")


def gen_gnp(params: GnpParams) -> Graph:
    """Sample G(n, p).

    One uniform draw per vertex pair, pairs taken in lexicographic order, so
    the graph is a pure function of ``(n, p, seed)``.
    """
    n, p = params.n, params.p
    rng = np.random.default_rng(params.seed & 0xFFFFFFFFFFFFFFFF)
    if n < 2:
        return Graph(n)
    iu, ju = _pairs(n)
    keep = rng.random(iu.size) < p
    return Graph(n, zip(iu[keep].tolist(), ju[keep].tolist()))


@lru_cache(maxsize=8)
def _pairs(n: int) -> tuple[np.ndarray, np.ndarray]:
    iu, ju = np.triu_indices(n, 1)
    return iu + 1, ju + 1


def gen_empty(n: int) -> Graph:
    return Graph(n)


def gen_complete(n: int) -> Graph:
    return Graph(n, [(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1)])


def gen_path(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(1, n)])


def gen_grid(rows: int, cols: int) -> Graph:
    """rows x cols lattice; cell (r, c) is vertex ``r * cols + c + 1``."""
    if rows < 1 or cols < 1:
        raise InvalidParam("grid needs rows, cols >= 1")
    edges = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c + 1
            if c + 1 < cols:
                edges.append((v, v + 1))
            if r + 1 < rows:
                edges.append((v, v + cols))
    return Graph(rows * cols, edges)


def disjoint_union(*graphs: Graph) -> Graph:
    """Place graphs side by side, relabelling consecutively."""
    edges = []
    offset = 0
    for g in graphs:
        edges.extend((u + offset, v + offset) for u, v in g.edges)
        offset += g.n
    return Graph(offset, edges)


def d_bounded_edges(g: Graph, d: int) -> list[tuple[int, int]]:
    """Edges whose endpoints both have degree at most ``d``."""
    deg = g.degrees()
    return [(u, v) for u, v in g.edges if deg[u - 1] <= d and deg[v - 1] <= d]


def edge_imp_weight(du: int, dv: int) -> float:
    """-log(1 - 8**(-2**(du + dv - 2))), evaluated without underflow trouble."""
    try:
        log_p = -math.ldexp(math.log(8.0), du + dv - 2)
    except OverflowError:
        return 0.0
    p = math.exp(log_p)
    return -math.log1p(-p)


def weighted_independent_edge_set(g: Graph) -> tuple[list[tuple[int, int]], float]:
    """Greedy maximal matching by descending witness weight.

    Weight is strictly decreasing in ``du + dv``, so edges are sorted on that
    integer (then canonical order) rather than on floats that may underflow.
    """
    deg = g.degrees()
    order = sorted(g.edges, key=lambda e: (deg[e[0] - 1] + deg[e[1] - 1], e))
    used = set()
    chosen = []
    total = 0.0
    for u, v in order:
        if u in used or v in used:
            continue
        used.update((u, v))
        chosen.append((u, v))
        total += edge_imp_weight(deg[u - 1], deg[v - 1])
    chosen.sort()
    return chosen, total


def greedy_matching(edges: Sequence[tuple[int, int]]) -> list[tuple[int, int]]:
    """Maximal vertex-disjoint subset, scanning ``edges`` in the given order."""
    used = set()
    out = []
    for u, v in edges:
        if u not in used and v not in used:
            used.update((u, v))
            out.append((u, v))
    return out


def connected_components(g: Graph) -> list[list[int]]:
    """Components as sorted vertex lists, ordered by smallest member."""
    parent = list(range(g.n + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in g.edges:
        ru, rv = find(u), find(v)
        if ru != rv:
            if ru < rv:
                parent[rv] = ru
            else:
                parent[ru] = rv
    groups: dict[int, list[int]] = {}
    for v in g.vertices:
        groups.setdefault(find(v), []).append(v)
    return [groups[r] for r in sorted(groups)]


def neighborhood(g: Graph, vset: Iterable[int]) -> set[int]:
    """N(V'): vertices adjacent to some member of ``vset`` (may meet ``vset``)."""
    out: set[int] = set()
    for v in vset:
        if not 1 <= v <= g.n:
            raise InvalidParam(f"vertex {v} not in 1..{g.n}")
        out.update(g.adj[v - 1])
    return out


def _neighborhood_table(g: Graph) -> np.ndarray:
    # nmask[S] = bitmask of N(S) for every subset S, built by doubling.
    nmask = np.zeros(1 << g.n, dtype=np.uint32)
    for k, m in enumerate(g.neighbor_masks):
        half = 1 << k
        nmask[half : 2 * half] = nmask[:half] | np.uint32(m)
    return nmask


def expansion_violation(g: Graph, alpha: float, delta: float) -> Optional[frozenset[int]]:
    """Smallest subset (by size, then bitmask) breaking strong expansion, if any."""
    if g.n > EXPANDER_MAX_N:
        raise SizeLimitExceeded(
            f"exhaustive expander check supports n <= {EXPANDER_MAX_N}, got n={g.n}"
        )
    if not alpha > 0:
        raise InvalidParam(f"alpha must be positive, got {alpha}")
    if not (0 < delta <= 1):
        raise InvalidParam(f"delta must lie in (0, 1], got {delta}")
    nmask = _neighborhood_table(g)
    subsets = np.arange(1 << g.n, dtype=np.uint32)
    size = np.bitwise_count(subsets).astype(np.int64)
    nsize = np.bitwise_count(nmask).astype(np.int64)
    small = size <= delta * g.n
    bad = np.where(small, nsize < alpha * size, nsize != g.n)
    bad[0] = False
    idx = np.flatnonzero(bad)
    if idx.size == 0:
        return None
    best = idx[np.lexsort((idx, size[idx]))[0]]
    return frozenset(v + 1 for v in range(g.n) if (int(best) >> v) & 1)


def is_strong_expander(g: Graph, alpha: float, delta: float) -> bool:
    """Exhaustive strong (alpha, delta)-expansion test over all nonempty subsets."""
    return expansion_violation(g, alpha, delta) is None


def read_graph(text: str) -> Graph:
    """Parse the plain edge-list format: a line ``n`` then ``u v`` lines."""
    n = None
    edges: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if n is None:
            if len(fields) != 1:
                raise ParseError("expected vertex count on first line", lineno)
            n = _parse_int(fields[0], lineno)
            if n < 1:
                raise ParseError(f"vertex count must be >= 1, got {n}", lineno)
            continue
        if len(fields) != 2:
            raise ParseError(f"expected 'u v', got {line!r}", lineno)
        u, v = _parse_int(fields[0], lineno), _parse_int(fields[1], lineno)
        if u == v:
            raise ParseError(f"self-loop at vertex {u}", lineno)
        if not (1 <= u <= n and 1 <= v <= n):
            raise ParseError(f"edge ({u}, {v}) outside 1..{n}", lineno)
        key = (min(u, v), max(u, v))
        if key in seen:
            raise ParseError(f"duplicate edge {key}", lineno)
        seen.add(key)
        edges.append(key)
    if n is None:
        raise ParseError("empty graph file: missing vertex count")
    return Graph(n, edges)


def _parse_int(token: str, lineno: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(f"not an integer: {token!r}", lineno) from None


def write_graph(g: Graph) -> str:
    lines = [str(g.n)]
    lines.extend(f"{u} {v}" for u, v in g.edges)
    return "\n".join(lines) + "\n"
