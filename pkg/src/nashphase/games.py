"""Random two-strategy graphical games.

Conventions used throughout the package:

* A profile is an int; player ``k`` plays bit ``k - 1`` (LSB is player 1).
* Row ``r`` of player ``v``'s best-response table encodes the strategies of
  ``v``'s neighbors: bit ``j`` of ``r`` is the strategy of the ``j``-th
  smallest neighbor.
* ``bits[r]`` is ``v``'s unique best reply to that configuration.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import InvalidParam, ParseError, SizeLimitExceeded
from .graphs import Graph, read_graph, write_graph

# 2**26 rows per player is already 64 MiB of table.
MAX_TABLE_DEGREE = 26


class Origin(enum.Enum):
    SAMPLED_DIRECT = "SampledDirect"
    DERIVED_FROM_PAYOFFS = "DerivedFromPayoffs"


def _frozen(a) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=np.uint8)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class BestResponseTable:
    owner: int
    neighbor_order: tuple[int, ...]
    bits: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "bits", _frozen(self.bits))
        if self.bits.shape != (1 << len(self.neighbor_order),):
            raise InvalidParam(
                f"table of player {self.owner} needs {1 << len(self.neighbor_order)} "
                f"rows, got shape {self.bits.shape}"
            )
        if self.bits.size and self.bits.max() > 1:
            raise InvalidParam(f"table of player {self.owner} has non-binary entries")

    def row(self, profile: int) -> int:
        r = 0
        for j, w in enumerate(self.neighbor_order):
            r |= ((profile >> (w - 1)) & 1) << j
        return r

    def bitstring(self) -> str:
        return "".join("1" if b else "0" for b in self.bits)

    def __eq__(self, other):
        if not isinstance(other, BestResponseTable):
            return NotImplemented
        return (
            self.owner == other.owner
            and self.neighbor_order == other.neighbor_order
            and np.array_equal(self.bits, other.bits)
        )


@dataclass(frozen=True, eq=False)
class GraphicalGame:
    graph: Graph
    tables: tuple[BestResponseTable, ...]
    origin: Origin = Origin.SAMPLED_DIRECT
    ties: int = 0

    def __post_init__(self):
        object.__setattr__(self, "tables", tuple(self.tables))
        if len(self.tables) != self.graph.n:
            raise InvalidParam("need exactly one table per vertex")
        for v, t in zip(self.graph.vertices, self.tables):
            if t.owner != v or t.neighbor_order != self.graph.neighbors(v):
                raise InvalidParam(f"table {t.owner} does not match vertex {v}")

    @property
    def n(self) -> int:
        return self.graph.n

    def table(self, v: int) -> BestResponseTable:
        return self.tables[v - 1]

    def __eq__(self, other):
        if not isinstance(other, GraphicalGame):
            return NotImplemented
        return self.graph == other.graph and all(
            a == b for a, b in zip(self.tables, other.tables)
        )


@dataclass(frozen=True, eq=False)
class PayoffTables:
    """Real payoffs; ``values[v - 1][s, r]`` is v's payoff for own strategy s."""

    graph: Graph
    values: tuple[np.ndarray, ...] = field(default_factory=tuple)

    def __post_init__(self):
        vals = tuple(np.asarray(a, dtype=float) for a in self.values)
        object.__setattr__(self, "values", vals)
        if len(vals) != self.graph.n:
            raise InvalidParam("need one payoff array per vertex")
        for v, a in zip(self.graph.vertices, vals):
            want = (2, 1 << self.graph.degree(v))
            if a.shape != want:
                raise InvalidParam(f"payoffs of player {v}: shape {a.shape}, want {want}")


def table_offsets(g: Graph) -> np.ndarray:
    """Start of each player's rows in the flat bit stream (length n + 1)."""
    sizes = [1 << d for d in g.degrees()]
    return np.concatenate([[0], np.cumsum(sizes)]).astype(np.int64)


def _check_degree(g: Graph) -> None:
    dmax = max(g.degrees())
    if dmax > MAX_TABLE_DEGREE:
        raise SizeLimitExceeded(
            f"max degree {dmax} exceeds table cap {MAX_TABLE_DEGREE}"
        )


def game_from_bits(g: Graph, bits: Sequence[Sequence[int]], origin=Origin.SAMPLED_DIRECT, ties=0):
    tables = [
        BestResponseTable(v, g.neighbors(v), np.asarray(b, dtype=np.uint8))
        for v, b in zip(g.vertices, bits)
    ]
    return GraphicalGame(g, tables, origin, ties)


def _draw_bits(g: Graph, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed & 0xFFFFFFFFFFFFFFFF)
    return rng.integers(0, 2, size=int(table_offsets(g)[-1]), dtype=np.uint8)


def sample_game(g: Graph, seed: int) -> GraphicalGame:
    """Uniform random best-response tables.

    All rows of all players come from one stream, player 1 first.
    """
    _check_degree(g)
    flat = _draw_bits(g, seed)
    off = table_offsets(g)
    return game_from_bits(g, [flat[off[i] : off[i + 1]] for i in range(g.n)])


def sample_tables_batch(g: Graph, seeds: Sequence[int]) -> list[np.ndarray]:
    """Tables of ``sample_game(g, s)`` for each seed, stacked per player.

    Returns a list indexed by ``v - 1`` of uint8 arrays of shape
    ``(len(seeds), 2**deg(v))``.
    """
    _check_degree(g)
    off = table_offsets(g)
    flat = np.empty((len(seeds), int(off[-1])), dtype=np.uint8)
    for i, s in enumerate(seeds):
        flat[i] = _draw_bits(g, s)
    return [flat[:, off[i] : off[i + 1]] for i in range(g.n)]


def sample_payoffs(g: Graph, seed: int) -> PayoffTables:
    """I.i.d. uniform [0, 1) payoffs, one stream, player 1 first."""
    _check_degree(g)
    rng = np.random.default_rng(seed & 0xFFFFFFFFFFFFFFFF)
    sizes = [2 << d for d in g.degrees()]
    flat = rng.random(sum(sizes))
    vals = []
    start = 0
    for v, size in zip(g.vertices, sizes):
        vals.append(flat[start : start + size].reshape(2, size // 2))
        start += size
    return PayoffTables(g, tuple(vals))


def derive_best_response(payoffs: PayoffTables) -> GraphicalGame:
    """Argmax of own payoff per row; exact ties go to strategy 0 and are counted."""
    bits = []
    ties = 0
    for a in payoffs.values:
        bits.append((a[1] > a[0]).astype(np.uint8))
        ties += int(np.count_nonzero(a[1] == a[0]))
    return game_from_bits(payoffs.graph, bits, Origin.DERIVED_FROM_PAYOFFS, ties)


def _check_profile(game: GraphicalGame, profile: int) -> None:
    if not 0 <= profile < (1 << game.n):
        raise InvalidParam(f"profile {profile} outside [0, 2^{game.n})")


def is_best_response(game: GraphicalGame, v: int, profile: int) -> bool:
    _check_profile(game, profile)
    t = game.tables[v - 1]
    return int(t.bits[t.row(profile)]) == (profile >> (v - 1)) & 1


def is_pne(game: GraphicalGame, profile: int) -> bool:
    _check_profile(game, profile)
    return all(is_best_response(game, v, profile) for v in game.graph.vertices)


def profile_from_bits(bits: Sequence[int]) -> int:
    """Profile int from per-player strategies listed for players 1..n."""
    out = 0
    for k, b in enumerate(bits):
        out |= (int(b) & 1) << k
    return out


def write_game(game: GraphicalGame) -> str:
    lines = [write_graph(game.graph).rstrip("\n")]
    lines.extend(f"{t.owner}: {t.bitstring()}" for t in game.tables)
    return "\n".join(lines) + "\n"


def read_game(text: str) -> GraphicalGame:
    """Parse a graph block followed by ``v: <bits>`` lines."""
    graph_lines = []
    table_lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        if ":" in body:
            table_lines.append((lineno, body))
            graph_lines.append("")
        else:
            if table_lines and body.strip():
                raise ParseError("graph line after table lines", lineno)
            graph_lines.append(raw)
    g = read_graph("\n".join(graph_lines))
    bits: dict[int, np.ndarray] = {}
    for lineno, body in table_lines:
        head, _, tail = body.partition(":")
        try:
            v = int(head.strip())
        except ValueError:
            raise ParseError(f"bad player id {head.strip()!r}", lineno) from None
        if not 1 <= v <= g.n:
            raise ParseError(f"player {v} outside 1..{g.n}", lineno)
        if v in bits:
            raise ParseError(f"duplicate table for player {v}", lineno)
        s = tail.strip()
        if len(s) != 1 << g.degree(v) or set(s) - {"0", "1"}:
            raise ParseError(
                f"player {v} needs a 0/1 string of length {1 << g.degree(v)}", lineno
            )
        bits[v] = np.frombuffer(s.encode(), dtype=np.uint8) - ord("0")
    missing = [v for v in g.vertices if v not in bits]
    if missing:
        raise ParseError(f"missing tables for players {missing}")
    return game_from_bits(g, [bits[v] for v in g.vertices])
