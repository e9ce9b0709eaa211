"""Small certificates that a game has no pure Nash equilibrium.

The certificate is an edge (a, b) on which, at the best-response level, one
endpoint always copies the other's strategy and the other always plays the
opposite, whatever their remaining neighbors do.  No profile can then be a
best reply for both, so the whole game has no PNE.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional

import numpy as np

from .errors import DegreeTooLarge, EdgeAbsent, InvalidParam, ParseError
from .games import GraphicalGame
from .graphs import Graph, d_bounded_edges, greedy_matching, weighted_independent_edge_set

WITNESS_EXACT_MAX_DEGREE = 4


class WitnessKind(enum.Enum):
    INDIFFERENT_MATCHING_PENNIES = "IndifferentMatchingPennies"
    ISOLATED_MATCHING_PENNIES = "IsolatedMatchingPennies"


class Orientation(NamedTuple):
    matcher: int
    mismatcher: int


@dataclass(frozen=True)
class WitnessReport:
    kind: WitnessKind
    edge: tuple[int, int]
    orientation: Orientation
    checked_rows: tuple[int, int]

    def to_certificate(self, game: GraphicalGame) -> str:
        a, b = self.edge
        return "\n".join([
            "begin witness",
            f"kind: {self.kind.value}",
            f"edge: {a} {b}",
            f"matcher: {self.orientation.matcher}",
            f"mismatcher: {self.orientation.mismatcher}",
            f"table {a}: {game.table(a).bitstring()}",
            f"table {b}: {game.table(b).bitstring()}",
            "end witness",
        ]) + "\n"


def _pattern(rows: int, position: int) -> np.ndarray:
    """Strategy of the neighbor at ``position`` for every row index."""
    return ((np.arange(rows) >> position) & 1).astype(np.uint8)


def _copies(bits: np.ndarray, position: int) -> np.ndarray:
    """Per table (last axis = rows): does the owner always copy that neighbor?"""
    return np.all(bits == _pattern(bits.shape[-1], position), axis=-1)


def _opposes(bits: np.ndarray, position: int) -> np.ndarray:
    return np.all(bits != _pattern(bits.shape[-1], position), axis=-1)


def is_indifferent_mp(game: GraphicalGame, edge: tuple[int, int]) -> Optional[Orientation]:
    """Orientation (matcher, mismatcher) if the edge is an indifferent MP pair."""
    a, b = edge
    g = game.graph
    if not g.has_edge(a, b):
        raise EdgeAbsent(f"edge ({a}, {b}) is not in the graph")
    ta, tb = game.table(a), game.table(b)
    pos_b = ta.neighbor_order.index(b)
    pos_a = tb.neighbor_order.index(a)
    if _copies(ta.bits, pos_b) and _opposes(tb.bits, pos_a):
        return Orientation(a, b)
    if _copies(tb.bits, pos_a) and _opposes(ta.bits, pos_b):
        return Orientation(b, a)
    return None


def _report(game, kind, u, v, orient):
    return WitnessReport(
        kind=kind,
        edge=(min(u, v), max(u, v)),
        orientation=orient,
        checked_rows=(1 << game.graph.degree(min(u, v)), 1 << game.graph.degree(max(u, v))),
    )


def find_witness(game: GraphicalGame, d: int) -> Optional[WitnessReport]:
    """First d-bounded edge (canonical order) that is an indifferent MP pair."""
    if d < 1:
        raise InvalidParam(f"degree cap must be positive, got {d}")
    for u, v in d_bounded_edges(game.graph, d):
        orient = is_indifferent_mp(game, (u, v))
        if orient is not None:
            return _report(game, WitnessKind.INDIFFERENT_MATCHING_PENNIES, u, v, orient)
    return None


def exposure_search(game: GraphicalGame) -> Optional[WitnessReport]:
    """Vertex-exposure search for an isolated matching-pennies edge.

    While at least half the vertices survive, examine the smallest survivor
    j.  Degrees are taken inside the surviving set.  If j does not have
    exactly one surviving neighbor, drop j and its surviving neighbors.  If
    its unique neighbor j' has other surviving neighbors, drop j, j' and
    those.  Otherwise test the edge (j, j') and drop both.

    The test on (j, j') is the indifferent-MP check, which is sound even when
    j or j' still has neighbors removed in earlier rounds.
    """
    g = game.graph
    alive = set(g.vertices)
    while alive and 2 * len(alive) >= g.n:
        j = min(alive)
        nb = [w for w in g.neighbors(j) if w in alive]
        if len(nb) != 1:
            alive.discard(j)
            alive.difference_update(nb)
            continue
        jp = nb[0]
        others = [w for w in g.neighbors(jp) if w in alive and w != j]
        if others:
            alive.difference_update((j, jp))
            alive.difference_update(others)
            continue
        orient = is_indifferent_mp(game, (j, jp))
        if orient is not None:
            return _report(game, WitnessKind.ISOLATED_MATCHING_PENNIES, j, jp, orient)
        alive.difference_update((j, jp))
    return None


def _all_tables(degree: int) -> np.ndarray:
    """Every best-response table for one player: shape (2**2**d, 2**d)."""
    rows = 1 << degree
    idx = np.arange(1 << rows, dtype=np.int64)[:, None]
    return ((idx >> np.arange(rows)) & 1).astype(np.uint8)


def witness_probability_exact(d_a: int, d_b: int) -> Fraction:
    """Exact P(edge is an indifferent MP pair) for endpoint degrees d_a, d_b.

    Enumerates every table of each endpoint.  The pair predicate is
    ``copies_a & opposes_b  or  copies_b & opposes_a`` (the two cases are
    disjoint), so the number of accepted pairs is a sum of products of
    per-side counts.
    """
    for d in (d_a, d_b):
        if not 1 <= d <= WITNESS_EXACT_MAX_DEGREE:
            raise DegreeTooLarge(
                f"exact enumeration supports degrees 1..{WITNESS_EXACT_MAX_DEGREE}, got {d}"
            )
    ta, tb = _all_tables(d_a), _all_tables(d_b)
    # The partner sits at neighbor position 0 on both sides.
    ca, oa = int(_copies(ta, 0).sum()), int(_opposes(ta, 0).sum())
    cb, ob = int(_copies(tb, 0).sum()), int(_opposes(tb, 0).sum())
    accepted = ca * ob + cb * oa
    return Fraction(accepted, ta.shape[0] * tb.shape[0])


def witness_frequency_mc(d_a: int, d_b: int, trials: int, seed: int) -> int:
    """Monte Carlo hit count of the witness on a fresh random edge."""
    rng = np.random.default_rng(seed)
    hits = 0
    for start in range(0, trials, 1 << 18):
        size = min(1 << 18, trials - start)
        ta = rng.integers(0, 2, size=(size, 1 << d_a), dtype=np.uint8)
        tb = rng.integers(0, 2, size=(size, 1 << d_b), dtype=np.uint8)
        ok = (_copies(ta, 0) & _opposes(tb, 0)) | (_copies(tb, 0) & _opposes(ta, 0))
        hits += int(ok.sum())
    return hits


def imp_probability_bound(d_u: int, d_v: int) -> float:
    """8**(-2**(d_u + d_v - 2)), the per-edge witness probability lower bound."""
    try:
        return math.pow(8.0, -math.ldexp(1.0, d_u + d_v - 2))
    except OverflowError:
        return 0.0


@dataclass(frozen=True)
class NonexistenceBounds:
    disjoint_edges: int
    bounded_edges: int
    matching_weight: float
    disjoint_form: float
    count_form: float
    weighted_form: float


def nonexistence_probability_bound(g: Graph, d: int) -> NonexistenceBounds:
    """Lower bounds on P(no PNE) from d-bounded and weighted witness edges.

    * disjoint form: ``1 - exp(-m p)`` with m vertex-disjoint d-bounded edges
      (a greedy maximal matching among them) and ``p = 8**(-4**(d-1))``;
    * count form: ``1 - exp(-(m'/(2d)) p)`` with m' all d-bounded edges;
    * weighted form: ``1 - exp(-w)`` for the greedy weighted matching.
    """
    if d < 1:
        raise InvalidParam(f"degree cap must be positive, got {d}")
    bounded = d_bounded_edges(g, d)
    disjoint = greedy_matching(bounded)
    _, weight = weighted_independent_edge_set(g)
    p_imp = imp_probability_bound(d, d)
    return NonexistenceBounds(
        disjoint_edges=len(disjoint),
        bounded_edges=len(bounded),
        matching_weight=weight,
        disjoint_form=-math.expm1(-len(disjoint) * p_imp),
        count_form=-math.expm1(-len(bounded) / (2 * d) * p_imp),
        weighted_form=-math.expm1(-weight),
    )


_CERT_KEYS = ("kind", "edge", "matcher", "mismatcher")


def parse_certificate(text: str) -> dict:
    fields: dict = {"tables": {}}
    inside = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line == "begin witness":
            inside = True
            continue
        if line == "end witness":
            break
        if not inside:
            continue
        key, sep, value = line.partition(":")
        if not sep:
            raise ParseError(f"expected 'key: value', got {line!r}", lineno)
        key, value = key.strip(), value.strip()
        try:
            if key.startswith("table "):
                fields["tables"][int(key.split()[1])] = value
            elif key == "kind":
                fields["kind"] = WitnessKind(value)
            elif key == "edge":
                a, b = value.split()
                fields["edge"] = (int(a), int(b))
            elif key in ("matcher", "mismatcher"):
                fields[key] = int(value)
            else:
                raise ParseError(f"unknown key {key!r}", lineno)
        except (ValueError, IndexError):
            raise ParseError(f"bad value for {key!r}: {value!r}", lineno) from None
    missing = [k for k in _CERT_KEYS if k not in fields]
    if missing:
        raise ParseError(f"certificate missing {missing}")
    return fields


def verify_certificate(text: str, game: GraphicalGame) -> bool:
    """Recompute acceptance of a certificate block against ``game``."""
    cert = parse_certificate(text)
    a, b = cert["edge"]
    m, x = cert["matcher"], cert["mismatcher"]
    g = game.graph
    if {m, x} != {a, b} or not g.has_edge(a, b):
        return False
    for v in (a, b):
        if cert["tables"].get(v) != game.table(v).bitstring():
            return False
    nb_m, nb_x = g.neighbors(m), g.neighbors(x)
    bits_m, bits_x = cert["tables"][m], cert["tables"][x]
    for r in range(1 << len(nb_m)):
        other = (r >> nb_m.index(x)) & 1
        if int(bits_m[r]) != other:
            return False
    for r in range(1 << len(nb_x)):
        other = (r >> nb_x.index(m)) & 1
        if int(bits_x[r]) != 1 - other:
            return False
    return True
