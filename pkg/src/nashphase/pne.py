"""Exact pure-Nash-equilibrium counting.

Two independent routes are provided:

``count_pne_exhaustive``
    Scans all ``2**n`` profiles of the whole game in vectorized chunks.  It is
    deliberately simple and serves as the reference.

``count_pne`` / ``exists_pne`` / ``count_pne_batch``
    Factor the game over connected components and count each component with
    a layered search: players are assigned one at a time and a player's
    best-reply constraint is enforced as soon as its closed neighborhood is
    fully assigned, pruning partial profiles early.  The search is vectorized
    over partial profiles and, for ``count_pne_batch``, over many games
    sharing one graph.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Optional, Sequence

import numpy as np

from .errors import SizeLimitExceeded
from .games import GraphicalGame
from .graphs import Graph, connected_components

ENUMERATION_MAX_N = 30
RETENTION_CAP = 1 << 20

_SCAN_CHUNK = 1 << 16
_SEARCH_CHUNK = 1 << 21


@dataclass
class PneResult:
    count: int
    profiles: Optional[list[int]] = None
    work: int = 0


def _row_index(prof: np.ndarray, positions: Sequence[int]) -> np.ndarray:
    row = np.zeros(prof.shape, dtype=np.int64)
    for j, p in enumerate(positions):
        row |= ((prof >> p) & 1) << j
    return row


def count_pne_exhaustive(game: GraphicalGame, retain: bool = True) -> PneResult:
    """Count PNE by checking every profile of the whole game."""
    n = game.n
    if n > ENUMERATION_MAX_N:
        raise SizeLimitExceeded(
            f"exhaustive enumeration supports n <= {ENUMERATION_MAX_N}, got n={n}"
        )
    g = game.graph
    positions = [[w - 1 for w in g.neighbors(v)] for v in g.vertices]
    total = 1 << n
    count = 0
    found: list[int] = []
    for start in range(0, total, _SCAN_CHUNK):
        prof = np.arange(start, min(start + _SCAN_CHUNK, total), dtype=np.int64)
        ok = np.ones(prof.shape, dtype=bool)
        for v in g.vertices:
            row = _row_index(prof, positions[v - 1])
            ok &= game.tables[v - 1].bits[row] == ((prof >> (v - 1)) & 1)
        hits = prof[ok]
        count += int(hits.size)
        if retain and len(found) < RETENTION_CAP:
            found.extend(hits[: RETENTION_CAP - len(found)].tolist())
    profiles = found if retain and count <= RETENTION_CAP else None
    return PneResult(count, profiles, total)


class _Plan:
    """Assignment order and per-step constraint checks for one component."""

    def __init__(self, g: Graph, component: Sequence[int]):
        comp = list(component)
        inside = set(comp)
        deg = {v: g.degree(v) for v in comp}
        order: list[int] = []
        assigned: set[int] = set()
        remaining = set(comp)
        # Greedy: pick the vertex with most assigned neighbors, then fewest
        # unassigned ones, so closed neighborhoods complete early.
        while remaining:
            def key(v):
                nb = g.neighbors(v)
                a = sum(1 for w in nb if w in assigned)
                return (-a, deg[v] - a, v)

            v = min(remaining, key=key)
            order.append(v)
            assigned.add(v)
            remaining.discard(v)
        self.order = order
        pos = {v: k for k, v in enumerate(order)}
        self.pos = pos
        checks: list[list[tuple[int, int, list[int]]]] = [[] for _ in order]
        for v in comp:
            nb = g.neighbors(v)
            assert all(w in inside for w in nb)
            last = max([pos[v]] + [pos[w] for w in nb])
            checks[last].append((v, pos[v], [pos[w] for w in nb]))
        self.checks = checks

    def to_global(self, local: np.ndarray) -> np.ndarray:
        local = local.astype(np.uint64)
        out = np.zeros(local.shape, dtype=np.uint64)
        for k, v in enumerate(self.order):
            out |= ((local >> np.uint64(k)) & np.uint64(1)) << np.uint64(v - 1)
        return out


def _search(plan: _Plan, tables: Sequence[np.ndarray], batch: int,
            stop_first: bool = False, keep: bool = False, chunk: int = _SEARCH_CHUNK):
    """Run the layered search.

    ``tables[v - 1]`` has shape ``(batch, rows)``.  Returns per-game counts,
    the surviving local profiles when ``keep`` (single game only) and the
    number of partial profiles generated.
    """
    single = batch == 1
    flat = [t[0] if single else t for t in tables]
    counts = np.zeros(batch, dtype=np.int64)
    kept: list[np.ndarray] = []
    work = 0
    depth = len(plan.order)
    stack = [(np.arange(batch, dtype=np.int64), np.zeros(batch, dtype=np.int64), 0)]
    while stack:
        gid, prof, k = stack.pop()
        if k == depth:
            if gid.size:
                counts += np.bincount(gid, minlength=batch)
                if keep:
                    kept.append(prof)
                if stop_first:
                    break
            continue
        if prof.size > chunk:
            half = prof.size // 2
            stack.append((gid[half:], prof[half:], k))
            stack.append((gid[:half], prof[:half], k))
            continue
        gid = np.concatenate([gid, gid])
        prof = np.concatenate([prof, prof | (1 << k)])
        work += prof.size
        for v, vpos, npos in plan.checks[k]:
            row = _row_index(prof, npos)
            own = (prof >> vpos) & 1
            if single:
                ok = flat[v - 1][row] == own
            else:
                ok = flat[v - 1][gid, row] == own
            gid, prof = gid[ok], prof[ok]
            if not prof.size:
                break
        if prof.size:
            stack.append((gid, prof, k + 1))
    local = np.concatenate(kept) if kept else np.zeros(0, dtype=np.int64)
    return counts, local, work


def _components_checked(g: Graph, cap: int) -> list[list[int]]:
    comps = connected_components(g)
    for c in comps:
        if len(c) > cap:
            raise SizeLimitExceeded(
                f"component of size {len(c)} (vertices {c[0]}..{c[-1]}, "
                f"min vertex {c[0]}) exceeds enumeration cap {cap}"
            )
    return comps


def _game_tables(game: GraphicalGame) -> list[np.ndarray]:
    return [t.bits[None, :] for t in game.tables]


def count_pne(game: GraphicalGame, retain: bool = True,
              component_cap: int = ENUMERATION_MAX_N) -> PneResult:
    """Exact PNE count as a product of per-component counts."""
    g = game.graph
    comps = _components_checked(g, component_cap)
    tables = _game_tables(game)
    total = 1
    work = 0
    per_comp: list[Optional[np.ndarray]] = []
    for comp in comps:
        if len(comp) == 1:
            # A lone player has exactly one best reply.
            v = comp[0]
            work += 2
            per_comp.append(np.array([int(tables[v - 1][0, 0]) << (v - 1)], dtype=np.uint64))
            continue
        plan = _Plan(g, comp)
        counts, local, w = _search(plan, tables, 1, keep=retain)
        c = int(counts[0])
        work += w
        total *= c
        per_comp.append(plan.to_global(local) if retain and c <= RETENTION_CAP else None)
        if total == 0:
            break
    profiles = None
    if retain and total <= RETENTION_CAP and all(p is not None for p in per_comp):
        if total == 0:
            profiles = []
        else:
            profiles = sorted(
                sum(combo)  # components own disjoint bits
                for combo in product(*[p.tolist() for p in per_comp])
            )
    return PneResult(total, profiles, work)


def exists_pne(game: GraphicalGame, component_cap: int = ENUMERATION_MAX_N) -> bool:
    """True iff some PNE exists; stops at the first PNE-free component."""
    g = game.graph
    comps = _components_checked(g, component_cap)
    tables = _game_tables(game)
    for comp in sorted(comps, key=len):
        if len(comp) == 1:
            continue
        counts, _, _ = _search(_Plan(g, comp), tables, 1, stop_first=True, chunk=1 << 12)
        if counts[0] == 0:
            return False
    return True


def count_pne_batch(g: Graph, tables: Sequence[np.ndarray],
                    component_cap: int = ENUMERATION_MAX_N) -> np.ndarray:
    """PNE counts for many games on one graph.

    ``tables[v - 1]`` has shape ``(batch, 2**deg(v))``; row ``i`` across all
    players is game ``i``.
    """
    comps = _components_checked(g, component_cap)
    batch = tables[0].shape[0]
    total = np.ones(batch, dtype=object)
    for comp in comps:
        if len(comp) == 1:
            continue
        counts, _, _ = _search(_Plan(g, comp), tables, batch)
        total = total * counts.astype(object)
    return np.array([int(x) for x in total], dtype=np.int64)


def b0_indicator(g: Graph) -> np.ndarray:
    """Boolean array over all profiles: True where some player sees only zeros."""
    if g.n > ENUMERATION_MAX_N:
        raise SizeLimitExceeded(
            f"dependence neighborhood needs n <= {ENUMERATION_MAX_N}, got n={g.n}"
        )
    j = np.arange(1 << g.n, dtype=np.int64)
    member = np.zeros(j.shape, dtype=bool)
    for m in g.neighbor_masks:
        member |= (j & m) == 0
    return member


def dependence_neighborhood_B0(g: Graph) -> np.ndarray:
    """Sorted profiles j such that some player has all neighbors playing 0 in j.

    A player without neighbors satisfies this vacuously, so any graph with an
    isolated vertex has every profile in the set.
    """
    return np.flatnonzero(b0_indicator(g)).astype(np.int64)


def translate_B(i: int, b0: np.ndarray) -> np.ndarray:
    """The dependence neighborhood of profile ``i``: ``{i ^ j : j in b0}``."""
    return np.sort(np.asarray(b0, dtype=np.int64) ^ np.int64(i))
