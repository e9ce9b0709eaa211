import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nashphase.errors import SizeLimitExceeded
from nashphase.games import game_from_bits, is_pne, sample_game, sample_tables_batch
from nashphase.graphs import (GnpParams, Graph, connected_components, disjoint_union,
                              gen_complete, gen_empty, gen_gnp, gen_grid, gen_path)
from nashphase.pne import (count_pne, count_pne_batch, count_pne_exhaustive,
                           dependence_neighborhood_B0, exists_pne, translate_B)


def brute_profiles(game):
    return [p for p in range(1 << game.n) if is_pne(game, p)]


def connected_gnp(n, p, seed):
    while True:
        g = gen_gnp(GnpParams(n, p, seed))
        if len(connected_components(g)) == 1:
            return g
        seed += 1_000_003


def all_games(g):
    """Every table assignment on ``g``: per-player arrays of shape (games, rows)."""
    sizes = [1 << g.degree(v) for v in g.vertices]
    total = sum(sizes)
    idx = np.arange(1 << total, dtype=np.int64)[:, None]
    out, off = [], 0
    for s in sizes:
        out.append(((idx >> (off + np.arange(s))) & 1).astype(np.uint8))
        off += s
    return out


def pne_indicators(g, tables):
    """Boolean matrix X[game, profile]."""
    n = g.n
    prof = np.arange(1 << n, dtype=np.int64)
    x = np.ones((tables[0].shape[0], 1 << n), dtype=bool)
    for v in g.vertices:
        row = np.zeros(prof.shape, dtype=np.int64)
        for k, w in enumerate(g.neighbors(v)):
            row |= ((prof >> (w - 1)) & 1) << k
        own = ((prof >> (v - 1)) & 1).astype(np.uint8)
        x &= tables[v - 1][:, row] == own
    return x


class TestExamples:
    def test_empty_graph(self):
        game = game_from_bits(gen_empty(3), [[0], [1], [1]])
        res = count_pne(game)
        assert res.count == 1 and res.profiles == [0b110]
        assert exists_pne(game)

    def test_matching_pennies(self):
        game = game_from_bits(gen_path(2), [[0, 1], [1, 0]])
        assert count_pne(game).count == 0
        assert count_pne_exhaustive(game).count == 0
        assert not exists_pne(game)

    def test_coordination(self):
        game = game_from_bits(gen_path(2), [[0, 1], [0, 1]])
        assert count_pne(game).profiles == [0b00, 0b11]

    def test_k3_with_two_pne_and_isolated_vertex(self):
        k3 = gen_complete(3)
        seed = next(s for s in range(1000) if count_pne(sample_game(k3, s)).count == 2)
        base = sample_game(k3, seed)
        g = disjoint_union(k3, gen_empty(1))
        for lone in (0, 1):
            game = game_from_bits(g, [t.bits for t in base.tables] + [[lone]])
            res = count_pne(game)
            assert res.count == 2
            assert res.profiles == [p | (lone << 3) for p in count_pne(base).profiles]

    def test_retain_off(self):
        game = sample_game(gen_grid(2, 3), 4)
        res = count_pne(game, retain=False)
        assert res.profiles is None and res.count == count_pne_exhaustive(game).count

    def test_component_cap(self):
        game = sample_game(gen_path(6), 0)
        with pytest.raises(SizeLimitExceeded, match="component"):
            count_pne(game, component_cap=5)
        with pytest.raises(SizeLimitExceeded):
            count_pne_exhaustive(sample_game(gen_empty(31), 0))


class TestAgreement:
    @settings(max_examples=150, deadline=None)
    @given(st.integers(1, 10), st.floats(0, 1), st.integers(0, 2**32))
    def test_count_matches_brute(self, n, p, seed):
        game = sample_game(gen_gnp(GnpParams(n, p, seed)), seed)
        res = count_pne(game)
        assert res.profiles == brute_profiles(game)
        assert count_pne_exhaustive(game).profiles == res.profiles
        assert exists_pne(game) == (res.count > 0)

    def test_exists_fuzz(self):
        rng = np.random.default_rng(2024)
        for t in range(10_000):
            n = int(rng.integers(1, 13))
            p = float(rng.random())
            game = sample_game(gen_gnp(GnpParams(n, p, t)), t)
            assert exists_pne(game) == (count_pne_exhaustive(game, retain=False).count > 0)

    def test_connected_counts(self):
        rng = np.random.default_rng(77)
        for t in range(1000):
            n = int(rng.integers(2, 13))
            g = connected_gnp(n, 0.5, t)
            game = sample_game(g, t)
            assert count_pne(game).count == count_pne_exhaustive(game).count

    def test_product_over_components(self):
        for seed in range(50):
            a = sample_game(gen_grid(2, 3), seed)
            b = sample_game(gen_complete(4), seed + 1000)
            g = disjoint_union(a.graph, b.graph)
            joint = game_from_bits(g, [t.bits for t in a.tables] + [t.bits for t in b.tables])
            assert count_pne(joint).count == count_pne(a).count * count_pne(b).count

    def test_batch_matches_single(self):
        g = disjoint_union(gen_grid(2, 3), gen_path(3), gen_empty(2))
        seeds = list(range(300))
        counts = count_pne_batch(g, sample_tables_batch(g, seeds))
        assert counts.tolist() == [count_pne(sample_game(g, s)).count for s in seeds]

    def test_isolated_vertex_invariance(self):
        for seed in range(100):
            game = sample_game(gen_gnp(GnpParams(8, 0.3, seed)), seed)
            g = disjoint_union(game.graph, gen_empty(1))
            plus = game_from_bits(g, [t.bits for t in game.tables] + [[seed & 1]])
            assert count_pne(plus).count == count_pne(game).count


class TestMeanZ:
    def test_exact_path3(self):
        g = gen_path(3)
        x = pne_indicators(g, all_games(g))
        assert x.sum(axis=1).mean() == 1.0

    def test_monte_carlo_grid(self):
        g = gen_grid(3, 3)
        trials = 20_000
        z = count_pne_batch(g, sample_tables_batch(g, range(trials)))
        se = z.std(ddof=1) / math.sqrt(trials)
        assert abs(z.mean() - 1.0) < 5 * se


class TestDependenceNeighborhood:
    def test_complete(self):
        for n in (2, 3, 5):
            b0 = dependence_neighborhood_B0(gen_complete(n))
            assert b0.tolist() == sorted([0] + [1 << k for k in range(n)])

    def test_single_edge(self):
        assert dependence_neighborhood_B0(gen_path(2)).tolist() == [0, 1, 2]

    def test_empty(self):
        assert dependence_neighborhood_B0(gen_empty(3)).tolist() == list(range(8))

    def test_path3(self):
        # Player 1 sees 0 iff player 2 plays 0, and so on.
        b0 = set(dependence_neighborhood_B0(gen_path(3)).tolist())
        expected = {j for j in range(8) if not j & 2 or not (j & 1 or j & 4)}
        assert b0 == expected

    def test_translate(self):
        b0 = dependence_neighborhood_B0(gen_path(2))
        assert translate_B(0, b0).tolist() == [0, 1, 2]
        assert translate_B(3, b0).tolist() == [1, 2, 3]
        assert translate_B(1, b0).tolist() == [0, 1, 3]

    @given(st.integers(1, 8), st.floats(0, 1), st.integers(0, 2**32))
    def test_translate_is_involution(self, n, p, seed):
        g = gen_gnp(GnpParams(n, p, seed))
        b0 = dependence_neighborhood_B0(g)
        i = seed % (1 << n)
        assert translate_B(i, translate_B(i, b0)).tolist() == b0.tolist()
        assert i in translate_B(i, b0)


SMALL = [
    gen_path(2), gen_path(3), gen_path(4), gen_complete(3),
    Graph(4, [(1, 2), (1, 3), (1, 4)]),
    Graph(4, [(1, 2), (2, 3), (3, 4), (1, 4)]),
    disjoint_union(gen_path(2), gen_empty(1)),
]


@pytest.mark.parametrize("g", SMALL, ids=lambda g: f"n{g.n}m{len(g.edges)}")
def test_indicator_independent_outside_neighborhood(g):
    """X_i is independent of the family {X_j : j outside B_i}, checked over every game."""
    x = pne_indicators(g, all_games(g))
    games = x.shape[0]
    b0 = dependence_neighborhood_B0(g)
    for i in range(1 << g.n):
        outside = np.setdiff1d(np.arange(1 << g.n), translate_B(i, b0))
        assert x[:, i].sum() * (1 << g.n) == games
        if outside.size == 0:
            continue
        # Group games by the joint pattern of the outside indicators.
        keys = np.packbits(x[:, outside], axis=1)
        _, inverse, sizes = np.unique(keys, axis=0, return_inverse=True, return_counts=True)
        hits = np.bincount(inverse.ravel(), weights=x[:, i], minlength=sizes.size)
        assert np.all(hits * (1 << g.n) == sizes)
