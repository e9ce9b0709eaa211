import math
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import stats

from nashphase.errors import ParseError
from nashphase.games import (Origin, PayoffTables, derive_best_response, game_from_bits,
                             is_best_response, is_pne, profile_from_bits, read_game,
                             sample_game, sample_payoffs, sample_tables_batch, write_game)
from nashphase.graphs import GnpParams, gen_complete, gen_empty, gen_gnp, gen_grid, gen_path

# On a single edge (1, 2) each player has one neighbor; row r is the partner's strategy.
MATCH = [0, 1]
MISMATCH = [1, 0]


def matching_pennies():
    return game_from_bits(gen_path(2), [MATCH, MISMATCH])


class TestSampling:
    def test_empty_graph_tables(self):
        game = sample_game(gen_empty(5), 3)
        assert all(t.bits.shape == (1,) for t in game.tables)
        own = profile_from_bits([t.bits[0] for t in game.tables])
        pne = [p for p in range(32) if is_pne(game, p)]
        assert pne == [own]

    def test_deterministic(self):
        g = gen_grid(2, 3)
        assert sample_game(g, 11) == sample_game(g, 11)
        assert sample_game(g, 11) != sample_game(g, 12)

    def test_tables_are_readonly(self):
        game = sample_game(gen_path(3), 0)
        with pytest.raises(ValueError):
            game.tables[0].bits[0] = 1

    def test_single_edge_uniform(self):
        trials = 100_000
        counts = Counter()
        for s in range(trials):
            game = sample_game(gen_path(2), s)
            counts[(game.tables[0].bitstring(), game.tables[1].bitstring())] += 1
        assert len(counts) == 16
        p = 1 / 16
        sigma = math.sqrt(trials * p * (1 - p))
        for c in counts.values():
            assert abs(c - trials * p) < 5 * sigma

    def test_batch_matches_individual(self):
        g = gen_gnp(GnpParams(9, 0.4, 5))
        seeds = [3, 17, 2**63 + 5]
        batch = sample_tables_batch(g, seeds)
        for i, s in enumerate(seeds):
            game = sample_game(g, s)
            for v in g.vertices:
                assert np.array_equal(batch[v - 1][i], game.table(v).bits)


class TestPayoffs:
    def test_sizes(self):
        assert sample_payoffs(gen_empty(1), 0).values[0].size == 2
        sizes = [a.size for a in sample_payoffs(gen_path(3), 0).values]
        assert sizes == [4, 8, 4]

    def test_deterministic_and_range(self):
        a, b = sample_payoffs(gen_grid(2, 2), 9), sample_payoffs(gen_grid(2, 2), 9)
        for x, y in zip(a.values, b.values):
            assert np.array_equal(x, y)
            assert x.min() >= 0 and x.max() < 1

    def test_argmax_and_ties(self):
        g = gen_path(2)
        pay = PayoffTables(g, (np.array([[0.7, 0.5], [0.2, 0.5]]), np.array([[0.1, 0.9], [0.3, 0.2]])))
        game = derive_best_response(pay)
        assert game.origin is Origin.DERIVED_FROM_PAYOFFS
        assert game.table(1).bits.tolist() == [0, 0]
        assert game.table(2).bits.tolist() == [1, 0]
        assert game.ties == 1

    def test_derived_distribution_is_uniform(self):
        trials = 100_000
        g = gen_path(2)
        counts = Counter()
        for s in range(trials):
            game = derive_best_response(sample_payoffs(g, s))
            counts[game.table(1).bitstring() + game.table(2).bitstring()] += 1
        observed = [counts.get(f"{k:04b}", 0) for k in range(16)]
        assert stats.chisquare(observed).pvalue > 0.001

    def test_derived_three_vertex_support(self):
        # Path on 3: 2 + 4 + 2 table bits, so 256 equiprobable outcomes.
        trials = 100_000
        counts = Counter()
        for s in range(trials):
            game = derive_best_response(sample_payoffs(gen_path(3), s))
            counts["".join(t.bitstring() for t in game.tables)] += 1
        observed = [counts.get(format(k, "08b"), 0) for k in range(256)]
        assert stats.chisquare(observed).pvalue > 0.001


class TestBestResponse:
    def test_isolated_player(self):
        game = game_from_bits(gen_empty(1), [[1]])
        assert is_best_response(game, 1, 1)
        assert not is_best_response(game, 1, 0)

    def test_hand_lookup(self):
        game = matching_pennies()
        # a = player 1 plays 0, b = player 2 plays 1; a wants to match b.
        assert not is_best_response(game, 1, profile_from_bits([0, 1]))
        assert is_best_response(game, 2, profile_from_bits([0, 1]))

    def test_matching_pennies_has_no_pne(self):
        assert not any(is_pne(matching_pennies(), p) for p in range(4))

    def test_empty_graph(self):
        game = game_from_bits(gen_empty(3), [[1], [0], [1]])
        assert [p for p in range(8) if is_pne(game, p)] == [0b101]

    @settings(max_examples=50, deadline=None)
    @given(st.integers(1, 7), st.floats(0, 1), st.integers(0, 2**32), st.data())
    def test_unique_best_reply(self, n, p, seed, data):
        game = sample_game(gen_gnp(GnpParams(n, p, seed)), seed)
        profile = data.draw(st.integers(0, 2**n - 1))
        for v in game.graph.vertices:
            flipped = profile ^ (1 << (v - 1))
            assert is_best_response(game, v, profile) != is_best_response(game, v, flipped)
        if is_pne(game, profile):
            assert all(is_best_response(game, v, profile) for v in game.graph.vertices)


class TestSerialization:
    @settings(max_examples=40, deadline=None)
    @given(st.integers(1, 8), st.floats(0, 1), st.integers(0, 2**32))
    def test_round_trip(self, n, p, seed):
        game = sample_game(gen_gnp(GnpParams(n, p, seed)), seed)
        assert read_game(write_game(game)) == game

    def test_format(self):
        text = write_game(matching_pennies())
        assert text == "2\n1 2\n1: 01\n2: 10\n"

    @pytest.mark.parametrize("text", [
        "2\n1 2\n1: 01\n",
        "2\n1 2\n1: 011\n2: 10\n",
        "2\n1 2\n1: 01\n2: 1x\n",
        "2\n1 2\n1: 01\n1: 01\n2: 10\n",
        "2\n1 2\n3: 01\n",
    ])
    def test_bad_games(self, text):
        with pytest.raises(ParseError):
            read_game(text)

    def test_complete_graph_table_size(self):
        game = sample_game(gen_complete(5), 0)
        assert all(t.bits.size == 16 for t in game.tables)
