"""
Counting pure equilibria of random graphical games
==================================================

Every player has two strategies and reacts only to its neighbours.  A random
game is a table of fair coin flips per player: for each way the neighbours
can play, the coin says which strategy is the best reply.
"""

import numpy as np

from nashphase import gen_complete, gen_grid, gen_path, sample_game, write_game
from nashphase.pne import count_pne, count_pne_batch
from nashphase.games import sample_tables_batch

# A small game on a path with three players.  The middle player reads a
# four-row table (two neighbours), the ends read two rows each.
game = sample_game(gen_path(3), seed=4)
print(write_game(game))

res = count_pne(game)
print("equilibria:", res.count)
for prof in res.profiles:
    # player 1 is the lowest bit
    print("  ", [(prof >> k) & 1 for k in range(game.n)])

# %%
# Whatever the graph, every profile is an equilibrium with probability 2^-n
# and there are 2^n profiles, so the expected count is exactly one.  The
# batch counter evaluates thousands of games on one graph at once.

for name, g in [("path(8)", gen_path(8)), ("grid 3x3", gen_grid(3, 3)), ("K_8", gen_complete(8))]:
    z = count_pne_batch(g, sample_tables_batch(g, range(20_000)))
    hist = np.bincount(z)
    print(f"{name:9s} mean Z = {z.mean():.3f}   P(Z=0) = {hist[0] / z.size:.3f}   "
          f"histogram {hist[:6].tolist()}")

# The complete graph gets close to the Poisson(1) picture: P(Z=0) near 1/e.
print("1/e =", round(np.exp(-1), 3))
