"""
Matching pennies as a certificate of non-existence
==================================================

If along one edge one player always copies its partner and the other always
does the opposite, no profile satisfies both.  Finding such an edge proves
that the whole game has no pure equilibrium, without enumerating anything.
"""

from fractions import Fraction

from nashphase import gen_path, game_from_bits
from nashphase.graphs import GnpParams, gen_gnp
from nashphase.games import sample_game
from nashphase.pne import count_pne
from nashphase.witnesses import (exposure_search, find_witness, nonexistence_probability_bound,
                                 verify_certificate, witness_probability_exact)

# Hand-built: player 1 copies player 2, player 2 does the opposite.
mp = game_from_bits(gen_path(2), [[0, 1], [1, 0]])
rep = find_witness(mp, d=1)
cert = rep.to_certificate(mp)
print(cert)
print("verified:", verify_certificate(cert, mp), "  Z =", count_pne(mp).count)

# %%
# How likely is a random edge to look like this?  Both endpoints have to get
# one particular table out of 2^(2^d) options.

for da, db in [(1, 1), (1, 2), (2, 2), (3, 3)]:
    p = witness_probability_exact(da, db)
    print(f"degrees ({da},{db}): {p}  ~ {float(p):.2e}")

# %%
# On sparse random graphs low-degree edges are plentiful, so witnesses turn up
# often.  Every game where the search succeeds really has no equilibrium.

g = gen_gnp(GnpParams(40, 1.5 / 40, seed=1))
found = 0
for seed in range(2000):
    game = sample_game(g, seed)
    rep = find_witness(game, 3) or exposure_search(game)
    if rep is not None:
        found += 1
        assert count_pne(game, retain=False).count == 0
print(f"witness found in {found} of 2000 games on one G(40, 1.5/40)")

b = nonexistence_probability_bound(g, 3)
print(f"guaranteed P(no PNE) >= {b.weighted_form:.3f} (weighted matching), "
      f">= {b.disjoint_form:.2e} (disjoint 3-bounded edges)")
print("exact per-edge chance at degree 1:", Fraction(witness_probability_exact(1, 1)))
