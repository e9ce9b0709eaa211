"""Random graphical games with two strategies per player: exact PNE counting,
non-existence witnesses, Stein-Chen bounds and Monte Carlo phase sweeps."""

from .errors import (DegreeTooLarge, EdgeAbsent, EmptyHistogram, InvalidParam,
                     NashphaseError, ParseError, SizeLimitExceeded)
from .experiments import (SweepConfig, SweepResult, TrialRecord, poisson_pmf, run_sweep,
                          run_trial, tv_distance, wilson_interval)
from .games import (BestResponseTable, GraphicalGame, Origin, PayoffTables, derive_best_response,
                    game_from_bits, is_best_response, is_pne, read_game, sample_game,
                    sample_payoffs, write_game)
from .graphs import (GnpParams, Graph, connected_components, d_bounded_edges, gen_complete,
                     gen_empty, gen_gnp, gen_grid, gen_path, is_strong_expander, neighborhood,
                     read_graph, weighted_independent_edge_set, write_graph)
from .pne import (PneResult, count_pne, count_pne_exhaustive, dependence_neighborhood_B0,
                  exists_pne, translate_B)
from .stein import (SteinBounds, eval_R, eval_S, medium_regime_bound, predict_low_connectivity,
                    stein_bounds_exact)
from .witnesses import (WitnessReport, exposure_search, find_witness, is_indifferent_mp,
                        nonexistence_probability_bound, verify_certificate,
                        witness_probability_exact)

__version__ = "0.1.0"
