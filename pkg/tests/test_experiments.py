import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from nashphase.errors import EmptyHistogram, InvalidParam
from nashphase.experiments import (SweepConfig, SweepResult, derive_seed, gnuplot_script,
                                   high_preset, low_preset, medium_preset, poisson_pmf, run_sweep,
                                   run_trial, splitmix64, trial_seeds, tv_distance,
                                   tv_sampling_error, wilson_interval, z_for_confidence)


def test_seed_derivation_has_no_collisions():
    seen = set()
    for point in range(20):
        for trial in range(5000):
            seen.update(trial_seeds(12345, point, trial))
    assert len(seen) == 2 * 20 * 5000


def test_seed_derivation_depends_on_master():
    assert derive_seed(1, 0, 0, 0) != derive_seed(2, 0, 0, 0)
    assert splitmix64(0) == 0xE220A8397B1DCDAF


class TestStatistics:
    def test_poisson(self):
        assert poisson_pmf(0, 1) == pytest.approx(math.exp(-1), rel=1e-14)
        assert poisson_pmf(1, 1) == pytest.approx(math.exp(-1), rel=1e-14)
        assert sum(poisson_pmf(k, 3.5) for k in range(60)) == pytest.approx(1, abs=1e-12)
        with pytest.raises(InvalidParam):
            poisson_pmf(-1, 1)
        with pytest.raises(InvalidParam):
            poisson_pmf(0, 0)

    def test_tv_examples(self):
        assert tv_distance([5]) == pytest.approx(1 - math.exp(-1), abs=1e-12)
        assert tv_distance({0: 7}) == pytest.approx(0.63212, abs=1e-5)
        big = 10**12
        hist = [round(poisson_pmf(k, 1) * big) for k in range(30)]
        assert tv_distance(hist) < 1e-9
        with pytest.raises(EmptyHistogram):
            tv_distance([0, 0])

    @given(st.lists(st.integers(0, 50), min_size=1, max_size=12).filter(any), st.floats(0.1, 5))
    def test_tv_range(self, hist, lam):
        assert 0 <= tv_distance(hist, lam) <= 1

    def test_sampling_error_scale(self):
        e = tv_sampling_error(10_000)
        assert 0 < e < 0.02
        assert tv_sampling_error(40_000) == pytest.approx(e / 2, rel=1e-12)

    def test_wilson(self):
        assert wilson_interval(0, 50)[0] == 0.0
        assert wilson_interval(50, 50)[1] == 1.0
        lo, hi = wilson_interval(30, 100, 1.96)
        assert lo == pytest.approx(0.2189, abs=1e-3) and hi == pytest.approx(0.3958, abs=1e-3)
        with pytest.raises(InvalidParam):
            wilson_interval(5, 4)

    def test_z(self):
        assert z_for_confidence(0.95) == pytest.approx(1.959964, abs=1e-6)
        assert z_for_confidence(0.99) == pytest.approx(2.575829, abs=1e-6)


def test_presets():
    assert high_preset(14) == [pytest.approx(3 * math.log(14) / 14)]
    assert medium_preset(100) == [0.005]
    assert low_preset(50) == [2 / 2500, 8 / 2500, 16 / 2500]


class TestConfig:
    def test_validation(self):
        with pytest.raises(InvalidParam):
            SweepConfig(trials=0)
        with pytest.raises(InvalidParam):
            SweepConfig(p_grid=[1.2])
        with pytest.raises(InvalidParam):
            SweepConfig(family="star")
        with pytest.raises(InvalidParam):
            SweepConfig(family="grid")

    def test_grid_sets_n(self):
        assert SweepConfig(family="grid", rows=3, cols=4).n == 12

    def test_file_family(self):
        cfg = SweepConfig(family="file", graph_text="3\n1 2\n")
        assert cfg.n == 3 and cfg.fixed_graph().edges == ((1, 2),)


class TestTrials:
    def test_reproducible(self):
        cfg = SweepConfig(family="complete", n=3)
        a = run_trial(cfg, 1, 2)
        assert a == run_trial(cfg, 1, 2)
        assert 0 <= a.z <= 8

    def test_empty_gnp(self):
        for mode in ("count", "exists"):
            cfg = SweepConfig(family="gnp", n=5, p_grid=[0.0], count_mode=mode)
            r = run_trial(cfg, 3, 4)
            assert r.exists and r.z in (1, None)

    def test_single_edge_mp_rate(self):
        cfg = SweepConfig(family="gnp", n=2, p_grid=[1.0])
        trials = 40_000
        zeros = sum(run_trial(cfg, s, s + 7).z == 0 for s in range(trials))
        sigma = math.sqrt(trials * (1 / 8) * (7 / 8))
        assert abs(zeros - trials / 8) < 5 * sigma

    def test_cap_violation_is_recorded(self):
        cfg = SweepConfig(family="path", n=8, component_cap=4)
        r = run_trial(cfg, 0, 0)
        assert r.skipped and "component" in r.skip_reason and r.exists is None

    def test_batch_path_equals_single_trials(self):
        cfg = SweepConfig(family="grid", rows=2, cols=3, trials=300, master_seed=9)
        res = run_sweep(cfg, chunk=64)
        z = [run_trial(cfg, *trial_seeds(9, 0, t)).z for t in range(300)]
        hist = np.bincount(z).tolist()
        assert res.points[0].histogram == hist
        assert res.points[0].pne_count == sum(1 for x in z if x > 0)


class TestSweep:
    def test_single_trial(self):
        cfg = SweepConfig(family="gnp", n=6, p_grid=[0.4], trials=1, master_seed=5)
        pt = run_sweep(cfg).points[0]
        rec = run_trial(cfg, *trial_seeds(5, 0, 0))
        assert pt.pne_count == int(rec.exists) and pt.mean_z == rec.z
        assert sum(pt.histogram) == 1

    def test_histogram_invariants(self):
        cfg = SweepConfig(family="gnp", n=16, p_grid=[0.08, 0.9], trials=400, master_seed=2,
                          component_cap=8)
        low, high = run_sweep(cfg).points
        assert 0 < low.skips < low.trials
        assert sum(low.histogram) == low.trials - low.skips
        assert low.pne_count == low.completed - low.histogram[0]
        assert low.wilson_lo <= low.p_pne <= low.wilson_hi
        # Every dense graph is one oversized component: nothing is estimated.
        assert high.skips == high.trials
        assert high.p_pne is None and high.wilson_lo is None and high.histogram is None

    def test_exists_mode_has_no_histogram(self):
        cfg = SweepConfig(family="path", n=6, trials=50, count_mode="exists")
        pt = run_sweep(cfg).points[0]
        assert pt.histogram is None and pt.mean_z is None and pt.tv_poisson1 is None

    def test_deterministic_across_workers_and_chunks(self):
        cfg = SweepConfig(family="gnp", n=12, p_grid=[0.2, 0.5], trials=300, master_seed=77)
        base = run_sweep(cfg).to_csv()
        assert run_sweep(cfg, threads=2, chunk=50).to_csv() == base
        assert run_sweep(cfg, chunk=7).to_csv() == base

    def test_csv_layout(self):
        cfg = SweepConfig(family="empty", n=3, trials=10)
        lines = run_sweep(cfg).to_csv().splitlines()
        assert lines[0] == "family,n,p,trials,skips,pne_count,mean_Z,tv_poisson1,wilson_lo,wilson_hi,seconds"
        assert lines[1].startswith("empty,3,0.5,10,0,10,1,") and lines[1].endswith(",")
        timed = run_sweep(cfg).to_csv(timing=True).splitlines()[1]
        assert not timed.endswith(",")

    def test_json_round_trip(self):
        cfg = SweepConfig(family="gnp", n=7, p_grid=[0.1, 0.6], trials=40, master_seed=3)
        res = run_sweep(cfg)
        back = SweepResult.from_json(res.to_json())
        assert back.to_csv() == res.to_csv()
        assert back.points[1].histogram == res.points[1].histogram
        data = res.to_dict()
        assert data["master_seed"] == 3 and "PCG64" in data["rng"]


def test_gnuplot_script():
    text = gnuplot_script("out.csv")
    assert "'out.csv'" in text and "yerrorbars" in text and "every ::1" in text
