"""Reproducible Monte Carlo sweeps over random graphical games.

Every trial draws its graph and its game from independent PCG64 streams whose
seeds are derived from ``(master_seed, point_index, trial_index)`` with a
splitmix64 fold.  Nothing depends on execution order, so sweeps give the same
numbers whether trials run in one process or many.
"""

from __future__ import annotations

import csv
import io
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from statistics import NormalDist
from typing import Optional, Sequence

import numpy as np

from .errors import EmptyHistogram, InvalidParam, SizeLimitExceeded
from .games import sample_game, sample_tables_batch
from .graphs import GnpParams, Graph, gen_complete, gen_empty, gen_gnp, gen_grid, gen_path, read_graph, write_graph
from .pne import ENUMERATION_MAX_N, count_pne, count_pne_batch, exists_pne

RNG_NAME = "numpy.random.PCG64 via default_rng; per-trial seeds splitmix64(master, point, trial, stream)"
FAMILIES = ("gnp", "complete", "empty", "path", "grid", "file")
MODES = ("exists", "count")
CSV_COLUMNS = [
    "family", "n", "p", "trials", "skips", "pne_count",
    "mean_Z", "tv_poisson1", "wilson_lo", "wilson_hi", "seconds",
]

_MASK64 = 0xFFFFFFFFFFFFFFFF
_BATCH = 2048


def splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


def derive_seed(master_seed: int, point: int, trial: int, stream: int) -> int:
    h = splitmix64(master_seed & _MASK64)
    for part in (point, trial, stream):
        h = splitmix64(h ^ (part & _MASK64))
    return h


def trial_seeds(master_seed: int, point: int, trial: int) -> tuple[int, int]:
    """(graph_seed, game_seed) for one trial."""
    return derive_seed(master_seed, point, trial, 0), derive_seed(master_seed, point, trial, 1)


# -- statistics ---------------------------------------------------------------

def poisson_pmf(k: int, lam: float) -> float:
    if k < 0 or not lam > 0:
        raise InvalidParam(f"poisson_pmf needs k >= 0 and lam > 0, got k={k}, lam={lam}")
    return math.exp(k * math.log(lam) - lam - math.lgamma(k + 1))


def wilson_interval(successes: int, trials: int, z: float = 2.5758293035489) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if trials <= 0 or not 0 <= successes <= trials or not z > 0:
        raise InvalidParam(
            f"wilson_interval needs 0 <= successes <= trials, trials > 0, z > 0; "
            f"got {successes}/{trials}, z={z}"
        )
    phat = successes / trials
    z2 = z * z
    denom = 1 + z2 / trials
    centre = (phat + z2 / (2 * trials)) / denom
    half = z * math.sqrt(phat * (1 - phat) / trials + z2 / (4 * trials * trials)) / denom
    lo = 0.0 if successes == 0 else max(0.0, centre - half)
    hi = 1.0 if successes == trials else min(1.0, centre + half)
    return lo, hi


def z_for_confidence(level: float) -> float:
    return NormalDist().inv_cdf(0.5 + level / 2)


def _hist_items(hist) -> list[tuple[int, int]]:
    if isinstance(hist, dict):
        items = [(int(k), int(v)) for k, v in hist.items()]
    else:
        items = [(k, int(v)) for k, v in enumerate(hist)]
    return [(k, v) for k, v in items if v]


def tv_distance(hist, lam: float = 1.0) -> float:
    """Total variation distance between a count histogram and Poisson(lam).

    ``hist`` is a sequence (index = value) or a mapping value -> count.
    """
    items = _hist_items(hist)
    total = sum(v for _, v in items)
    if total == 0:
        raise EmptyHistogram("histogram has no observations")
    if not lam > 0:
        raise InvalidParam(f"lambda must be positive, got {lam}")
    emp = dict(items)
    kmax = max(emp)
    diff = 0.0
    cdf = 0.0
    k = 0
    while True:
        pk = poisson_pmf(k, lam)
        cdf += pk
        diff += abs(emp.get(k, 0) / total - pk)
        if k >= kmax and k >= lam and 1.0 - cdf < 1e-12:
            break
        k += 1
    return 0.5 * diff


def tv_sampling_error(trials: int, lam: float = 1.0) -> float:
    """Expected-scale TV noise of an empirical pmf: 0.5 * sum sqrt(pi_k (1 - pi_k) / N)."""
    if trials <= 0:
        raise InvalidParam("trials must be positive")
    acc = 0.0
    k = 0
    cdf = 0.0
    while 1.0 - cdf > 1e-12 or k <= lam:
        pk = poisson_pmf(k, lam)
        cdf += pk
        acc += math.sqrt(pk * (1 - pk) / trials)
        k += 1
    return 0.5 * acc


# -- configuration -------------------------------------------------------------

@dataclass
class SweepConfig:
    family: str = "gnp"
    n: int = 10
    p_grid: list[float] = field(default_factory=lambda: [0.5])
    trials: int = 100
    master_seed: int = 0
    count_mode: str = "count"
    component_cap: int = ENUMERATION_MAX_N
    rows: int = 0
    cols: int = 0
    graph_text: Optional[str] = None
    confidence: float = 0.99
    preset: Optional[str] = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InvalidParam(f"unknown family {self.family!r}; choose from {FAMILIES}")
        if self.count_mode not in MODES:
            raise InvalidParam(f"unknown mode {self.count_mode!r}; choose from {MODES}")
        if self.trials < 1:
            raise InvalidParam("trials must be >= 1")
        if not self.p_grid:
            raise InvalidParam("p_grid is empty")
        for p in self.p_grid:
            if not 0.0 <= p <= 1.0:
                raise InvalidParam(f"p = {p} outside [0, 1]")
        if self.family == "grid":
            if self.rows < 1 or self.cols < 1:
                raise InvalidParam("grid family needs rows, cols >= 1")
            self.n = self.rows * self.cols
        if self.family == "file":
            if self.graph_text is None:
                raise InvalidParam("file family needs graph_text")
            self.n = read_graph(self.graph_text).n
        if self.n < 1:
            raise InvalidParam("n must be >= 1")

    @property
    def random_graph(self) -> bool:
        return self.family == "gnp"

    def fixed_graph(self) -> Graph:
        if self.family == "complete":
            return gen_complete(self.n)
        if self.family == "empty":
            return gen_empty(self.n)
        if self.family == "path":
            return gen_path(self.n)
        if self.family == "grid":
            return gen_grid(self.rows, self.cols)
        if self.family == "file":
            return read_graph(self.graph_text)
        raise InvalidParam(f"family {self.family!r} has no fixed graph")


def high_preset(n: int, eps: float = 1.0) -> list[float]:
    """p = (2 + eps) log n / n, capped at 1."""
    return [min(1.0, (2 + eps) * math.log(n) / n)]


def medium_preset(n: int, beta: float = 0.5) -> list[float]:
    return [min(1.0, beta / n)]


def low_preset(n: int, cs: Sequence[float] = (2, 8, 16)) -> list[float]:
    return [min(1.0, c / (n * n)) for c in cs]


PRESETS = {"high": high_preset, "medium": medium_preset, "low": low_preset}


# -- trials --------------------------------------------------------------------

@dataclass(frozen=True)
class TrialRecord:
    point: int
    trial: int
    graph_seed: int
    game_seed: int
    z: Optional[int]
    exists: Optional[bool]
    skipped: bool = False
    skip_reason: str = ""


def run_trial(config: SweepConfig, graph_seed: int, game_seed: int,
              p: Optional[float] = None, point: int = 0, trial: int = 0) -> TrialRecord:
    """Sample one graph and one game and evaluate it in the configured mode."""
    if p is None:
        p = config.p_grid[point]
    if config.random_graph:
        g = gen_gnp(GnpParams(config.n, p, graph_seed))
    else:
        g = config.fixed_graph()
    try:
        game = sample_game(g, game_seed)
        if config.count_mode == "count":
            z = count_pne(game, retain=False, component_cap=config.component_cap).count
            return TrialRecord(point, trial, graph_seed, game_seed, z, z > 0)
        ex = exists_pne(game, component_cap=config.component_cap)
        return TrialRecord(point, trial, graph_seed, game_seed, None, ex)
    except SizeLimitExceeded as exc:
        return TrialRecord(point, trial, graph_seed, game_seed, None, None, True, str(exc))


def _run_chunk(config: SweepConfig, point: int, p: float, start: int, stop: int) -> list[TrialRecord]:
    seeds = [trial_seeds(config.master_seed, point, t) for t in range(start, stop)]
    if config.random_graph:
        return [
            run_trial(config, gs, ms, p=p, point=point, trial=t)
            for t, (gs, ms) in zip(range(start, stop), seeds)
        ]
    # Fixed graph: same tables as run_trial would draw, counted in one batch.
    g = config.fixed_graph()
    game_seeds = [ms for _, ms in seeds]
    try:
        counts = count_pne_batch(g, sample_tables_batch(g, game_seeds), config.component_cap)
    except SizeLimitExceeded as exc:
        return [
            TrialRecord(point, t, gs, ms, None, None, True, str(exc))
            for t, (gs, ms) in zip(range(start, stop), seeds)
        ]
    full = config.count_mode == "count"
    return [
        TrialRecord(point, t, gs, ms, int(c) if full else None, bool(c > 0))
        for t, (gs, ms), c in zip(range(start, stop), seeds, counts)
    ]


# -- aggregation ---------------------------------------------------------------

@dataclass
class PointResult:
    p: float
    trials: int
    skips: int
    pne_count: int
    histogram: Optional[list[int]]
    mean_z: Optional[float]
    tv_poisson1: Optional[float]
    wilson_lo: Optional[float]
    wilson_hi: Optional[float]
    seconds: float = 0.0

    @property
    def completed(self) -> int:
        return self.trials - self.skips

    @property
    def p_pne(self) -> Optional[float]:
        return self.pne_count / self.completed if self.completed else None

    @property
    def skip_rate(self) -> float:
        return self.skips / self.trials

    def z_standard_error(self) -> Optional[float]:
        if self.histogram is None or self.completed < 2:
            return None
        k = np.arange(len(self.histogram))
        h = np.asarray(self.histogram, dtype=float)
        mean = float((k * h).sum() / h.sum())
        var = float(((k - mean) ** 2 * h).sum() / (h.sum() - 1))
        return math.sqrt(var / h.sum())


def aggregate(records: Sequence[TrialRecord], p: float, trials: int, z: float,
              full_count: bool, seconds: float = 0.0) -> PointResult:
    """Fold trial records (any order) into one grid point's estimates."""
    records = sorted(records, key=lambda r: r.trial)
    done = [r for r in records if not r.skipped]
    skips = len(records) - len(done)
    pne = sum(1 for r in done if r.exists)
    hist = mean = tv = None
    if full_count and done:
        top = max(r.z for r in done)
        hist = [0] * (top + 1)
        for r in done:
            hist[r.z] += 1
        mean = sum(k * c for k, c in enumerate(hist)) / len(done)
        tv = tv_distance(hist, 1.0)
    lo = hi = None
    if done:
        lo, hi = wilson_interval(pne, len(done), z)
    return PointResult(p, trials, skips, pne, hist, mean, tv, lo, hi, seconds)


@dataclass
class SweepResult:
    config: SweepConfig
    points: list[PointResult]
    rng: str = RNG_NAME
    wall_time: float = 0.0

    def to_csv(self, timing: bool = False) -> str:
        """CSV text; ``seconds`` stays blank unless ``timing`` so output is reproducible."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for pt in self.points:
            w.writerow([
                self.config.family, self.config.n, _fmt(pt.p), pt.trials, pt.skips,
                pt.pne_count, _fmt(pt.mean_z), _fmt(pt.tv_poisson1),
                _fmt(pt.wilson_lo), _fmt(pt.wilson_hi),
                _fmt(pt.seconds) if timing else "",
            ])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "config": asdict(self.config),
            "rng": self.rng,
            "master_seed": self.config.master_seed,
            "wall_time": self.wall_time,
            "points": [
                {
                    "family": self.config.family,
                    "n": self.config.n,
                    **asdict(pt),
                }
                for pt in self.points
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> "SweepResult":
        config = SweepConfig(**data["config"])
        points = []
        for d in data["points"]:
            d = {k: v for k, v in d.items() if k not in ("family", "n")}
            points.append(PointResult(**d))
        return cls(config, points, data.get("rng", RNG_NAME), data.get("wall_time", 0.0))

    @classmethod
    def from_json(cls, text: str) -> "SweepResult":
        return cls.from_dict(json.loads(text))


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return f"{x:.10g}"
    return str(x)


def run_sweep(config: SweepConfig, threads: int = 1, chunk: int = _BATCH) -> SweepResult:
    """Run every grid point; results do not depend on ``threads`` or ``chunk``."""
    t_start = time.perf_counter()
    z = z_for_confidence(config.confidence)
    full = config.count_mode == "count"
    points = []
    for point, p in enumerate(config.p_grid):
        t0 = time.perf_counter()
        spans = [(s, min(s + chunk, config.trials)) for s in range(0, config.trials, chunk)]
        records: list[TrialRecord] = []
        if threads > 1 and len(spans) > 1:
            with ProcessPoolExecutor(max_workers=threads) as pool:
                futures = [pool.submit(_run_chunk, config, point, p, a, b) for a, b in spans]
                for fut in futures:
                    records.extend(fut.result())
        else:
            for a, b in spans:
                records.extend(_run_chunk(config, point, p, a, b))
        points.append(aggregate(records, p, config.trials, z, full, time.perf_counter() - t0))
    return SweepResult(config, points, RNG_NAME, time.perf_counter() - t_start)


def gnuplot_script(csv_path: str, title: str = "P(PNE) vs p") -> str:
    """A gnuplot script plotting the Wilson band and point estimate from a sweep CSV."""
    return "\n".join([
        "set datafile separator ','",
        f"set title '{title}'",
        "set xlabel 'p'",
        "set ylabel 'P(PNE)'",
        "set logscale x",
        "set key top right",
        f"plot '{csv_path}' every ::1 using 3:($6/($4-$5)):9:10 with yerrorbars title 'P(PNE), Wilson interval', \\",
        f"     '{csv_path}' every ::1 using 3:($6/($4-$5)) with lines notitle",
        "",
    ])
