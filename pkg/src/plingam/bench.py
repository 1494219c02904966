"""Runtime decomposition and speedup measurement for DirectLiNGAM fits."""
from __future__ import annotations

import statistics
from dataclasses import asdict, dataclass, field
from typing import Iterable

from .direct import DirectLingamConfig, fit
from .errors import OutOfRangeError
from .simulate import SimSpec, gen_two_level_dag, sample_lingam


def amdahl_speedup(p: float) -> float:
    """Speedup bound ``1 / (1 - p)`` for parallel fraction ``p`` and unlimited processors."""
    if not 0.0 <= p < 1.0:
        raise OutOfRangeError(f"parallel fraction must lie in [0, 1), got {p}")
    return 1.0 / (1.0 - p)


@dataclass(frozen=True)
class BenchReport:
    """One benchmark configuration.

    ``ordering_fraction`` (the parallelizable share ``p``) is
    ``ordering_seconds / total_seconds`` of the sequential fit, and
    ``measured_speedup`` is ``seq_seconds / par_seconds`` for whole fits.
    ``ordering_speedup`` compares the ordering phases alone.
    """

    dims: int
    samples: int
    workers: int
    seed: int
    total_seconds: float
    ordering_seconds: float
    ordering_fraction: float
    seq_seconds: float
    par_seconds: float
    par_ordering_seconds: float
    measured_speedup: float
    ordering_speedup: float
    amdahl_theoretical: float
    outputs_identical: bool
    repeats: int = 1
    n_seeds: int = 1
    config: dict = field(default_factory=dict)

    def as_record(self) -> dict:
        return asdict(self)


def _timed_fit(X, cfg: DirectLingamConfig):
    t: dict = {}
    dag = fit(X, cfg, timings=t)
    return dag, t


def _assemble(d, m, workers, seed, seq_total, seq_order, par_total, par_order, identical, repeats, n_seeds):
    fraction = seq_order / seq_total
    return BenchReport(
        dims=d,
        samples=m,
        workers=workers,
        seed=seed,
        total_seconds=seq_total,
        ordering_seconds=seq_order,
        ordering_fraction=fraction,
        seq_seconds=seq_total,
        par_seconds=par_total,
        par_ordering_seconds=par_order,
        measured_speedup=seq_total / par_total,
        ordering_speedup=seq_order / par_order if par_order > 0 else float("inf"),
        amdahl_theoretical=amdahl_speedup(fraction) if fraction < 1.0 else float("inf"),
        outputs_identical=identical,
        repeats=repeats,
        n_seeds=n_seeds,
        config={"dims": d, "samples": m, "workers": workers, "seed": seed},
    )


def profile_fit(
    d: int,
    m: int,
    seed: int = 0,
    workers: int = 1,
    repeats: int = 5,
    warmup: int = 3,
) -> BenchReport:
    """Time sequential and parallel fits of one simulated dataset.

    Each variant runs ``warmup`` untimed fits, then ``repeats`` timed ones;
    the median of each phase is reported.
    """
    if repeats < 1 or warmup < 0:
        raise ValueError("repeats must be >= 1 and warmup >= 0")
    spec = SimSpec(dims=d, samples=m, seed=seed)
    X = sample_lingam(gen_two_level_dag(spec), spec)
    seq_cfg = DirectLingamConfig(parallel=False, workers=1)
    par_cfg = DirectLingamConfig(parallel=True, workers=workers)

    results = {}
    for name, cfg in (("seq", seq_cfg), ("par", par_cfg)):
        for _ in range(warmup):
            fit(X, cfg)
        runs = [_timed_fit(X, cfg) for _ in range(repeats)]
        results[name] = (
            runs[0][0],
            statistics.median(t["total_seconds"] for _, t in runs),
            statistics.median(t["ordering_seconds"] for _, t in runs),
        )
    seq_dag, seq_total, seq_order = results["seq"]
    par_dag, par_total, par_order = results["par"]
    return _assemble(
        d, m, workers, seed, seq_total, seq_order, par_total, par_order,
        seq_dag == par_dag, repeats, 1,
    )


def sweep(
    dims: Iterable[int],
    samples: Iterable[int],
    workers: Iterable[int],
    seeds: int = 1,
    repeats: int = 5,
    warmup: int = 3,
    base_seed: int = 0,
) -> list[BenchReport]:
    """Cross product of configurations, each averaged over ``seeds`` datasets.

    Reports come out in ``dims``-major, then ``samples``, then ``workers``
    order.
    """
    dims, samples, workers = list(dims), list(samples), list(workers)
    if not (dims and samples and workers) or seeds < 1:
        raise ValueError("dims, samples and workers must be non-empty and seeds >= 1")
    reports = []
    for d in dims:
        for m in samples:
            for w in workers:
                per_seed = [
                    profile_fit(d, m, base_seed + s, w, repeats, warmup) for s in range(seeds)
                ]
                mean = lambda attr: statistics.fmean(getattr(r, attr) for r in per_seed)  # noqa: E731
                reports.append(
                    _assemble(
                        d, m, w, base_seed,
                        mean("total_seconds"), mean("ordering_seconds"),
                        mean("par_seconds"), mean("par_ordering_seconds"),
                        all(r.outputs_identical for r in per_seed), repeats, seeds,
                    )
                )
    return reports

