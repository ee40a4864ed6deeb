"""Seeded, parallel estimation of P_H(n) and of concentration deviations.

Trial ``i`` at size ``n`` always uses the stream seed ``trial_seed(master, n, i)``,
and results are tallied per chunk and summed, so the output depends only on
the configuration, never on the number of workers or their scheduling.
"""
from __future__ import annotations

import csv
import io
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .graphon import StepGraphon, concentration_vector

__all__ = [
    "ExperimentConfig",
    "ExperimentRow",
    "trial_seed",
    "trial_outcome",
    "run_experiment",
    "wilson_interval",
    "deviation_probability",
    "resolve_workers",
    "CSV_HEADER",
    "format_csv",
    "parse_csv",
]

CSV_HEADER = ["graphon", "n", "trials", "successes", "p_hat", "ci_low", "ci_high", "wall_time_s"]

_SIZE_KEY = 0xD1B54A32D192ED03
_TRIAL_KEY = 0x8CB92BA72F3D8DD7
_CHUNK = 250


def trial_seed(master: int, n: int, trial_index: int) -> int:
    """Stream seed of one trial.

    ``mix(mix(mix(master + GAMMA) ^ (n + K1)) ^ (i + K2))`` with the SplitMix64
    finalizer ``mix``; every step is a bijection, so seeds never collide across
    trial indices for fixed ``(master, n)``.
    """
    mask = _kernels.MASK64
    h = _kernels.mix64((master + _kernels.GAMMA) & mask)
    h = _kernels.mix64(h ^ ((n + _SIZE_KEY) & mask))
    return _kernels.mix64(h ^ ((trial_index + _TRIAL_KEY) & mask))


@dataclass(frozen=True)
class ExperimentConfig:
    sizes: tuple[int, ...]
    trials: int = 1000
    master_seed: int = 0
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "sizes", tuple(int(n) for n in self.sizes))
        if not self.sizes:
            raise ValueError("at least one size is required")
        if any(n < 1 for n in self.sizes):
            raise ValueError("sizes must be positive")
        if self.trials < 1:
            raise ValueError("trials must be positive")
        if self.workers < 0:
            raise ValueError("workers must be >= 0 (0 = all cores)")


@dataclass(frozen=True)
class ExperimentRow:
    n: int
    trials: int
    successes: int
    p_hat: float
    ci_low: float
    ci_high: float
    wall_time: float | None = None
    graphon: str = ""


def wilson_interval(successes: int, trials: int, z: float = 1.96) -> tuple[float, float]:
    if trials < 1:
        raise ValueError("trials must be positive")
    p = successes / trials
    z2 = z * z
    denom = 1 + z2 / trials
    center = (p + z2 / (2 * trials)) / denom
    half = z / denom * math.sqrt(p * (1 - p) / trials + z2 / (4 * trials * trials))
    lo = 0.0 if successes == 0 else max(0.0, center - half)
    hi = 1.0 if successes == trials else min(1.0, center + half)
    return lo, hi


def resolve_workers(requested: int | None = None) -> int:
    env = os.environ.get("HGRAPHON_WORKERS")
    if env:
        requested = int(env)
    if not requested:
        return os.cpu_count() or 1
    return max(1, requested)


def trial_outcome(W: StepGraphon, n: int, seed: int) -> bool:
    """Does G_n = sample(W, n, seed) admit a Hamiltonian decomposition?"""
    return bool(
        _kernels.trial_kernel(
            _kernels.as_seed(seed), n, W.block_thresholds(), W.probability_thresholds()
        )
    )


def _run_chunk(args) -> int:
    block_thr, prob_thr, n, master, lo, hi = args
    hits = 0
    for i in range(lo, hi):
        seed = _kernels.as_seed(trial_seed(master, n, i))
        if _kernels.trial_kernel(seed, n, block_thr, prob_thr):
            hits += 1
    return hits


def _chunks(trials: int, size: int = _CHUNK):
    for lo in range(0, trials, size):
        yield lo, min(trials, lo + size)


def run_experiment(W: StepGraphon, cfg: ExperimentConfig, name: str = "") -> list[ExperimentRow]:
    block_thr = W.block_thresholds()
    prob_thr = W.probability_thresholds()
    workers = resolve_workers(cfg.workers)
    rows = []
    pool = ProcessPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        for n in cfg.sizes:
            t0 = time.perf_counter()
            tasks = [(block_thr, prob_thr, n, cfg.master_seed, lo, hi)
                     for lo, hi in _chunks(cfg.trials)]
            if pool is None:
                hits = sum(map(_run_chunk, tasks))
            else:
                hits = sum(pool.map(_run_chunk, tasks))
            lo, hi = wilson_interval(hits, cfg.trials)
            rows.append(ExperimentRow(
                n, cfg.trials, hits, hits / cfg.trials, lo, hi,
                time.perf_counter() - t0, name,
            ))
    finally:
        if pool is not None:
            pool.shutdown()
    return rows


def deviation_probability(
    W: StepGraphon, n: int, trials: int, eps: float, master_seed: int = 0
) -> float:
    """Fraction of draws with ||x(G_n) - x*||_2 > eps; coordinates only."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    if trials < 1:
        raise ValueError("trials must be positive")
    x_star = concentration_vector(W)
    block_thr = W.block_thresholds()
    eps2 = Fraction(eps) ** 2
    q = W.q
    hits = 0
    for t in range(trials):
        seed = _kernels.as_seed(trial_seed(master_seed, n, t))
        _, blocks = _kernels.coords_kernel(seed, n, block_thr)
        counts = np.bincount(blocks, minlength=q).tolist()
        dist2 = sum((Fraction(c, n) - xs) ** 2 for c, xs in zip(counts, x_star))
        if dist2 > eps2:
            hits += 1
    return hits / trials


def _fmt(v: float) -> str:
    return f"{v:.6g}"


def format_csv(rows: Iterable[ExperimentRow], timing: bool = False) -> str:
    """CSV text; ``wall_time_s`` stays empty unless ``timing`` so output is reproducible."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        wall = _fmt(r.wall_time) if timing and r.wall_time is not None else ""
        w.writerow([r.graphon, r.n, r.trials, r.successes,
                    _fmt(r.p_hat), _fmt(r.ci_low), _fmt(r.ci_high), wall])
    return buf.getvalue()


def parse_csv(text: str) -> list[ExperimentRow]:
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    if header != CSV_HEADER:
        raise ValueError(f"unexpected CSV header: {header}")
    rows = []
    for rec in reader:
        if not rec:
            continue
        g, n, trials, succ, p, lo, hi, wall = rec
        rows.append(ExperimentRow(
            int(n), int(trials), int(succ), float(p), float(lo), float(hi),
            float(wall) if wall else None, g,
        ))
    return rows


def summarize(rows: Sequence[ExperimentRow]) -> str:
    return "\n".join(
        f"{r.graphon or '-'}\tn={r.n}\tP_H={r.p_hat:.4f}\t[{r.ci_low:.4f}, {r.ci_high:.4f}]"
        for r in rows
    )
