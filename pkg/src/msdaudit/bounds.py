"""Finite-sample deviation bound for MSD and the subsampling ladder harness."""

from __future__ import annotations

import csv
import io
import math
import time
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .dataset import MU, NU, BinaryDataset
from .solver import SolverConfig, solve

LADDER_COLUMNS = ("dataset", "method", "size", "seed", "value", "relative_value", "elapsed", "proven_optimal")


def theorem1_epsilon(n_protected: int, n_min: int, delta: float) -> float:
    """``4 * sqrt((2|P| + ln(2/delta)) / (2N))`` with ``N = min(N1, N2)``.

    With probability at least ``1 - 2*delta`` the population MSD exceeds the
    empirical MSD by at most this amount.
    """
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    if n_min < 1:
        raise ValueError("n_min must be >= 1")
    if n_protected < 0:
        raise ValueError("n_protected must be >= 0")
    return 4.0 * math.sqrt((2 * n_protected + math.log(2.0 / delta)) / (2 * n_min))


@dataclass(frozen=True)
class ErrorBound:
    n_protected: int
    delta: float
    n_min: int

    @property
    def epsilon(self) -> float:
        return theorem1_epsilon(self.n_protected, self.n_min, self.delta)

    @classmethod
    def for_dataset(cls, data: BinaryDataset, delta: float = 0.05) -> "ErrorBound":
        return cls(data.n_features, delta, min(data.n_mu, data.n_nu))


def geometric_ladder(full_size: int, start: int = 1000, points: int = 5) -> list[int]:
    """Strictly increasing integer sizes from ``start`` to ``full_size``."""
    if full_size <= start:
        raise ValueError(f"full size {full_size} must exceed the ladder start {start}")
    sizes = [int(round(s)) for s in np.geomspace(start, full_size, points)]
    sizes[-1] = full_size
    for i in range(1, len(sizes)):
        sizes[i] = max(sizes[i], sizes[i - 1] + 1)
    if sizes[-1] != full_size:
        raise ValueError("ladder too dense for the available range")
    return sizes


def subsample(data: BinaryDataset, size: int, rng: np.random.Generator) -> BinaryDataset:
    """Draw ``size`` rows without replacement, keeping the group proportion."""
    if size > data.n_samples:
        raise ValueError(f"ladder size {size} exceeds the {data.n_samples} available samples")
    k_mu = int(round(size * data.n_mu / data.n_samples))
    k_mu = min(max(k_mu, 1), data.n_mu, size - 1)
    k_nu = size - k_mu
    if k_nu > data.n_nu or k_nu < 1:
        raise ValueError(f"cannot draw {size} rows with both groups represented")
    mu_idx = np.flatnonzero(data.groups == MU)
    nu_idx = np.flatnonzero(data.groups == NU)
    rows = np.concatenate([rng.choice(mu_idx, k_mu, replace=False), rng.choice(nu_idx, k_nu, replace=False)])
    return data.subset(np.sort(rows))


@dataclass
class LadderRow:
    size: int
    seed: int
    value: float
    elapsed: float
    proven_optimal: bool
    relative_value: float = float("nan")


@dataclass
class ConvergenceLadder:
    dataset: str
    method: str
    sizes: list[int]
    seeds: list[int]
    rows: list[LadderRow] = field(default_factory=list)

    def values(self, size: int) -> list[float]:
        return [r.value for r in self.rows if r.size == size]

    def to_csv(self, path=None) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(LADDER_COLUMNS)
        for r in self.rows:
            w.writerow([self.dataset, self.method, r.size, r.seed, repr(r.value),
                        repr(r.relative_value), f"{r.elapsed:.6f}", int(r.proven_optimal)])
        text = buf.getvalue()
        if path is not None:
            with open(path, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        return text


def convergence_run(
    data: BinaryDataset,
    cfg: SolverConfig = SolverConfig(),
    seeds: Sequence[int] = (0, 1, 2, 3, 4),
    ladder: Sequence[int] | None = None,
    dataset_name: str = "data",
) -> ConvergenceLadder:
    """Solve MSD on seeded proportional subsamples along a size ladder.

    Relative values divide by the mean estimate at the largest size; they are
    NaN when that mean is zero.
    """
    sizes = list(ladder) if ladder is not None else geometric_ladder(data.n_samples)
    if any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise ValueError("ladder sizes must be strictly increasing")
    if sizes[-1] > data.n_samples:
        raise ValueError(f"ladder size {sizes[-1]} exceeds the {data.n_samples} available samples")
    out = ConvergenceLadder(dataset_name, "msd", sizes, list(seeds))
    for size in sizes:
        for seed in seeds:
            rng = np.random.default_rng([seed, size])
            sub = data if size == data.n_samples else subsample(data, size, rng)
            cell_cfg = cfg if cfg.min_support <= size else SolverConfig(
                min_support=size, time_limit=cfg.time_limit, negations=cfg.negations)
            t0 = time.perf_counter()
            res = solve(sub, cell_cfg)
            out.rows.append(LadderRow(size, seed, res.msd, time.perf_counter() - t0, res.proven_optimal))
    ref = float(np.mean(out.values(sizes[-1])))
    for r in out.rows:
        r.relative_value = r.value / ref if ref > 0 else float("nan")
    return out


@dataclass(frozen=True)
class CoverageTrial:
    n_per_group: int
    seed: int
    estimate: float
    epsilon: float
    error: float

    @property
    def covered(self) -> bool:
        return self.error <= self.epsilon


def coverage_trials(
    pop,
    sizes: Sequence[int],
    seeds: Sequence[int],
    delta: float = 0.05,
    cfg: SolverConfig = SolverConfig(min_support=1),
) -> list[CoverageTrial]:
    """Two-sided check ``|MSD(sample) - MSD(population)| <= epsilon`` per (size, seed).

    The bound is stated one-sided; the reverse direction follows from the same
    union-bound argument, so both are checked here.
    """
    from .synth import sample

    trials = []
    for size in sizes:
        for seed in seeds:
            data = sample(pop, size, size, seed=seed)
            est = solve(data, cfg).msd
            eps = theorem1_epsilon(pop.n, size, delta)
            trials.append(CoverageTrial(size, seed, est, eps, abs(est - float(pop.true_msd))))
    return trials
