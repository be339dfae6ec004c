"""Naive subgroup enumeration with a pluggable distance on the restricted samples."""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .dataset import BinaryDataset
from .distances import mmd_rows, tv_rows
from .solver import SolverConfig, solve
from .terms import Term

# distance(mu_rows_in_subgroup, nu_rows_in_subgroup, parent_dataset) -> float
Distance = Callable[[np.ndarray, np.ndarray, BinaryDataset], float]


def _msd_rest(mu, nu, data):
    sub = BinaryDataset.from_groups(mu, nu)
    return solve(sub, SolverConfig(min_support=1, time_limit=None)).msd


def mass_gap(mu, nu, data):
    """``|mu(S) - nu(S)|`` measured against the parent group sizes."""
    return abs(len(mu) / data.n_mu - len(nu) / data.n_nu)


DISTANCES: dict[str, Distance] = {
    "tv": lambda mu, nu, data: tv_rows(mu, nu),
    "mmd": lambda mu, nu, data: mmd_rows(mu, nu),
    "msd": _msd_rest,
}


@dataclass(frozen=True)
class MsddResult:
    best_term: Term
    best_distance: float
    subgroups_considered: int
    subgroups_skipped_small: int
    subgroups_skipped_one_sided: int
    completed: bool
    elapsed: float = 0.0

    @property
    def visited(self) -> int:
        """Throughput count: skipped subgroups count as visited."""
        return self.subgroups_considered + self.subgroups_skipped_small + self.subgroups_skipped_one_sided

    @property
    def feasible(self) -> bool:
        return self.subgroups_considered > 0


def count_terms(n_features: int) -> int:
    if n_features < 0:
        raise ValueError("n_features must be >= 0")
    return 3**n_features


def msdd_enumerate(
    data: BinaryDataset,
    distance: Union[str, Distance] = "tv",
    min_support: int = 10,
    time_limit: float | None = None,
    skip_one_sided: bool = True,
) -> MsddResult:
    """Largest distance between the two samples restricted to any subgroup.

    Terms are visited in lexicographic order over per-feature states
    (absent, positive, negative), feature 0 varying slowest, so the empty term
    comes first. Subgroups with combined support below ``min_support`` and
    subgroups missing one of the two groups are skipped. A strictly larger
    distance replaces the incumbent, so among equal distances the first term in
    that order wins. ``skip_one_sided=False`` hands one-sided subgroups to
    the distance too, for distances that are defined there (``mass_gap``).
    """
    if isinstance(distance, str):
        try:
            fn = DISTANCES[distance]
        except KeyError:
            raise ValueError(f"unknown distance {distance!r}; choose from {sorted(DISTANCES)}") from None
    elif callable(distance):
        fn = distance
    else:
        raise ValueError(f"unknown distance {distance!r}")
    if min_support < 1:
        raise ValueError("min_support must be >= 1")

    t0 = time.perf_counter()
    deadline = None if time_limit is None else t0 + time_limit
    X, is_mu = data.X, data.groups == 0
    n = data.n_features
    counts = {"considered": 0, "small": 0, "one_sided": 0}
    best = {"d": 0.0, "term": Term()}

    class _Stop(Exception):
        pass

    def visit(rows: np.ndarray, lits):
        if deadline is not None and time.perf_counter() > deadline:
            raise _Stop
        sel = is_mu[rows]
        k_mu = int(sel.sum())
        k_nu = len(rows) - k_mu
        if k_mu + k_nu < min_support:
            counts["small"] += 1
            return
        if skip_one_sided and (k_mu == 0 or k_nu == 0):
            counts["one_sided"] += 1
            return
        counts["considered"] += 1
        d = float(fn(X[rows[sel]], X[rows[~sel]], data))
        if d > best["d"]:
            best.update(d=d, term=Term(tuple(lits)))

    def walk(j: int, rows: np.ndarray, lits: list):
        if j == n:
            visit(rows, lits)
            return
        walk(j + 1, rows, lits)
        col = X[rows, j]
        walk(j + 1, rows[col == 1], lits + [(j, True)])
        walk(j + 1, rows[col == 0], lits + [(j, False)])

    completed = True
    try:
        walk(0, np.arange(data.n_samples), [])
    except _Stop:
        completed = False
    return MsddResult(
        best_term=best["term"],
        best_distance=best["d"],
        subgroups_considered=counts["considered"],
        subgroups_skipped_small=counts["small"],
        subgroups_skipped_one_sided=counts["one_sided"],
        completed=completed,
        elapsed=time.perf_counter() - t0,
    )
