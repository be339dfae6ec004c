"""Exact maximization of the subgroup mass difference over conjunctions.

Both searches work on integer numerators over the common denominator
``N1 * N2`` so that values and tie-breaks are exact: a term ``S`` has signed
value ``(c_mu(S) * N2 - c_nu(S) * N1) / (N1 * N2)``.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .dataset import MU, NU, BinaryDataset
from .terms import Term

# features handled by one dense transform in enumerate_exact (3**12 cells)
_CHUNK = 12


class InfeasibleError(ValueError):
    """``min_support`` exceeds the number of samples."""


class TooManyFeaturesError(ValueError):
    """Exhaustive enumeration refused for a wide dataset."""


@dataclass(frozen=True)
class SolverConfig:
    """Search settings.

    ``negations`` allows negative literals; ``prune`` toggles bound pruning
    (support pruning is always on since it is exact).
    """

    min_support: int = 10
    time_limit: float | None = 600.0
    negations: bool = True
    prune: bool = True
    max_enumeration_features: int = 16

    def __post_init__(self):
        if self.min_support < 1:
            raise ValueError("min_support must be >= 1")


@dataclass(frozen=True)
class MsdResult:
    best_term: Term
    numerator: int
    n_mu: int
    n_nu: int
    support_mu: int
    support_nu: int
    proven_optimal: bool
    nodes_explored: int
    nodes_pruned: int
    elapsed: float

    @property
    def signed_exact(self) -> Fraction:
        return Fraction(self.numerator, self.n_mu * self.n_nu)

    @property
    def msd_exact(self) -> Fraction:
        return abs(self.signed_exact)

    @property
    def signed_discrepancy(self) -> float:
        return float(self.signed_exact)

    @property
    def msd(self) -> float:
        return float(self.msd_exact)

    @property
    def support(self) -> int:
        return self.support_mu + self.support_nu


class _Timeout(Exception):
    pass


def _check(data: BinaryDataset, cfg: SolverConfig) -> None:
    if data.n_samples == 0:
        raise ValueError("empty dataset")
    if cfg.min_support > data.n_samples:
        raise InfeasibleError(
            f"min_support={cfg.min_support} exceeds the {data.n_samples} available samples"
        )


def _directional(direction: int):
    if direction == 0:
        return abs
    if direction == 1:
        return lambda v: v
    if direction == -1:
        return lambda v: -v
    raise ValueError("direction must be -1, 0 or 1")


def _result(data, term, numerator, optimal, explored, pruned, t0) -> MsdResult:
    m = term.mask(data.X)
    return MsdResult(
        best_term=term,
        numerator=int(numerator),
        n_mu=data.n_mu,
        n_nu=data.n_nu,
        support_mu=int((m & (data.groups == MU)).sum()),
        support_nu=int((m & (data.groups == NU)).sum()),
        proven_optimal=optimal,
        nodes_explored=explored,
        nodes_pruned=pruned,
        elapsed=time.perf_counter() - t0,
    )


def _aggregate(data: BinaryDataset):
    """Unique bit patterns with per-group multiplicities."""
    U, inverse = np.unique(data.X, axis=0, return_inverse=True)
    inverse = inverse.ravel()
    cmu = np.bincount(inverse[data.groups == MU], minlength=len(U)).astype(np.int64)
    cnu = np.bincount(inverse[data.groups == NU], minlength=len(U)).astype(np.int64)
    return U, cmu, cnu


def solve(data: BinaryDataset, cfg: SolverConfig = SolverConfig(), *, direction: int = 0) -> MsdResult:
    """Depth-first branch and bound over conjunctions.

    Returns the canonical maximizer of ``|mu(S) - nu(S)|`` (or of the signed
    difference for ``direction=+1/-1``) among terms with combined support of at
    least ``cfg.min_support``. Ties go to the term with fewest literals, then
    to the lexicographically smallest ``(feature, positive < negative)`` list.
    """
    _check(data, cfg)
    t0 = time.perf_counter()
    deadline = None if cfg.time_limit is None else t0 + cfg.time_limit
    value_of = _directional(direction)
    n1, n2 = data.n_mu, data.n_nu
    min_support = cfg.min_support
    polarities = (True, False) if cfg.negations else (True,)

    U, cmu, cnu = _aggregate(data)
    w = cmu * n2 - cnu * n1
    stats = np.column_stack([w, np.maximum(w, 0), np.maximum(-w, 0), cmu + cnu])
    # float64 products are exact while every partial sum stays below 2**53
    dtype = np.float64 if 2 * n1 * n2 < 2**53 else np.int64

    single = np.abs(U.T.astype(np.int64) @ w)
    order = sorted(range(data.n_features), key=lambda j: (-int(single[j]), j))
    Xo = U[:, order].astype(dtype)
    So = stats.astype(dtype)

    def bound_of(P, N):
        if direction == 1:
            return P
        if direction == -1:
            return N
        return max(P, N)

    total = [int(v) for v in stats.sum(axis=0)]
    best = {"val": value_of(total[0]), "num": total[0], "lits": (), "key": (0, ())}
    explored, pruned = 1, 0

    def expand(Xn, Sn, lits, start):
        nonlocal explored, pruned
        if deadline is not None and time.perf_counter() > deadline:
            raise _Timeout
        F = Xn.shape[1]
        pos = Xn.T @ Sn
        tot = Sn.sum(axis=0)
        if dtype is np.float64:
            pos = np.rint(pos).astype(np.int64)
            tot = np.rint(tot).astype(np.int64)
        pos = pos.tolist()
        tot = tot.tolist()
        for q in range(F):
            feat = order[start + q]
            for positive in polarities:
                if positive:
                    W, P, N, C = pos[q]
                else:
                    W, P, N, C = (t - s for t, s in zip(tot, pos[q]))
                explored += 1
                if C < min_support:
                    pruned += 1
                    continue
                child = lits + ((feat, positive),)
                val = value_of(W)
                if val >= best["val"]:
                    key = (len(child), tuple(sorted((f, 0 if p else 1) for f, p in child)))
                    if val > best["val"] or key < best["key"]:
                        best.update(val=val, num=W, lits=child, key=key)
                if q == F - 1:
                    continue
                if cfg.prune:
                    b = bound_of(P, N)
                    if b < best["val"] or (b == best["val"] and len(child) + 1 > best["key"][0]):
                        pruned += 1
                        continue
                mask = Xn[:, q] == (1 if positive else 0)
                expand(Xn[mask, q + 1:], Sn[mask], child, start + q + 1)

    optimal = True
    try:
        if data.n_features:
            expand(Xo, So, (), 0)
    except _Timeout:
        optimal = False
    term = Term(best["lits"])
    return _result(data, term, best["num"], optimal, explored, pruned, t0)


def _cell_counts(rows: np.ndarray, groups: np.ndarray, r: int):
    if r == 0:
        return (np.array(int((groups == MU).sum())), np.array(int((groups == NU).sum())))
    weights = 1 << np.arange(r - 1, -1, -1, dtype=np.int64)
    idx = rows.astype(np.int64) @ weights if len(rows) else np.zeros(0, dtype=np.int64)
    shape = (2,) * r
    a = np.bincount(idx[groups == MU], minlength=2**r).reshape(shape)
    b = np.bincount(idx[groups == NU], minlength=2**r).reshape(shape)
    return a.astype(np.int64), b.astype(np.int64)


def term_table(a: np.ndarray) -> np.ndarray:
    """Extend a ``(2,)*r`` cell array to ``(3,)*r`` term sums.

    Along every axis index 0 means "literal x == 0", 1 "literal x == 1" and
    2 "feature absent" (sum of the other two).
    """
    for axis in range(a.ndim):
        a = np.concatenate([a, a.sum(axis=axis, keepdims=True)], axis=axis)
    return a


def enumerate_exact(data: BinaryDataset, cfg: SolverConfig = SolverConfig(), *, direction: int = 0) -> MsdResult:
    """Brute-force reference: evaluates every one of the ``3**n`` terms.

    Same contract as :func:`solve`; used as the oracle in tests.
    """
    _check(data, cfg)
    n = data.n_features
    if n > cfg.max_enumeration_features:
        raise TooManyFeaturesError(
            f"{n} features means {3**n} terms; use solve() instead "
            f"(guard is max_enumeration_features={cfg.max_enumeration_features})"
        )
    t0 = time.perf_counter()
    deadline = None if cfg.time_limit is None else t0 + cfg.time_limit
    n1, n2 = data.n_mu, data.n_nu
    sentinel = -(2**62)
    head = max(0, n - _CHUNK)
    tail = list(range(head, n))
    r = len(tail)
    states = (1, 0, 2) if cfg.negations else (1, 2)

    best_val, best_num, best_key, best_lits = None, 0, None, ()
    visited = 0
    optimal = True
    for prefix in itertools.product(states, repeat=head):
        if deadline is not None and time.perf_counter() > deadline:
            optimal = False
            break
        keep = np.ones(data.n_samples, dtype=bool)
        for f, s in enumerate(prefix):
            if s != 2:
                keep &= data.X[:, f] == s
        a, b = _cell_counts(data.X[keep][:, tail], data.groups[keep], r)
        A, B = term_table(a), term_table(b)
        num = A * n2 - B * n1
        supp = A + B
        val = num if direction == 1 else -num if direction == -1 else np.abs(num)
        ok = supp >= cfg.min_support
        nlit = np.zeros(A.shape, dtype=np.int64) + sum(s != 2 for s in prefix)
        for axis in range(r):
            shape = [1] * r
            shape[axis] = 3
            st = np.arange(3).reshape(shape)
            nlit = nlit + (st != 2)
            if not cfg.negations:
                ok = ok & (st != 0)
        visited += int(np.prod([len(states)] * r))
        val = np.where(ok, val, sentinel)
        top = int(val.max())
        if top == sentinel or (best_val is not None and top < best_val):
            continue
        hits = val == top
        fewest = int(nlit[hits].min())
        cands = np.argwhere(hits & (nlit == fewest))
        for c in cands:
            lits = [(f, s == 1) for f, s in enumerate(prefix) if s != 2]
            lits += [(tail[j], s == 1) for j, s in enumerate(c.tolist()) if s != 2]
            key = (len(lits), tuple(sorted((f, 0 if p else 1) for f, p in lits)))
            if best_val is None or top > best_val or key < best_key:
                best_val, best_key, best_lits = top, key, lits
                best_num = int(num[tuple(c)])
    term = Term(tuple(best_lits))
    return _result(data, term, best_num, optimal, visited, 0, t0)


def classification_losses(data: BinaryDataset, cfg: SolverConfig = SolverConfig()) -> tuple[Fraction, Fraction]:
    """Group-weighted 0-1 losses of the best single-term classifiers.

    ``L1`` labels MU as positive, ``L2`` flips the labels; each loss equals
    one minus the best signed mass difference in that direction, so
    ``1 - min(L1, L2)`` is the MSD.
    """
    up = solve(data, cfg, direction=1)
    down = solve(data, cfg, direction=-1)
    return 1 - up.signed_exact, 1 + down.signed_exact
