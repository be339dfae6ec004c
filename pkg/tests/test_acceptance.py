"""Exit criteria for the package, one test per criterion.

Each test records a PASS/FAIL line; the lines are printed in the pytest
terminal summary (see conftest.py).
"""

import time
from fractions import Fraction

import numpy as np
import pytest

from conftest import random_dataset
from msdaudit import (
    SolverConfig,
    Term,
    TooManyFeaturesError,
    classification_losses,
    count_terms,
    enumerate_exact,
    linf_base,
    plant,
    sample,
    solve,
    theorem1_epsilon,
    total_variation,
)
from msdaudit.bounds import coverage_trials

RESULTS: list[str] = []


def record(number, name, ok, detail):
    RESULTS.append(f"[criterion {number}] {'PASS' if ok else 'FAIL'}  {name}: {detail}")
    assert ok, detail


def exact_value(data, term):
    m = term.mask(data.X)
    a = int((m & (data.groups == 0)).sum())
    b = int((m & (data.groups == 1)).sum())
    return Fraction(a, data.n_mu) - Fraction(b, data.n_nu), a + b


def property_datasets(count, seed, max_features=10, max_samples=500):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        yield random_dataset(rng, int(rng.integers(1, max_features + 1)), int(rng.integers(2, max_samples + 1)))


def test_1_oracle_equivalence():
    t0 = time.perf_counter()
    checked, bad = 0, []
    for k, d in enumerate(property_datasets(200, seed=1001)):
        ms = (1, 10)[k % 2]
        cfg = SolverConfig(min_support=min(ms, d.n_samples), time_limit=None)
        a, b = solve(d, cfg), enumerate_exact(d, cfg)
        signed, _ = exact_value(d, a.best_term)
        if a.msd_exact != b.msd_exact or abs(signed) != a.msd_exact or a.best_term != b.best_term:
            bad.append(k)
        checked += 1
    elapsed = time.perf_counter() - t0
    record(1, "oracle equivalence", not bad and checked >= 200 and elapsed < 120,
           f"{checked} datasets, {len(bad)} mismatches, {elapsed:.1f}s (limit 120s)")


def test_2_sandwich():
    t0 = time.perf_counter()
    worst = -np.inf
    n = 0
    for d in property_datasets(100, seed=2002):
        msd = solve(d, SolverConfig(min_support=1, time_limit=None)).msd
        worst = max(worst, linf_base(d) - msd, msd - total_variation(d))
        n += 1
    elapsed = time.perf_counter() - t0
    record(2, "linf <= MSD <= TV", worst <= 1e-12 and n >= 100 and elapsed < 60,
           f"{n} datasets, worst violation {worst:.3g} (tol 1e-12), {elapsed:.1f}s (limit 60s)")


def test_3_synthetic_recovery():
    t0 = time.perf_counter()
    pop = plant(10, None, 0.15, 0.5, seed=0, k=4)
    assert pop.true_msd == Fraction(3, 40) and len(pop.planted) == 4
    errors, hits = [], 0
    for seed in range(5):
        res = solve(sample(pop, 10_000, 10_000, seed=seed), SolverConfig(min_support=10))
        errors.append(abs(res.msd - float(pop.true_msd)))
        hits += res.best_term == pop.planted
    elapsed = time.perf_counter() - t0
    mean_err = float(np.mean(errors))
    record(3, "planted subgroup recovery", mean_err <= 0.01 and hits >= 4 and elapsed < 120,
           f"mean |error| {mean_err:.4f} (<= 0.01), exact recovery {hits}/5 (>= 4), {elapsed:.1f}s")


def test_4_theorem1_coverage():
    t0 = time.perf_counter()
    pop = plant(10, None, 0.15, 0.5, seed=0, k=4)
    trials = coverage_trials(pop, sizes=[200, 500, 1000, 2000, 5000], seeds=range(10), delta=0.05)
    rate = np.mean([t.covered for t in trials])
    elapsed = time.perf_counter() - t0
    record(4, "deviation bound coverage", len(trials) >= 50 and rate >= 0.9 and elapsed < 600,
           f"{len(trials)} trials, coverage {rate:.2%} (>= 90%) at delta=0.05, {elapsed:.1f}s")


@pytest.mark.slow
def test_5_solver_scale():
    pop = plant(20, None, 0.15, 0.5, seed=0, k=4)
    data = sample(pop, 100_000, 100_000, seed=0)
    res = solve(data, SolverConfig(min_support=10, time_limit=600))
    try:
        enumerate_exact(data, SolverConfig(min_support=10))
        guarded = False
    except TooManyFeaturesError:
        guarded = True
    space = count_terms(20)
    record(5, "solver scale (20 features, 1e5 per group)", res.proven_optimal and guarded and res.elapsed < 600,
           f"proven optimal={res.proven_optimal} in {res.elapsed:.1f}s (limit 600s), "
           f"{res.nodes_explored} nodes vs {space} terms, enumeration guarded={guarded}")


def test_6_min_support_soundness():
    violations = 0
    runs = 0
    for k, d in enumerate(property_datasets(150, seed=6006)):
        for ms in (1, 10, max(1, d.n_samples // 3)):
            cfg = SolverConfig(min_support=min(ms, d.n_samples), time_limit=None)
            for res in (solve(d, cfg), enumerate_exact(d, cfg)):
                _, support = exact_value(d, res.best_term)
                violations += support < cfg.min_support or res.support != support
                runs += 1
        full = SolverConfig(min_support=d.n_samples)
        r = solve(d, full)
        violations += not (r.best_term == Term() and r.msd == 0)
    record(6, "min-support soundness", violations == 0,
           f"{runs} constrained runs + 150 full-support runs, {violations} violations")


def test_7_classification_identity():
    mismatches = 0
    for k, d in enumerate(property_datasets(100, seed=7007)):
        cfg = SolverConfig(min_support=(1, 10)[k % 2] if d.n_samples >= 10 else 1, time_limit=None)
        L1, L2 = classification_losses(d, cfg)
        mismatches += (1 - min(L1, L2)) != solve(d, cfg).msd_exact
    record(7, "1 - min(L1, L2) == MSD", mismatches == 0, f"100 datasets, {mismatches} mismatches (exact rationals)")
