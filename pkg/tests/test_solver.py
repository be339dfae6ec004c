import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from conftest import random_dataset
from msdaudit import (
    BinaryDataset,
    InfeasibleError,
    SolverConfig,
    Term,
    TooManyFeaturesError,
    classification_losses,
    enumerate_exact,
    solve,
)

ONE = SolverConfig(min_support=1, time_limit=None)


def naive(data, min_support=1, direction=0):
    """Textbook brute force: every term, Fraction arithmetic, explicit tie-break."""
    n1, n2 = data.n_mu, data.n_nu
    mu, nu = data.mu_rows, data.nu_rows
    best = None
    for states in itertools.product((None, True, False), repeat=data.n_features):
        t = Term(tuple((j, s) for j, s in enumerate(states) if s is not None))
        a, b = int(t.mask(mu).sum()), int(t.mask(nu).sum())
        if a + b < min_support:
            continue
        d = Fraction(a, n1) - Fraction(b, n2)
        v = abs(d) if direction == 0 else d * direction
        cand = (-v, t.sort_key(), d, t)
        if best is None or cand[:2] < best[:2]:
            best = cand
    return best[2], best[3]


def test_toy_example(toy):
    for fn in (solve, enumerate_exact):
        r = fn(toy, ONE)
        assert r.msd_exact == Fraction(1, 2)
        assert r.msd == 0.5 and r.signed_discrepancy == 0.5
        assert r.best_term == Term.of({0: True})
        assert (r.support_mu, r.support_nu) == (3, 1)
        assert r.proven_optimal
    assert naive(toy) == (Fraction(1, 2), Term.of({0: True}))


def test_identical_multisets_give_empty_term():
    rows = [[1, 0, 1], [0, 0, 1], [1, 1, 1]]
    d = BinaryDataset.from_groups(rows, rows[::-1])
    for fn in (solve, enumerate_exact):
        r = fn(d, ONE)
        assert r.msd == 0 and r.best_term == Term()


def test_enumeration_visits_all_terms(toy):
    assert enumerate_exact(toy, ONE).nodes_explored == 9
    assert enumerate_exact(toy, SolverConfig(min_support=1, negations=False)).nodes_explored == 4


def test_full_support_forces_empty_term(toy):
    cfg = SolverConfig(min_support=toy.n_samples)
    for fn in (solve, enumerate_exact):
        r = fn(toy, cfg)
        assert r.best_term == Term() and r.msd == 0


def test_errors(toy):
    with pytest.raises(InfeasibleError):
        solve(toy, SolverConfig(min_support=9))
    with pytest.raises(ValueError):
        SolverConfig(min_support=0)
    wide = BinaryDataset.from_groups(np.zeros((1, 21)), np.ones((1, 21)))
    with pytest.raises(TooManyFeaturesError, match="solve"):
        enumerate_exact(wide, ONE)


def test_time_limit_returns_incumbent():
    d = random_dataset(np.random.default_rng(1), 12, 400)
    r = solve(d, SolverConfig(min_support=1, time_limit=0.0))
    assert not r.proven_optimal
    assert r.best_term == Term()


def test_classification_losses_examples(toy):
    assert classification_losses(toy, ONE) == (Fraction(1, 2), Fraction(1, 2))
    rows = [[0, 1], [1, 1]]
    assert classification_losses(BinaryDataset.from_groups(rows, rows), ONE) == (1, 1)
    # nu piles onto (1,1) while mu is spread over all four cells
    d = BinaryDataset.from_groups([[0, 0], [0, 1], [1, 0], [1, 1]], [[1, 1]] * 4)
    L1, L2 = classification_losses(d, ONE)
    assert (L1, L2) == (1 - naive(d, direction=1)[0], 1 + naive(d, direction=-1)[0])
    assert (L1, L2) == (Fraction(1, 2), Fraction(1, 4))
    assert L2 < L1
    assert 1 - min(L1, L2) == solve(d, ONE).msd_exact


def test_enumerate_exact_matches_naive():
    rng = np.random.default_rng(7)
    for _ in range(40):
        d = random_dataset(rng, int(rng.integers(1, 6)), int(rng.integers(2, 40)))
        ms = int(rng.integers(1, 6))
        for direction in (0, 1, -1):
            r = enumerate_exact(d, SolverConfig(min_support=min(ms, d.n_samples)), direction=direction)
            want = naive(d, min(ms, d.n_samples), direction)
            assert (r.signed_exact, r.best_term) == want


def test_chunked_enumeration_matches_solver():
    # 14 features forces the prefix-chunked path of the oracle
    d = random_dataset(np.random.default_rng(3), 14, 300)
    a, b = solve(d, SolverConfig(min_support=5)), enumerate_exact(d, SolverConfig(min_support=5))
    assert (a.numerator, a.best_term) == (b.numerator, b.best_term)
    assert b.nodes_explored == 3**14


datasets = st.builds(
    lambda seed, n, m: random_dataset(np.random.default_rng(seed), n, m),
    st.integers(0, 2**32 - 1),
    st.integers(1, 8),
    st.integers(2, 200),
)
hyp = settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])


@hyp
@given(datasets, st.sampled_from([1, 2, 10]), st.sampled_from([0, 1, -1]))
def test_solver_matches_oracle(d, ms, direction):
    cfg = SolverConfig(min_support=min(ms, d.n_samples), time_limit=None)
    a, b = solve(d, cfg, direction=direction), enumerate_exact(d, cfg, direction=direction)
    assert a.numerator == b.numerator
    assert a.best_term == b.best_term
    assert a.support >= cfg.min_support


@hyp
@given(datasets, st.sampled_from([1, 10]))
def test_pruning_never_changes_the_answer(d, ms):
    cfg = SolverConfig(min_support=min(ms, d.n_samples))
    off = SolverConfig(min_support=cfg.min_support, prune=False)
    a, b = solve(d, cfg), solve(d, off)
    assert (a.numerator, a.best_term) == (b.numerator, b.best_term)
    assert a.nodes_explored <= b.nodes_explored


@hyp
@given(datasets)
def test_label_swap_symmetry_and_range(d):
    a, b = solve(d, ONE), solve(d.swapped(), ONE)
    assert a.msd_exact == b.msd_exact
    assert a.signed_exact == -b.signed_exact
    assert 0 <= a.msd <= 1
    assert a.msd == abs(a.signed_discrepancy)


@hyp
@given(datasets)
def test_determinism(d):
    a, b = solve(d, ONE), solve(d, ONE)
    assert (a.best_term, a.numerator, a.nodes_explored) == (b.best_term, b.numerator, b.nodes_explored)


@hyp
@given(datasets, st.data())
def test_anti_monotone_bound_and_support(d, data):
    n = d.n_features
    states = data.draw(st.lists(st.sampled_from([None, True, False]), min_size=n, max_size=n))
    extra = data.draw(st.lists(st.sampled_from([None, True, False]), min_size=n, max_size=n))
    S = Term(tuple((j, s) for j, s in enumerate(states) if s is not None))
    S2 = Term(tuple((j, s if s is not None else e) for j, (s, e) in enumerate(zip(states, extra))
                    if (s if s is not None else e) is not None))
    mu_S, nu_S = S.mask(d.mu_rows).mean(), S.mask(d.nu_rows).mean()
    mu_S2, nu_S2 = S2.mask(d.mu_rows).mean(), S2.mask(d.nu_rows).mean()
    assert abs(mu_S2 - nu_S2) <= max(mu_S, nu_S) + 1e-15
    assert S2.mask(d.X).sum() <= S.mask(d.X).sum()


@hyp
@given(datasets)
def test_zero_iff_all_feasible_terms_balanced(d):
    r = solve(d, ONE)
    zero_everywhere = naive(d)[0] == 0
    assert (r.msd == 0) == zero_everywhere


def test_duplicate_rows_are_lossless():
    rng = np.random.default_rng(11)
    d = random_dataset(rng, 5, 60)
    doubled = BinaryDataset(np.vstack([d.X, d.X]), np.r_[d.groups, d.groups])
    a, b = solve(d, ONE), solve(doubled, ONE)
    assert a.msd_exact == b.msd_exact and a.best_term == b.best_term
