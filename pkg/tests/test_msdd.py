import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_dataset
from msdaudit import BinaryDataset, SolverConfig, Term, count_terms, enumerate_exact, mass_gap, msdd_enumerate


def test_tv_example(msdd_toy):
    # 9 terms: empty, f0+, f1-, f0+f1- evaluated; f1+, f0+f1+ one-sided;
    # f0-, f0-f1+, f0-f1- have no rows
    r = msdd_enumerate(msdd_toy, "tv", min_support=1)
    assert r.best_distance == 0.5
    assert r.best_term == Term()
    assert r.subgroups_considered == 4
    assert r.subgroups_skipped_one_sided == 2
    assert r.subgroups_skipped_small == 3
    assert r.visited == 9
    assert r.completed


def test_identical_multisets_zero():
    rows = [[0, 1, 1], [1, 1, 0], [1, 0, 0], [1, 1, 0]]
    d = BinaryDataset.from_groups(rows, rows)
    for dist in ("tv", "mmd", "msd"):
        assert msdd_enumerate(d, dist, min_support=1).best_distance == 0


def test_min_support_above_total(msdd_toy):
    r = msdd_enumerate(msdd_toy, "tv", min_support=5)
    assert r.best_distance == 0 and not r.feasible
    assert r.subgroups_skipped_small == 9


def test_unknown_distance(msdd_toy):
    with pytest.raises(ValueError, match="unknown distance"):
        msdd_enumerate(msdd_toy, "wasserstein")


def test_time_limit_flags_incomplete():
    d = random_dataset(np.random.default_rng(0), 8, 100)
    assert not msdd_enumerate(d, "tv", 1, time_limit=0.0).completed


def test_count_terms():
    assert count_terms(0) == 1
    assert count_terms(2) == 9
    assert count_terms(14) == 4_782_969
    assert count_terms(60) == 3**60


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 5), st.integers(2, 80), st.sampled_from([1, 3, 10]))
def test_mass_gap_reduces_to_msd(seed, n, m, ms):
    d = random_dataset(np.random.default_rng(seed), n, m)
    ms = min(ms, d.n_samples)
    r = msdd_enumerate(d, mass_gap, min_support=ms, skip_one_sided=False)
    assert np.isclose(r.best_distance, enumerate_exact(d, SolverConfig(min_support=ms)).msd, atol=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 4), st.integers(2, 60), st.sampled_from(["tv", "mmd", "msd"]))
def test_skip_rules_and_monotone_incumbent(seed, n, m, dist):
    d = random_dataset(np.random.default_rng(seed), n, m)
    seen = []

    def spy(mu, nu, data):
        from msdaudit.msdd import DISTANCES
        v = DISTANCES[dist](mu, nu, data)
        seen.append(v)
        assert len(mu) > 0 and len(nu) > 0 and len(mu) + len(nu) >= 3
        return v

    r = msdd_enumerate(d, spy, min_support=3)
    assert r.best_distance == (max(seen) if seen else 0.0)
    assert r.visited == count_terms(n)
    if r.best_distance > 0:
        mask = r.best_term.mask(d.X)
        assert mask.sum() >= 3
        assert (mask & (d.groups == 0)).any() and (mask & (d.groups == 1)).any()
