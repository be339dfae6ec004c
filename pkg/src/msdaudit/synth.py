"""Finite populations on {0,1}^n with a planted discrepant subgroup.

Cells are indexed little-endian: bit ``j`` of the cell index is feature ``j``.
Probabilities are kept exact as integer numerators over one common
denominator.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from .dataset import BinaryDataset
from .terms import Term

# populations up to this width are checked against exhaustive term enumeration
VERIFY_MAX_FEATURES = 12


def _frac(x) -> Fraction:
    return Fraction(str(x)) if isinstance(x, float) else Fraction(x)


def cell_bits(n: int, cells: np.ndarray | None = None) -> np.ndarray:
    """0/1 matrix of the given cell indices (all ``2**n`` cells by default)."""
    if cells is None:
        cells = np.arange(2**n, dtype=np.int64)
    return ((np.asarray(cells)[:, None] >> np.arange(n)) & 1).astype(np.uint8)


@dataclass(frozen=True)
class Population:
    n: int
    mu_num: np.ndarray
    nu_num: np.ndarray
    denom: int
    planted: Term
    m: Fraction
    gamma: Fraction
    seed: int | None
    true_msd: Fraction
    true_argmax: Term

    def mass(self, term: Term) -> tuple[Fraction, Fraction]:
        """Exact ``(mu(S), nu(S))``."""
        inside = term.mask(cell_bits(self.n))
        return (
            Fraction(int(self.mu_num[inside].sum()), self.denom),
            Fraction(int(self.nu_num[inside].sum()), self.denom),
        )

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "planted": self.planted.to_list(),
            "m": str(self.m),
            "gamma": str(self.gamma),
            "seed": self.seed,
        }

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_json(), indent=2) + "\n")

    @classmethod
    def from_json(cls, doc: dict) -> "Population":
        return plant(
            doc["n"],
            Term.from_list(doc["planted"]),
            Fraction(doc["m"]),
            Fraction(doc["gamma"]),
            seed=doc.get("seed"),
        )

    @classmethod
    def load(cls, path) -> "Population":
        return cls.from_json(json.loads(Path(path).read_text()))


def exhaustive_msd(n: int, mu_num: np.ndarray, nu_num: np.ndarray) -> tuple[int, Term]:
    """Largest ``|mu(S) - nu(S)|`` numerator over all ``3**n`` terms, with its canonical term."""
    from .solver import term_table

    # C-order reshape puts the most significant bit first; flip so axis j is feature j
    shape = (2,) * n
    a = np.asarray(mu_num, dtype=object).reshape(shape).transpose(tuple(range(n))[::-1])
    b = np.asarray(nu_num, dtype=object).reshape(shape).transpose(tuple(range(n))[::-1])
    gap = term_table(a) - term_table(b)
    absgap = np.abs(gap)
    top = absgap.max()
    best = None
    for idx in np.argwhere(absgap == top):
        lits = tuple((j, s == 1) for j, s in enumerate(idx.tolist()) if s != 2)
        t = Term(lits)
        if best is None or t.sort_key() < best.sort_key():
            best = t
    return int(top), best


def plant(
    n: int,
    planted: Term | None = None,
    m=Fraction(3, 20),
    gamma=Fraction(1, 2),
    seed: int | None = None,
    k: int = 4,
) -> Population:
    """Population whose largest subgroup gap is ``gamma * m`` on ``planted``.

    ``mu`` spreads mass ``m`` uniformly over the planted subgroup's cells and
    ``1 - m`` uniformly over the rest. ``nu`` scales the subgroup cells by
    ``1 - gamma`` and hands the removed ``gamma * m`` to the outside cells in
    proportion to their ``mu`` mass. When ``planted`` is omitted, ``k``
    distinct features with random polarities are drawn using ``seed``.
    """
    m, gamma = _frac(m), _frac(gamma)
    if not 0 < m < 1:
        raise ValueError("subgroup mass m must lie in (0, 1)")
    if not 0 <= gamma <= 1:
        raise ValueError("gamma must lie in [0, 1]")
    if planted is None:
        if not 0 <= k <= n:
            raise ValueError("need 0 <= k <= n")
        rng = np.random.default_rng(seed)
        feats = sorted(rng.choice(n, size=k, replace=False).tolist())
        planted = Term(tuple((f, bool(rng.integers(2))) for f in feats))
    if any(f >= n for f in planted.features):
        raise ValueError(f"planted term uses features outside 0..{n - 1}")
    if len(planted) == 0:
        raise ValueError("planted term must have at least one literal")

    inside = planted.mask(cell_bits(n))
    n_in = int(inside.sum())
    n_out = 2**n - n_in
    mu_in, mu_out = m / n_in, (1 - m) / n_out
    nu_in, nu_out = (1 - gamma) * m / n_in, (1 - m + gamma * m) / n_out
    denom = math.lcm(*(f.denominator for f in (mu_in, mu_out, nu_in, nu_out)))
    dtype = np.int64 if denom < 2**62 // 2**n else object

    def numerators(v_in, v_out):
        out = np.full(2**n, int(v_out * denom), dtype=dtype)
        out[inside] = int(v_in * denom)
        return out

    mu_num, nu_num = numerators(mu_in, mu_out), numerators(nu_in, nu_out)
    assert sum(int(v) for v in mu_num) == denom and sum(int(v) for v in nu_num) == denom

    true_msd = gamma * m
    if gamma == 0:
        argmax = Term()
    elif len(planted) == 1:
        # the complement of a one-literal subgroup ties; canonical order keeps the positive literal
        argmax = Term(((planted.literals[0][0], True),))
    else:
        argmax = planted
    if n <= VERIFY_MAX_FEATURES:
        top, found = exhaustive_msd(n, mu_num, nu_num)
        if Fraction(top, denom) != true_msd or found != argmax:
            raise AssertionError(
                f"construction check failed: enumeration gives {Fraction(top, denom)} at {found}"
            )
    return Population(n, mu_num, nu_num, denom, planted, m, gamma, seed, true_msd, argmax)


def sample(pop: Population, n_mu: int, n_nu: int, seed: int | None = None) -> BinaryDataset:
    """I.i.d. draws of ``n_mu`` rows from ``mu`` and ``n_nu`` rows from ``nu``."""
    if n_mu < 1 or n_nu < 1:
        raise ValueError("both sample counts must be >= 1")
    rng = np.random.default_rng(seed)
    p_mu = np.array([int(v) for v in pop.mu_num], dtype=float) / pop.denom
    p_nu = np.array([int(v) for v in pop.nu_num], dtype=float) / pop.denom
    cells_mu = rng.choice(2**pop.n, size=n_mu, p=p_mu / p_mu.sum())
    cells_nu = rng.choice(2**pop.n, size=n_nu, p=p_nu / p_nu.sum())
    return BinaryDataset.from_groups(
        cell_bits(pop.n, cells_mu),
        cell_bits(pop.n, cells_nu),
        tuple(f"f{j}" for j in range(pop.n)),
    )
