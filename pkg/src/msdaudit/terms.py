"""Conjunctive terms over binary literal columns."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np


@dataclass(frozen=True)
class Term:
    """A conjunction of literals.

    ``literals`` holds ``(feature, positive)`` pairs sorted by feature index.
    A positive literal selects rows with ``x[feature] == 1``, a negative one
    rows with ``x[feature] == 0``. The empty term selects every row.
    """

    literals: tuple[tuple[int, bool], ...] = ()

    def __post_init__(self):
        lits = tuple(sorted((int(f), bool(p)) for f, p in self.literals))
        features = [f for f, _ in lits]
        if len(set(features)) != len(features):
            raise ValueError(f"term uses a feature twice: {lits}")
        if any(f < 0 for f in features):
            raise ValueError("feature indices must be non-negative")
        object.__setattr__(self, "literals", lits)

    @classmethod
    def of(cls, mapping: Mapping[int, bool] | Iterable[tuple[int, bool]] = ()) -> "Term":
        items = mapping.items() if isinstance(mapping, Mapping) else mapping
        return cls(tuple(items))

    def __len__(self) -> int:
        return len(self.literals)

    def __iter__(self):
        return iter(self.literals)

    @property
    def features(self) -> tuple[int, ...]:
        return tuple(f for f, _ in self.literals)

    def sort_key(self) -> tuple:
        # fewest literals first, then (feature, positive < negative)
        return (len(self.literals), tuple((f, 0 if p else 1) for f, p in self.literals))

    def mask(self, X: np.ndarray) -> np.ndarray:
        """Boolean row mask of the rows of ``X`` satisfying the term."""
        X = np.asarray(X)
        out = np.ones(X.shape[0], dtype=bool)
        for f, p in self.literals:
            out &= X[:, f] == (1 if p else 0)
        return out

    def extend(self, feature: int, positive: bool) -> "Term":
        return Term(self.literals + ((feature, positive),))

    def to_list(self) -> list[list]:
        return [[f, "+" if p else "-"] for f, p in self.literals]

    @classmethod
    def from_list(cls, items) -> "Term":
        lits = []
        for f, sign in items:
            if sign not in ("+", "-"):
                raise ValueError(f"bad literal polarity {sign!r}")
            lits.append((int(f), sign == "+"))
        return cls(tuple(lits))

    def __str__(self) -> str:
        if not self.literals:
            return "TRUE"
        return " AND ".join(f"x{f}" if p else f"~x{f}" for f, p in self.literals)
