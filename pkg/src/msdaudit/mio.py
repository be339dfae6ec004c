"""Mixed-integer model of the single-term discrepancy problem, written as CPLEX LP text.

Variables: ``o`` (objective, free), ``b`` (binary, picks the sign of the
gap), ``z_j`` (binary, literal column ``j`` is in the term) and ``yhat_i``
(continuous in [0, 1], sample ``i`` is covered). Integrality of ``yhat``
follows from the covering constraints.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .dataset import MU, BinaryDataset
from .solver import SolverConfig, _check

_PER_LINE = 8


@dataclass
class Constraint:
    name: str
    coefs: list[tuple[float, str]]
    sense: str
    rhs: float


@dataclass
class MioModel:
    objective: str = "o"
    continuous: list[str] = field(default_factory=list)
    binary: list[str] = field(default_factory=list)
    free: list[str] = field(default_factory=list)
    bounds: dict[str, tuple[float, float]] = field(default_factory=dict)
    constraints: list[Constraint] = field(default_factory=list)
    literal_columns: list[str] = field(default_factory=list)

    @property
    def variables(self) -> list[str]:
        return self.free + self.binary + self.continuous

    def to_lp(self) -> str:
        lines = ["\\ single-term maximum subgroup discrepancy", "Maximize", f" obj: {self.objective}", "Subject To"]
        for c in self.constraints:
            terms = []
            for k, (coef, var) in enumerate(c.coefs):
                sign = "-" if coef < 0 else "+"
                mag = abs(coef)
                body = var if mag == 1 else f"{mag!r} {var}"
                terms.append(body if k == 0 and sign == "+" else f"{sign} {body}")
            # keep lines short; LP readers accept continuation lines
            chunks = [" ".join(terms[k:k + _PER_LINE]) for k in range(0, len(terms), _PER_LINE)]
            lines.append(f" {c.name}: " + "\n   ".join(chunks) + f" {c.sense} {c.rhs!r}")
        lines.append("Bounds")
        for v in self.free:
            lines.append(f" {v} free")
        for v, (lo, hi) in self.bounds.items():
            lines.append(f" {lo!r} <= {v} <= {hi!r}")
        lines.append("Binaries")
        lines.extend(f" {v}" for v in self.binary)
        lines.append("End")
        return "\n".join(lines) + "\n"


def build_mio(data: BinaryDataset, cfg: SolverConfig = SolverConfig(), negations: bool = False) -> MioModel:
    """The model over the dataset's literal columns.

    With ``negations=False`` only positive literals exist, one ``z_j`` per
    column. ``negations=True`` appends a complemented copy of every column
    (``z_j`` for ``j >= n_features`` selects ``x_{j-n} == 0``), which matches
    the literal set :func:`solver.solve` searches by default.
    """
    _check(data, cfg)
    X = data.X.astype(int)
    if negations:
        X = np.hstack([X, 1 - X])
    n, p = X.shape
    is_mu = data.groups == MU
    n_mu, n_nu = data.n_mu, data.n_nu
    y = [f"yhat_{i}" for i in range(n)]
    z = [f"z_{j}" for j in range(p)]

    model = MioModel()
    model.free = ["o"]
    model.binary = ["b", *z]
    model.continuous = y
    model.bounds = {v: (0.0, 1.0) for v in y}
    names = list(data.feature_names)
    model.literal_columns = names + [f"NOT {s}" for s in names] if negations else names

    # gap = mean_mu(yhat) - mean_nu(yhat); o <= gap + 2b and o <= -gap + 2(1 - b)
    gap = [(1.0 / n_mu if is_mu[i] else -1.0 / n_nu, y[i]) for i in range(n)]
    model.constraints.append(Constraint("c_abs1", [(1.0, "o")] + [(-c, v) for c, v in gap] + [(-2.0, "b")], "<=", 0.0))
    model.constraints.append(Constraint("c_abs2", [(1.0, "o")] + list(gap) + [(2.0, "b")], "<=", 2.0))
    # yhat_i <= 1 - (z_j - x_ij z_j)
    for i in range(n):
        for j in range(p):
            model.constraints.append(
                Constraint(f"c_pos_{i}_{j}", [(1.0, y[i]), (float(1 - X[i, j]), z[j])], "<=", 1.0)
            )
    # yhat_i >= 1 - sum_j (z_j - x_ij z_j)
    for i in range(n):
        coefs = [(1.0, y[i])] + [(1.0, z[j]) for j in range(p) if X[i, j] == 0]
        model.constraints.append(Constraint(f"c_neg_{i}", coefs, ">=", 1.0))
    model.constraints.append(Constraint("c_minsize", [(1.0, v) for v in y], ">=", float(cfg.min_support)))
    return model


def export_mio(data: BinaryDataset, cfg: SolverConfig, path, negations: bool = False) -> MioModel:
    """Write the model to ``path`` in LP format and return it."""
    model = build_mio(data, cfg, negations)
    Path(path).write_text(model.to_lp(), encoding="utf-8")
    return model
