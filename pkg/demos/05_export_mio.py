"""
Handing the problem to an external MIP solver
=============================================

The single-term model is written as a CPLEX LP file. Any MIP solver that
reads LP files (HiGHS, CBC, Gurobi, ...) should report the same optimum as
the built-in search. Here we hand it to the ``highspy`` package if present.
"""

import tempfile
from pathlib import Path

from msdaudit import SolverConfig, export_mio, plant, sample, solve

pop = plant(4, None, m=0.3, gamma=0.6, seed=0, k=2)
data = sample(pop, 40, 40, seed=0)
cfg = SolverConfig(min_support=5)

path = Path(tempfile.mkdtemp()) / "msd.lp"
model = export_mio(data, cfg, path, negations=True)
print(f"wrote {path}: {len(model.variables)} variables, {len(model.constraints)} constraints")
print("\n".join(path.read_text().splitlines()[:6]))
print("...")
print("built-in optimum:", solve(data, cfg).msd)

try:
    import highspy
except ImportError:
    print("highspy not installed; solve the LP file with any MIP solver")
else:
    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    h.readModel(str(path))
    h.run()
    print("external optimum:", h.getInfo().objective_function_value)
