"""
Auditing a classifier for intersectional bias
=============================================

A toy population: three races crossed with five age bands, 400 people per
cell. The classifier accepts half of every race and half of every age band,
so demographic parity holds on each attribute alone. Inside the grid,
young Blue applicants are never accepted.

We compare the accepted and the rejected populations and ask for the
subgroup whose share differs most between them.
"""

import numpy as np

from msdaudit import RawTable, SolverConfig, encode, fit_encoding, solve, theorem1_epsilon
from msdaudit.dataset import RawColumn

races = ["Blue", "Green", "Red"]
age_mid = [9, 27, 45, 63, 81]           # centres of five 18-year bands on [0, 90]

# accepted count per (race, age band); every row and column accepts 50%
accepted = {
    ("Blue", 0): 0, ("Green", 0): 300, ("Red", 0): 300,
}
for r in races:
    for a in range(1, 5):
        accepted[(r, a)] = 250 if r == "Blue" else 175

race_col, age_col, label = [], [], []
for r in races:
    for a, mid in enumerate(age_mid):
        n_acc = accepted[(r, a)]
        for k in range(400):
            race_col.append(r)
            age_col.append(float(mid))
            label.append(0 if k < n_acc else 1)    # 0 = accepted (mu), 1 = rejected (nu)

# pin the binning range to [0, 90] so the bands line up with 9-year bins
race_col += ["Blue", "Blue"]
age_col += [0.0, 90.0]
label += [0, 1]

table = RawTable(
    (RawColumn("race", "categorical", tuple(race_col)), RawColumn("age", "continuous", tuple(age_col))),
    np.array(label),
    ("accepted", "rejected"),
)

#%%
# Marginal acceptance rates are flat
groups = np.array(label)
for r in races:
    rows = np.array(race_col) == r
    print(f"acceptance rate race={r}: {np.mean(groups[rows] == 0):.3f}")

#%%
# Binarize (one-hot race, 10 equal-width age bins) and search all conjunctions
schema = fit_encoding(table)
data = encode(table, schema)
res = solve(data, SolverConfig(min_support=10))

print()
print("MSD:", round(res.msd, 4), "signed:", round(res.signed_discrepancy, 4))
print("most discrepant subgroup:", schema.describe(res.best_term))
print("support accepted/rejected:", res.support_mu, res.support_nu)
print("proven optimal:", res.proven_optimal, "after", res.nodes_explored, "nodes")

#%%
# With probability 1 - 2*delta the population value is within this of the estimate
eps = theorem1_epsilon(data.n_features, min(data.n_mu, data.n_nu), 0.05)
print(f"deviation bound at delta=0.05: {eps:.4f}")
