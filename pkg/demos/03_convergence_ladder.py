"""
Subsampling ladder
==================

Five seeded subsamples at five geometrically spaced sizes, each solved to
optimality. The CSV written here has one row per (size, seed) and is the
input for a relative-distance plot.
"""

import numpy as np

from msdaudit import SolverConfig, convergence_run, plant, sample, theorem1_epsilon

pop = plant(10, None, m=0.15, gamma=0.5, seed=0)
data = sample(pop, 10_000, 10_000, seed=0)
ladder = convergence_run(data, SolverConfig(min_support=10), seeds=range(5), dataset_name="synth")

for size in ladder.sizes:
    vals = ladder.values(size)
    eps = theorem1_epsilon(data.n_features, size // 2, 0.05)
    print(f"size {size:>6}: mean MSD {np.mean(vals):.4f} +- {np.std(vals):.4f}   bound half-width {eps:.3f}")

print()
print(ladder.to_csv().splitlines()[0])
print(ladder.to_csv().splitlines()[1])
