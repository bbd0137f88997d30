"""Labeling a dataset by annotating only the selected exemplars.

Selects a handful of exemplars from unlabeled union-of-subspaces data,
reveals the ground-truth labels of just those points, and classifies every
remaining point by its smallest per-class reconstruction residual.
"""

import numpy as np

from subspace_exemplars import (
    LabeledExemplars,
    SubspaceSpec,
    ffs_lazy,
    src_classify,
    synth_union_of_subspaces,
)

spec = SubspaceSpec(ambient_dim=12, subspace_dims=(3, 2, 4),
                    samples_per_subspace=(50, 25, 85), seed=3)
data = synth_union_of_subspaces(spec)
k = sum(spec.subspace_dims)
print(f"{data.count} points from {spec.n_subspaces} subspaces; "
      f"labeling budget k = {k}")

exemplars = ffs_lazy(data, 1e4, k, seed=0)
labeled = LabeledExemplars.from_data(exemplars, data)
print(f"revealed labels: { {i: labeled.class_of[i] for i in labeled.indices} }")

assignment = src_classify(data, labeled, 1e4)
rest = [j for j in range(data.count) if j not in exemplars.indices]
correct = float(np.mean(assignment.labels[rest] == data.labels[rest]))
print(f"non-exemplar points labeled correctly: {100 * correct:.1f}%")

per_class = {c: int(np.sum(data.labels[list(exemplars.indices)] == c))
             for c in range(spec.n_subspaces)}
print(f"exemplars per class: {per_class} "
      f"(subspace dimensions are {spec.subspace_dims})")
