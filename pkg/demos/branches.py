"""Trace the global bifurcation branches of all three models.

Each model supports a one-parameter family of even periodic traveling
waves bifurcating from the quiescent state at speed c = sqrt(tanh(k)/k).
This script follows each branch by pseudo-arclength continuation, prints
the speed at a few reference waveheights, and reports where the branch
stops (amplitude bound reached, or a fold in the speed).

Run:  python demos/branches.py
"""

import numpy as np

from biwhitham.continuation import (ContinuationConfig, continue_branch,
                                    sample_branch)
from biwhitham.models import c_bif, get_model

CASES = [
    ("ej", 1.0, (0.15, 0.30, 0.40), 0.55),
    ("hp", 1.611, (0.15, 0.30, 0.50, 1.00), 2.6),
    ("bw", 1.0, (0.14, 0.30, 0.40, 0.50), 0.60),
]

for model_id, kappa, targets, max_height in CASES:
    model = get_model(model_id)
    print(f"\n=== {model_id}  (kappa = {kappa}, onset speed "
          f"{c_bif(kappa):.6f}) ===")
    config = ContinuationConfig(kappa=kappa, n_points=256, step=0.002,
                                max_height=max_height)
    branch = continue_branch(model, config)
    print(f"traced {len(branch.points)} points, stopped because: "
          f"{branch.stop_reason}")
    for point, h in zip(sample_branch(branch, list(targets), model=model),
                        targets):
        print(f"  waveheight {h:5.2f}  ->  c = {point.c:.4f}")
    folds = branch.fold_indices()
    if folds:
        i = folds[0]
        print(f"  first fold at c = {branch.speeds[i]:.5f}, "
              f"height = {branch.heights[i]:.4f}")
