"""Stability spectra of small and moderate waves via the Floquet-Hill method.

For a fixed traveling wave the linearized dynamics decompose over a Bloch
parameter mu in [0, 1); each slice is a dense eigenvalue problem built from
Toeplitz blocks of the wave's Fourier coefficients.  A small wave is
spectrally stable (all eigenvalues on the imaginary axis); a moderate wave
shows a modulational instability near the origin at small mu plus
"bubbles" of unstable spectrum away from the origin.

Run:  python demos/spectra.py   (takes a couple of minutes)
"""

import numpy as np

from biwhitham.continuation import (ContinuationConfig, continue_branch,
                                    sample_branch)
from biwhitham.models import get_model
from biwhitham.stability import Thresholds, classify, mu_mesh, sweep

model = get_model("ej")
config = ContinuationConfig(kappa=1.0, n_points=256, step=0.002,
                            max_height=0.35)
branch = continue_branch(model, config)
grid = config.grid()
mus = mu_mesh(1.0 / 500.0)

for h in (0.01, 0.30):
    point = sample_branch(branch, [h], model=model)[0]
    sw = sweep(model, point, grid, mus=mus, n_modes=50)
    flags = classify(sw, Thresholds())
    print(f"\nwaveheight {h}:  c = {point.c:.4f}")
    for key in ("unstable", "modulational", "high_frequency", "coperiodic"):
        print(f"  {key:15s} {flags[key]}")
    print(f"  max growth rate  {flags['max_growth']:.3e}")
    curve = []
    for sl in sw.slices:
        lam = sl.eigenvalues[np.abs(sl.eigenvalues) <= 1.0]  # resolved window
        curve.append((sl.mu, float(np.max(lam.real))))
    top = max(curve, key=lambda t: t[1])
    print(f"  growth curve peaks at mu = {top[0]:.3f}")
