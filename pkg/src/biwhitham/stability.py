"""Fourier-Floquet-Hill spectra for the linearization about a traveling wave.

The linearized system for a Bloch-wave perturbation with parameter mu in
(-1/2, 1/2] reduces to a (4N+2) x (4N+2) generalized eigenvalue problem
built from four (2N+1) x (2N+1) blocks that depend on the exponential
Fourier coefficients of the underlying profile pair.
"""

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from typing import Optional

import numpy as np
import numpy.linalg as la

from .errors import EigenError
from .models import get_model
from .transforms import CosineGrid, exp_fourier_coeffs, forward_cosine, khat


@dataclass(frozen=True)
class Thresholds:
    """Classification cutoffs for the swept spectrum."""

    growth: float = 1e-6      # Re(lambda) above this counts as unstable
    origin_radius: float = 0.05   # "near the origin" ball for modulational modes
    mu_modulational: float = 0.1  # |mu| below this counts as long-wave
    translation: float = 1e-5     # |lambda| below this is the symmetry mode
    lambda_max: float = 1.0       # only eigenvalues in this ball are classified;
    # outside it, truncation-edge modes need not converge (their real parts
    # can grow linearly with n_modes when the short-wave symbol loses
    # ellipticity), so flags are only meaningful on the resolved window


def _hill_truncation(values, grid, n_modes):
    """Exponential Fourier coefficients of the profile, indices -2N..2N.

    Products of two truncations with |index| <= N only need convolution
    entries out to 2N, so a single padded array serves all four blocks.
    """
    return exp_fourier_coeffs(values, grid, 2 * n_modes)


def _field_pair(model, point, grid, n_modes):
    """(velocity, height) Fourier data regardless of which field the
    collocation solved for."""
    comp = model.companion(point.c, point.values, grid)
    if model.primary_field == "eta":
        velocity, height = comp, point.values
    else:
        velocity, height = point.values, comp
    return (_hill_truncation(velocity, grid, n_modes),
            _hill_truncation(height, grid, n_modes))


def assemble_bloch_matrix(model, point, grid, mu, n_modes):
    """The (4N+2)^2 Bloch matrix at parameter mu.

    Eigenvalues of this matrix approximate the portion of the spectrum
    carried by perturbations e^{i mu kappa x} times 2pi/kappa-periodic
    functions.
    """
    uhat, etahat = _field_pair(model, point, grid, n_modes)
    a, b, c_blk, d = model.bloch_assembler(point.c, grid.kappa, mu, n_modes,
                                           uhat, etahat)
    return np.block([[a, b], [c_blk, d]])


def bloch_eigenvalues(model, point, grid, mu, n_modes):
    """Eigenvalues at one Bloch parameter, sorted by (real, imag)."""
    mat = assemble_bloch_matrix(model, point, grid, mu, n_modes)
    try:
        lam = la.eigvals(mat)
    except la.LinAlgError as exc:
        raise EigenError(f"eigenvalue iteration failed at mu={mu}", mu=mu) from exc
    order = np.lexsort((lam.imag, lam.real))
    return lam[order]


@dataclass
class SpectrumSlice:
    mu: float
    eigenvalues: np.ndarray

    @property
    def max_growth(self):
        return float(np.max(self.eigenvalues.real))


@dataclass
class SpectrumSweep:
    model_id: str
    kappa: float
    c: float
    n_modes: int
    slices: list = dc_field(default_factory=list)

    @property
    def mus(self):
        return np.array([s.mu for s in self.slices])

    def all_eigenvalues(self):
        return np.concatenate([s.eigenvalues for s in self.slices])

    def growth_curve(self):
        """(mu, max real part) pairs across the sweep."""
        return self.mus, np.array([s.max_growth for s in self.slices])


def mu_mesh(delta=1.0 / 500.0):
    """Uniform Bloch mesh on (-1/2, 1/2], spacing delta, endpoint included."""
    n = int(round(1.0 / delta))
    return -0.5 + delta * np.arange(1, n + 1)


def _slice_worker(args):
    (blocks_fn, c, kappa, mu, n_modes, uhat, etahat) = args
    a, b, c_blk, d = blocks_fn(c, kappa, mu, n_modes, uhat, etahat)
    lam = la.eigvals(np.block([[a, b], [c_blk, d]]))
    order = np.lexsort((lam.imag, lam.real))
    return mu, lam[order]


def sweep(model, point, grid, mus=None, n_modes=50, workers=None):
    """Eigenvalues over a mesh of Bloch parameters.

    The Toeplitz data is computed once; each mu assembles its own matrix.
    Set workers > 1 to farm slices out to a process pool.
    """
    if mus is None:
        mus = mu_mesh()
    uhat, etahat = _field_pair(model, point, grid, n_modes)
    sweep_out = SpectrumSweep(model_id=model.id, kappa=grid.kappa,
                              c=point.c, n_modes=n_modes)
    jobs = [(model.bloch_assembler, point.c, grid.kappa, float(mu), n_modes,
             uhat, etahat) for mu in mus]
    if workers is None:
        workers = min(len(os.sched_getaffinity(0)), 4)
    if workers > 1 and len(jobs) > 8:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for mu, lam in pool.map(_slice_worker, jobs, chunksize=8):
                sweep_out.slices.append(SpectrumSlice(mu=mu, eigenvalues=lam))
    else:
        for job in jobs:
            mu, lam = _slice_worker(job)
            sweep_out.slices.append(SpectrumSlice(mu=mu, eigenvalues=lam))
    sweep_out.slices.sort(key=lambda s: s.mu)
    return sweep_out


def classify(sweep_result, thresholds=Thresholds()):
    """Boolean instability flags from a completed sweep.

    Only eigenvalues inside the resolved window |lambda| <= lambda_max are
    classified; see Thresholds.

    unstable: any eigenvalue with real part above the growth cutoff,
        excluding the zero translation mode at mu = 0.
    modulational: such an eigenvalue close to the origin at small |mu|.
    coperiodic: such an eigenvalue at mu = 0 (same period as the wave).
    high_frequency: unstable away from the origin ("bubble" modes).
    """
    t = thresholds
    unstable = False
    modulational = False
    coperiodic = False
    high_frequency = False
    max_growth = 0.0
    for sl in sweep_result.slices:
        lam = sl.eigenvalues
        keep = (np.abs(lam) > t.translation) & (np.abs(lam) <= t.lambda_max)
        grow = lam.real > t.growth
        bad = lam[keep & grow]
        if bad.size == 0:
            continue
        unstable = True
        max_growth = max(max_growth, float(np.max(bad.real)))
        near = np.abs(bad) < t.origin_radius
        if abs(sl.mu) < t.mu_modulational and np.any(near):
            modulational = True
        if abs(sl.mu) <= 1e-12:
            coperiodic = True
        if np.any(~near):
            high_frequency = True
    return {
        "unstable": unstable,
        "modulational": modulational,
        "coperiodic": coperiodic,
        "high_frequency": high_frequency,
        "max_growth": max_growth,
    }


def zero_state_spectrum(model_id, c, kappa, mu, n_modes, constant=0.0):
    """Closed-form spectrum of the linearization about a constant state.

    About the rest state the curves are
        lambda = i kappa (mu + l) (c +/- sqrt(khat(kappa (mu + l)))).
    For the model branching from a positive constant state (phi_*, psi_*)
    the wavespeed shifts by phi_* and the radicand gains psi_*.
    """
    ell = np.arange(-n_modes, n_modes + 1)
    xi = kappa * (mu + ell)
    if model_id == "ej-positive" and constant != 0.0:
        phi_star = constant
        psi_star = c * phi_star - 0.5 * phi_star**2
        rad = np.sqrt(khat(xi) + psi_star)
        lam = np.concatenate([1j * xi * (c - phi_star + rad),
                              1j * xi * (c - phi_star - rad)])
    else:
        rad = np.sqrt(khat(xi))
        lam = np.concatenate([1j * xi * (c + rad), 1j * xi * (c - rad)])
    order = np.lexsort((lam.imag, lam.real))
    return lam[order]


def hausdorff_distance(a, b):
    """Symmetric Hausdorff distance between two finite point sets in C."""
    a = np.asarray(a).ravel()
    b = np.asarray(b).ravel()
    d = np.abs(a[:, None] - b[None, :])
    return max(float(np.max(np.min(d, axis=1))), float(np.max(np.min(d, axis=0))))


def critical_kappa_flags(model_id, kappas, heights, n_modes=64,
                         mu_delta=1.0 / 2000.0, n_points=256,
                         thresholds=Thresholds(), step=0.001, workers=None,
                         mu_max=None):
    """Modulational-instability flags for small waves at several periods.

    For each kappa a short branch is traced to the requested waveheight
    and the resulting wave's spectrum is swept and classified.  Used to
    bracket the critical wavenumber at which long-wave instability
    switches on.  Set mu_max to restrict the sweep to 0 < mu <= mu_max
    (the spectrum is symmetric in mu, so the positive half suffices).
    """
    from .continuation import ContinuationConfig, continue_branch, sample_branch

    model = get_model(model_id)
    flags = {}
    for kappa, height in zip(np.atleast_1d(kappas), np.atleast_1d(heights)):
        config = ContinuationConfig(kappa=float(kappa), n_points=n_points,
                                    step=step, max_height=float(height))
        branch = continue_branch(model, config)
        point = sample_branch(branch, [float(height)], model=model)[0]
        grid = config.grid()
        mus = mu_mesh(mu_delta)
        if mu_max is not None:
            mus = mus[(mus > 0) & (mus <= mu_max)]
        sw = sweep(model, point, grid, mus=mus, n_modes=n_modes,
                   workers=workers)
        flags[float(kappa)] = classify(sw, thresholds)
    return flags
