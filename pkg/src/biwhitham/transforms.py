"""Nonlocal dispersion symbol and the cosine-collocation transform pair.

Even 2*pi/kappa-periodic profiles are represented by truncated cosine
series sampled at midpoint collocation nodes on the half period
[0, pi/kappa].  The transforms here are exact inverses of each other on
the truncated space, and the dispersion operator acts diagonally on the
cosine coefficients.
"""

from functools import lru_cache

import numpy as np
import scipy.fft

from .errors import ResolutionError, ShapeError

# Below this the direct tanh(xi)/xi evaluation loses digits to 0/0.
_SERIES_CUTOFF = 1e-4


def khat(xi):
    """Dispersion symbol tanh(xi)/xi, extended by its limit 1 at xi = 0.

    Even, strictly decreasing on [0, inf), with values in (0, 1].
    Accepts scalars or arrays.
    """
    xi = np.asarray(xi, dtype=float)
    out = np.empty_like(xi)
    small = np.abs(xi) < _SERIES_CUTOFF
    xs = xi[small]
    out[small] = 1.0 - xs * xs / 3.0 + 2.0 * xs ** 4 / 15.0
    xb = xi[~small]
    out[~small] = np.tanh(xb) / xb
    if out.ndim == 0:
        return float(out)
    return out


class CosineGrid:
    """Midpoint collocation grid x_i = (2i-1)*pi/(2*kappa*N) on [0, pi/kappa]."""

    def __init__(self, kappa, n_points):
        if kappa <= 0:
            raise ValueError(f"kappa must be positive, got {kappa}")
        if n_points < 1:
            raise ValueError(f"n_points must be >= 1, got {n_points}")
        self.kappa = float(kappa)
        self.n_points = int(n_points)
        i = np.arange(1, self.n_points + 1)
        self.points = (2 * i - 1) * np.pi / (2 * self.kappa * self.n_points)

    def __repr__(self):
        return f"CosineGrid(kappa={self.kappa}, n_points={self.n_points})"

    def check(self, values):
        values = np.asarray(values, dtype=float)
        if values.shape != (self.n_points,):
            raise ShapeError(
                f"expected {self.n_points} grid values, got shape {values.shape}"
            )
        return values


@lru_cache(maxsize=32)
def _cos_matrix(n):
    """C[k, i] = cos(k*pi*(2i-1)/(2n)); independent of kappa."""
    k = np.arange(n)[:, None]
    i = np.arange(1, n + 1)[None, :]
    return np.cos(k * (2 * i - 1) * np.pi / (2 * n))


@lru_cache(maxsize=32)
def _sin_matrix(n):
    """S[k, i] = sin(k*pi*(2i-1)/(2n)); used for spectral differentiation."""
    k = np.arange(n)[:, None]
    i = np.arange(1, n + 1)[None, :]
    return np.sin(k * (2 * i - 1) * np.pi / (2 * n))


def _weights(n):
    w = np.full(n, 2.0 / n)
    w[0] = 1.0 / n
    return w


class CosineCoefficients:
    """Coefficients c(0..N-1) of a truncated series sum c(n) cos(n*kappa*x)."""

    def __init__(self, kappa, coeffs):
        self.kappa = float(kappa)
        self.coeffs = np.asarray(coeffs, dtype=float)

    def __len__(self):
        return len(self.coeffs)

    def __repr__(self):
        return f"CosineCoefficients(kappa={self.kappa}, n={len(self.coeffs)})"


def forward_cosine(values, grid, fast=False):
    """Midpoint-quadrature cosine coefficients of grid values.

    c(n) = w(n) * sum_i values_i cos(n*kappa*x_i) with w(0) = 1/N and
    w(n>=1) = 2/N.  The fast path uses a type-II DCT and matches the
    direct summation to round-off.
    """
    values = grid.check(values)
    n = grid.n_points
    if fast:
        c = scipy.fft.dct(values, type=2) / n
        c[0] *= 0.5
    else:
        c = _weights(n) * (_cos_matrix(n) @ values)
    return CosineCoefficients(grid.kappa, c)


def inverse_cosine(coeffs, grid, fast=False):
    """Evaluate the truncated cosine series at the collocation points."""
    c = np.asarray(coeffs.coeffs, dtype=float)
    if c.shape != (grid.n_points,):
        raise ShapeError(
            f"expected {grid.n_points} coefficients, got shape {c.shape}"
        )
    if fast:
        y = c.copy()
        y[1:] *= 0.5
        return scipy.fft.dct(y, type=3)
    return _cos_matrix(grid.n_points).T @ c


def apply_K(coeffs):
    """Apply the dispersion operator in coefficient space.

    Coefficient n is multiplied by khat(kappa*n); the mean (n = 0) is
    left unchanged since khat(0) = 1.
    """
    n = np.arange(len(coeffs.coeffs))
    return CosineCoefficients(coeffs.kappa, khat(coeffs.kappa * n) * coeffs.coeffs)


@lru_cache(maxsize=32)
def _dispersion_matrix_cached(kappa, n):
    w = _weights(n)
    sym = khat(kappa * np.arange(n))
    c = _cos_matrix(n)
    return c.T @ ((w * sym)[:, None] * c)


def dispersion_matrix(grid):
    """Dense matrix of the discretized dispersion operator on grid values.

    K_N[i, j] = sum_n w(n) khat(kappa*n) cos(n*kappa*x_i) cos(n*kappa*x_j);
    symmetric with eigenvalues khat(kappa*n) in (0, 1].
    """
    return _dispersion_matrix_cached(grid.kappa, grid.n_points)


def evaluate_series(coeffs, x):
    """Evaluate sum_n c(n) cos(n*kappa*x) at arbitrary points x."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    n = np.arange(len(coeffs.coeffs))
    vals = np.cos(np.outer(x, n) * coeffs.kappa) @ coeffs.coeffs
    return vals if vals.size > 1 else float(vals[0])


def derivative_values(coeffs, grid):
    """Values of d/dx of the truncated cosine series at the grid points."""
    c = coeffs.coeffs
    n = np.arange(len(c))
    return -(_sin_matrix(grid.n_points).T @ (n * grid.kappa * c))


def exp_fourier_coeffs(values, grid, n_max):
    """Exponential-basis Fourier coefficients of an even grid function.

    Returns the real array [phihat(-n_max), ..., phihat(n_max)] with
    phihat(n) = (1/N) sum_m values_m cos(n*kappa*x_m) and
    phihat(-n) = phihat(n).  Coefficients with n >= N alias under the
    midpoint quadrature and are refused.
    """
    values = grid.check(values)
    n = grid.n_points
    if n_max >= n:
        raise ResolutionError(
            f"n_max={n_max} exceeds quadrature resolution (need n_max < {n})"
        )
    k = np.arange(n_max + 1)[:, None]
    half = (np.cos(k * grid.kappa * grid.points[None, :]) @ values) / n
    return np.concatenate([half[:0:-1], half])
