"""Discretized profile equation: residual, Jacobian, and Newton solves.

The unknown is y = (c, v_1, ..., v_N) with v_i the profile values at the
collocation points.  The residual enforces g(c, v_i) - (K v)(x_i) = 0;
the continuation closes the underdetermined system with a tangent
constraint row.
"""

from dataclasses import dataclass

import numpy as np

from .errors import CorrectorError, TangentError
from .transforms import dispersion_matrix, forward_cosine

NEWTON_TOL = 1e-10
MAX_NEWTON_ITER = 25


@dataclass
class ContinuationPoint:
    """One accepted point on the solution curve."""

    c: float
    values: np.ndarray
    residual_norm: float

    @property
    def y(self):
        return np.concatenate([[self.c], self.values])


def residual(model, c, values, grid):
    """g(c, v) - K_N v at the collocation points."""
    values = grid.check(values)
    return model.g(c, values) - dispersion_matrix(grid) @ values


def jacobian(model, c, values, grid):
    """N x (N+1) Jacobian of the residual in (c, v_1..v_N).

    Column 0 is dg/dc pointwise; the value block is diag(dg/dv) - K_N.
    """
    values = grid.check(values)
    n = grid.n_points
    jac = np.empty((n, n + 1))
    jac[:, 0] = model.dg_dc(c, values)
    jac[:, 1:] = -dispersion_matrix(grid)
    jac[np.arange(n), np.arange(n) + 1] += model.dg_dv(c, values)
    return jac


def fixed_c_newton(model, c, values0, grid, tol=NEWTON_TOL, max_iter=MAX_NEWTON_ITER):
    """Newton in the profile values only, with the wavespeed held fixed."""
    v = np.asarray(values0, dtype=float).copy()
    history = []
    for _ in range(max_iter):
        r = residual(model, c, v, grid)
        rn = np.max(np.abs(r))
        history.append(rn)
        if not np.isfinite(rn):
            raise CorrectorError("fixed-c Newton produced non-finite residual",
                                 last_iterate=v, residual_history=history)
        if rn <= tol:
            return ContinuationPoint(c=float(c), values=v, residual_norm=rn)
        jv = jacobian(model, c, v, grid)[:, 1:]
        v = v + np.linalg.solve(jv, -r)
    raise CorrectorError(
        f"fixed-c Newton failed to reach {tol} in {max_iter} iterations "
        f"(last residual {history[-1]:.3e})",
        last_iterate=v, residual_history=history)


def newton_correct(model, grid, z, y_pred, y_start=None,
                   tol=NEWTON_TOL, max_iter=MAX_NEWTON_ITER):
    """Project a predictor back onto the solution curve.

    Solves f(y) = 0 together with the arclength constraint
    z . (y - y_pred) = 0.  Raises CorrectorError (with the last iterate
    and residual history) on divergence or iteration cap.
    """
    return constrained_newton(model, grid, z, float(z @ y_pred),
                              y_pred if y_start is None else y_start,
                              tol=tol, max_iter=max_iter)


def constrained_newton(model, grid, row, rhs, y_start,
                       tol=NEWTON_TOL, max_iter=MAX_NEWTON_ITER):
    """Newton on [f(y); row . y - rhs] = 0 for an arbitrary linear constraint."""
    y = np.asarray(y_start, dtype=float).copy()
    n = grid.n_points
    aug = np.empty((n + 1, n + 1))
    aug[n, :] = row
    history = []
    for _ in range(max_iter):
        f = residual(model, y[0], y[1:], grid)
        con = row @ y - rhs
        rn = max(np.max(np.abs(f)), abs(con))
        history.append(rn)
        if not np.isfinite(rn):
            raise CorrectorError("corrector produced non-finite residual",
                                 last_iterate=y, residual_history=history)
        if rn <= tol:
            return ContinuationPoint(c=float(y[0]), values=y[1:].copy(),
                                     residual_norm=float(np.max(np.abs(f))))
        aug[:n, :] = jacobian(model, y[0], y[1:], grid)
        rhs_vec = np.concatenate([-f, [-con]])
        try:
            y = y + np.linalg.solve(aug, rhs_vec)
        except np.linalg.LinAlgError as exc:
            raise CorrectorError(f"singular augmented Jacobian: {exc}",
                                 last_iterate=y, residual_history=history)
    raise CorrectorError(
        f"corrector failed to reach {tol} in {max_iter} iterations "
        f"(last residual {history[-1]:.3e})",
        last_iterate=y, residual_history=history)


def tangent_solve(jac, z_prev):
    """Unit tangent from Df z = 0 closed with the orientation row z_prev . z = 1."""
    n1 = jac.shape[1]
    aug = np.empty((n1, n1))
    aug[:-1, :] = jac
    aug[-1, :] = z_prev
    rhs = np.zeros(n1)
    rhs[-1] = 1.0
    try:
        z = np.linalg.solve(aug, rhs)
    except np.linalg.LinAlgError as exc:
        raise TangentError(f"singular tangent system: {exc}")
    nz = np.linalg.norm(z)
    if not np.isfinite(nz) or nz == 0.0:
        raise TangentError("tangent solve returned a degenerate vector")
    z = z / nz
    if z @ z_prev < 0:  # cannot happen with rhs +1, kept as a safety net
        z = -z
    return z


def refine_to_grid(model, point, grid, new_grid, tol=NEWTON_TOL):
    """Re-correct a point on a finer grid at fixed wavespeed.

    The cosine coefficients are zero-padded (spectrally accurate for
    smooth profiles) and polished by a fixed-c Newton solve.
    """
    coeffs = forward_cosine(point.values, grid)
    padded = np.zeros(new_grid.n_points)
    padded[: len(coeffs.coeffs)] = coeffs.coeffs
    from .transforms import CosineCoefficients, inverse_cosine

    values0 = inverse_cosine(CosineCoefficients(new_grid.kappa, padded), new_grid)
    return fixed_c_newton(model, point.c, values0, new_grid, tol=tol)
