"""Pseudo-arclength continuation driver and branch bookkeeping."""

from dataclasses import dataclass, field as dc_field
from typing import Optional

import numpy as np

from .errors import CorrectorError, TargetRangeError
from .models import get_model
from .profile_solver import (
    ContinuationPoint,
    constrained_newton,
    fixed_c_newton,
    jacobian,
    newton_correct,
    tangent_solve,
)
from .transforms import CosineGrid, evaluate_series, forward_cosine

STOP_AMPLITUDE_BOUND = "AMPLITUDE_BOUND"
STOP_MAX_HEIGHT = "MAX_HEIGHT"
STOP_MAX_STEPS = "MAX_STEPS"
STOP_CORRECTOR_FAILURE = "CORRECTOR_FAILURE"
STOP_FOLD_COUNT = "FOLD_COUNT"


@dataclass
class ContinuationConfig:
    kappa: float
    n_points: int = 256
    step: float = 0.001
    eps0: float = 1e-5
    max_steps: int = 200_000
    newton_tol: float = 1e-10
    max_newton_iter: int = 25
    max_halvings: int = 6
    successes_to_restore: int = 5
    # Stop when max profile value reaches (1 - delta) times the model bound.
    bound_standoff: float = 1e-3
    max_height: Optional[float] = None
    # Stop after this many turning points, if set.
    fold_stop: Optional[int] = None

    def __post_init__(self):
        if self.step <= 0:
            raise ValueError("step must be positive")
        if self.eps0 <= 0:
            raise ValueError("eps0 must be positive")
        if self.n_points < 16:
            raise ValueError("n_points must be at least 16")

    def grid(self):
        return CosineGrid(self.kappa, self.n_points)


@dataclass
class Branch:
    model_id: str
    kappa: float
    n_points: int
    points: list = dc_field(default_factory=list)
    summaries: list = dc_field(default_factory=list)  # dicts per point
    stop_reason: str = STOP_MAX_STEPS

    @property
    def heights(self):
        return np.array([s["waveheight"] for s in self.summaries])

    @property
    def speeds(self):
        return np.array([s["c"] for s in self.summaries])

    def fold_indices(self):
        """Indices where the tangent's wavespeed component changes sign."""
        dc = np.array([s["tangent_dc"] for s in self.summaries])
        sign = np.sign(dc)
        sign[sign == 0] = 1
        return list(np.nonzero(sign[1:] != sign[:-1])[0] + 1)


def waveheight(values, grid):
    """max - min of the truncated series, endpoints x = 0, pi/kappa included.

    The collocation nodes exclude the interval endpoints where even
    monotone profiles attain their extrema, so the series is also
    evaluated there.
    """
    coeffs = forward_cosine(values, grid)
    end0 = float(np.sum(coeffs.coeffs))
    end1 = float(np.sum(coeffs.coeffs * (-1.0) ** np.arange(len(coeffs.coeffs))))
    hi = max(np.max(values), end0, end1)
    lo = min(np.min(values), end0, end1)
    return hi - lo


def _summary(point, grid, tangent_dc):
    return {
        "c": point.c,
        "waveheight": waveheight(point.values, grid),
        "max": float(np.max(point.values)),
        "min": float(np.min(point.values)),
        "tangent_dc": float(tangent_dc),
        "residual": point.residual_norm,
    }


def seed_branch(model, config):
    """Initial point and unit tangent from the model's local expansion.

    The seed profile is corrected onto the discrete curve at fixed
    wavespeed c(eps0); the tangent is the normalized eps-derivative of
    the expansion.
    """
    grid = config.grid()
    seed = model.seed(config.kappa, eps0=config.eps0)
    eps = config.eps0
    c0 = seed.c_of_eps(eps)
    v0 = seed.profile_of_eps(grid.points, eps)
    point = fixed_c_newton(model, c0, v0, grid,
                           tol=config.newton_tol, max_iter=config.max_newton_iter)
    z = np.concatenate([[seed.dc_deps(eps)], seed.dprofile_deps(grid.points, eps)])
    z = z / np.linalg.norm(z)
    return point, z


def _stop_reason(model, config, summary):
    if model.termination_bound is not None:
        bound = model.termination_bound(summary["c"])
        if summary["max"] >= (1.0 - config.bound_standoff) * bound:
            return STOP_AMPLITUDE_BOUND
    max_height = config.max_height
    if max_height is None:
        max_height = model.default_max_height
    if max_height is not None and summary["waveheight"] >= max_height:
        return STOP_MAX_HEIGHT
    return None


def continue_branch(model, config):
    """Trace a bifurcation branch by predictor/corrector stepping.

    Steps are halved on corrector failure (up to config.max_halvings)
    and restored after a run of successes; folds are traversed thanks to
    the tangent orientation condition.
    """
    grid = config.grid()
    branch = Branch(model_id=model.id, kappa=config.kappa, n_points=config.n_points)
    point, z = seed_branch(model, config)
    branch.points.append(point)
    branch.summaries.append(_summary(point, grid, z[0]))

    reason = _stop_reason(model, config, branch.summaries[-1])
    if reason is not None:
        branch.stop_reason = reason
        return branch

    h = config.step
    halvings = 0
    successes = 0
    folds = 0
    for _ in range(config.max_steps):
        y_pred = point.y + h * z
        try:
            new_point = newton_correct(model, grid, z, y_pred,
                                       tol=config.newton_tol,
                                       max_iter=config.max_newton_iter)
            z_new = tangent_solve(
                jacobian(model, new_point.c, new_point.values, grid), z)
        except CorrectorError as exc:
            if halvings >= config.max_halvings:
                branch.stop_reason = STOP_CORRECTOR_FAILURE
                branch.failure = exc
                return branch
            h *= 0.5
            halvings += 1
            successes = 0
            continue

        if z_new[0] * z[0] < 0:
            folds += 1
        point, z = new_point, z_new
        branch.points.append(point)
        branch.summaries.append(_summary(point, grid, z[0]))

        successes += 1
        if halvings > 0 and successes >= config.successes_to_restore:
            h = min(2.0 * h, config.step)
            if h == config.step:
                halvings = 0
            successes = 0

        reason = _stop_reason(model, config, branch.summaries[-1])
        if reason is not None:
            branch.stop_reason = reason
            return branch
        if config.fold_stop is not None and folds >= config.fold_stop:
            branch.stop_reason = STOP_FOLD_COUNT
            return branch

    branch.stop_reason = STOP_MAX_STEPS
    return branch


def _height_row(values, grid):
    """Linear functional r with r . values = waveheight near this profile.

    Uses the series-evaluation rows at the arg-max/arg-min locations
    among the grid nodes and the interval endpoints.
    """
    coeffs = forward_cosine(values, grid)
    xs = np.concatenate([[0.0], grid.points, [np.pi / grid.kappa]])
    vals = evaluate_series(coeffs, xs)
    x_hi = xs[int(np.argmax(vals))]
    x_lo = xs[int(np.argmin(vals))]
    n = np.arange(grid.n_points)
    from .transforms import _cos_matrix, _weights

    fwd = _weights(grid.n_points)[:, None] * _cos_matrix(grid.n_points)
    row_hi = np.cos(n * grid.kappa * x_hi) @ fwd
    row_lo = np.cos(n * grid.kappa * x_lo) @ fwd
    return row_hi - row_lo


def sample_branch(branch, targets, model=None, newton_tol=1e-10):
    """Extract branch points at given waveheights.

    For each target the nearest accepted point is refined by one Newton
    solve in which the arclength constraint is replaced by a fixed
    waveheight constraint.
    """
    if model is None:
        model = get_model(branch.model_id)
    grid = CosineGrid(branch.kappa, branch.n_points)
    heights = branch.heights
    lo, hi = float(np.min(heights)), float(np.max(heights))
    out = []
    for target in np.atleast_1d(targets):
        if not (lo <= target <= hi):
            raise TargetRangeError(
                f"waveheight {target} outside attainable range [{lo:.6g}, {hi:.6g}]",
                attainable=(lo, hi))
        idx = int(np.argmin(np.abs(heights - target)))
        point = branch.points[idx]
        if abs(heights[idx] - target) == 0.0:
            out.append(point)
            continue
        row = np.concatenate([[0.0], _height_row(point.values, grid)])
        refined = constrained_newton(model, grid, row, float(target), point.y,
                                     tol=newton_tol)
        out.append(refined)
    return out
