"""Model registry: the three bidirectional Whitham systems behind one interface.

Each model reduces to a scalar profile equation K v = g(c, v) for an even
periodic profile v, with the second field recovered through a companion
map.  A ModelSpec bundles the nonlinearity, its partials, the companion
map, the amplitude bound at which smoothness breaks, the local
bifurcation seed, and the Bloch block assembler used by the stability
module.

Model ids:
  ej          waves of the first system bifurcating from the zero state
  ej-positive same system, bifurcating from the positive constant state
  hp          the full-dispersion shallow-water system (primary field is
              the height profile)
  bw          the Boussinesq-Whitham equation
"""

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import RootFindError, SeedDegenerateError, SingularInputError
from .transforms import CosineGrid, forward_cosine, derivative_values, khat

MODEL_IDS = ("ej", "ej-positive", "hp", "bw")


def c_bif(kappa):
    """Linear bifurcation wavespeed sqrt(tanh(kappa)/kappa)."""
    return np.sqrt(khat(kappa))


@dataclass(frozen=True)
class LocalSeed:
    """Local bifurcation expansion used to seed the continuation."""

    c_of_eps: Callable[[float], float]
    profile_of_eps: Callable[[np.ndarray, float], np.ndarray]
    dc_deps: Callable[[float], float]
    dprofile_deps: Callable[[np.ndarray, float], np.ndarray]
    eps0: float = 1e-5


@dataclass(frozen=True)
class ModelSpec:
    """Scalar profile equation data for one model."""

    id: str
    g: Callable[[float, np.ndarray], np.ndarray]
    dg_dv: Callable[[float, np.ndarray], np.ndarray]
    dg_dc: Callable[[float, np.ndarray], np.ndarray]
    companion: Callable  # (c, values, grid) -> companion values
    termination_bound: Optional[Callable[[float], float]]
    seed: Callable[..., LocalSeed]  # seed(kappa, ...)
    bloch_assembler: Callable  # see stability.assemble_bloch_matrix
    primary_field: str = "u"  # which evolution field the profile values are
    default_max_height: Optional[float] = None
    extra: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# First system (velocity profile primary, height companion)

def _ej_g(c, v):
    v = np.asarray(v, dtype=float)
    return 0.5 * v ** 3 - 1.5 * c * v ** 2 + c * c * v


def _ej_dg_dv(c, v):
    v = np.asarray(v, dtype=float)
    return 1.5 * v ** 2 - 3.0 * c * v + c * c


def _ej_dg_dc(c, v):
    v = np.asarray(v, dtype=float)
    return -1.5 * v ** 2 + 2.0 * c * v


def _ej_companion(c, values, grid=None):
    values = np.asarray(values, dtype=float)
    return c * values - 0.5 * values ** 2


def ej_amplitude_bound(c):
    """Max profile value at which the smoothness bootstrap fails."""
    return c * (1.0 - 1.0 / np.sqrt(3.0))


def ej_local_seed(kappa, eps0=1e-5):
    """Small-amplitude expansion about the zero state of the first system."""
    ck = c_bif(kappa)
    c2k = c_bif(2.0 * kappa)
    d1 = ck * ck - 1.0
    d2 = ck * ck - c2k * c2k
    if abs(d1) < 1e-12 or abs(d2) < 1e-12:
        raise SeedDegenerateError(f"resonant wavenumber kappa={kappa}")
    c_quad = (3.0 / 8.0) * (-0.5 / ck + 3.0 * ck * (1.0 / d1 + 0.5 / d2))

    def c_of_eps(eps):
        return ck + c_quad * eps * eps

    def dc_deps(eps):
        return 2.0 * c_quad * eps

    def profile(x, eps):
        x = np.asarray(x, dtype=float)
        return eps * np.cos(kappa * x) + (0.75 * ck * eps * eps) * (
            1.0 / d1 + np.cos(2.0 * kappa * x) / d2
        )

    def dprofile(x, eps):
        x = np.asarray(x, dtype=float)
        return np.cos(kappa * x) + (1.5 * ck * eps) * (
            1.0 / d1 + np.cos(2.0 * kappa * x) / d2
        )

    return LocalSeed(c_of_eps, profile, dc_deps, dprofile, eps0)


# ---------------------------------------------------------------------------
# Positive constant-state branch of the first system

def gamma_minus(c):
    """Lower positive constant state, the smaller root of the trivial-state
    quadratic; positive for c > 1."""
    return (3.0 * c - np.sqrt(8.0 + c * c)) / 2.0


def gamma_plus(c):
    return (3.0 * c + np.sqrt(8.0 + c * c)) / 2.0


def solve_positive_branch_point(kappa, n0=1, tol=1e-13, max_iter=60):
    """Wavespeed and constant state where the n0-th harmonic branches off.

    Solves the pair
        c^2 - 1 - (3/2) c phi + (1/2) phi^2 = 0
        khat(kappa*n0) - c^2 + 3 c phi - (3/2) phi^2 = 0
    by damped Newton; returns (c_star, phi_star) with both residuals
    below 1e-12.
    """
    if kappa <= 0 or n0 < 1:
        raise ValueError("need kappa > 0 and n0 >= 1")
    k0 = khat(kappa * n0)

    def res(y):
        c, p = y
        return np.array([
            c * c - 1.0 - 1.5 * c * p + 0.5 * p * p,
            k0 - c * c + 3.0 * c * p - 1.5 * p * p,
        ])

    def jac(y):
        c, p = y
        return np.array([
            [2.0 * c - 1.5 * p, -1.5 * c + p],
            [-2.0 * c + 3.0 * p, 3.0 * c - 3.0 * p],
        ])

    y = np.array([1.2, gamma_minus(1.2)])
    r = res(y)
    for _ in range(max_iter):
        if np.max(np.abs(r)) <= tol:
            return float(y[0]), float(y[1])
        step = np.linalg.solve(jac(y), -r)
        lam = 1.0
        while lam > 1e-6:
            y_new = y + lam * step
            r_new = res(y_new)
            if np.max(np.abs(r_new)) < np.max(np.abs(r)):
                break
            lam *= 0.5
        else:
            raise RootFindError("branch-point Newton stalled")
        y, r = y_new, r_new
    if np.max(np.abs(r)) <= 1e-12:
        return float(y[0]), float(y[1])
    raise RootFindError(
        f"branch-point Newton did not converge (residual {np.max(np.abs(r)):.2e})"
    )


def ej_positive_local_seed(kappa, n0=1, eps0=1e-5):
    """Expansion about the positive constant state (phi_*, c_*)."""
    c_star, phi_star = solve_positive_branch_point(kappa, n0)
    denom_q = (
        khat(2.0 * kappa * n0)
        - c_star * c_star
        + 3.0 * c_star * phi_star
        - 1.5 * phi_star * phi_star
    )
    if abs(denom_q) < 1e-12:
        raise SeedDegenerateError(
            f"degenerate second-harmonic denominator at kappa={kappa}, n0={n0}"
        )
    q = 0.75 * (phi_star - c_star) / denom_q
    c_quad = (3.0 - 4.0 * q) / (24.0 * phi_star - 16.0 * c_star)

    def c_of_eps(a):
        return c_star + c_quad * a * a

    def dc_deps(a):
        return 2.0 * c_quad * a

    def profile(x, a):
        x = np.asarray(x, dtype=float)
        return phi_star + a * np.cos(kappa * n0 * x)

    def dprofile(x, a):
        x = np.asarray(x, dtype=float)
        return np.cos(kappa * n0 * x)

    return LocalSeed(c_of_eps, profile, dc_deps, dprofile, eps0)


# ---------------------------------------------------------------------------
# Shallow-water system with full dispersion (height profile primary)

def _hp_check(v):
    v = np.asarray(v, dtype=float)
    if np.any(v == -1.0):
        raise SingularInputError("profile value -1 is a pole of the nonlinearity")
    return v


def _hp_g(c, v):
    v = _hp_check(v)
    return c * c * v / (1.0 + v) - c * c * v ** 2 / (2.0 * (1.0 + v) ** 2)


def _hp_dg_dv(c, v):
    v = _hp_check(v)
    return c * c / (1.0 + v) ** 3


def _hp_dg_dc(c, v):
    v = _hp_check(v)
    return 2.0 * c * v / (1.0 + v) - c * v ** 2 / (1.0 + v) ** 2


def _hp_companion(c, values, grid=None):
    values = _hp_check(values)
    return c * values / (1.0 + values)


def hp_local_seed(kappa, eps0=1e-5):
    """First-order seed; the corrector projects onto the true branch.

    Second-order expansion coefficients for this system are not
    available, so only the linear term is used and dc/deps is seeded
    as zero.
    """
    ck = c_bif(kappa)

    def c_of_eps(eps):
        return ck

    def dc_deps(eps):
        return 0.0

    def profile(x, eps):
        x = np.asarray(x, dtype=float)
        return eps * np.cos(kappa * x)

    def dprofile(x, eps):
        x = np.asarray(x, dtype=float)
        return np.cos(kappa * x)

    return LocalSeed(c_of_eps, profile, dc_deps, dprofile, eps0)


# ---------------------------------------------------------------------------
# Boussinesq-Whitham

def _bw_g(c, v):
    v = np.asarray(v, dtype=float)
    return c * c * v - v ** 2


def _bw_dg_dv(c, v):
    v = np.asarray(v, dtype=float)
    return c * c - 2.0 * v


def _bw_dg_dc(c, v):
    v = np.asarray(v, dtype=float)
    return 2.0 * c * v


def _bw_companion(c, values, grid):
    """Second field -c * v'(x), differentiated spectrally (odd function)."""
    coeffs = forward_cosine(values, grid)
    return -c * derivative_values(coeffs, grid)


def bw_amplitude_bound(c):
    return 0.5 * c * c


def bw_local_seed(kappa, eps0=1e-5):
    ck = c_bif(kappa)
    c2k = c_bif(2.0 * kappa)
    d1 = ck * ck - 1.0
    d2 = ck * ck - c2k * c2k
    if abs(d1) < 1e-12 or abs(d2) < 1e-12:
        raise SeedDegenerateError(f"resonant wavenumber kappa={kappa}")
    bracket = 1.0 / d1 + 1.0 / d2

    def c_of_eps(eps):
        return ck + eps * eps * bracket / (4.0 * ck)

    def dc_deps(eps):
        return eps * bracket / (2.0 * ck)

    def profile(x, eps):
        x = np.asarray(x, dtype=float)
        return eps * np.cos(kappa * x) + 0.5 * eps * eps * bracket * np.cos(
            2.0 * kappa * x
        )

    def dprofile(x, eps):
        x = np.asarray(x, dtype=float)
        return np.cos(kappa * x) + eps * bracket * np.cos(2.0 * kappa * x)

    return LocalSeed(c_of_eps, profile, dc_deps, dprofile, eps0)


# ---------------------------------------------------------------------------
# Bloch block assemblers (Floquet-Bloch matrices for the stability sweep)
#
# uhat/etahat are exponential-basis Fourier coefficient arrays of the
# velocity and height profiles, indexed -2n..2n for truncation
# half-width n; toeplitz(f)[m, l] = fhat(m - l).

def _toeplitz(fhat, n):
    idx = np.arange(-n, n + 1)
    return fhat[idx[:, None] - idx[None, :] + 2 * n]


def ej_bloch_blocks(c, kappa, mu, n, uhat, etahat):
    ls = np.arange(-n, n + 1)
    dl = 1j * kappa * (mu + ls)          # diagonal factor i*kappa*(mu+l)
    dm = 1j * kappa * (mu + ls)[:, None]  # row factor i*kappa*(mu+m)
    phi_t = _toeplitz(uhat, n)
    psi_t = _toeplitz(etahat, n)
    a = np.diag(c * dl) - dm * phi_t
    b = np.diag(-dl)
    cc = -dm * psi_t + np.diag(-dl * khat(kappa * (mu + ls)))
    return a, b, cc, a.copy()


def hp_bloch_blocks(c, kappa, mu, n, uhat, etahat):
    ls = np.arange(-n, n + 1)
    dl = 1j * kappa * (mu + ls)
    dm = 1j * kappa * (mu + ls)[:, None]
    phi_t = _toeplitz(uhat, n)
    psi_t = _toeplitz(etahat, n)
    a = np.diag(c * dl) - dm * phi_t
    b = np.diag(-dl * khat(kappa * (mu + ls)))
    cc = np.diag(-dl) - dm * psi_t
    return a, b, cc, a.copy()


def bw_bloch_blocks(c, kappa, mu, n, uhat, etahat):
    ls = np.arange(-n, n + 1)
    dl = 1j * kappa * (mu + ls)
    sq_m = (kappa * (mu + ls)) ** 2
    phi_t = _toeplitz(uhat, n)
    a = np.diag(c * dl)
    b = np.eye(2 * n + 1, dtype=complex)
    cc = -2.0 * sq_m[:, None] * phi_t + np.diag(
        -sq_m * khat(kappa * (mu + ls))
    )
    return a, b, cc, a.copy()


# ---------------------------------------------------------------------------

_EJ_BASE = dict(
    g=_ej_g,
    dg_dv=_ej_dg_dv,
    dg_dc=_ej_dg_dc,
    companion=_ej_companion,
    termination_bound=ej_amplitude_bound,
    bloch_assembler=ej_bloch_blocks,
    primary_field="u",
)


def get_model(model_id, n0=1):
    """Look up a ModelSpec by its string id."""
    if model_id == "ej":
        return ModelSpec(id="ej", seed=ej_local_seed, **_EJ_BASE)
    if model_id == "ej-positive":
        def seed(kappa, eps0=1e-5):
            return ej_positive_local_seed(kappa, n0=n0, eps0=eps0)
        return ModelSpec(id="ej-positive", seed=seed, extra={"n0": n0}, **_EJ_BASE)
    if model_id == "hp":
        return ModelSpec(
            id="hp",
            g=_hp_g,
            dg_dv=_hp_dg_dv,
            dg_dc=_hp_dg_dc,
            companion=_hp_companion,
            termination_bound=None,
            seed=hp_local_seed,
            bloch_assembler=hp_bloch_blocks,
            primary_field="eta",
            default_max_height=3.0,
        )
    if model_id == "bw":
        return ModelSpec(
            id="bw",
            g=_bw_g,
            dg_dv=_bw_dg_dv,
            dg_dc=_bw_dg_dc,
            companion=_bw_companion,
            termination_bound=bw_amplitude_bound,
            seed=bw_local_seed,
            bloch_assembler=bw_bloch_blocks,
            primary_field="u",
        )
    raise ValueError(f"unknown model id {model_id!r}; expected one of {MODEL_IDS}")
