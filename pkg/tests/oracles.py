"""Independent brute-force reference implementations.

Everything here is deliberately written from scratch -- direct
summation, centered differences, per-mode closed forms -- and shares no
code with the library modules it checks.  Slow and obvious on purpose.
"""

import numpy as np
from dataclasses import dataclass, field
from scipy.optimize import brentq


@dataclass
class OracleReport:
    name: str
    max_abs_error: float
    tolerance: float
    metadata: dict = field(default_factory=dict)

    @property
    def passed(self):
        return self.max_abs_error <= self.tolerance


def khat_reference(xi):
    """tanh(xi)/xi by direct formula with a Taylor patch near zero."""
    xi = np.asarray(xi, dtype=float)
    out = np.empty_like(xi)
    small = np.abs(xi) < 1e-4
    x2 = xi[small] ** 2
    out[small] = 1.0 - x2 / 3.0 + (2.0 / 15.0) * x2 ** 2
    out[~small] = np.tanh(xi[~small]) / xi[~small]
    return out


def midpoint_nodes(kappa, n):
    # x_i = (2i - 1) pi / (2 kappa n), i = 1..n
    return (2.0 * np.arange(1, n + 1) - 1.0) * np.pi / (2.0 * kappa * n)


def naive_forward_cosine(values, kappa, n):
    """Cosine coefficients by direct midpoint quadrature, double loop."""
    x = midpoint_nodes(kappa, n)
    coeffs = np.zeros(n)
    for m in range(n):
        s = 0.0
        for i in range(n):
            s += values[i] * np.cos(m * kappa * x[i])
        coeffs[m] = (1.0 if m == 0 else 2.0) * s / n
    return coeffs


def naive_evaluate(coeffs, kappa, x):
    """Direct cosine-series summation."""
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    for m, a in enumerate(coeffs):
        out = out + a * np.cos(m * kappa * x)
    return out


def naive_exp_coeffs(values, kappa, n, n_max):
    """Exponential Fourier coefficients of the even extension.

    f_l = (kappa/2pi) * integral over one period of f(x) e^{-i l kappa x},
    approximated by the midpoint rule on the half period (even symmetry
    makes the result real: f_l = f_{-l}).
    """
    x = midpoint_nodes(kappa, n)
    out = np.zeros(2 * n_max + 1, dtype=complex)
    for j, l in enumerate(range(-n_max, n_max + 1)):
        # even extension: 2 * (1/(2n)) * sum f(x_i) cos(l kappa x_i)
        out[j] = np.sum(values * np.cos(l * kappa * x)) / n
    return out


def fd_jacobian(f, y, step=1e-6):
    """Centered-difference Jacobian, column by column."""
    y = np.asarray(y, dtype=float)
    f0 = np.atleast_1d(f(y))
    jac = np.zeros((f0.size, y.size))
    for j in range(y.size):
        yp = y.copy()
        ym = y.copy()
        yp[j] += step
        ym[j] -= step
        jac[:, j] = (np.atleast_1d(f(yp)) - np.atleast_1d(f(ym))) / (2 * step)
    return jac


def naive_toeplitz_apply(fhat, vec, n):
    """(Tf v)_l = sum_m fhat_{l-m} v_m computed with explicit loops.

    fhat holds indices -2n..2n (length 4n+1), vec holds -n..n.
    """
    out = np.zeros(2 * n + 1, dtype=complex)
    for li, l in enumerate(range(-n, n + 1)):
        for mi, m in enumerate(range(-n, n + 1)):
            out[li] += fhat[(l - m) + 2 * n] * vec[mi]
    return out


def constant_state_eigenvalues(model_id, c, kappa, mu, n_modes,
                               constant=0.0):
    """Spectrum of the linearization about a constant state, one 2x2
    block per Fourier mode, solved with the quadratic formula.

    In the frame moving with speed c the block for mode l is
        [[i k (c - u*),  -(i k) b],
         [-(i k) d,       i k (c - u*)]]
    with k = kappa (mu + l) and model-dependent off-diagonal entries.
    """
    lams = []
    for l in range(-n_modes, n_modes + 1):
        k = kappa * (mu + l)
        kh = float(khat_reference(np.array([k]))[0])
        if model_id in ("ej", "ej-positive"):
            u_star = constant
            eta_star = c * u_star - 0.5 * u_star ** 2
            # u_t = -eta_x - u u_x ; eta_t = -(Ku)_x - (eta u)_x
            prod = (kh + eta_star)
            adv = c - u_star
        elif model_id == "hp":
            eta_star = constant
            # u_t = -K eta_x - u u_x ; eta_t = -u_x - (eta u)_x
            prod = kh * (1.0 + eta_star)
            adv = c
        elif model_id == "bw":
            u_star = constant
            # phi_tt = (K phi)_xx + (phi^2)_xx as a first-order system
            prod = kh + 2.0 * u_star
            adv = c
        else:
            raise ValueError(model_id)
        root = np.sqrt(complex(prod))
        lams.append(1j * k * adv + 1j * k * root)
        lams.append(1j * k * adv - 1j * k * root)
    return np.asarray(lams)


def branch_point_oracle(kappa, n0=1):
    """Positive constant state and speed where the n0-th harmonic
    bifurcates, found by eliminating c and bisecting in the state.

    Conditions: the constant v* solves the profile equation
        c^2 v - (3/2) c v^2 + (1/2) v^3 = v      (K of a constant is 1)
    and the linearization there hits the n0-th cosine mode:
        c^2 - 3 c v + (3/2) v^2 = khat(n0 kappa).
    Subtracting gives c = (1 - kh + v^2) / ((3/2) v).
    """
    kh = float(khat_reference(np.array([n0 * kappa]))[0])

    def residual(v):
        c = (1.0 - kh + v * v) / (1.5 * v)
        return c * c - 1.5 * c * v + 0.5 * v * v - 1.0

    v_star = brentq(residual, 1e-6, 1.0, xtol=1e-14)
    c_star = (1.0 - kh + v_star * v_star) / (1.5 * v_star)
    return c_star, v_star


def ej_quadratic_speed_coefficient(kappa):
    """Coefficient c2 in c(eps) = c_kappa + c2 eps^2 for the small
    zero-state branch with profile eps cos(kappa x) + O(eps^2),
    rebuilt from the solvability conditions at orders eps^2, eps^3."""
    ck = float(np.sqrt(khat_reference(np.array([kappa]))[0]))
    kh2 = float(khat_reference(np.array([2.0 * kappa]))[0])
    # order eps^2: K phi2 - c0^2 phi2 = -(3/2) c0 cos^2(theta)
    a0 = 0.75 * ck / (ck * ck - 1.0)
    a2 = 0.75 * ck / (ck * ck - kh2)
    # order eps^3, cos(theta) mode:
    #   0 = 2 c0 c2 - (3/2) c0 (2 a0 + a2) + 3/8
    return 0.75 * (2.0 * a0 + a2) - 3.0 / (16.0 * ck)
