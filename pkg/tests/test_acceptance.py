"""End-to-end acceptance checks.

Each test prints one machine-greppable line:
    [criterion NN] PASS|FAIL: <description>
The heavyweight branches come from the session fixtures in conftest.py.
"""

import functools
import numpy as np
import pytest
from scipy.optimize import brentq

from biwhitham import (
    ContinuationConfig,
    CosineGrid,
    EvolutionState,
    Thresholds,
    assemble_bloch_matrix,
    bloch_eigenvalues,
    c_bif,
    classify,
    continue_branch,
    evolve,
    forward_cosine,
    get_model,
    hausdorff_distance,
    mu_mesh,
    refine_to_grid,
    sample_branch,
    solve_positive_branch_point,
    state_from_point,
    sweep,
    tail_energy,
    waveheight,
    yoshida6_step,
    zero_state_spectrum,
)
from biwhitham.continuation import STOP_AMPLITUDE_BOUND, STOP_MAX_HEIGHT
from biwhitham.errors import BlowUpError
from biwhitham.evolution import EvolutionLog
from biwhitham.stability import critical_kappa_flags

import oracles


def _report(num, desc, checks):
    """checks: list of (ok, detail). Prints the one-line verdict, then
    asserts so a FAIL also fails the test."""
    ok = all(c for c, _ in checks)
    bad = "; ".join(d for c, d in checks if not c)
    line = f"[criterion {num:02d}] {'PASS' if ok else 'FAIL'}: {desc}"
    if bad:
        line += f" -- {bad}"
    print("\n" + line, flush=True)
    assert ok, line


# ---------------------------------------------------------------------
# 1. small-amplitude wavespeed at onset


def test_criterion_01_bifurcation_onset(ej_branch, bw_branch, hp_branch):
    checks = []
    for (branch, _), kappa, label in ((ej_branch, 1.0, "ej"),
                                      (bw_branch, 1.0, "bw"),
                                      (hp_branch, 1.611, "hp")):
        c0 = branch.points[0].c
        ck = c_bif(kappa)
        checks.append((abs(c0 - ck) < 1e-4,
                       f"{label}: onset c {c0:.6f} vs c_kappa {ck:.6f}"))
    # spot values quoted to 4 decimals; the second-model reference speed
    # is quoted at a small but finite wave of height 0.03
    checks.append((abs(c_bif(1.0) - 0.8727) < 1e-4, "c_1 != 0.8727"))
    hp_a = sample_branch(hp_branch[0], [0.03], model=get_model("hp"))[0]
    checks.append((abs(hp_a.c - 0.7569) < 1e-4,
                   f"hp height-0.03 speed {hp_a.c:.5f} vs 0.7569"))
    _report(1, "small-amplitude wavespeed matches sqrt(tanh(k)/k) to 1e-4",
            checks)


# ---------------------------------------------------------------------
# 2. branch waypoints


def test_criterion_02_branch_waypoints(ej_branch, bw_branch, hp_branch):
    cases = [
        (ej_branch, "ej", [(0.15, 0.8595, 2e-3), (0.30, 0.8312, 2e-3),
                           (0.40, 0.8138, 2e-3), (0.49, 0.8051, 2e-2)]),
        (hp_branch, "hp", [(0.15, 0.7528, 3e-3), (0.30, 0.7412, 3e-3),
                           (0.50, 0.7201, 3e-3), (1.00, 0.6759, 3e-3)]),
        (bw_branch, "bw", [(0.14, 0.8662, 2e-3), (0.30, 0.8470, 2e-3),
                           (0.40, 0.8333, 2e-3), (0.50, 0.8237, 2e-3)]),
    ]
    checks = []
    for (branch, _), label, rows in cases:
        model = get_model(label)
        points = sample_branch(branch, [h for h, _, _ in rows], model=model)
        for (h, c_ref, tol), point in zip(rows, points):
            checks.append((abs(point.c - c_ref) < tol,
                           f"{label} h={h}: c {point.c:.5f} vs {c_ref}"))
    _report(2, "branch waypoints (N=256, step 0.001) match reference speeds",
            checks)


# ---------------------------------------------------------------------
# 3. termination behavior


def test_criterion_03_termination(ej_branch, bw_branch, hp_branch):
    checks = []
    for (branch, _), label in ((ej_branch, "ej"), (bw_branch, "bw")):
        model = get_model(label)
        last = branch.points[-1]
        bound = model.termination_bound(last.c)
        peak = np.max(last.values)
        checks.append((branch.stop_reason == STOP_AMPLITUDE_BOUND,
                       f"{label} stop {branch.stop_reason}"))
        # the final accepted step may overshoot the bound by its standoff
        checks.append((0.95 * bound < peak < 1.001 * bound,
                       f"{label} peak {peak:.4f} vs bound {bound:.4f}"))
    branch, config = hp_branch
    folds = branch.fold_indices()
    heights = branch.heights
    big_folds = [i for i in folds if heights[i] > 1.0]
    checks.append((branch.stop_reason == STOP_MAX_HEIGHT,
                   f"hp stop {branch.stop_reason}"))
    checks.append((heights[-1] >= 2.99, f"hp max height {heights[-1]:.3f}"))
    checks.append((len(big_folds) >= 1 and 2.0 < heights[big_folds[0]] < 3.0,
                   "hp fold missing in (2, 3)"))
    checks.append((get_model("hp").termination_bound is None,
                   "hp has an amplitude bound"))
    _report(3, "branches stop at the amplitude bound (first/third models) "
               "or pass a fold and reach height 3 (second model)", checks)


# ---------------------------------------------------------------------
# 4. truncation diagnosis of the second apparent fold


def test_criterion_04_truncation_folds():
    model = get_model("hp")
    first_c = {}
    second_h = {}
    for n in (64, 128, 256, 512):
        config = ContinuationConfig(kappa=1.0, n_points=n, step=0.005,
                                    max_height=16.0, fold_stop=2)
        branch = continue_branch(model, config)
        # ignore the micro-fold the speed makes immediately off onset;
        # the study concerns the large folds of the developed branch
        folds = [i for i in branch.fold_indices()
                 if branch.heights[i] > 0.1]
        if len(folds) >= 1:
            first_c[n] = branch.speeds[folds[0]]
        if len(folds) >= 2:
            second_h[n] = branch.heights[folds[1]]
    checks = []
    fine = [n for n in (128, 256, 512) if n in first_c]
    checks.append((fine == [128, 256, 512],
                   f"folds found only for N in {sorted(first_c)}"))
    if fine == [128, 256, 512]:
        cs = [first_c[n] for n in fine]
        checks.append((max(cs) - min(cs) < 1e-2,
                       f"first-fold speeds {cs} spread > 1e-2"))
        hs = [second_h.get(n, np.inf) for n in fine]
        checks.append((hs[0] < hs[1] < hs[2],
                       f"second-fold heights {hs} not increasing"))
        # the second fold keeps receding with resolution: a truncation
        # artifact, not a feature of the continuous problem
    checks.append((64 not in second_h or second_h[64] < second_h.get(128, np.inf),
                   "coarsest grid breaks the monotone pattern"))
    _report(4, "second apparent fold recedes monotonically with N while "
               "the first fold is resolution-stable to 1e-2", checks)


# ---------------------------------------------------------------------
# 5. positive branch point


def test_criterion_05_branch_point():
    c_star, phi_star = solve_positive_branch_point(1.0, n0=1)
    c_ref, phi_ref = oracles.branch_point_oracle(1.0, n0=1)
    checks = [
        (abs(c_star - 1.11834) < 1e-4, f"c* {c_star:.6f}"),
        (abs(phi_star - 0.15677) < 1e-4, f"phi* {phi_star:.6f}"),
        (abs(c_star - c_ref) < 1e-10, "disagrees with bisection oracle"),
        (abs(phi_star - phi_ref) < 1e-10, "disagrees with bisection oracle"),
    ]
    _report(5, "positive-constant-state branch point at (1.11834, 0.15677)",
            checks)


# ---------------------------------------------------------------------
# 6. critical wavenumbers for modulational instability


def test_criterion_06_critical_wavenumbers():
    # growth threshold 1e-8: the instability band within one part in a
    # thousand of the critical wavenumber peaks near 5e-8
    thr = Thresholds(growth=1e-8)
    checks = []
    for mid, kappas, expect in (("ej", (1.005, 1.008), (False, True)),
                                ("hp", (1.609, 1.611), (False, True))):
        flags = critical_kappa_flags(mid, kappas, (0.01766, 0.01766),
                                     n_modes=64, mu_delta=1e-4, mu_max=0.1,
                                     n_points=256, thresholds=thr)
        for kappa, want in zip(kappas, expect):
            got = flags[kappa]["modulational"]
            checks.append((got == want,
                           f"{mid} kappa={kappa}: modulational {got}, "
                           f"want {want}"))
    _report(6, "modulational flag flips between kappa 1.005/1.008 (first "
               "model) and 1.609/1.611 (second model) at height 0.01766",
            checks)


# ---------------------------------------------------------------------
# 7. instability taxonomy


def test_criterion_07_taxonomy(ej_branch, bw_branch, hp_branch):
    thr = Thresholds()
    mus = mu_mesh(1.0 / 500.0)
    checks = []
    all_sweeps = []
    for (branch, config), label in ((ej_branch, "ej"), (hp_branch, "hp"),
                                    (bw_branch, "bw")):
        model = get_model(label)
        grid = config.grid()
        for h in (0.30, 0.03):
            point = sample_branch(branch, [h], model=model)[0]
            sw = sweep(model, point, grid, mus=mus, n_modes=50)
            flags = classify(sw, thr)
            all_sweeps.append((label, h, flags))
            if h == 0.30:
                checks.append((flags["modulational"],
                               f"{label} h=0.30 not modulational"))
                checks.append((flags["high_frequency"],
                               f"{label} h=0.30 no high-frequency bubble"))
            else:
                checks.append((not flags["high_frequency"],
                               f"{label} h=0.03 flags high_frequency"))
    for label, h, flags in all_sweeps:
        checks.append((not flags["coperiodic"],
                       f"{label} h={h} flags coperiodic"))
    _report(7, "height-0.30 waves are modulationally and high-frequency "
               "unstable; small waves have no bubbles; none are "
               "co-periodically unstable", checks)


# ---------------------------------------------------------------------
# 8. spectral method vs closed forms


def test_criterion_08_ffhm_oracle(ej_branch, bw_branch, hp_branch):
    checks = []
    # (a) trivial state vs closed forms
    grid = CosineGrid(1.0, 64)
    from biwhitham.profile_solver import ContinuationPoint
    point = ContinuationPoint(c=c_bif(1.0), values=np.zeros(64),
                              residual_norm=0.0)
    for mid in ("ej", "hp", "bw"):
        model = get_model(mid)
        worst = 0.0
        for mu in (0.0, 0.17, 0.5):
            lam = bloch_eigenvalues(model, point, grid, mu, 20)
            ref = zero_state_spectrum(mid, point.c, 1.0, mu, 20)
            worst = max(worst, hausdorff_distance(lam, ref))
            ora = oracles.constant_state_eigenvalues(mid, point.c, 1.0,
                                                     mu, 20)
            worst = max(worst, hausdorff_distance(ref, ora))
        checks.append((worst < 1e-10, f"{mid} trivial-state error {worst:.2e}"))
    # (b) translation mode sits in the kernel at mu = 0 for real waves
    for (branch, config), label in ((ej_branch, "ej"), (hp_branch, "hp"),
                                    (bw_branch, "bw")):
        model = get_model(label)
        g = config.grid()
        for point in (branch.points[len(branch.points) // 3],
                      branch.points[2 * len(branch.points) // 3]):
            lam = bloch_eigenvalues(model, point, g, 0.0, 50)
            m = np.min(np.abs(lam))
            checks.append((m < 1e-6,
                           f"{label} translation residual {m:.2e}"))
    # (c) truncation convergence on the window |lambda| <= 1
    branch, config = ej_branch
    model = get_model("ej")
    g = config.grid()
    point = sample_branch(branch, [0.30], model=model)[0]
    lam_a = bloch_eigenvalues(model, point, g, 0.31, 50)
    lam_b = bloch_eigenvalues(model, point, g, 0.31, 120)
    a = lam_a[np.abs(lam_a) <= 1.0]
    b = lam_b[np.abs(lam_b) <= 1.0]
    d = max(np.max(np.min(np.abs(a[:, None] - lam_b[None, :]), axis=1)),
            np.max(np.min(np.abs(b[:, None] - lam_a[None, :]), axis=1)))
    checks.append((d < 1e-3, f"N=50 vs N=120 window distance {d:.2e}"))
    _report(8, "spectra match constant-state closed forms to 1e-10, keep "
               "the translation kernel to 1e-6, and are truncation-"
               "converged to 1e-3 on |lambda| <= 1", checks)


# ---------------------------------------------------------------------
# 9. well-posed evolution: 15 periods of a positive-branch wave


def _psi_height_sampler(branch, config):
    model = get_model("ej-positive")
    grid = config.grid()

    def psi_height(h_phi):
        point = sample_branch(branch, [h_phi], model=model)[0]
        psi = model.companion(point.c, point.values, grid)
        return waveheight(psi, grid), point

    return psi_height


def test_criterion_09_wellposed_evolution(ejp_branch):
    branch, config = ejp_branch
    model = get_model("ej-positive")
    grid = config.grid()
    psi_height = _psi_height_sampler(branch, config)
    h_phi = brentq(lambda h: psi_height(h)[0] - 0.387, 0.20, 0.44,
                   xtol=1e-10)
    point = psi_height(h_phi)[1]
    checks = [(abs(point.c - 1.1698) < 2e-3,
               f"wavespeed {point.c:.5f} vs 1.1698")]

    fine = CosineGrid(config.kappa, 2048)
    point_f = refine_to_grid(model, point, grid, fine)
    state0 = state_from_point(point_f, fine, 4096)
    period = 2.0 * np.pi / (config.kappa * point_f.c)
    t_final = 15.0 * period
    n = int(round(t_final / 0.001))
    dt = t_final / n  # 0.001 up to one part in 10^6, landing exactly on 15T
    state = state0.copy()
    # subdivide the advective stage (the undivided RK4 substep sits on the
    # edge of its stability region at this amplitude and resolution) and
    # damp the top of the spectrum, where a slow grid-edge instability of
    # the splitting otherwise grows out of round-off over this horizon
    stepper = functools.partial(yoshida6_step, n_micro=2)
    evolve(state, t_final=t_final, dt=dt, stepper=stepper, edge_damping=0.05)
    dx = 2.0 * np.pi / (config.kappa * 4096)
    resid = np.sqrt(dx * np.sum((state.eta - state0.eta) ** 2))
    checks.append((resid <= 1e-5,
                   f"surface L2 residual {resid:.2e} after 15 periods"))

    # one-period refinement study: measured composition order 6 +/- 0.3
    coarse_state = state_from_point(point_f, fine, 512)
    states = []
    # step sizes keep k_max * dt below ~2.5: larger steps excite the
    # grid-edge splitting instability and destroy the convergence floor
    ns = [700, 896, 1120, 4480]
    for n_steps in ns:
        s = coarse_state.copy()
        dt_i = period / n_steps
        for _ in range(n_steps):
            yoshida6_step(s, dt_i, n_micro=8)
        states.append(s)
    dts = [period / n_steps for n_steps in ns[:-1]]
    es = [np.sqrt(np.sum((s.u - states[-1].u) ** 2)
                  + np.sum((s.eta - states[-1].eta) ** 2)) for s in states[:-1]]
    slope = np.polyfit(np.log(dts), np.log(es), 1)[0]
    checks.append((5.7 <= slope <= 6.3, f"splitting order {slope:.2f}"))
    _report(9, "positive wave travels 15 periods with surface residual "
               "<= 1e-5 at dt=0.001; refinement slope 6 +/- 0.3", checks)


# ---------------------------------------------------------------------
# 10. ill-posed evolution: short-wave energy blow-up


def test_criterion_10_illposed_evolution():
    model = get_model("ej")
    config = ContinuationConfig(kappa=1.0, n_points=2048, eps0=0.000625)
    from biwhitham.continuation import seed_branch
    point, _ = seed_branch(model, config)
    grid = config.grid()
    eta = model.companion(point.c, point.values, grid)
    checks = [(abs(point.c - 0.872693) < 1e-5, f"c {point.c:.6f}"),
              (abs(waveheight(eta, grid) - 0.00109) < 5e-5,
               f"surface height {waveheight(eta, grid):.6f}")]

    state = state_from_point(point, grid, 4096)
    dx = 2.0 * np.pi / 4096.0
    dt = 0.6536 * dx
    tail0 = max(tail_energy(state, 0.25),
                1e-32 * (np.sum(state.u ** 2) + np.sum(state.eta ** 2)))
    log = EvolutionLog(tail_fraction=0.25)
    try:
        evolve(state, t_final=2.55, dt=dt, log_every=25, log=log)
    except BlowUpError:
        pass
    tails = np.asarray(log.tail, dtype=float)
    times = np.asarray(log.times, dtype=float)
    grown = np.isfinite(tails) & (tails >= 1e6 * tail0)
    t_hit = times[grown][0] if np.any(grown) else np.inf
    checks.append((t_hit < 2.55,
                   f"tail energy never grew 1e6-fold before t=2.55"))
    _report(10, "tiny zero-branch wave blows up in the spectral tail "
                f"(1e6-fold growth at t={t_hit:.3f} < 2.55)", checks)


# ---------------------------------------------------------------------
# 11. local expansion of the branch near onset


def test_criterion_11_local_expansion():
    model = get_model("ej")
    config = ContinuationConfig(kappa=1.0, n_points=64, step=2e-5,
                                max_height=2.3e-3)
    branch = continue_branch(model, config)
    grid = config.grid()
    ck = c_bif(1.0)
    eps = []
    dc = []
    for point in branch.points:
        a1 = forward_cosine(point.values, grid).coeffs[1]
        if 1e-5 <= a1 <= 1e-3:
            eps.append(a1)
            dc.append(point.c - ck)
    eps = np.asarray(eps)
    dc = np.asarray(dc)
    slope = np.polyfit(eps ** 2, dc, 1)[0]
    c2_ref = oracles.ej_quadratic_speed_coefficient(1.0)
    rel = abs(slope - c2_ref) / abs(c2_ref)
    checks = [(len(eps) > 20, f"only {len(eps)} points in the window"),
              (rel < 0.01,
               f"fitted c2 {slope:.6f} vs analytic {c2_ref:.6f} "
               f"(rel err {rel:.2%})")]
    _report(11, "fitted quadratic speed coefficient matches the local "
                "expansion to 1%", checks)
