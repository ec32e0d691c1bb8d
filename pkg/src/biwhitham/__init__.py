"""Periodic traveling waves of three bidirectional Whitham-type systems.

Cosine-collocation profiles, pseudo-arclength continuation of
bifurcation branches, Fourier-Floquet-Hill stability spectra, and
split-step time evolution of the first system.
"""

from .continuation import (
    Branch,
    ContinuationConfig,
    continue_branch,
    sample_branch,
    seed_branch,
    waveheight,
)
from .errors import (
    BiwhithamError,
    BlowUpError,
    CorrectorError,
    EigenError,
    ResolutionError,
    RootFindError,
    SeedDegenerateError,
    ShapeError,
    SingularInputError,
    TangentError,
    TargetRangeError,
)
from .evolution import (
    EvolutionState,
    evolve,
    l2_error,
    load_state,
    save_state,
    state_from_point,
    tail_energy,
    traveling_reference,
    yoshida6_step,
)
from .models import (
    ModelSpec,
    c_bif,
    gamma_minus,
    gamma_plus,
    get_model,
    solve_positive_branch_point,
)
from .profile_solver import (
    ContinuationPoint,
    fixed_c_newton,
    jacobian,
    refine_to_grid,
    residual,
)
from .stability import (
    SpectrumSlice,
    SpectrumSweep,
    Thresholds,
    assemble_bloch_matrix,
    bloch_eigenvalues,
    classify,
    hausdorff_distance,
    mu_mesh,
    sweep,
    zero_state_spectrum,
)
from .transforms import (
    CosineCoefficients,
    CosineGrid,
    apply_K,
    dispersion_matrix,
    evaluate_series,
    exp_fourier_coeffs,
    forward_cosine,
    inverse_cosine,
    khat,
)

__version__ = "1.0.0"
