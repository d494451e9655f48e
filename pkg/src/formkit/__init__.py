"""
formkit: numerical checks for representation theorems of sesquilinear forms.

Finite-dimensional forms are Gram matrices; unbounded examples are diagonal
operators whose truncations are exact compressions. Submodules:

``spectral``   polar decomposition, PSD roots, invertibility verdicts
``forms``      forms, metric representations, solvability, second representation
``diagonal``   sequence symbols, grid multiplication operators, criteria sweeps
``expr``       expression parser for symbols
``reports``    JSON problem specs and verification reports (``cli`` wraps it)
"""

__version__ = "0.1.0"

from .errors import *  # noqa: E402,F401,F403
from .spectral import (  # noqa: E402
    DEFAULT_TOL,
    ToleranceConfig,
    PolarParts,
    InvertibilityVerdict,
    hermitian_eig,
    svd,
    polar,
    sqrt_psd,
    modulus_half,
    is_invertible,
    intertwine_check,
    operator_norm,
)
from .forms import (  # noqa: E402
    FiniteForm,
    MetricOperator,
    RNRepresentation,
    SolvabilityVerdict,
    SecondRepResiduals,
    eval_form,
    adjoint_form,
    rn_extract,
    associated_operator,
    associated_operator_two_metrics,
    solvability_check,
    semibounded_gamma,
    second_rep_factors,
    second_rep_check,
    sampled_second_rep_residual,
    second_rep_w,
    second_rep_v,
    form_from_operator,
    adjoint_rep,
    heinz_constants,
)
from .expr import parse, evaluate, evaluate_array, to_text  # noqa: E402
from .diagonal import (  # noqa: E402
    GrowthClass,
    SequenceSymbol,
    GridMultiplication,
    canonical_perturbation,
    diagonal_polar,
    grid_to_diagonal,
    grid_perturbation,
    multiplication_u_b,
    natural_metric,
    criteria_sweep,
    second_rep_sweep,
    domain_membership,
    trend_verdict,
)
