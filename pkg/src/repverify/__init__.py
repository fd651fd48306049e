"""Verification lab for generic subspace-position bounds in Lie representations.

Exact rational subspace calculus, example (H, a, V) configurations with their
weight decompositions, Monte Carlo checks of generic intersection/projection
dimension bounds, Brascamp-Lieb feasibility and constant estimation,
discretized covering/energy/projection experiments, and a small-values search
for indefinite quadratic forms.
"""

from .qlinalg import (
    Mat,
    Rat,
    Subspace,
    canonicalize,
    kernel_basis,
    nilpotent_exp,
    orthogonal_complement,
    subspace_intersect,
    subspace_sum,
)
from .reps import (
    RepConfig,
    WeightDecomposition,
    build_config,
    check_irreducible,
    check_proximal,
    flag_projector,
    horospherical_basis,
    weight_decompose,
)
from .generic import (
    TreeOp,
    check_intersection_bound,
    check_projection_bound,
    eval_tree,
    find_spanning_q,
    sample_element,
    submodularity_check,
)
from .brascamp_lieb import (
    BLDatum,
    check_feasibility,
    estimate_bl_constant,
    gaussian_ratio,
)
from .discretized import (
    PointSet,
    TubeSpec,
    alpha_energy,
    covering_number,
    frostman_constant,
    generate_fractal,
    projection_experiment,
    remez_check,
    tube_covering_number,
)
from .oppenheim import QuadraticForm, decay_curve, parse_form, search_min_value
from .harness import SuiteConfig, emit_report, run_suite

__all__ = [
    "Mat",
    "Rat",
    "Subspace",
    "canonicalize",
    "kernel_basis",
    "nilpotent_exp",
    "orthogonal_complement",
    "subspace_intersect",
    "subspace_sum",
    "RepConfig",
    "WeightDecomposition",
    "build_config",
    "check_irreducible",
    "check_proximal",
    "flag_projector",
    "horospherical_basis",
    "weight_decompose",
    "TreeOp",
    "check_intersection_bound",
    "check_projection_bound",
    "eval_tree",
    "find_spanning_q",
    "sample_element",
    "submodularity_check",
    "BLDatum",
    "check_feasibility",
    "estimate_bl_constant",
    "gaussian_ratio",
    "PointSet",
    "TubeSpec",
    "alpha_energy",
    "covering_number",
    "frostman_constant",
    "generate_fractal",
    "projection_experiment",
    "remez_check",
    "tube_covering_number",
    "QuadraticForm",
    "decay_curve",
    "parse_form",
    "search_min_value",
    "SuiteConfig",
    "emit_report",
    "run_suite",
]

__version__ = "0.1.0"
