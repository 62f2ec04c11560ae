"""Generalized Riesz systems at finite truncation.

Sequences and the Krein form (:mod:`rieszkit.seq`), 2x2 block operators
(:mod:`rieszkit.blocks`), the secular root solver (:mod:`rieszkit.secular`),
the semi-regular and J-orthonormal families (:mod:`rieszkit.families`) and
Gram/residual diagnostics (:mod:`rieszkit.diagnostics`).
"""
__version__ = "0.1.0"

from .errors import (  # noqa: E402
    ConvergenceError,
    DimensionError,
    ExponentRangeError,
    InvalidFamilyError,
    MissingRootError,
    NumericalError,
    PoleProximityError,
    RegimeError,
    RieszkitError,
    SingularBlockError,
    TruncationError,
    ValidationError,
)
from .seq import J, TruncatedVector, basis, inner, j_inner, norm  # noqa: E402
from .blocks import AlphaSequence, BlockOperator, build_Q_family, build_T  # noqa: E402
from .secular import SecularProblem, normalization_c, solve_roots  # noqa: E402
from .families import (  # noqa: E402
    GRSVerdict,
    KreinFamily,
    SemiRegularFamily,
    TypeVerdict,
    classify_type,
    krein_e,
    krein_phi,
    krein_psi,
    non_grs_witness,
    semiregular_classify,
)
from .diagnostics import (  # noqa: E402
    DiagnosticsReport,
    frame_bounds,
    gram,
    krein_residual_suite,
    olevskii_check,
)

__all__ = [
    "__version__",
    "ConvergenceError",
    "DimensionError",
    "ExponentRangeError",
    "InvalidFamilyError",
    "MissingRootError",
    "NumericalError",
    "PoleProximityError",
    "RegimeError",
    "RieszkitError",
    "SingularBlockError",
    "TruncationError",
    "ValidationError",
    "GRSVerdict",
    "KreinFamily",
    "SemiRegularFamily",
    "TypeVerdict",
    "classify_type",
    "krein_e",
    "krein_phi",
    "krein_psi",
    "non_grs_witness",
    "semiregular_classify",
    "DiagnosticsReport",
    "frame_bounds",
    "gram",
    "krein_residual_suite",
    "olevskii_check",
    "J",
    "TruncatedVector",
    "basis",
    "inner",
    "j_inner",
    "norm",
    "AlphaSequence",
    "BlockOperator",
    "build_Q_family",
    "build_T",
    "SecularProblem",
    "normalization_c",
    "solve_roots",
]
