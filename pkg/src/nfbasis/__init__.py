"""Unique normal form for bases of finite-dimensional real and complex vector spaces."""

from .closed_form import orthogonal_complement_nf, two_vector_complement_nf
from .echelon import rcef, rref
from .estimators import KernelNormalForm, NormalFormBasis
from .exceptions import (
    ContradictionError,
    InternalInvariantError,
    InvalidInputError,
    MatrixParseError,
    NFBasisError,
    NotFullColumnRankError,
    UnsupportedDimensionError,
)
from .kernels import DimensionTable, PiGroupSet, common_kernel, pi_groups, snap_rational
from .linalg import (
    IndependenceTracker,
    ToleranceConfig,
    hyperplane_normal,
    independent_extend,
    nullspace_basis,
    rank,
)
from .normalform import (
    Candidate,
    NormalFormResult,
    ThetaKey,
    ZeroPattern,
    compare_theta,
    normal_form,
    normal_form_standard,
    normal_form_topdown,
    normalize_candidate,
)

__version__ = "0.1.0"

__all__ = [
    "Candidate",
    "ContradictionError",
    "DimensionTable",
    "IndependenceTracker",
    "InternalInvariantError",
    "InvalidInputError",
    "KernelNormalForm",
    "MatrixParseError",
    "NFBasisError",
    "NormalFormBasis",
    "NormalFormResult",
    "NotFullColumnRankError",
    "PiGroupSet",
    "ThetaKey",
    "ToleranceConfig",
    "UnsupportedDimensionError",
    "ZeroPattern",
    "common_kernel",
    "compare_theta",
    "hyperplane_normal",
    "independent_extend",
    "normal_form",
    "normal_form_standard",
    "normal_form_topdown",
    "normalize_candidate",
    "nullspace_basis",
    "orthogonal_complement_nf",
    "pi_groups",
    "rank",
    "rcef",
    "rref",
    "snap_rational",
    "two_vector_complement_nf",
]
