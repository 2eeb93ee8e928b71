"""Exact rank, stratification and decomposition of tensors of border rank two."""

from .classify import (
    BorderRankClass,
    ConciseCore,
    InternalError,
    NotInSigma2Error,
    Stratum,
    classify,
    concise_core,
    slice_pencil_gcd,
    type_eta,
)
from .decompose import (
    Decomposition,
    RankOneTerm,
    TangentFrame,
    decompose,
    decompose_rank_two,
    decompose_tangent,
    factor_rank_one,
    lift,
    tangent_frame,
    verify,
)
from .flatten import (
    Bipartition,
    bipartitions,
    exact_rank,
    flattening,
    max_flattening_rank,
    multilinear_ranks,
)
from .scalar import QuadExt, as_scalar, binary_quadratic_roots
from .symmetric import HomPoly, comon_check, linear_form, poly_to_tensor, symmetric_rank_br2
from .tensor import (
    linear_combine,
    mode_apply,
    outer_product,
    permute_modes,
    slice_tensor,
    tensor,
)

__version__ = "0.1.0"

__all__ = [
    "BorderRankClass",
    "ConciseCore",
    "InternalError",
    "NotInSigma2Error",
    "Stratum",
    "classify",
    "concise_core",
    "slice_pencil_gcd",
    "type_eta",
    "Decomposition",
    "RankOneTerm",
    "TangentFrame",
    "decompose",
    "decompose_rank_two",
    "decompose_tangent",
    "factor_rank_one",
    "lift",
    "tangent_frame",
    "verify",
    "Bipartition",
    "bipartitions",
    "exact_rank",
    "flattening",
    "max_flattening_rank",
    "multilinear_ranks",
    "linear_combine",
    "mode_apply",
    "outer_product",
    "permute_modes",
    "slice_tensor",
    "tensor",
    "QuadExt",
    "as_scalar",
    "binary_quadratic_roots",
    "HomPoly",
    "comon_check",
    "linear_form",
    "poly_to_tensor",
    "symmetric_rank_br2",
]
