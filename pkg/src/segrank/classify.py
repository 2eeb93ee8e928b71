"""Rank of tensors of border rank at most two.

The pipeline: flattening gate, concision to a ``2 x ... x 2`` core, then the
root structure of the slice pencil of the core.  Two simple roots mean two
rank-one members (a generic rank-2 point); a double root means the tensor
lies on a tangent space of the Segre variety and its rank equals the number
of essential modes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache

import numpy as np
from gmpy2 import mpq

from .flatten import bipartitions, flattening, integerize, max_flattening_rank, row_basis
from .scalar import (
    DoubleRoot,
    QuadExt,
    TwoDistinct,
    binary_form_gcd,
    binary_form_roots,
)
from .tensor import is_zero, slice_tensor

__all__ = [
    "Stratum",
    "BorderRankClass",
    "ConciseCore",
    "PencilRootStructure",
    "NotInSigma2Error",
    "InternalError",
    "mode_unfolding",
    "concise_core",
    "slice_pencil_gcd",
    "classify",
    "type_eta",
]


class NotInSigma2Error(ValueError):
    """The tensor has border rank at least 3."""


class InternalError(RuntimeError):
    """A mathematical invariant of the pipeline failed; this is a bug."""


class Stratum(str, Enum):
    ZERO = "zero"
    RANK_ONE = "rank1"
    GENERIC_RANK2 = "rank2"
    TANGENT = "tangent"
    BEYOND = "beyond_sigma2"


@dataclass(frozen=True)
class BorderRankClass:
    stratum: Stratum
    rank: int | None
    q: int | None = None

    @property
    def border_rank(self) -> int | None:
        """0, 1 or 2; None means "at least 3"."""
        return {
            Stratum.ZERO: 0,
            Stratum.RANK_ONE: 1,
            Stratum.GENERIC_RANK2: 2,
            Stratum.TANGENT: 2,
        }.get(self.stratum)

    @property
    def eta_defined(self) -> bool:
        # the type is a notion on the tangent developable, which contains X
        return self.stratum in (Stratum.RANK_ONE, Stratum.TANGENT)


@dataclass(frozen=True)
class ConciseCore:
    """``T`` written through its essential subspaces.

    ``core`` has shape ``(2,) * q`` for the ``q`` modes of multilinear rank 2,
    listed in ``modes``.  ``bases[m]`` is a ``dims[m] x 2`` matrix spanning
    the essential subspace of mode ``m``; ``dropped[m]`` is the fixed factor
    of a mode of multilinear rank 1.  For ``q = 0`` the core is a 0-d array
    holding the coefficient of the rank-one tensor.
    """

    core: np.ndarray
    modes: tuple[int, ...]
    bases: dict = field(repr=False)
    dropped: dict = field(repr=False)
    shape: tuple[int, ...] = ()

    @property
    def q(self) -> int:
        return len(self.modes)

    def expand(self) -> np.ndarray:
        """Map the core back to the ambient space (exact reconstruction)."""
        out = self.core
        axis = 0
        for m in range(len(self.shape)):
            if m in self.bases:
                B = self.bases[m]
                out = np.moveaxis(np.tensordot(B, out, axes=([1], [axis])), 0, axis)
            else:
                out = np.multiply.outer(out, self.dropped[m])
                out = np.moveaxis(out, -1, axis)
            axis += 1
        return out


@dataclass(frozen=True)
class PencilRootStructure:
    mode: int
    gcd_form: tuple
    structure: object


def mode_unfolding(T: np.ndarray, mode: int) -> np.ndarray:
    return np.moveaxis(T, mode, 0).reshape(T.shape[mode], -1)


def _inverse2(M):
    det = M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]
    if det == 0:
        raise InternalError("singular 2x2 block")
    return np.array([[M[1, 1] / det, -M[0, 1] / det], [-M[1, 0] / det, M[0, 0] / det]], dtype=object)


def _exact(x):
    return x if isinstance(x, QuadExt) else mpq(x)


def _exact_array(A):
    out = np.empty(A.shape, dtype=object)
    for idx, x in np.ndenumerate(A):
        out[idx] = _exact(x)
    return out


def _rational(T) -> bool:
    return not any(isinstance(x, QuadExt) for x in T.flat)


def concise_core(T: np.ndarray) -> ConciseCore:
    """Compress ``T`` to its essential ``2 x ... x 2`` core.

    Raises :class:`NotInSigma2Error` when some multilinear rank exceeds 2.
    """
    if is_zero(T):
        raise ValueError("the zero tensor has no concise core")
    A = integerize(T) if _rational(T) else T
    pick = []
    bases, dropped = {}, {}
    for m in range(T.ndim):
        M = mode_unfolding(A, m)
        rows, cols = row_basis(M, limit=2)
        if len(rows) > 2:
            raise NotInSigma2Error(f"mode {m} has multilinear rank at least 3")
        if len(rows) == 1:
            (p,), (c,) = rows, cols
            dropped[m] = np.array([_exact(x) / _exact(M[p, c]) for x in M[:, c]], dtype=object)
            pick.append([p])
        else:
            sub = np.array([[_exact(M[r, c]) for c in cols] for r in rows], dtype=object)
            bases[m] = np.dot(_exact_array(M[:, cols]), _inverse2(sub))
            pick.append(rows)
    core = T[np.ix_(*pick)]
    modes = tuple(sorted(bases))
    core = core.reshape(tuple(2 for _ in modes))
    return ConciseCore(core, modes, bases, dropped, tuple(T.shape))


@lru_cache(maxsize=None)
def _pairs(n):
    i, j = np.triu_indices(n, 1)
    return i[:, None], j[:, None]


def _pencil_minor_forms(F0: np.ndarray, F1: np.ndarray):
    """Coefficients ``(l^2, l*m, m^2)`` of every 2x2 minor of ``l*F0 + m*F1``.

    Returns an ``n x 3`` object array, one row per minor.
    """
    r, c = F0.shape
    if r < 2 or c < 2:
        return np.empty((0, 3), dtype=object)
    I, J = _pairs(r)
    K, L = (x.T for x in _pairs(c))

    def mixed(X, Y):
        return X[I, K] * Y[J, L] - X[I, L] * Y[J, K]

    a = mixed(F0, F0).ravel()
    b = (mixed(F0, F1) + mixed(F1, F0)).ravel()
    cc = mixed(F1, F1).ravel()
    return np.stack([a, b, cc], axis=1)


def _span_basis(V: np.ndarray):
    # basis of the row span of an n x 3 integer matrix, one pivot per pass
    basis = []
    while V.shape[0]:
        V = V[np.any(V != 0, axis=1)]
        if not V.shape[0]:
            break
        b = V[0]
        pc = int(np.nonzero(b)[0][0])
        basis.append(tuple(b))
        V = V[1:] * b[pc] - np.multiply.outer(V[1:, pc], b)
    return basis


def slice_pencil_gcd(core: np.ndarray, mode: int) -> PencilRootStructure:
    """Root structure of the rank-one locus of the pencil of slices along ``mode``.

    Every 2x2 minor of every flattening of ``l*M0 + m*M1`` is a binary
    quadratic in ``(l, m)``; their gcd vanishes exactly at the rank-one
    members of the pencil.  The gcd of a set of forms equals the gcd of a
    basis of their linear span, which is what gets computed.
    """
    if core.ndim < 1 or core.shape[mode] != 2:
        raise ValueError("the slice pencil needs a mode of dimension 2")
    if not _rational(core):
        raise ValueError("pencil analysis needs a rational core")
    A = integerize(core)
    M0 = slice_tensor(A, mode, 0)
    M1 = slice_tensor(A, mode, 1)
    blocks = []
    if M0.ndim >= 2:
        for p in bipartitions(M0.ndim):
            blocks.append(_pencil_minor_forms(flattening(M0, p), flattening(M1, p)))
    forms = _span_basis(np.concatenate(blocks)) if blocks else []
    g = binary_form_gcd(forms)
    if g is None:
        raise InternalError("pencil entirely rank <= 1 (core is not concise)")
    if len(g) == 1:
        raise InternalError("pencil has no rank-one member")
    return PencilRootStructure(mode, g, binary_form_roots(g))


@dataclass(frozen=True)
class _Analysis:
    cls: BorderRankClass
    cc: ConciseCore | None = None
    pencil: PencilRootStructure | None = None


def _analyze(T: np.ndarray) -> _Analysis:
    T = np.asarray(T, dtype=object)
    if is_zero(T):
        return _Analysis(BorderRankClass(Stratum.ZERO, 0))
    try:
        cc = concise_core(T)
    except NotInSigma2Error:
        return _Analysis(BorderRankClass(Stratum.BEYOND, None))
    q = cc.q
    if q == 0:
        return _Analysis(BorderRankClass(Stratum.RANK_ONE, 1, 0), cc)
    if q == 1:
        raise InternalError("exactly one mode of multilinear rank 2 is impossible")
    if max_flattening_rank(cc.core, 2) > 2:
        return _Analysis(BorderRankClass(Stratum.BEYOND, None, q), cc)
    if q == 2:
        # every rank-2 matrix lies on a tangent space of the Segre variety
        return _Analysis(BorderRankClass(Stratum.TANGENT, 2, 2), cc)
    pencil = slice_pencil_gcd(cc.core, 0)
    s = pencil.structure
    if isinstance(s, TwoDistinct):
        return _Analysis(BorderRankClass(Stratum.GENERIC_RANK2, 2, q), cc, pencil)
    if isinstance(s, DoubleRoot):
        return _Analysis(BorderRankClass(Stratum.TANGENT, q, q), cc, pencil)
    raise InternalError(f"unexpected pencil structure {s!r} for a concise core")


def classify(T: np.ndarray) -> BorderRankClass:
    """Stratum and exact rank of ``T`` (rank None beyond border rank 2)."""
    return _analyze(T).cls


def type_eta(T: np.ndarray) -> int:
    """Type of ``T``: 1 on the Segre variety, q on tangent points.

    Generic rank-2 points get 2 by convention (``eta_defined`` is False).
    """
    cls = classify(T)
    if cls.stratum is Stratum.BEYOND:
        raise ValueError("type undefined outside sigma_2")
    if cls.stratum is Stratum.ZERO:
        raise ValueError("type undefined for the zero tensor")
    return cls.rank
