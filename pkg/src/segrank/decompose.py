"""Certified rank decompositions for tensors of border rank at most two."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from gmpy2 import mpq

from .classify import (
    InternalError,
    NotInSigma2Error,
    Stratum,
    _analyze,
    slice_pencil_gcd,
)
from .scalar import (
    DoubleRoot,
    TwoDistinct,
    as_scalar,
    format_scalar,
    scalar_delta,
)
from .tensor import basis_vector, is_zero, outer_product, slice_tensor, zeros

__all__ = [
    "RankOneTerm",
    "Decomposition",
    "TangentFrame",
    "DegenerateParametersError",
    "normalize_term",
    "factor_rank_one",
    "decompose_rank_two",
    "tangent_frame",
    "decompose_tangent",
    "lift",
    "decompose",
    "verify",
    "load_decomposition",
    "save_decomposition",
]


class DegenerateParametersError(ValueError):
    """The chosen parameters put the last point of the family at the base point."""


@dataclass(frozen=True)
class RankOneTerm:
    coeff: object
    vectors: tuple

    def tensor(self) -> np.ndarray:
        return self.coeff * outer_product(self.vectors)

    def __eq__(self, other):
        if not isinstance(other, RankOneTerm):
            return NotImplemented
        return (
            self.coeff == other.coeff
            and len(self.vectors) == len(other.vectors)
            and all(
                len(a) == len(b) and all(x == y for x, y in zip(a, b))
                for a, b in zip(self.vectors, other.vectors)
            )
        )

    def __hash__(self):
        return hash((self.coeff, tuple(tuple(v) for v in self.vectors)))


def normalize_term(coeff, vectors) -> RankOneTerm:
    """Scale every vector so its last nonzero entry is 1, folding scales into coeff."""
    coeff = as_scalar(coeff)
    out = []
    for v in vectors:
        v = np.asarray(v, dtype=object)
        nz = np.nonzero(v)[0]
        if len(nz) == 0:
            raise ValueError("rank-one terms need nonzero vectors")
        s = v[nz[-1]]
        coeff = coeff * s
        out.append(np.array([x / s for x in v], dtype=object))
    return RankOneTerm(coeff, tuple(out))


@dataclass(frozen=True)
class Decomposition:
    terms: tuple
    claimed_rank: int

    def __post_init__(self):
        if len(self.terms) != self.claimed_rank:
            raise ValueError(f"{len(self.terms)} terms but claimed rank {self.claimed_rank}")

    @property
    def delta(self) -> int | None:
        values = []
        for t in self.terms:
            values.append(t.coeff)
            for v in t.vectors:
                values.extend(v)
        return scalar_delta(values)

    def reconstruct(self, shape=None) -> np.ndarray:
        if not self.terms:
            if shape is None:
                raise ValueError("an empty decomposition needs an explicit shape")
            return zeros(shape)
        acc = self.terms[0].tensor()
        for t in self.terms[1:]:
            acc = acc + t.tensor()
        return acc

    def to_json(self) -> dict:
        return {
            "claimed_rank": self.claimed_rank,
            "terms": [
                {
                    "coeff": format_scalar(t.coeff),
                    "vectors": [[format_scalar(x) for x in v] for v in t.vectors],
                }
                for t in self.terms
            ],
            "field": {"delta": self.delta},
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Decomposition":
        try:
            terms = tuple(
                RankOneTerm(
                    as_scalar(t["coeff"]),
                    tuple(np.array([as_scalar(x) for x in v], dtype=object) for v in t["vectors"]),
                )
                for t in obj["terms"]
            )
            dec = cls(terms, int(obj["claimed_rank"]))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed decomposition JSON: {exc}") from None
        field = obj.get("field", {}).get("delta")
        if dec.delta is not None and field is not None and dec.delta != field:
            raise ValueError(f"field delta {field} disagrees with the scalars ({dec.delta})")
        return dec


def load_decomposition(path) -> Decomposition:
    return Decomposition.from_json(json.loads(Path(path).read_text()))


def save_decomposition(dec: Decomposition, path) -> None:
    Path(path).write_text(json.dumps(dec.to_json()) + "\n")


def verify(dec: Decomposition, T: np.ndarray) -> bool:
    """Exact check that the terms sum to ``T``."""
    if not dec.terms:
        return is_zero(T)
    for t in dec.terms:
        if tuple(len(v) for v in t.vectors) != T.shape:
            return False
    R = dec.reconstruct()
    return all(a == b for a, b in zip(R.flat, T.flat))


def factor_rank_one(T: np.ndarray) -> RankOneTerm:
    """Write a rank-one tensor as ``coeff * v_1 (x) ... (x) v_d`` (normalized)."""
    T = np.asarray(T, dtype=object)
    flat = np.flatnonzero(T)
    if len(flat) == 0:
        raise ValueError("the zero tensor has rank 0, not 1")
    idx = np.unravel_index(flat[0], T.shape)
    fibers = []
    for k in range(T.ndim):
        sl = tuple(slice(None) if j == k else idx[j] for j in range(T.ndim))
        fibers.append(T[sl])
    term = normalize_term(1, fibers)
    prod = mpq(1)
    for v, i in zip(term.vectors, idx):
        prod = prod * v[i]
    term = RankOneTerm(T[idx] / prod, term.vectors)
    if not all(a == b for a, b in zip(term.tensor().flat, T.flat)):
        raise ValueError("tensor is not of rank 1")
    return term


def decompose_rank_two(core: np.ndarray, roots) -> Decomposition:
    """Two-term decomposition of a concise core from its mode-0 pencil roots.

    ``roots`` is the :class:`TwoDistinct` structure (or the
    :class:`~segrank.classify.PencilRootStructure` holding it).
    """
    structure = getattr(roots, "structure", roots)
    if not isinstance(structure, TwoDistinct):
        raise ValueError("rank-2 decomposition needs two distinct pencil roots")
    M0 = slice_tensor(core, 0, 0)
    M1 = slice_tensor(core, 0, 1)
    (l1, m1), (l2, m2) = structure.roots
    det = l1 * m2 - l2 * m1
    if det == 0:
        raise InternalError("pencil roots are not projectively distinct")
    try:
        f1 = factor_rank_one(l1 * M0 + m1 * M1)
        f2 = factor_rank_one(l2 * M0 + m2 * M1)
    except ValueError as exc:
        raise InternalError(f"pencil root member is not rank one: {exc}") from None
    a = np.array([m2 / det, -l2 / det], dtype=object)
    b = np.array([-m1 / det, l1 / det], dtype=object)
    return Decomposition(
        (normalize_term(f1.coeff, (a, *f1.vectors)), normalize_term(f2.coeff, (b, *f2.vectors))),
        2,
    )


@dataclass(frozen=True)
class TangentFrame:
    """``alpha * O + sum_i beta_i * D_i`` with ``O = w_1 (x) ... (x) w_q`` and
    ``D_i`` equal to ``O`` with ``w_i`` replaced by ``v_i``."""

    w: tuple
    v: tuple
    alpha: object
    beta: tuple

    @property
    def q(self) -> int:
        return len(self.w)

    def expand(self) -> np.ndarray:
        acc = self.alpha * outer_product(self.w)
        for i, b in enumerate(self.beta):
            vecs = list(self.w)
            vecs[i] = self.v[i]
            acc = acc + b * outer_product(vecs)
        return acc


def _normalized(v):
    nz = np.nonzero(v)[0]
    s = v[nz[-1]]
    return np.array([x / s for x in v], dtype=object)


def _complement(w):
    # first standard basis vector independent of w
    return basis_vector(2, 0) if w[1] != 0 else basis_vector(2, 1)


def _base_point(core: np.ndarray, known=None):
    q = core.ndim
    if q == 2:
        # any O = w_0 (x) w_1 with u_0^T M u_1 = 0 works; fix w_1 = e_0
        return [_normalized(core[:, 1]), basis_vector(2, 0)]
    recovered = []
    for mode in (0, 1):
        pencil = known if known is not None and known.mode == mode else slice_pencil_gcd(core, mode)
        if not isinstance(pencil.structure, DoubleRoot):
            raise InternalError(f"mode {mode} pencil has no double root")
        lam, mu = pencil.structure.root
        member = lam * slice_tensor(core, mode, 0) + mu * slice_tensor(core, mode, 1)
        vecs = list(factor_rank_one(member).vectors)
        vecs.insert(mode, None)
        recovered.append(vecs)
    w = [recovered[1][0]] + recovered[0][1:]
    for j in range(2, q):
        if not all(x == y for x, y in zip(recovered[0][j], recovered[1][j])):
            raise InternalError(f"modes 0 and 1 disagree on the base point factor {j}")
    return w


def tangent_frame(core: np.ndarray, pencil=None) -> TangentFrame:
    """Base point, directions and coefficients of a concise tangent core.

    ``pencil`` may carry an already computed slice-pencil structure of the core.
    """
    q = core.ndim
    if q < 2 or core.shape != (2,) * q:
        raise ValueError("tangent_frame needs a concise 2 x ... x 2 core with q >= 2")
    w = _base_point(core, pencil)
    v = [_complement(x) for x in w]
    C = core
    for i in range(q):
        P = np.array([[w[i][0], v[i][0]], [w[i][1], v[i][1]]], dtype=object)
        det = P[0, 0] * P[1, 1] - P[0, 1] * P[1, 0]
        Pinv = np.array([[P[1, 1] / det, -P[0, 1] / det], [-P[1, 0] / det, P[0, 0] / det]], dtype=object)
        C = np.moveaxis(np.tensordot(Pinv, C, axes=([1], [i])), 0, i)
    alpha = C[(0,) * q]
    beta = []
    for i in range(q):
        idx = [0] * q
        idx[i] = 1
        beta.append(C[tuple(idx)])
    for idx in np.ndindex(C.shape):
        if sum(idx) > 1 and C[idx] != 0:
            raise InternalError(f"core is not on the tangent space at the base point ({idx})")
    if any(b == 0 for b in beta):
        raise InternalError("a tangent coefficient vanishes on a concise core")
    return TangentFrame(tuple(w), tuple(v), alpha, tuple(beta))


def decompose_tangent(frame: TangentFrame, params) -> Decomposition:
    """The ``q``-term decomposition picked by ``q - 1`` nonzero parameters.

    Term ``i < q`` is ``(beta_i / t_i) * (O with w_i -> w_i + t_i v_i)``;
    the last point is then the unique one on its line completing the sum.
    """
    q = frame.q
    params = [as_scalar(t) for t in params]
    if len(params) != q - 1:
        raise ValueError(f"expected {q - 1} parameters, got {len(params)}")
    if any(t == 0 for t in params):
        raise ValueError("parameters must be nonzero")
    coeffs = [b / t for b, t in zip(frame.beta, params)]
    last = frame.alpha - sum(coeffs, mpq(0))
    if last == 0:
        raise DegenerateParametersError(
            "degenerate parameter choice: the last point collapses onto the base "
            "point; change the first parameter (e.g. 2, 3, ...)"
        )
    ts = params + [frame.beta[-1] / last]
    coeffs.append(last)
    terms = []
    for i in range(q):
        vecs = list(frame.w)
        vecs[i] = frame.w[i] + ts[i] * frame.v[i]
        terms.append(normalize_term(coeffs[i], vecs))
    return Decomposition(tuple(terms), q)


def lift(dec: Decomposition, cc) -> Decomposition:
    """Map a decomposition of ``cc.core`` to the ambient space of ``cc``."""
    terms = []
    for t in dec.terms:
        if len(t.vectors) != cc.q:
            raise ValueError(f"term has {len(t.vectors)} modes, core has {cc.q}")
        kept = dict(zip(cc.modes, t.vectors))
        vecs = []
        for m in range(len(cc.shape)):
            if m in cc.bases:
                vecs.append(np.dot(cc.bases[m], kept[m]))
            else:
                vecs.append(cc.dropped[m])
        terms.append(normalize_term(t.coeff, vecs))
    return Decomposition(tuple(terms), dec.claimed_rank)


def _default_tangent(frame: TangentFrame) -> Decomposition:
    params = [mpq(1)] * (frame.q - 1)
    for first in range(1, frame.q + 2):
        params[0] = mpq(first)
        try:
            return decompose_tangent(frame, params)
        except DegenerateParametersError:
            continue
    raise InternalError("parameter schedule exhausted")


def decompose(T: np.ndarray, params=None) -> Decomposition:
    """Classify ``T`` and return a verified decomposition with ``rank`` terms.

    ``params`` (``q - 1`` nonzero scalars) selects a member of the family of
    decompositions of a tangent point; it is ignored for other strata.
    """
    T = np.asarray(T, dtype=object)
    info = _analyze(T)
    stratum = info.cls.stratum
    if stratum is Stratum.BEYOND:
        raise NotInSigma2Error("not in sigma_2(X): border rank is at least 3")
    if stratum is Stratum.ZERO:
        return Decomposition((), 0)
    if stratum is Stratum.RANK_ONE:
        dec = Decomposition((factor_rank_one(T),), 1)
    else:
        core = info.cc.core
        if stratum is Stratum.GENERIC_RANK2:
            local = decompose_rank_two(core, info.pencil)
        else:
            frame = tangent_frame(core, info.pencil)
            local = _default_tangent(frame) if params is None else decompose_tangent(frame, params)
        dec = lift(local, info.cc)
    if not verify(dec, T):
        raise InternalError("decomposition failed exact reconstruction")
    return dec
