"""Symmetric tensors from homogeneous polynomials, and symmetric rank.

A degree ``d`` form in ``n`` variables becomes the fully symmetric order-``d``
tensor whose entries are its coefficients divided by multinomial
coefficients.  For forms of border rank at most two the symmetric rank is
read off a binary form by Sylvester's method: the kernel of the
three-column catalecticant is a quadratic apolar form, and its root
structure decides between rank 2 and rank ``d``.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from itertools import product
from math import factorial
from pathlib import Path

import numpy as np
from gmpy2 import mpq

from .classify import NotInSigma2Error, Stratum, classify, concise_core
from .flatten import integerize, max_flattening_rank, row_basis
from .scalar import DoubleRoot, TwoDistinct, as_scalar, binary_quadratic_roots, format_scalar

__all__ = [
    "HomPoly",
    "SymRankReport",
    "linear_form",
    "poly_to_tensor",
    "symmetric_rank_br2",
    "comon_check",
    "load_poly",
    "save_poly",
]


@dataclass(frozen=True)
class HomPoly:
    """A homogeneous polynomial stored as ``{exponents: coefficient}``."""

    n_vars: int
    degree: int
    coeffs: dict

    def __post_init__(self):
        if self.n_vars < 1:
            raise ValueError("n_vars must be positive")
        if self.degree < 1:
            raise ValueError("degree must be at least 1")
        clean = {}
        for exps, c in self.coeffs.items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != self.n_vars or min(exps) < 0 or sum(exps) != self.degree:
                raise ValueError(f"exponent {exps} is not a degree-{self.degree} monomial in {self.n_vars} variables")
            c = as_scalar(c)
            if exps in clean:
                c = clean[exps] + c
            clean[exps] = c
        object.__setattr__(self, "coeffs", {e: c for e, c in sorted(clean.items()) if c != 0})

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "HomPoly") -> "HomPoly":
        if (self.n_vars, self.degree) != (other.n_vars, other.degree):
            raise ValueError("cannot add forms of different type")
        acc = dict(self.coeffs)
        for e, c in other.coeffs.items():
            acc[e] = acc.get(e, mpq(0)) + c
        return HomPoly(self.n_vars, self.degree, acc)

    def __mul__(self, other):
        if not isinstance(other, HomPoly):
            s = as_scalar(other)
            return HomPoly(self.n_vars, self.degree, {e: s * c for e, c in self.coeffs.items()})
        if self.n_vars != other.n_vars:
            raise ValueError("variable count mismatch")
        acc = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                acc[e] = acc.get(e, mpq(0)) + c1 * c2
        return HomPoly(self.n_vars, self.degree + other.degree, acc)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "HomPoly":
        if k < 1:
            raise ValueError("only positive powers are homogeneous of positive degree")
        out = self
        for _ in range(k - 1):
            out = out * self
        return out

    def substitute(self, A) -> "HomPoly":
        """``f(A x)`` for an ``n x n`` matrix ``A`` (a linear change of variables)."""
        n = self.n_vars
        rows = [linear_form([A[i][j] for j in range(n)]) for i in range(n)]
        out = None
        for exps, c in self.coeffs.items():
            term = None
            for i, e in enumerate(exps):
                if e:
                    p = rows[i] ** e
                    term = p if term is None else term * p
            term = term * c
            out = term if out is None else out + term
        if out is None:
            return self
        return out

    def to_json(self) -> dict:
        return {
            "n_vars": self.n_vars,
            "degree": self.degree,
            "terms": [{"exponents": list(e), "coeff": format_scalar(c)} for e, c in self.coeffs.items()],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "HomPoly":
        try:
            n, d, terms = obj["n_vars"], obj["degree"], obj["terms"]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"polynomial file is missing {exc}") from None
        coeffs = {}
        for t in terms:
            e = tuple(t["exponents"])
            c = as_scalar(t["coeff"])
            coeffs[e] = coeffs.get(e, mpq(0)) + c
        return cls(int(n), int(d), coeffs)


def linear_form(coeffs) -> HomPoly:
    """``sum_i coeffs[i] * x_i``."""
    n = len(coeffs)
    return HomPoly(n, 1, {tuple(int(i == j) for j in range(n)): c for i, c in enumerate(coeffs)})


def load_poly(path) -> HomPoly:
    return HomPoly.from_json(json.loads(Path(path).read_text()))


def save_poly(f: HomPoly, path) -> None:
    Path(path).write_text(json.dumps(f.to_json(), indent=1) + "\n")


def _multinomial(exps) -> int:
    out = factorial(sum(exps))
    for e in exps:
        out //= factorial(e)
    return out


def poly_to_tensor(f: HomPoly) -> np.ndarray:
    """The symmetric tensor ``T`` with ``f(x) = sum T[i1..id] x_i1 ... x_id``."""
    if f.is_zero():
        raise ValueError("the zero polynomial has no projective class")
    n, d = f.n_vars, f.degree
    T = np.empty((n,) * d, dtype=object)
    for idx in product(range(n), repeat=d):
        cnt = Counter(idx)
        exps = tuple(cnt.get(i, 0) for i in range(n))
        c = f.coeffs.get(exps)
        T[idx] = mpq(0) if c is None else c / _multinomial(exps)
    return T


def _cross(u, v):
    return (u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0])


def _apolar_quadratic(a):
    """Kernel of the catalecticant with rows ``(a_i, a_i+1, a_i+2)``."""
    H = np.array([[a[i], a[i + 1], a[i + 2]] for i in range(len(a) - 2)], dtype=object)
    A = integerize(H)
    rows, _ = row_basis(A, limit=2)
    if len(rows) > 2:
        raise NotInSigma2Error("catalecticant has rank 3: border rank exceeds 2")
    if len(rows) < 2:
        # a concise binary form of degree >= 3 has a rank-2 catalecticant
        raise ValueError("degenerate catalecticant for a concise binary form")
    return _cross(A[rows[0]], A[rows[1]])


def symmetric_rank_br2(f: HomPoly) -> int:
    """Symmetric rank of a form whose tensor has border rank at most 2."""
    T = poly_to_tensor(f)
    d = f.degree
    if d == 1:
        return 1
    if max_flattening_rank(T, 2) > 2:
        raise NotInSigma2Error("form is not of border rank <= 2")
    cc = concise_core(T)
    if cc.q == 0:
        return 1
    # essential variables: the core is the symmetric tensor of a binary form
    G = cc.core
    a = [G[(0,) * (d - j) + (1,) * j] for j in range(d + 1)]
    if d == 2:
        return 2
    roots = binary_quadratic_roots(*_apolar_quadratic(a))
    if isinstance(roots, TwoDistinct):
        return 2
    if isinstance(roots, DoubleRoot):
        return d
    raise ValueError(f"unexpected apolar root structure {roots!r}")


@dataclass(frozen=True)
class SymRankReport:
    tensor_rank: int
    symmetric_rank: int
    equal: bool
    stratum: Stratum

    def to_json(self) -> dict:
        return {
            "tensor_rank": self.tensor_rank,
            "symmetric_rank": self.symmetric_rank,
            "equal": self.equal,
            "stratum": self.stratum.value,
        }


def comon_check(f: HomPoly) -> SymRankReport:
    """Compare tensor rank (classification) with symmetric rank (apolarity)."""
    T = poly_to_tensor(f)
    cls = classify(T)
    if cls.stratum is Stratum.BEYOND:
        raise NotInSigma2Error("form is not of border rank <= 2")
    s = symmetric_rank_br2(f)
    return SymRankReport(cls.rank, s, cls.rank == s, cls.stratum)
