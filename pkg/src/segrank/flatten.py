"""Flattenings and exact matrix rank.

A vanishing test for all ``(k+1) x (k+1)`` minors of a flattening is done
as the equivalent elimination test ``rank <= k``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from itertools import combinations

import gmpy2
import numpy as np
from gmpy2 import mpz

from .scalar import QuadExt

__all__ = [
    "Bipartition",
    "bipartitions",
    "flattening",
    "exact_rank",
    "multilinear_ranks",
    "max_flattening_rank",
    "integerize",
    "row_basis",
]


@dataclass(frozen=True)
class Bipartition:
    J1: tuple[int, ...]
    J2: tuple[int, ...]

    def __post_init__(self):
        j1, j2 = tuple(sorted(self.J1)), tuple(sorted(self.J2))
        object.__setattr__(self, "J1", j1)
        object.__setattr__(self, "J2", j2)
        if not j1 or not j2:
            raise ValueError("both sides of a bipartition must be nonempty")
        if set(j1) & set(j2) or len(set(j1)) != len(j1) or len(set(j2)) != len(j2):
            raise ValueError(f"{j1} and {j2} are not disjoint sets")

    @classmethod
    def of(cls, J1, d: int) -> "Bipartition":
        J1 = tuple(sorted(J1))
        if not all(0 <= j < d for j in J1):
            raise ValueError(f"{J1} is not a subset of the {d} modes")
        return cls(J1, tuple(j for j in range(d) if j not in J1))

    @property
    def order(self) -> int:
        return len(self.J1) + len(self.J2)


def bipartitions(d: int):
    """All ``2**(d-1) - 1`` unordered bipartitions, with mode 0 in ``J1``."""
    rest = range(1, d)
    for size in range(0, d - 1):
        for extra in combinations(rest, size):
            yield Bipartition.of((0, *extra), d)


def flattening(T: np.ndarray, p) -> np.ndarray:
    """The ``(J1, J2)``-flattening; rows and columns are row-major in each group."""
    if not isinstance(p, Bipartition):
        p = Bipartition.of(p, T.ndim)
    if p.order != T.ndim or max(p.J1 + p.J2) >= T.ndim:
        raise ValueError(f"{p} is not a bipartition of {T.ndim} modes")
    rows = int(np.prod([T.shape[j] for j in p.J1]))
    return np.transpose(T, p.J1 + p.J2).reshape(rows, -1)


def integerize(A: np.ndarray) -> np.ndarray:
    """Scale a rational array by the lcm of its denominators; returns mpz entries."""
    flat = list(A.flat)
    den = reduce(gmpy2.lcm, (x.denominator for x in flat), mpz(1))
    out = np.empty(len(flat), dtype=object)
    for i, x in enumerate(flat):
        out[i] = x.numerator * (den // x.denominator)
    return out.reshape(A.shape)


def _is_rational_array(A) -> bool:
    return not any(isinstance(x, QuadExt) for x in A.flat)


def _bareiss_rank(A: np.ndarray, limit) -> int:
    # fraction-free elimination with full pivoting on an mpz matrix
    A = A.copy()
    rows, cols = A.shape
    prev = mpz(1)
    r = 0
    while r < min(rows, cols):
        sub = np.abs(A[r:, r:])
        k = int(np.argmax(sub))
        i, j = divmod(k, cols - r)
        if sub[i, j] == 0:
            break
        if i:
            A[[r, r + i]] = A[[r + i, r]]
        if j:
            A[:, [r, r + j]] = A[:, [r + j, r]]
        piv = A[r, r]
        if r + 1 < rows and r + 1 < cols:
            A[r + 1 :, r + 1 :] = (
                A[r + 1 :, r + 1 :] * piv - np.multiply.outer(A[r + 1 :, r], A[r, r + 1 :])
            ) // prev
        A[r + 1 :, r] = mpz(0)
        prev = piv
        r += 1
        if limit is not None and r > limit:
            return r
    return r


def _field_rank(A: np.ndarray, limit) -> int:
    A = A.copy()
    rows, cols = A.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = [i for i in range(r, rows) if A[i, c] != 0]
        if not nz:
            continue
        i = nz[0]
        if i != r:
            A[[r, i]] = A[[i, r]]
        inv = 1 / A[r, c]
        for i in range(r + 1, rows):
            if A[i, c] != 0:
                A[i, c:] = A[i, c:] - (A[i, c] * inv) * A[r, c:]
        r += 1
        if limit is not None and r > limit:
            return r
    return r


def exact_rank(M, limit: int | None = None) -> int:
    """Exact rank of a matrix of exact scalars.

    With ``limit`` set, elimination stops as soon as the rank is known to
    exceed it and returns ``limit + 1``.
    """
    M = np.asarray(M, dtype=object)
    if M.ndim != 2:
        raise ValueError("exact_rank needs a matrix")
    if M.size == 0:
        return 0
    if _is_rational_array(M):
        return _bareiss_rank(integerize(M), limit)
    return _field_rank(M, limit)


def row_basis(M: np.ndarray, limit: int | None = None):
    """Greedy row basis of an integer or rational matrix.

    Returns ``(rows, cols)``: the first independent rows in order and
    matching pivot columns, so that ``M[rows][:, cols]`` is invertible.
    Stops after ``limit + 1`` rows when ``limit`` is given.
    """
    basis = []
    kept = []
    for i in range(M.shape[0]):
        v = M[i]
        for pc, b in basis:
            if v[pc] != 0:
                v = v * b[pc] - v[pc] * b
        nz = np.nonzero(v)[0]
        if len(nz) == 0:
            continue
        basis.append((int(nz[0]), v))
        kept.append(i)
        if limit is not None and len(kept) > limit:
            break
    return kept, [pc for pc, _ in basis]


def multilinear_ranks(T: np.ndarray) -> list[int]:
    """Rank of every single-mode flattening."""
    A = integerize(T) if _is_rational_array(T) else T
    return [exact_rank(np.moveaxis(A, i, 0).reshape(T.shape[i], -1)) for i in range(T.ndim)]


def max_flattening_rank(T: np.ndarray, cap: int) -> int:
    """Largest flattening rank over all bipartitions, capped at ``cap + 1``.

    Order-1 tensors have no bipartition; their value is 1 if nonzero, else 0.
    """
    if cap < 1:
        raise ValueError("cap must be positive")
    if T.ndim == 1:
        return int(any(x != 0 for x in T))
    rational = _is_rational_array(T)
    A = integerize(T) if rational else T
    rank = _bareiss_rank if rational else _field_rank
    best = 0
    for p in bipartitions(T.ndim):
        best = max(best, rank(flattening(A, p), cap))
        if best > cap:
            return cap + 1
    return best
