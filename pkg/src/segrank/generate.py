"""Seeded instance generators with ground-truth sidecars.

Three kinds: ``rank1`` (a Segre point), ``rank2`` (sum of two Segre points
that differ in every mode of dimension >= 2) and ``tangent`` (a point of the
tangent space at ``O = w_1 (x) ... (x) w_d`` moving the factors in a chosen
mode set ``E``).  Randomness comes from ``random.Random(seed)`` only, so
output is reproducible across runs and platforms.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np
from gmpy2 import mpq

from .scalar import format_scalar

__all__ = ["GenSpec", "generate", "random_rational", "random_vector", "random_independent"]

KINDS = ("rank1", "rank2", "tangent")


@dataclass(frozen=True)
class GenSpec:
    kind: str
    shape: tuple
    modes: tuple | None = None
    seed: int = 0
    height: int = 9

    def __post_init__(self):
        object.__setattr__(self, "shape", tuple(int(n) for n in self.shape))
        if self.modes is not None:
            object.__setattr__(self, "modes", tuple(sorted(set(int(m) for m in self.modes))))
        if self.kind not in KINDS:
            raise ValueError(f"unknown kind {self.kind!r}; expected one of {KINDS}")
        if not self.shape or min(self.shape) < 1:
            raise ValueError(f"invalid shape {self.shape}")
        if self.height < 1:
            raise ValueError("height must be at least 1")
        wide = [i for i, n in enumerate(self.shape) if n >= 2]
        if self.kind == "rank2" and len(wide) < 2:
            raise ValueError("rank2 needs at least two modes of dimension >= 2")
        if self.kind == "tangent":
            E = self.tangent_modes
            if len(E) < 2:
                raise ValueError("tangent needs at least two perturbed modes")
            bad = [m for m in E if not 0 <= m < len(self.shape) or self.shape[m] < 2]
            if bad:
                raise ValueError(f"modes {bad} are out of range or have dimension < 2")
        elif self.modes is not None:
            raise ValueError("--modes only applies to kind=tangent")

    @property
    def tangent_modes(self) -> tuple:
        if self.modes is not None:
            return self.modes
        return tuple(i for i, n in enumerate(self.shape) if n >= 2)


def random_rational(rng: random.Random, height: int, nonzero: bool = False) -> mpq:
    while True:
        x = mpq(rng.randint(-height, height), rng.randint(1, height))
        if x != 0 or not nonzero:
            return x


def random_vector(rng: random.Random, n: int, height: int) -> np.ndarray:
    while True:
        v = np.array([random_rational(rng, height) for _ in range(n)], dtype=object)
        if any(x != 0 for x in v):
            return v


def random_independent(rng: random.Random, w: np.ndarray, height: int) -> np.ndarray:
    """A random vector not proportional to ``w`` (needs ``len(w) >= 2``)."""
    while True:
        v = random_vector(rng, len(w), height)
        # independent iff some 2x2 minor of [w v] is nonzero
        if any(w[i] * v[j] != w[j] * v[i] for i in range(len(w)) for j in range(i + 1, len(w))):
            return v


def _outer(vectors):
    out = vectors[0]
    for v in vectors[1:]:
        out = np.multiply.outer(out, v)
    return out


def _tangent_tensor(alpha, w, v, lam, E):
    # derivative recursion: P_j = P_{j-1} (x) w_j, D_j = D_{j-1} (x) w_j + lam_j P_{j-1} (x) v_j
    P = np.array(mpq(1), dtype=object)
    D = None
    for j in range(len(w)):
        newD = None if D is None else np.multiply.outer(D, w[j])
        if j in E:
            term = lam[j] * np.multiply.outer(P, v[j])
            newD = term if newD is None else newD + term
        D = newD
        P = np.multiply.outer(P, w[j])
    return alpha * P + D


def _vec_json(v):
    return [format_scalar(x) for x in v]


def generate(spec: GenSpec):
    """Return ``(tensor, sidecar)`` for ``spec``.

    The sidecar records the stratum, rank and type implied by the
    construction, plus the construction data itself.
    """
    rng = random.Random(spec.seed)
    h = spec.height
    shape = spec.shape
    d = len(shape)
    side = {
        "kind": spec.kind,
        "shape": list(shape),
        "seed": spec.seed,
        "height": h,
    }
    if spec.kind == "rank1":
        c = random_rational(rng, h, nonzero=True)
        vs = [random_vector(rng, n, h) for n in shape]
        T = c * _outer(vs)
        side.update(stratum="rank1", border_rank=1, rank=1, eta=1,
                    terms=[{"coeff": format_scalar(c), "vectors": [_vec_json(v) for v in vs]}])
        return T, side

    if spec.kind == "rank2":
        c1 = random_rational(rng, h, nonzero=True)
        c2 = random_rational(rng, h, nonzero=True)
        a = [random_vector(rng, n, h) for n in shape]
        b = [random_independent(rng, x, h) if len(x) >= 2 else x.copy() for x in a]
        T = c1 * _outer(a) + c2 * _outer(b)
        k = sum(1 for n in shape if n >= 2)
        # two points differing in exactly two modes span a line of a tangent space
        stratum = "rank2" if k >= 3 else "tangent"
        side.update(stratum=stratum, border_rank=2, rank=2, eta=2, eta_defined=(k < 3),
                    terms=[{"coeff": format_scalar(c), "vectors": [_vec_json(v) for v in vs]}
                           for c, vs in ((c1, a), (c2, b))])
        return T, side

    E = set(spec.tangent_modes)
    w = [random_vector(rng, n, h) for n in shape]
    v = [random_independent(rng, w[j], h) if j in E else None for j in range(d)]
    lam = [random_rational(rng, h, nonzero=True) if j in E else None for j in range(d)]
    alpha = random_rational(rng, h)
    T = _tangent_tensor(alpha, w, v, lam, E)
    side.update(
        stratum="tangent", border_rank=2, rank=len(E), eta=len(E), modes=sorted(E),
        frame={
            "alpha": format_scalar(alpha),
            "w": [_vec_json(x) for x in w],
            "v": {str(j): _vec_json(v[j]) for j in sorted(E)},
            "lambda": {str(j): format_scalar(lam[j]) for j in sorted(E)},
        },
    )
    return T, side
