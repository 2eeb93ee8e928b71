import random

import numpy as np
from gmpy2 import mpq

from segrank import tensor


def W_STATE():
    T = np.zeros((2, 2, 2), dtype=object)
    T[...] = mpq(0)
    T[1, 0, 0] = T[0, 1, 0] = T[0, 0, 1] = mpq(1)
    return T


def GHZ():
    T = np.zeros((2, 2, 2), dtype=object)
    T[...] = mpq(0)
    T[0, 0, 0] = T[1, 1, 1] = mpq(1)
    return T


def diag3():
    T = np.zeros((3, 3, 3), dtype=object)
    T[...] = mpq(0)
    for i in range(3):
        T[i, i, i] = mpq(1)
    return T


def rat(rng, h=9, nonzero=False):
    while True:
        x = mpq(rng.randint(-h, h), rng.randint(1, h))
        if x or not nonzero:
            return x


def random_invertible(rng, n, h=5):
    from oracles import sympy_rank

    while True:
        M = np.array([[rat(rng, h) for _ in range(n)] for _ in range(n)], dtype=object)
        if sympy_rank(M) == n:
            return M


def inverse(M):
    import sympy

    S = sympy.Matrix([[sympy.Rational(int(x.numerator), int(x.denominator)) for x in row] for row in M]).inv()
    return np.array([[mpq(int(v.p), int(v.q)) for v in row] for row in S.tolist()], dtype=object)


def apply_all_modes(T, mats):
    from segrank import mode_apply

    for m, M in enumerate(mats):
        T = mode_apply(T, m, M)
    return T


def random_tensor(rng, shape, h=5):
    return tensor(np.array([rat(rng, h) for _ in range(int(np.prod(shape)))], dtype=object).reshape(shape))


__all__ = ["W_STATE", "GHZ", "diag3", "rat", "random_invertible", "inverse", "apply_all_modes", "random_tensor", "random"]
