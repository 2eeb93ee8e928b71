"""Rank is a property of the essential subspaces.

Here the W state is pushed into a 4 x 3 x 5 x 2 space through random
injective maps, with an extra rank-one factor in the last mode.  Concision
recovers a 2x2x2 core; decomposing the core and lifting back gives three
terms for the big tensor.
"""

import random

import numpy as np
from gmpy2 import mpq

from segrank import classify, concise_core, decompose, multilinear_ranks, verify
from segrank.tensor import mode_apply, tensor

rng = random.Random(1)


def rand_matrix(rows, cols):
    return np.array([[mpq(rng.randint(-5, 5), rng.randint(1, 5)) for _ in range(cols)] for _ in range(rows)], dtype=object)


w = tensor([[[0, 1], [1, 0]], [[1, 0], [0, 0]]])
T = np.multiply.outer(w, tensor([mpq(2, 3), 1]))
for mode, n in enumerate((4, 3, 5)):
    T = mode_apply(T, mode, rand_matrix(n, 2))

print("shape", T.shape, "multilinear ranks", multilinear_ranks(T))
cc = concise_core(T)
print("core modes", cc.modes, "dropped modes", sorted(cc.dropped))
print("classification", classify(T))
dec = decompose(T)
print(len(dec.terms), "terms, verified:", verify(dec, T))
