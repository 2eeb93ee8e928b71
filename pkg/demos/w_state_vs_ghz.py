"""Two 2x2x2 tensors with the same border rank and different ranks.

GHZ = e0e0e0 + e1e1e1 is a generic point of the secant variety; the W state
e1e0e0 + e0e1e0 + e0e0e1 sits on a tangent space and needs three terms.
The slice pencil tells them apart: its rank-one members are two distinct
points for GHZ and a single double point for W.
"""

from segrank import classify, decompose, slice_pencil_gcd, tensor, verify
from segrank.scalar import format_scalar


def show(name, T):
    c = classify(T)
    print(f"{name}: stratum={c.stratum.value} rank={c.rank} border_rank={c.border_rank}")
    p = slice_pencil_gcd(T, 0)
    print(f"  gcd of pencil minors (l^2, lm, m^2): {[format_scalar(x) for x in p.gcd_form]}")
    print(f"  root structure: {type(p.structure).__name__}")
    dec = decompose(T)
    for t in dec.terms:
        vecs = " (x) ".join("[" + ", ".join(format_scalar(x) for x in v) + "]" for v in t.vectors)
        print(f"  {format_scalar(t.coeff):>4} * {vecs}")
    print(f"  verified: {verify(dec, T)}")


ghz = tensor([[[1, 0], [0, 0]], [[0, 0], [0, 1]]])
w = tensor([[[0, 1], [1, 0]], [[1, 0], [0, 0]]])
show("GHZ", ghz)
show("W", w)
