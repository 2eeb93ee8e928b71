"""The decompositions of a tangent point come in a family.

A tangent tensor alpha*O + sum_i beta_i*D_i with q essential modes has rank q.
Pick the first q-1 points freely on their lines through O; the last one is
then forced.  This script walks a few parameter choices on a random
order-4 instance and shows that the last point cannot be moved.
"""

from gmpy2 import mpq

from segrank import concise_core, lift, tangent_frame, verify
from segrank.decompose import DegenerateParametersError, decompose_tangent
from segrank.generate import GenSpec, generate
from segrank.scalar import format_scalar

T, side = generate(GenSpec("tangent", (3, 2, 4, 2), seed=5))
print("instance shape", T.shape, "- generator says rank", side["rank"])

cc = concise_core(T)
frame = tangent_frame(cc.core)
print("alpha =", format_scalar(frame.alpha), " beta =", [format_scalar(b) for b in frame.beta])

for params in ([1, 1, 1], [2, 1, 1], [mpq(1, 2), 2, 3], [-1, 5, mpq(-2, 3)]):
    try:
        dec = lift(decompose_tangent(frame, params), cc)
    except DegenerateParametersError as exc:
        print(params, "->", exc)
        continue
    coeffs = [format_scalar(t.coeff) for t in dec.terms]
    print(f"t = {[format_scalar(mpq(p)) for p in params]}: coefficients {coeffs}, verified {verify(dec, T)}")

# the last term is unique: nudge it and the sum is no longer T
dec = decompose_tangent(frame, [1, 1, 1])
last = dec.terms[-1]
nudged = type(last)(last.coeff, last.vectors[:-1] + (last.vectors[-1] + 1,))
bad = type(dec)(dec.terms[:-1] + (nudged,), dec.claimed_rank)
print("after moving the last point:", verify(lift(bad, cc), T))
