"""Tensor rank equals symmetric rank for forms of border rank two.

For each degree d the three families L^d, L^d + M^d and L^(d-1) M are run
through two independent computations: the tensor classification of the
symmetric tensor, and Sylvester's catalecticant test on the binary form.
"""

from segrank.symmetric import comon_check, linear_form

L = linear_form([1, -2])
M = linear_form([3, 1])

print(" d  form           tensor  symmetric")
for d in range(2, 7):
    for label, f in (("L^d", L**d), ("L^d + M^d", L**d + M**d), ("L^(d-1) M", L ** (d - 1) * M)):
        r = comon_check(f)
        flag = "" if r.equal else "  <-- mismatch"
        print(f"{d:2d}  {label:13s} {r.tensor_rank:6d} {r.symmetric_rank:10d}{flag}")
