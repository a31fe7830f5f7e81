"""The matrix-valued edge weights.

Four mutually orthogonal rank-one projector blocks serve as 4x4 edge
weights on the lattice supergraph; they factor as Kronecker products of
the two 2x2 blocks pi+ and pi-, which is what later lets the lattice be
regrouped into 2x2 block-Hankel form.
"""

import numpy as np

from combcluster import kron, projector2, projector4

print("pi+ =")
print(projector2("+").as_float())
print("pi- =")
print(projector2("-").as_float())
print()

for j in range(4):
    print(f"P{j} =")
    print(projector4(j).as_float())
    print()

print("orthogonality: Pi @ Pj = delta_ij Pi")
for i in range(4):
    row = []
    for j in range(4):
        prod = projector4(i) @ projector4(j)
        row.append("Pi" if prod == projector4(i) else
                   ("0 " if prod.is_zero else "??"))
    print(" ", row)

total = sum(projector4(j).as_float() for j in range(4))
print("\nsum of the four blocks:")
print(total)
assert np.array_equal(total, np.eye(4))

print("\ntensor pairing pi(s) x pi(t) -> P_j:")
for (s, t), j in {("+", "+"): 0, ("+", "-"): 1, ("-", "+"): 2, ("-", "-"): 3}.items():
    match = kron(projector2(s), projector2(t)) == projector4(j)
    print(f"  pi{s} x pi{t} == P{j}: {match}")
