"""
Tensor products and crossed products of bases
=============================================

Two unital base algebras B, C with anti-isomorphisms S_B: B -> C and
S_C: C -> B give the algebroid A = C (x) B.  Letting a Hopf algebra act on
both sides twists the product into C (x) H (x) B.
"""

from mhalgebroid import (ActionData, crossed_product_algebroid, cyclic_group, derive_antipode, make_algebra,
                         make_fin_hopf, tensor_algebroid)
from mhalgebroid import linalg as la
from mhalgebroid.linalg import QQ

# Q[Z/2] with the group inversion as antipode.
H = make_fin_hopf(cyclic_group(2))
print("kZ2 labels:", H.algebra.labels)

T = tensor_algebroid(H.algebra, H.algebra, H.antipode, H.antipode)
ant = derive_antipode(T)
print(T.name, "dim A =", T.A.dim)

# The antipode swaps the two factors, applying S_B and S_C on the way.
for j, lab in enumerate(T.A.labels):
    img = {T.A.labels[i]: str(v) for i, v in la.column(ant.S, j).items()}
    print(f"  S({lab}) = {img}")

# Now Q x Q on both sides, with Z/2 swapping the coordinates.
QxQ = make_algebra(["p", "q"], {(0, 0): {0: 1}, (1, 1): {1: 1}}, [1, 1], QQ, "QxQ")
I2 = la.eye(2, QQ)
sw = la.from_rows([[0, 1], [1, 0]], QQ)
X = crossed_product_algebroid(QxQ, QxQ, I2, I2, H, ActionData([I2, sw], [I2, sw]))
print(X.name, "dim A =", X.A.dim)

# Elements 1⊗h⊗1 and c⊗1⊗1 of A, written in the basis c⊗h⊗b.
idx = {lab: i for i, lab in enumerate(X.A.labels)}
g1 = {idx[f"{c}⊗g1⊗{b}"]: QQ.one for c in "pq" for b in "pq"}
p = {idx[f"p⊗g0⊗{b}"]: QQ.one for b in "pq"}


def show(v):
    return " + ".join(X.A.labels[i] for i in sorted(v)) or "0"


# Moving g1 past p on the C side turns p into q.
print("g1 p =", show(X.A.mul(g1, p)))
print("p g1 =", show(X.A.mul(p, g1)))

antX = derive_antipode(X)
print("eps_B of each basis element:")
for j, lab in enumerate(X.A.labels):
    print(f"  {lab:<9}", {X.B.labels[i]: str(v) for i, v in la.column(antX.eps_B, j).items()})
