"""
Symmetries, involutions and a failing example
=============================================

Flipping the comultiplication, reversing the product, or both, gives
three companions of every regular algebroid.  Over Q(i) we can also ask
for compatible involutions.  Finally a monoid that is not a group shows
what a non-regular instance looks like.
"""

from mhalgebroid import (check_regular, check_star, convolution_algebroid, convolution_star, cyclic_group_groupoid,
                         derive_antipode, function_algebroid, make_algebra, monoid_category, symmetries,
                         tensor_algebroid, transport_counits)
from mhalgebroid import linalg as la
from mhalgebroid.linalg import QQ, QQ_I

# On groupoids S is an involution, so S and its inverse look alike.  A
# tensor algebroid whose S_B swaps coordinates while S_C does not has
# S^2 != id, which makes the comparison below meaningful.
QxQ = make_algebra(["p", "q"], {(0, 0): {0: 1}, (1, 1): {1: 1}}, [1, 1], QQ, "QxQ")
M = tensor_algebroid(QxQ, QxQ, la.from_rows([[0, 1], [1, 0]], QQ), la.eye(2, QQ))
ant = derive_antipode(M)
print("S^2 == id:", la.equal(ant.S * ant.S, la.eye(M.n, QQ)))
expected = transport_counits(M, ant)

for tag, N in zip(("co", "op", "op_co"), symmetries(M)):
    a = derive_antipode(N)
    same = la.equal(a.S, ant.S)
    inverse = la.equal(a.S, la.inverse(ant.S))
    counits = la.equal(a.eps_B, expected[tag][0]) and la.equal(a.eps_C, expected[tag][1])
    print(f"{tag:<6} S equal: {same!s:<5} S inverse: {inverse!s:<5} counits transported: {counits}")

# Involutions need complex conjugation, hence the Gaussian rationals.
g = cyclic_group_groupoid(3)
Mi = convolution_algebroid(g, QQ_I)
rep = check_star(Mi, convolution_star(Mi, g), derive_antipode(Mi))
for e in rep.entries:
    print(f"  {e.status:4} {e.code}")

# The monoid {1, z} with zz = z: a category but not a groupoid.
Z = function_algebroid(monoid_category())
cert = check_regular(Z)
print("monoid regular:", cert.regular)
print({k: v for k, v in cert.bijective.items()})
try:
    derive_antipode(Z, cert)
except Exception as e:
    print(type(e).__name__, "->", e)
