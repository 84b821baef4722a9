"""
Groupoid algebroids, from composition table to antipode
=======================================================

A finite groupoid gives two multiplier Hopf algebroids: functions on its
arrows with pointwise product, and its convolution algebra.  This script
builds both for the pair groupoid on two objects, certifies them and
derives counits and antipode by exact linear algebra.
"""

from mhalgebroid import (check_regular, convolution_algebroid, derive_antipode, function_algebroid, pair_groupoid,
                         verify_antipode)
from mhalgebroid import linalg as la

# The pair groupoid on {1, 2}: one arrow "ij" from j to i for every pair.
g = pair_groupoid(2)
print("arrows:", g.arrows)
print("(12)(21) =", g.compose[("12", "21")])

# Building an algebroid certifies every axiom on the way in.  A failure
# raises AxiomFailed with a witness, so getting an object back means the
# whole catalog passed.
F = function_algebroid(g)
print(F.name, "dim A =", F.A.dim, "dim Q_L =", F.QL.dim)

# Q_L is A (x) A balanced over the base.  For functions on arrows it keeps
# exactly the composable pairs: 8 of the 16 pairs here.
print("composable pairs:", len(g.composable()))

# Regularity means all four canonical maps are bijective and the
# base ideals are full.
cert = check_regular(F)
for k, v in cert.flags().items():
    print(f"  {k:<26} {v}")

# Counits and antipode come out of inverting the canonical maps.
ant = derive_antipode(F, cert)
print("eps_B =")
for row in la.to_rows(ant.eps_B):
    print("  ", [int(x) for x in row])
print("S sends each delta function to the one at the inverse arrow:")
for j, lab in enumerate(F.A.labels):
    (i, _), = la.column(ant.S, j).items()
    print(f"  S({lab}) = {F.A.labels[i]}")

rep = verify_antipode(F, ant)
for e in rep.entries:
    print(f"  {e.status:4} {e.code}")

# The convolution algebra is non-commutative; its counits sum over fibres.
C = convolution_algebroid(g)
antC = derive_antipode(C)
print("convolution eps_B (rows: objects, columns: arrows)")
for row in la.to_rows(antC.eps_B):
    print("  ", [int(x) for x in row])
