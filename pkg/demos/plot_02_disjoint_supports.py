"""
Making two almost disjoint functions disjoint
=============================================

``f1`` and ``f2`` are positive, their sum has L1 norm at most one and their
difference has L1 norm at least ``1 - eps^2``.  ``disjointify`` cuts them
down to functions with disjoint supports whose sum has norm one, and moves
each by less than ``7 eps``.
"""

from fractions import Fraction as Q

from bpb import LatticeVector, MeasureSpace, disjointify, l1_norm

space = MeasureSpace.counting(3)
f1 = LatticeVector((Q(49, 100), Q(1, 1000), Q(4, 1000)), space)
f2 = LatticeVector((0, Q(501, 1000), Q(4, 1000)), space)
eps = Q(1, 10)

w = disjointify(f1, f2, eps)
print("W, G1, G2 =", sorted(w.W), sorted(w.G1), sorted(w.G2))
print("normalizer =", w.normalizer)
print("g1 =", [str(a) for a in w.g1])
print("g2 =", [str(a) for a in w.g2])

###############################################################################
# Every inequality used along the way is recorded and checked exactly.

for item in w.certificate:
    print(item.describe())
print("||g1 - f1||_1 =", float(l1_norm(w.g1 - f1)), "< 7 eps =", float(7 * eps))
