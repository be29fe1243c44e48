"""
Correcting a nearly norming pair
================================

``S`` is a positive operator of norm one and ``f0`` almost attains it.  The
corrector returns ``T`` and ``u0`` with ``||T u0||_1 = ||T|| = 1`` exactly,
``T`` close to ``S`` and ``u0`` close to ``f0``.
"""

from fractions import Fraction as Q

from bpb import correct_linfty_l1, verify_correction
from bpb.harness import gen_instance

eps = Q(3, 10)
inst = gen_instance(seed=7, n=5, m=4, eps=eps, profile="sign-pattern")
print("f0 =", [float(a) for a in inst.f0])

c = correct_linfty_l1(inst.S, inst.f0, eps)
part = c.certificate.partition
print("A =", sorted(part.A), "B =", sorted(part.B), "C =", sorted(part.C))
print("u0 =", [float(a) for a in c.u0])

###############################################################################
# The distances are tiny compared with ``eps``; the deficit allowed in the
# hypothesis is of order ``eps^4``.

print("||u0 - f0||_inf =", float(c.certificate.dist_point))
print("||T - S||       =", float(c.certificate.dist_op_exact))
print("eta             =", float(c.eta))

###############################################################################
# An independent check recomputes everything from ``S``, ``f0`` and the
# output, with sign enumeration for the operator distance.

report = verify_correction(inst.S, inst.f0, eps, c)
print("\n".join(report.lines()))
