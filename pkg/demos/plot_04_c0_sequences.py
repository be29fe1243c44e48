"""
Sequences vanishing at infinity
===============================

A finitely supported sequence in c0 is a function on finitely many atoms of
weight one.  Coordinates past the declared tail must be zero, and the
columns of ``S`` there must vanish too.
"""

from fractions import Fraction as Q

from bpb import correct_c0_l1, correct_linfty_l1
from bpb.correct import c0_tail_partial_sums
from bpb.harness import gen_instance

eps = Q(1, 2)
inst = gen_instance(seed=3, n=6, m=3, eps=eps, kind="c0", tail=2)
c = correct_c0_l1(inst.S, inst.f0, eps, tail_declared_zero=True, tail=2)
print("x0 =", [float(a) for a in inst.f0])
print("u0 =", [float(a) for a in c.u0])
print("partial sums of ||S(chi_Cn)||:", [float(a) for a in c0_tail_partial_sums(inst.S, c.certificate.partition.C)])

###############################################################################
# Without a tail the c0 corrector is the L_inf corrector on the counting
# measure, result for result.

inst = gen_instance(seed=3, n=4, m=3, eps=eps, kind="c0")
a = correct_c0_l1(inst.S, inst.f0, eps, tail_declared_zero=True)
b = correct_linfty_l1(inst.S, inst.f0, eps)
print("identical:", a == b)
