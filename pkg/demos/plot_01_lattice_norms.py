"""
Norms on finite measure spaces
==============================

Vectors live on a finite set of atoms with positive weights.  The sup norm
ignores the weights; the L1 norm integrates against them.
"""

from fractions import Fraction as Q

from bpb import LatticeVector, MeasureSpace, PositiveOperator, l1_norm, sup_norm
from bpb.lattice import LinearOperator, opnorm_exact, opnorm_positive

space = MeasureSpace((Q(1, 2), 1, 2))
f = LatticeVector((1, Q(-1, 3), Q(1, 4)), space)
print("f        =", [str(a) for a in f])
print("||f||_inf =", sup_norm(f))
print("||f||_1   =", l1_norm(f))

###############################################################################
# For a positive operator the L_inf -> L_1 norm is reached at the constant
# function one, so it costs a single matrix-vector product.  Sign enumeration
# agrees, at a cost of 2^min(n, m).

T = PositiveOperator(((1, 2, 0), (Q(1, 2), 0, 3)), space, MeasureSpace((1, Q(1, 3))))
print("||T(1)||_1         =", opnorm_positive(T))
print("sign enumeration   =", opnorm_exact(T))

###############################################################################
# With signs the shortcut no longer works.

D = LinearOperator(((1, -1),), MeasureSpace.counting(2), MeasureSpace.counting(1))
print("||[1, -1]||         =", opnorm_exact(D))
