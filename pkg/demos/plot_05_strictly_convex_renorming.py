"""
A strictly convex renorming of c0
=================================

``|||x||| = ||x||_inf + (sum x_n^2 / 4^n)^(1/2)`` is equivalent to the sup
norm and strictly convex.  The identity from c0 with the sup norm to this
space has norm ``1 + 1/sqrt(3)`` but does not attain it, and finite sections
approach the limit only at rate ``4^-N``.
"""

from bpb.counterexample import (
    LIMIT_NORM,
    RenormVector,
    attainment_gap,
    convexity_trials,
    identity_norm,
    identity_norm_bruteforce,
    strict_convexity_check,
    tnorm,
)

for N in (1, 2, 4, 8, 12):
    print(f"N={N:2d}  closed form {identity_norm(N):.12f}  brute force {identity_norm_bruteforce(N):.12f}")
print(f"limit        {LIMIT_NORM:.12f}")

###############################################################################
# The gap after the first ``k`` coordinates shrinks like ``4^-k``.

for k in (1, 5, 10, 20, 30):
    print(f"k={k:2d}  gap {attainment_gap(k):.3e}")

###############################################################################
# (1, 1) and (1, -1) have the same sup norm and so does their midpoint.  The
# square-sum term makes the midpoint strictly shorter.

x, y = RenormVector((1.0, 1.0)), RenormVector((1.0, -1.0))
x, y = x / tnorm(x), y / tnorm(y)
print("midpoint norm:", tnorm((x + y) / 2), strict_convexity_check(x, y))
print("random trials:", convexity_trials(1000, seed=1))
