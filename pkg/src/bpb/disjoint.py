"""Disjointly supported approximants of two positive L_1 functions.

If ``f1, f2 >= 0`` satisfy ``||f1 + f2||_1 <= 1`` and ``||f1 - f2||_1 >= 1 - eps^2``
with ``0 < eps < 1/5``, then there are positive ``g1, g2`` with disjoint
supports, ``||g1 + g2||_1 = 1`` and ``||g_i - f_i||_1 < 7 eps``.

The construction splits the atoms into

* ``W``:  atoms where ``|f1 - f2| <= (1 - eps)(f1 + f2)`` (both functions matter),
* ``G1``: remaining atoms with ``f1 > f2``,
* ``G2``: remaining atoms with ``f2 > f1``,

keeps ``f1`` on ``G1`` and ``f2`` on ``G2``, and rescales both by the common
normalizer ``||f1 chi_G1 + f2 chi_G2||_1``.
"""

from dataclasses import dataclass

from . import arith
from .certs import Inequality, require
from .errors import DegenerateNormalizer, DimensionMismatch, InternalInvariantError, PreconditionViolated
from .lattice import LatticeVector, l1_norm

EPS_UPPER = 5  # eps must lie strictly below 1/EPS_UPPER


@dataclass(frozen=True)
class LemmaWitness:
    g1: LatticeVector
    g2: LatticeVector
    W: frozenset
    G1: frozenset
    G2: frozenset
    normalizer: object
    eps: object
    certificate: tuple

    @property
    def passed(self):
        return all(item.holds for item in self.certificate)


def witness_sets(f1, f2, eps):
    """The sets ``(W, G1, G2)``, computed without checking any hypothesis."""
    one = arith.to_scalar(1)
    W, G1, G2 = set(), set(), set()
    for t, (a, b) in enumerate(zip(f1, f2)):
        if abs(a - b) <= (one - eps) * (a + b):
            W.add(t)
        elif a > b:
            G1.add(t)
        elif b > a:
            G2.add(t)
        else:
            # a == b puts t in W because |a - b| = 0 <= (1 - eps)(a + b)
            raise InternalInvariantError(f"atom {t} with f1 = f2 escaped W")
    return frozenset(W), frozenset(G1), frozenset(G2)


def check_hypotheses(f1, f2, eps):
    """Raise :class:`PreconditionViolated` naming the first failing hypothesis."""
    if f1.space != f2.space:
        raise DimensionMismatch("f1 and f2 live on different measure spaces")
    if not (0 < eps and eps * EPS_UPPER < 1):
        raise PreconditionViolated(f"eps = {arith.scalar_str(eps)} is not in (0, 1/5)", "eps-range")
    if not f1.is_nonnegative():
        raise PreconditionViolated("f1 has a negative coordinate", "f1-positive")
    if not f2.is_nonnegative():
        raise PreconditionViolated("f2 has a negative coordinate", "f2-positive")
    total = l1_norm(f1 + f2)
    if not arith.le(total, 1):
        raise PreconditionViolated(
            f"||f1 + f2||_1 = {arith.scalar_str(total)} exceeds 1", "sum-norm"
        )
    diff = l1_norm(f1 - f2)
    if not arith.le(1 - eps * eps, diff):
        raise PreconditionViolated(
            f"||f1 - f2||_1 = {arith.scalar_str(diff)} is below 1 - eps^2 = "
            f"{arith.scalar_str(1 - eps * eps)}",
            "diff-norm",
        )


def _integral(f, members):
    return l1_norm(f.restrict(members))


def disjointify(f1, f2, eps):
    """Return the full :class:`LemmaWitness` for ``(f1, f2, eps)``.

    Every inequality of the construction is evaluated and stored in
    ``witness.certificate``; a failing one raises
    :class:`~bpb.errors.InternalInvariantError` since it cannot happen on
    inputs that pass the hypotheses.
    """
    eps = arith.to_scalar(eps)
    check_hypotheses(f1, f2, eps)
    space = f1.space
    W, G1, G2 = witness_sets(f1, f2, eps)
    if W | G1 | G2 != frozenset(space.atoms()) or (W & G1) or (W & G2) or (G1 & G2):
        raise InternalInvariantError("W, G1, G2 do not partition the atoms")

    kept1 = f1.restrict(G1)
    kept2 = f2.restrict(G2)
    normalizer = l1_norm(kept1 + kept2)
    if normalizer == 0:
        raise DegenerateNormalizer("||f1 chi_G1 + f2 chi_G2||_1 vanished")
    g1 = kept1 / normalizer
    g2 = kept2 / normalizer

    one = arith.to_scalar(1)
    certificate = [
        Inequality("int-W-small", _integral(f1 + f2, W), "<=", eps),
        Inequality("int-G1-f2-small", _integral(f2, G1), "<=", eps),
        Inequality("int-G2-f1-small", _integral(f1, G2), "<=", eps),
        Inequality("f1-close-f1G1", l1_norm(f1 - kept1), "<=", 2 * eps),
        Inequality("f2-close-f2G2", l1_norm(f2 - kept2), "<=", 2 * eps),
        Inequality("g1G1-g2G2-big", normalizer, ">=", one - eps * eps - 4 * eps),
        Inequality("normalizer-above-1-5eps", normalizer, ">", one - 5 * eps),
        Inequality("g1-close-f1", l1_norm(g1 - f1), "<", 7 * eps),
        Inequality("g2-close-f2", l1_norm(g2 - f2), "<", 7 * eps),
        Inequality("g-sum-unit", l1_norm(g1 + g2), "=", one),
        Inequality("disjoint-supports", len(g1.support() & g2.support()), "=", 0),
    ]
    if not (g1.is_nonnegative() and g2.is_nonnegative()):
        raise InternalInvariantError("g1 or g2 has a negative coordinate")
    require(certificate, "disjointify")
    return LemmaWitness(g1, g2, W, G1, G2, normalizer, eps, tuple(certificate))
