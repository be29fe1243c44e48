"""Norm-attaining corrections of positive operators ``L_inf -> L_1`` and ``c_0 -> l_1``.

Given a positive operator ``S`` of norm one, ``0 < eps < 1`` and a unit vector
``f0`` with ``||S f0||_1 > 1 - eta^2`` where ``eta = (eps/58)^2``, the
correctors build a positive norm-one ``T`` and a unit vector ``u0`` with
``||T u0||_1 = 1``, ``||u0 - f0||_inf <= eta`` and ``||T - S|| < eps``.

Outline of the construction:

1. split the domain atoms by the value of ``f0`` into ``A`` (near -1),
   ``B`` (near +1) and ``C`` (everything else);
2. apply :func:`~bpb.disjoint.disjointify` to ``S(chi_A)`` and ``S(chi_B)``
   with parameter ``eps/29``, giving disjointly supported ``g1, g2``;
3. ``V(f) = S(f chi_A) chi_{supp g1} + S(f chi_B) chi_{supp g2}``;
4. ``u0 = chi_B - chi_A + f0 chi_C`` and ``T = V / ||V||``.

Every intermediate inequality is recorded in a :class:`CorrectionCertificate`.
:func:`verify_correction` re-checks the final claims from scratch.
"""

from dataclasses import dataclass, field
from typing import Optional

from . import arith
from .certs import Inequality, require
from .disjoint import LemmaWitness, disjointify
from .errors import (
    DimensionMismatch,
    EpsOutOfRange,
    InternalInvariantError,
    NotNearNorming,
    NotPositive,
    NotUnitNorm,
    PreconditionViolated,
    VectorOutOfBall,
)
from .lattice import (
    DEFAULT_ENUMERATION_CAP,
    LatticeVector,
    LinearOperator,
    PositiveOperator,
    apply,
    entry_mass_bound,
    indicator,
    l1_norm,
    opnorm_exact,
    opnorm_positive,
    operator_norm,
    sup_norm,
)

ETA_DENOMINATOR = 58
LEMMA_DIVISOR = 29  # lemma parameter eps/29 = 2 sqrt(eta)


@dataclass(frozen=True)
class DomainPartition:
    A: frozenset
    B: frozenset
    C: frozenset
    eta: object


@dataclass(frozen=True)
class CorrectionCertificate:
    dist_point: object
    dist_op_bound: object
    dist_op_exact: Optional[object]
    norm_V: object
    dist_V: object
    sfc_mass: object
    lemma_witness: LemmaWitness
    partition: DomainPartition
    scale: object
    inequalities: tuple = field(default=())

    @property
    def passed(self):
        return all(item.holds for item in self.inequalities)


@dataclass(frozen=True)
class Correction:
    T: PositiveOperator
    u0: LatticeVector
    eta: object
    certificate: CorrectionCertificate


def _one():
    return arith.to_scalar(1)


def eta_of_eps(eps):
    """``eta = (eps/58)^2`` and the near-norming threshold ``eta^2``."""
    eps = arith.to_scalar(eps)
    if not (0 < eps < 1):
        raise EpsOutOfRange(f"eps = {arith.scalar_str(eps)} is not in (0, 1)", "eps-range")
    root = eps / ETA_DENOMINATOR
    eta = root * root
    return eta, eta * eta


def partition_domain(f0, eta):
    eta = arith.to_scalar(eta)
    if not (0 < eta < 1):
        raise PreconditionViolated(f"eta = {arith.scalar_str(eta)} is not in (0, 1)", "eta-range")
    norm = sup_norm(f0)
    if not arith.le(norm, 1):
        raise VectorOutOfBall(f"||f0||_inf = {arith.scalar_str(norm)} exceeds 1", "f0-ball")
    one = _one()
    A, B, C = set(), set(), set()
    for i, x in enumerate(f0):
        if arith.le(-one, x) and x < -one + eta:
            A.add(i)
        if one - eta < x and arith.le(x, one):
            B.add(i)
        if abs(x) <= one - eta:
            C.add(i)
    A, B, C = frozenset(A), frozenset(B), frozenset(C)
    if (A & B) or (A & C) or (B & C) or len(A) + len(B) + len(C) != f0.space.size:
        raise InternalInvariantError("A, B, C do not partition the domain")
    return DomainPartition(A, B, C, eta)


def _as_positive(S):
    if isinstance(S, PositiveOperator):
        return S
    if not S.is_positive():
        raise NotPositive("S must be entrywise nonnegative")
    return PositiveOperator.from_operator(S)


def check_hypotheses(S, f0, eps, normalize=False):
    """Validate the corrector's inputs; returns ``(S, eps, eta, threshold, scale)``.

    With ``normalize`` the operator is divided by ``||S(1)||_1`` first and the
    factor is returned as ``scale``; otherwise ``||S||`` must already be 1.
    """
    eps = arith.to_scalar(eps)
    eta, threshold = eta_of_eps(eps)
    S = _as_positive(S)
    if f0.space != S.domain:
        raise DimensionMismatch("f0 does not live on the domain of S")
    norm = opnorm_positive(S)
    scale = _one()
    if normalize:
        if norm == 0:
            raise NotUnitNorm("S is the zero operator", "S-unit")
        scale = _one() / norm
        S = S.scaled(scale)
    elif not arith.eq(norm, 1):
        raise NotUnitNorm(f"||S|| = {arith.scalar_str(norm)}, expected 1", "S-unit")
    f0_norm = sup_norm(f0)
    if not arith.eq(f0_norm, 1):
        raise NotUnitNorm(f"||f0||_inf = {arith.scalar_str(f0_norm)}, expected 1", "f0-unit")
    value = l1_norm(apply(S, f0))
    if not value > 1 - threshold:
        deficit = 1 - value
        raise NotNearNorming(
            f"||S f0||_1 = {arith.scalar_str(value)} is not above 1 - eta^2; "
            f"deficit {arith.scalar_str(deficit)} >= {arith.scalar_str(threshold)}",
            deficit=deficit,
            threshold=threshold,
        )
    return S, eps, eta, threshold, scale


def _masked(S, rows_for_columns):
    """Keep ``S[j][i]`` iff ``j in rows_for_columns[i]``."""
    zero = arith.to_scalar(0)
    matrix = tuple(
        tuple(a if j in rows_for_columns[i] else zero for i, a in enumerate(row))
        for j, row in enumerate(S.matrix)
    )
    return PositiveOperator(matrix, S.domain, S.codomain)


def _correct(S, f0, eps, normalize, cap):
    S, eps, eta, threshold, scale = check_hypotheses(S, f0, eps, normalize)
    one = _one()
    part = partition_domain(f0, eta)
    A, B, C = part.A, part.B, part.C
    if not (A or B):
        raise InternalInvariantError("A and B are both empty on a near-norming input")

    dom = S.domain
    chi_A, chi_B, chi_C = indicator(dom, A), indicator(dom, B), indicator(dom, C)
    SA, SB, SC = apply(S, chi_A), apply(S, chi_B), apply(S, chi_C)
    sfc_mass = l1_norm(SC)

    ineq = [
        Inequality("SfC-small", sfc_mass, "<=", eta),
        Inequality("Sf0AB-approx-A", l1_norm(apply(S, f0.restrict(A) + chi_A)), "<=", eta),
        Inequality("Sf0AB-approx-B", l1_norm(apply(S, f0.restrict(B) - chi_B)), "<=", eta),
        Inequality("SB-A-small", l1_norm(SB - SA), ">=", one - 4 * eta),
        Inequality("lemma-sum-norm", l1_norm(SA + SB), "<=", one),
    ]
    require(ineq, "correction hypotheses")

    lemma_eps = eps / LEMMA_DIVISOR
    try:
        witness = disjointify(SA, SB, lemma_eps)
    except PreconditionViolated as exc:
        raise InternalInvariantError(f"lemma hypotheses failed inside the corrector: {exc}") from exc
    supp1, supp2 = witness.g1.support(), witness.g2.support()

    lemma_bound = 7 * eps / LEMMA_DIVISOR
    out1 = frozenset(j for j in S.codomain.atoms() if j not in supp1)
    out2 = frozenset(j for j in S.codomain.atoms() if j not in supp2)
    leak_A = l1_norm(SA.restrict(out1))
    leak_B = l1_norm(SB.restrict(out2))
    ineq += [
        Inequality("g1-close-SA", l1_norm(witness.g1 - SA), "<", lemma_bound),
        Inequality("g2-close-SB", l1_norm(witness.g2 - SB), "<", lemma_bound),
        Inequality("S-A", leak_A, "<", lemma_bound),
        Inequality("S-B", leak_B, "<", lemma_bound),
    ]

    empty = frozenset()
    rows_for = [supp1 if i in A else supp2 if i in B else empty for i in dom.atoms()]
    V = _masked(S, rows_for)
    norm_V = opnorm_positive(V)
    # S - V is entrywise nonnegative, so its norm is its mass on the constant one
    dist_V = opnorm_positive(LinearOperator((S - V).matrix, dom, S.codomain))
    bound_V = leak_A + leak_B + sfc_mass
    ineq += [
        Inequality("V-S-decomposition", dist_V, "=", bound_V),
        Inequality("V-S-chain", bound_V, "<", 14 * eps / LEMMA_DIVISOR + eta),
        Inequality("V-S-small", dist_V, "<", eps / 2),
        Inequality("norm-V-big", norm_V, ">=", one - eps / 2),
        Inequality("norm-V-positive", norm_V, ">", 0),
    ]
    require(ineq, "correction")

    u0 = chi_B - chi_A + f0.restrict(C)
    dist_point = sup_norm(u0 - f0)
    Vu0 = l1_norm(apply(V, u0))
    T = V.scaled(one / norm_V)
    dist_op_bound = abs(one - norm_V) + dist_V
    dist_op_exact = None
    if dom.size <= cap:
        dist_op_exact = opnorm_exact(T - S, cap=cap)
    ineq += [
        Inequality("u0-unit", sup_norm(u0), "=", one),
        Inequality("u0-close-f0", dist_point, "<=", eta),
        Inequality("eta-below-eps", eta, "<", eps),
        Inequality("V-attains-at-u0", Vu0, "=", norm_V),
        Inequality("T-unit", opnorm_positive(T), "=", one),
        Inequality("T-attains-at-u0", l1_norm(apply(T, u0)), "=", one),
        Inequality("T-S-bound", dist_op_bound, "<=", 2 * dist_V),
        Inequality("T-S-small", dist_op_bound, "<", eps),
    ]
    if dist_op_exact is not None:
        ineq.append(Inequality("T-S-exact-below-bound", dist_op_exact, "<=", dist_op_bound))
    if f0.is_nonnegative():
        ineq.append(Inequality("u0-positive", sum(1 for x in u0 if x < 0), "=", 0))
    require(ineq, "correction")

    cert = CorrectionCertificate(
        dist_point=dist_point,
        dist_op_bound=dist_op_bound,
        dist_op_exact=dist_op_exact,
        norm_V=norm_V,
        dist_V=dist_V,
        sfc_mass=sfc_mass,
        lemma_witness=witness,
        partition=part,
        scale=scale,
        inequalities=tuple(ineq),
    )
    return Correction(T=T, u0=u0, eta=eta, certificate=cert)


def correct_linfty_l1(S, f0, eps, normalize=False, cap=DEFAULT_ENUMERATION_CAP):
    """Correct ``(S, f0)`` for the pair ``(L_inf(mu), L_1(nu))``.

    Raises :class:`~bpb.errors.NotNearNorming` (with the exact deficit),
    :class:`~bpb.errors.NotPositive`, :class:`~bpb.errors.NotUnitNorm` or
    :class:`~bpb.errors.EpsOutOfRange` on bad input.
    """
    return _correct(S, f0, eps, normalize, cap)


def c0_tail_partial_sums(S, C):
    """``||S(chi_{C_n})||_1`` for ``n = 1..N``; the last entry is the limit."""
    sums = []
    running = arith.to_scalar(0)
    weights = S.codomain.weights
    for i in range(S.domain.size):
        if i in C:
            running += sum((w * a for w, a in zip(weights, S.column(i))), arith.to_scalar(0))
        sums.append(running)
    return sums


def correct_c0_l1(
    S, x0, eps, tail_declared_zero=False, tail=0, normalize=False, cap=DEFAULT_ENUMERATION_CAP
):
    """Correct ``(S, x0)`` for the pair ``(c_0, l_1)`` at finite truncation.

    ``x0`` is a finitely supported element of ``c_0``: its explicit coordinates
    are the vector and every later coordinate is zero, as are the columns of
    ``S`` past the explicit dimension.  ``tail_declared_zero`` must be set to
    acknowledge this reading.  The last ``tail`` explicit coordinates may be
    declared part of the zero tail; they are checked to vanish in ``x0`` and in
    ``S``.

    Since every column outside the explicit range is zero, the limit of
    ``||S(chi_{C_n})||_1`` is the finite sum ``||S(chi_C)||_1`` and the result
    coincides with :func:`correct_linfty_l1` on the same data.
    """
    if not tail_declared_zero:
        raise PreconditionViolated(
            "c0 instances must acknowledge the zero tail (tail_declared_zero=True)", "c0-tail"
        )
    n = x0.space.size
    if not (0 <= tail < n):
        raise PreconditionViolated(f"declared tail {tail} must be in [0, {n})", "c0-tail")
    for i in range(n - tail, n):
        if x0[i] != 0 or any(a != 0 for a in S.column(i)):
            raise PreconditionViolated(f"coordinate {i} is in the declared tail but nonzero", "c0-tail")

    correction = _correct(S, x0, eps, normalize, cap)
    cert = correction.certificate
    S_used = _as_positive(S).scaled(cert.scale) if normalize else _as_positive(S)
    sums = c0_tail_partial_sums(S_used, cert.partition.C)
    if any(b < a for a, b in zip(sums, sums[1:])):
        raise InternalInvariantError("partial sums over C_n decreased")
    if not arith.eq(sums[-1], cert.sfc_mass):
        raise InternalInvariantError("limit of ||S(chi_C_n)||_1 differs from ||S(chi_C)||_1")
    return correction


@dataclass(frozen=True)
class VerificationReport:
    checks: tuple
    op_distance_method: str

    @property
    def passed(self):
        return all(item.holds for item in self.checks)

    def failures(self):
        return [item for item in self.checks if not item.holds]

    def lines(self):
        return [item.describe() for item in self.checks]


def verify_correction(S, f0, eps, c, cap=DEFAULT_ENUMERATION_CAP):
    """Independently re-check the claims of a correction.

    Nothing in ``c.certificate`` is trusted; failures become report entries.
    """
    eps = arith.to_scalar(eps)
    T, u0 = c.T, c.u0
    if T.domain != S.domain or T.codomain != S.codomain:
        raise DimensionMismatch("T and S act between different spaces")
    if u0.space != S.domain or f0.space != S.domain:
        raise DimensionMismatch("u0 or f0 does not live on the domain")
    one = _one()
    negatives = sum(1 for row in T.matrix for a in row if a < 0)
    T_norm = operator_norm(T, cap=cap) if negatives else opnorm_positive(T)
    Tu0 = l1_norm(apply(T, u0))
    diff = T.as_linear() - S.as_linear()
    if S.domain.size <= cap:
        op_dist, method = opnorm_exact(diff, cap=cap), "sign-enumeration"
    else:
        op_dist, method = entry_mass_bound(diff), "entry-mass-bound"
    checks = [
        Inequality("T-positive", negatives, "=", 0),
        Inequality("T-unit-norm", T_norm, "=", one),
        Inequality("u0-unit", sup_norm(u0), "=", one),
        Inequality("norm-attainment", Tu0, "=", T_norm),
        Inequality("u0-close-f0", sup_norm(u0 - f0), "<", eps),
        Inequality("T-close-S", op_dist, "<", eps),
    ]
    if f0.is_nonnegative():
        checks.append(Inequality("u0-positive", sum(1 for x in u0 if x < 0), "=", 0))
    return VerificationReport(tuple(checks), method)
