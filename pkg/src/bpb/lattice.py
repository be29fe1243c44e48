"""Finite weighted measure spaces, lattice vectors and operators between them.

Everything here is finite-dimensional: a measure space is a list of atoms
with strictly positive weights, a vector is one scalar per atom and an
operator is a matrix acting on column vectors.  ``L_inf`` vectors are
measured with :func:`sup_norm` (the weights are irrelevant there because
every atom has positive mass) and ``L_1`` vectors with :func:`l1_norm`.

Operator norms are always ``L_inf -> L_1`` norms.  For positive operators the
norm is attained at the constant function one (:func:`opnorm_positive`); for
general operators :func:`opnorm_exact` enumerates sign vectors, which are the
extreme points of the sup-norm unit ball.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

import numpy as np

from . import arith
from .errors import (
    DimensionMismatch,
    DimensionTooLarge,
    InvalidMeasure,
    NotPositive,
    ZeroOperator,
)

DEFAULT_ENUMERATION_CAP = 20


@dataclass(frozen=True)
class MeasureSpace:
    weights: tuple

    def __post_init__(self):
        weights = tuple(arith.to_scalar(w) for w in self.weights)
        if not weights:
            raise InvalidMeasure("a measure space needs at least one atom")
        for i, w in enumerate(weights):
            if not w > 0:
                raise InvalidMeasure(f"atom {i} has non-positive weight {w}")
        object.__setattr__(self, "weights", weights)

    @classmethod
    def counting(cls, size):
        return cls((1,) * size)

    @property
    def size(self):
        return len(self.weights)

    def atoms(self):
        return range(self.size)


@dataclass(frozen=True)
class LatticeVector:
    values: tuple
    space: MeasureSpace

    def __post_init__(self):
        values = tuple(arith.to_scalar(v) for v in self.values)
        if len(values) != self.space.size:
            raise DimensionMismatch(
                f"vector has {len(values)} entries, space has {self.space.size} atoms"
            )
        object.__setattr__(self, "values", values)

    def __len__(self):
        return len(self.values)

    def __getitem__(self, i):
        return self.values[i]

    def __iter__(self):
        return iter(self.values)

    def _check_same(self, other):
        if other.space != self.space:
            raise DimensionMismatch("vectors live on different measure spaces")

    def __add__(self, other):
        self._check_same(other)
        return LatticeVector(tuple(a + b for a, b in zip(self, other)), self.space)

    def __sub__(self, other):
        self._check_same(other)
        return LatticeVector(tuple(a - b for a, b in zip(self, other)), self.space)

    def __neg__(self):
        return LatticeVector(tuple(-a for a in self), self.space)

    def __mul__(self, c):
        return LatticeVector(tuple(c * a for a in self), self.space)

    __rmul__ = __mul__

    def __truediv__(self, c):
        return LatticeVector(tuple(a / c for a in self), self.space)

    def __abs__(self):
        return LatticeVector(tuple(abs(a) for a in self), self.space)

    def restrict(self, members):
        """Pointwise product with the indicator of ``members``."""
        zero = arith.to_scalar(0)
        return LatticeVector(
            tuple(a if i in members else zero for i, a in enumerate(self)), self.space
        )

    def support(self):
        """Atoms where the vector is strictly positive (above tol in float mode)."""
        t = arith.tol()
        return frozenset(i for i, a in enumerate(self) if a > t)

    def is_nonnegative(self):
        return all(a >= 0 for a in self)


def zeros(space):
    return LatticeVector((0,) * space.size, space)


def ones(space):
    return LatticeVector((1,) * space.size, space)


def indicator(space, members):
    members = index_set(space, members)
    return LatticeVector(tuple(1 if i in members else 0 for i in space.atoms()), space)


def index_set(space, members):
    """Validate ``members`` as a set of (0-based) atoms of ``space``."""
    members = frozenset(members)
    bad = [i for i in members if not (isinstance(i, int) and 0 <= i < space.size)]
    if bad:
        raise DimensionMismatch(f"indices {sorted(bad)} are not atoms of a space of size {space.size}")
    return members


@dataclass(frozen=True)
class LinearOperator:
    """Matrix ``(codomain.size x domain.size)`` with ``(Tf)_j = sum_i M[j][i] f_i``."""

    matrix: tuple
    domain: MeasureSpace
    codomain: MeasureSpace

    def __post_init__(self):
        rows = tuple(tuple(arith.to_scalar(a) for a in row) for row in self.matrix)
        if len(rows) != self.codomain.size:
            raise DimensionMismatch(
                f"matrix has {len(rows)} rows, codomain has {self.codomain.size} atoms"
            )
        for j, row in enumerate(rows):
            if len(row) != self.domain.size:
                raise DimensionMismatch(
                    f"row {j} has {len(row)} entries, domain has {self.domain.size} atoms"
                )
        object.__setattr__(self, "matrix", rows)

    @property
    def shape(self):
        return (self.codomain.size, self.domain.size)

    def column(self, i):
        return tuple(row[i] for row in self.matrix)

    def is_positive(self):
        return all(a >= 0 for row in self.matrix for a in row)

    def _check_same(self, other):
        if other.domain != self.domain or other.codomain != self.codomain:
            raise DimensionMismatch("operators act between different spaces")

    def __sub__(self, other):
        self._check_same(other)
        rows = tuple(
            tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.matrix, other.matrix)
        )
        return LinearOperator(rows, self.domain, self.codomain)

    def __add__(self, other):
        self._check_same(other)
        rows = tuple(
            tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.matrix, other.matrix)
        )
        return LinearOperator(rows, self.domain, self.codomain)

    def scaled(self, c):
        rows = tuple(tuple(c * a for a in row) for row in self.matrix)
        if isinstance(self, PositiveOperator) and c >= 0:
            return PositiveOperator(rows, self.domain, self.codomain)
        return LinearOperator(rows, self.domain, self.codomain)

    def as_linear(self):
        return LinearOperator(self.matrix, self.domain, self.codomain)

    def __call__(self, f):
        return apply(self, f)


@dataclass(frozen=True)
class PositiveOperator(LinearOperator):
    """Entrywise nonnegative matrix, i.e. ``f >= 0`` implies ``Tf >= 0``."""

    def __post_init__(self):
        super().__post_init__()
        for j, row in enumerate(self.matrix):
            for i, a in enumerate(row):
                if a < 0:
                    raise NotPositive(f"entry ({j}, {i}) = {a} is negative")

    @classmethod
    def from_operator(cls, op):
        return cls(op.matrix, op.domain, op.codomain)


def sup_norm(f):
    return max((abs(a) for a in f), default=arith.to_scalar(0))


def l1_norm(g):
    total = arith.to_scalar(0)
    for w, a in zip(g.space.weights, g):
        total += w * abs(a)
    return total


def apply(T, f):
    if f.space != T.domain:
        raise DimensionMismatch("vector does not live on the operator's domain")
    zero = arith.to_scalar(0)
    out = []
    for row in T.matrix:
        acc = zero
        for a, x in zip(row, f.values):
            if a and x:
                acc += a * x
        out.append(acc)
    return LatticeVector(tuple(out), T.codomain)


def opnorm_positive(T):
    """Norm of a positive operator: ``||T(1)||_1``."""
    if not T.is_positive():
        raise NotPositive("opnorm_positive needs an entrywise nonnegative operator")
    return l1_norm(apply(T, ones(T.domain)))


def entry_mass_bound(T):
    """``sum_j w_j sum_i |T_ji|``, an upper bound for every ``L_inf -> L_1`` norm."""
    total = arith.to_scalar(0)
    for w, row in zip(T.codomain.weights, T.matrix):
        total += w * sum((abs(a) for a in row), arith.to_scalar(0))
    return total


def opnorm_exact(T, cap=DEFAULT_ENUMERATION_CAP):
    """Exact ``L_inf -> L_1`` norm by enumerating sign vectors.

    Uses ``max_s sum_j w_j |(Ts)_j| = max_{s,t} t^T W T s``, so the smaller of
    the two dimensions is the one enumerated; the cap still applies to the
    domain size.  In rational mode the weighted matrix is scaled to integers
    and the enumeration walks a Gray code, so the result is exact.
    """
    m, n = T.shape
    if n > cap:
        raise DimensionTooLarge(f"domain size {n} exceeds enumeration cap {cap}")
    weighted = [[w * a for a in row] for w, row in zip(T.codomain.weights, T.matrix)]
    if n > m:
        weighted = [list(col) for col in zip(*weighted)]
    if not weighted or not weighted[0]:
        return arith.to_scalar(0)

    if arith.is_rational_mode():
        entries = [Fraction(a) for row in weighted for a in row]
        scale = lcm(*(a.denominator for a in entries)) if entries else 1
        ints = [[int(Fraction(a) * scale) for a in row] for row in weighted]
        return Fraction(_gray_code_max(ints), scale)
    return float(_sign_max_float(np.asarray(weighted, dtype=float)))


def _gray_code_max(rows):
    """``max_s sum_j |sum_i rows[j][i] s_i|`` over ``s`` in {-1, 1}^q, exact on ints."""
    q = len(rows[0])
    acc = [sum(row) for row in rows]
    best = sum(abs(a) for a in acc)
    signs = [1] * q
    cols = [[row[i] for row in rows] for i in range(q)]
    # the last sign stays +1: s and -s give the same value
    for k in range(1, 1 << (q - 1)):
        bit = (k & -k).bit_length() - 1
        signs[bit] = -signs[bit]
        step = 2 * signs[bit]
        col = cols[bit]
        acc = [a + step * c for a, c in zip(acc, col)]
        value = sum(abs(a) for a in acc)
        if value > best:
            best = value
    return best


def _sign_max_float(weighted, chunk=1 << 14):
    p, q = weighted.shape
    free = q - 1
    total = 1 << free
    best = 0.0
    for start in range(0, total, chunk):
        codes = np.arange(start, min(start + chunk, total), dtype=np.int64)
        bits = (codes[:, None] >> np.arange(free, dtype=np.int64)) & 1
        signs = np.ones((codes.size, q))
        signs[:, :free] = 1.0 - 2.0 * bits
        values = np.abs(signs @ weighted.T).sum(axis=1)
        best = max(best, float(values.max()))
    return best


def operator_norm(T, cap=DEFAULT_ENUMERATION_CAP):
    """Norm via the positive shortcut when available, else by enumeration."""
    if T.is_positive():
        return opnorm_positive(T)
    return opnorm_exact(T, cap=cap)


def normalize_operator(T, cap=DEFAULT_ENUMERATION_CAP):
    norm = operator_norm(T, cap=cap)
    if norm == 0:
        raise ZeroOperator("cannot normalize the zero operator")
    if arith.is_rational_mode():
        return T.scaled(1 / Fraction(norm))
    return T.scaled(1.0 / norm)
