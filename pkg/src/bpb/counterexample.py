"""A strictly convex lattice renorming of c_0 where the identity never attains its norm.

``Y`` is ``c_0`` with the norm ``|||x||| = ||x||_inf + ||(x_n / 2^n)_n||_2``,
indexed from ``n = 1``.  The formal identity ``c_0 -> Y`` is positive and has
norm ``1 + 1/sqrt(3)``, which is approached by vectors with long supports but
never reached by a finitely supported one.  Everything here is float
arithmetic; square roots make exact certificates pointless.
"""

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import InputsEqual, NotUnitVectors

TOL = 1e-12
LIMIT_NORM = 1.0 + 1.0 / math.sqrt(3.0)


@dataclass(frozen=True)
class RenormVector:
    """Finitely supported element of ``c_0``; coordinates past ``N`` are zero."""

    values: tuple

    def __post_init__(self):
        values = tuple(float(v) for v in self.values)
        if not values:
            raise ValueError("truncation length N must be at least 1")
        object.__setattr__(self, "values", values)

    @property
    def N(self):
        return len(self.values)

    def __add__(self, other):
        n = max(self.N, other.N)
        a = self.values + (0.0,) * (n - self.N)
        b = other.values + (0.0,) * (n - other.N)
        return RenormVector(tuple(x + y for x, y in zip(a, b)))

    def __mul__(self, c):
        return RenormVector(tuple(c * x for x in self.values))

    __rmul__ = __mul__

    def __truediv__(self, c):
        return RenormVector(tuple(x / c for x in self.values))


def basis_vector(k, N=None):
    """``e_k`` (1-based) padded to length ``N``."""
    N = k if N is None else N
    values = [0.0] * N
    values[k - 1] = 1.0
    return RenormVector(tuple(values))


def _coords(x):
    return x.values if isinstance(x, RenormVector) else tuple(float(v) for v in x)


def tnorm(x):
    values = _coords(x)
    if not values:
        return 0.0
    sup = max(abs(v) for v in values)
    weighted = [v / 2.0 ** n for n, v in enumerate(values, start=1)]
    return sup + math.hypot(*weighted)


def _tail_mass(k):
    # sum_{n=1}^k 4^-n = (1 - 4^-k)/3, without cancellation for large k
    return -math.expm1(-k * math.log(4.0)) / 3.0


def identity_norm(N):
    """Norm of the identity restricted to the first ``N`` coordinates."""
    if N < 1:
        raise ValueError("N must be at least 1")
    return 1.0 + math.sqrt(_tail_mass(N))


def identity_norm_bruteforce(N):
    """Maximum of ``tnorm`` over the vertices of the ``N``-cube.

    ``tnorm`` is convex, so the maximum over the sup-norm ball is attained at a
    sign vector.
    """
    if N < 1:
        raise ValueError("N must be at least 1")
    signs = np.array(list(itertools.product((-1.0, 1.0), repeat=N)))
    scale = 2.0 ** -np.arange(1, N + 1)
    values = np.abs(signs).max(axis=1) + np.sqrt(((signs * scale) ** 2).sum(axis=1))
    return float(values.max())


def attainment_gap(k):
    """``(1 + 1/sqrt 3) - max{|||x||| : ||x||_inf <= 1, supp x in {1..k}}``.

    Evaluated as ``(4^-k / 3) / (sqrt(1/3) + sqrt((1 - 4^-k)/3))`` so it stays
    positive and strictly decreasing in floating point for large ``k``.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    head = _tail_mass(k)
    rest = 4.0 ** -k / 3.0
    return rest / (math.sqrt(1.0 / 3.0) + math.sqrt(head))


def attainment_gap_bruteforce(k):
    return LIMIT_NORM - identity_norm_bruteforce(k)


def strict_convexity_check(x, y, tol=TOL):
    """True iff the midpoint of two distinct unit vectors has norm below one.

    Fails only when the midpoint norm is ``>= 1 - tol``.
    """
    x = x if isinstance(x, RenormVector) else RenormVector(tuple(x))
    y = y if isinstance(y, RenormVector) else RenormVector(tuple(y))
    n = max(x.N, y.N)
    xs = x.values + (0.0,) * (n - x.N)
    ys = y.values + (0.0,) * (n - y.N)
    if xs == ys:
        raise InputsEqual("strict convexity needs two distinct vectors")
    for name, v in (("x", x), ("y", y)):
        if abs(tnorm(v) - 1.0) > tol:
            raise NotUnitVectors(f"|||{name}||| = {tnorm(v)!r} is not 1")
    return tnorm((x + y) / 2.0) < 1.0 - tol


def random_unit_pair(rng, N):
    """Two independent random unit vectors of length ``N``."""
    out = []
    for _ in range(2):
        v = RenormVector(tuple(rng.uniform(-1.0, 1.0, size=N)))
        norm = tnorm(v)
        while norm == 0.0:
            v = RenormVector(tuple(rng.uniform(-1.0, 1.0, size=N)))
            norm = tnorm(v)
        out.append(v / norm)
    return tuple(out)


def convexity_trials(trials, seed=0, max_N=10):
    """Run ``trials`` random midpoint checks; returns ``(passed, failed_pairs)``.

    Lengths are drawn from ``2..max_N``: at ``N = 1`` two random unit vectors
    coincide half the time.
    """
    rng = np.random.default_rng(seed)
    passed, failed = 0, []
    for _ in range(trials):
        N = int(rng.integers(2, max_N + 1))
        x, y = random_unit_pair(rng, N)
        if strict_convexity_check(x, y):
            passed += 1
        else:
            failed.append((x, y))
    return passed, failed
