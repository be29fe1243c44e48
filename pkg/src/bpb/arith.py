"""Scalar arithmetic in two modes: exact rationals or binary floats.

The active mode is process-global.  It starts from the ``BPB_MODE``
environment variable (``rational`` unless set) and can be changed with
:func:`set_mode` or temporarily with :func:`use_mode`.

Rational mode uses :class:`fractions.Fraction` and compares exactly.
Float mode uses ``float`` and compares with an absolute tolerance
(``1e-12`` by default, see :func:`set_tolerance`).
"""

import enum
import os
from contextlib import contextmanager
from fractions import Fraction
from numbers import Rational, Real

from .errors import ParseError


class ArithmeticMode(str, enum.Enum):
    RATIONAL = "rational"
    FLOAT = "float"


DEFAULT_TOL = 1e-12

_state = {"mode": None, "tol": DEFAULT_TOL}


def _mode_from_env():
    raw = os.environ.get("BPB_MODE", "rational").strip().lower()
    try:
        return ArithmeticMode(raw)
    except ValueError:
        raise ValueError(f"BPB_MODE must be 'rational' or 'float', got {raw!r}") from None


def get_mode():
    if _state["mode"] is None:
        _state["mode"] = _mode_from_env()
    return _state["mode"]


def set_mode(mode):
    _state["mode"] = ArithmeticMode(mode)


def set_tolerance(tol):
    if tol < 0:
        raise ValueError("tolerance must be nonnegative")
    _state["tol"] = float(tol)


@contextmanager
def use_mode(mode):
    """Temporarily switch the arithmetic mode."""
    previous = get_mode()
    set_mode(mode)
    try:
        yield ArithmeticMode(mode)
    finally:
        _state["mode"] = previous


def is_rational_mode():
    return get_mode() is ArithmeticMode.RATIONAL


def tol():
    """Comparison slack: 0 in rational mode."""
    return 0 if is_rational_mode() else _state["tol"]


def to_scalar(x, mode=None):
    """Convert ``x`` to a scalar of the active (or given) mode.

    Strings of the form ``"p/q"``, ``"p"`` or decimal literals are accepted.
    Floats become the Fraction of their shortest decimal repr in rational mode,
    so ``0.1`` maps to ``1/10`` rather than to its binary expansion.
    """
    mode = ArithmeticMode(mode) if mode is not None else get_mode()
    kind = type(x)
    if kind is Fraction and mode is ArithmeticMode.RATIONAL:
        return x
    if kind is float and mode is ArithmeticMode.FLOAT:
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if mode is ArithmeticMode.FLOAT:
        if isinstance(x, str):
            return float(parse_rational(x))
        return float(x)
    if isinstance(x, Rational):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    if isinstance(x, Real):
        return Fraction(repr(float(x)))
    raise TypeError(f"cannot convert {type(x).__name__} to a scalar")


def parse_rational(text):
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"not a rational literal: {text!r}") from exc


def format_scalar(x):
    """JSON encoding: rationals as ``"p/q"`` strings, floats as numbers."""
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, int):
        return f"{x}/1"
    return float(x)


def decode_scalar(value):
    """Inverse of :func:`format_scalar`, converted to the active mode."""
    if isinstance(value, bool) or not isinstance(value, (str, int, float)):
        raise ParseError(f"expected a scalar, got {value!r}")
    return to_scalar(value)


def scalar_str(x):
    """Human/CSV rendering: ``p/q`` for rationals, ``repr`` for floats."""
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, int):
        return str(x)
    return repr(float(x))


def tol_for(*values):
    """Tolerance for comparing ``values``: float slack if any of them is a float."""
    if any(isinstance(v, float) for v in values):
        return _state["tol"]
    return tol()


def eq(a, b):
    return abs(a - b) <= tol_for(a, b)


def le(a, b):
    return a <= b + tol_for(a, b)


def lt(a, b):
    return a < b


def is_zero(a):
    return abs(a) <= tol()
