"""Checkable inequality records used by the lemma and the correction certificates."""

from dataclasses import dataclass

from . import arith
from .errors import InternalInvariantError

_RELATIONS = {
    "<": lambda a, b: arith.lt(a, b),
    "<=": lambda a, b: arith.le(a, b),
    "=": lambda a, b: arith.eq(a, b),
    ">": lambda a, b: arith.lt(b, a),
    ">=": lambda a, b: arith.le(b, a),
}


@dataclass(frozen=True)
class Inequality:
    name: str
    lhs: object
    relation: str
    rhs: object

    @property
    def holds(self):
        return _RELATIONS[self.relation](self.lhs, self.rhs)

    def describe(self):
        status = "pass" if self.holds else "FAIL"
        return (
            f"[{status}] {self.name}: {arith.scalar_str(self.lhs)} "
            f"{self.relation} {arith.scalar_str(self.rhs)}"
        )

    def to_json(self):
        return {
            "name": self.name,
            "lhs": arith.format_scalar(self.lhs),
            "relation": self.relation,
            "rhs": arith.format_scalar(self.rhs),
            "holds": self.holds,
        }


def require(inequalities, context):
    """Raise :class:`InternalInvariantError` on the first failing entry."""
    for item in inequalities:
        if not item.holds:
            raise InternalInvariantError(f"{context}: {item.describe()}")
    return tuple(inequalities)
