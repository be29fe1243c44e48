"""JSON encoding of scalars, measure spaces, vectors, operators and results.

Scalars: rationals as ``"p/q"`` strings, floats as JSON numbers.
Measure spaces: ``{"weights": [...]}``.
Operators: ``{"matrix": [[...]], "domain": space, "codomain": space}``.
Index sets are sorted lists of 0-based atom indices.
"""

from . import arith
from .errors import BPBError, ParseError
from .lattice import LatticeVector, LinearOperator, MeasureSpace, PositiveOperator

enc = arith.format_scalar


def _scalar(value, where):
    try:
        return arith.decode_scalar(value)
    except (ParseError, TypeError, ValueError) as exc:
        raise ParseError(str(exc), where) from None


def _list(value, where):
    if not isinstance(value, list):
        raise ParseError(f"expected a list, got {type(value).__name__}", where)
    return value


def _field(obj, key, where):
    if not isinstance(obj, dict):
        raise ParseError(f"expected an object, got {type(obj).__name__}", where)
    if key not in obj:
        raise ParseError(f"missing key {key!r}", where)
    return obj[key]


def encode_space(space):
    return {"weights": [enc(w) for w in space.weights]}


def decode_space(obj, where="space"):
    weights = _list(_field(obj, "weights", where), f"{where}.weights")
    values = [_scalar(w, f"{where}.weights[{i}]") for i, w in enumerate(weights)]
    try:
        return MeasureSpace(tuple(values))
    except BPBError as exc:
        raise ParseError(str(exc), where) from None


def encode_vector(f):
    return [enc(a) for a in f]


def decode_vector(values, space, where="vector"):
    values = _list(values, where)
    items = tuple(_scalar(v, f"{where}[{i}]") for i, v in enumerate(values))
    if len(items) != space.size:
        raise ParseError(f"expected {space.size} entries, got {len(items)}", where)
    return LatticeVector(items, space)


def encode_operator(T):
    return {
        "matrix": [[enc(a) for a in row] for row in T.matrix],
        "domain": encode_space(T.domain),
        "codomain": encode_space(T.codomain),
    }


def decode_operator(obj, where="operator", positive=False):
    rows = _list(_field(obj, "matrix", where), f"{where}.matrix")
    matrix = []
    for j, row in enumerate(rows):
        row = _list(row, f"{where}.matrix[{j}]")
        matrix.append(tuple(_scalar(a, f"{where}.matrix[{j}][{i}]") for i, a in enumerate(row)))
    n = len(matrix[0]) if matrix else 0
    domain = (
        decode_space(obj["domain"], f"{where}.domain")
        if "domain" in obj
        else MeasureSpace.counting(n)
    )
    codomain = (
        decode_space(obj["codomain"], f"{where}.codomain")
        if "codomain" in obj
        else MeasureSpace.counting(len(matrix))
    )
    for j, row in enumerate(matrix):
        if len(row) != domain.size:
            raise ParseError(f"row has {len(row)} entries, domain has {domain.size}", f"{where}.matrix[{j}]")
    if len(matrix) != codomain.size:
        raise ParseError(f"{len(matrix)} rows, codomain has {codomain.size} atoms", f"{where}.matrix")
    cls = PositiveOperator if positive else LinearOperator
    return cls(tuple(matrix), domain, codomain)


def encode_set(members):
    return sorted(members)


def encode_inequalities(items):
    return [item.to_json() for item in items]


def encode_witness(w):
    return {
        "g1": encode_vector(w.g1),
        "g2": encode_vector(w.g2),
        "W": encode_set(w.W),
        "G1": encode_set(w.G1),
        "G2": encode_set(w.G2),
        "normalizer": enc(w.normalizer),
        "eps": enc(w.eps),
        "certificate": encode_inequalities(w.certificate),
        "passed": w.passed,
    }


def encode_correction(c):
    cert = c.certificate
    part = cert.partition
    return {
        "T": encode_operator(c.T),
        "u0": encode_vector(c.u0),
        "eta": enc(c.eta),
        "certificate": {
            "dist_point": enc(cert.dist_point),
            "dist_op_bound": enc(cert.dist_op_bound),
            "dist_op_exact": None if cert.dist_op_exact is None else enc(cert.dist_op_exact),
            "norm_V": enc(cert.norm_V),
            "dist_V": enc(cert.dist_V),
            "sfc_mass": enc(cert.sfc_mass),
            "scale": enc(cert.scale),
            "partition": {
                "A": encode_set(part.A),
                "B": encode_set(part.B),
                "C": encode_set(part.C),
                "eta": enc(part.eta),
            },
            "lemma_witness": encode_witness(cert.lemma_witness),
            "inequalities": encode_inequalities(cert.inequalities),
            "passed": cert.passed,
        },
    }


def encode_report(report):
    return {
        "passed": report.passed,
        "op_distance_method": report.op_distance_method,
        "checks": encode_inequalities(report.checks),
    }
