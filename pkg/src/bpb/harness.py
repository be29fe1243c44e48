"""Random instances, experiment sweeps and their CSV reports.

Randomness comes from numpy's ``PCG64`` bit generator.  A single instance is
a pure function of ``(seed, n, m, eps, profile, kind, tail)``; inside a sweep
the instance seed is derived from ``(master seed, cell index, trial index)``
through :class:`numpy.random.SeedSequence`, so serial and parallel runs emit
the same rows.

Generated instances satisfy the corrector's hypotheses exactly in rational
mode: ``S >= 0``, ``||S|| = ||S(1)||_1 = 1``, ``||f0||_inf = 1`` and
``||S f0||_1 > 1 - (eps/58)^4``.  The generator checks this itself and never
relies on the corrector for validation.

Profiles
--------
``norming-perturbed``
    ``f0`` is a small nonnegative perturbation of the constant one, plus a few
    light columns where ``f0`` may take any value in ``[0, 1]``.
``sign-pattern``
    ``f0`` is close to a random sign vector.  The codomain is split into a
    "+" and a "-" block and heavy columns only charge the block of their sign,
    except for tiny leakage entries that the disjoint-support step has to cut.
``sparse``
    like ``sign-pattern`` with about half the block entries zeroed and no
    leakage; these often end as fixed points (``T = S``).
"""

import csv
import io
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Optional

import numpy as np

from . import arith, codec
from .correct import correct_c0_l1, correct_linfty_l1, eta_of_eps, verify_correction
from .errors import (
    BPBError,
    InfeasiblePerturbation,
    InvariantViolated,
    NotPositive,
    ParseError,
)
from .lattice import (
    DEFAULT_ENUMERATION_CAP,
    LatticeVector,
    MeasureSpace,
    PositiveOperator,
    apply,
    l1_norm,
    opnorm_positive,
    sup_norm,
)

PROFILES = ("norming-perturbed", "sign-pattern", "sparse")
KINDS = ("linfty", "c0")
DENOMINATOR_CAP = 10**6
MAX_SHRINK_STEPS = 80


@dataclass(frozen=True)
class Instance:
    S: PositiveOperator
    f0: LatticeVector
    eps: object
    mode: arith.ArithmeticMode
    kind: str = "linfty"
    seed: Optional[int] = None
    tail: int = 0
    profile: Optional[str] = None


def check_instance(inst):
    """Raise :class:`InvariantViolated` naming the first failing hypothesis."""
    S, f0 = inst.S, inst.f0
    if not S.is_positive():
        raise InvariantViolated("S has a negative entry", "NotPositive")
    if f0.space != S.domain:
        raise InvariantViolated("f0 does not live on the domain of S", "dimensions")
    if not (0 < inst.eps < 1):
        raise InvariantViolated("eps must lie in (0, 1)", "eps-range")
    if not arith.eq(opnorm_positive(S), 1):
        raise InvariantViolated("||S(1)||_1 != 1", "S-unit")
    if not arith.eq(sup_norm(f0), 1):
        raise InvariantViolated("||f0||_inf != 1", "f0-unit")
    _, threshold = eta_of_eps(inst.eps)
    if not l1_norm(apply(S, f0)) > 1 - threshold:
        raise InvariantViolated("||S f0||_1 <= 1 - (eps/58)^4", "near-norming")
    if inst.kind not in KINDS:
        raise InvariantViolated(f"unknown kind {inst.kind!r}", "kind")
    return inst


def instance_rng(seed):
    return np.random.Generator(np.random.PCG64(seed))


def derive_seed(master, cell, trial):
    """Instance seed for ``trial`` of sweep cell ``cell``."""
    state = np.random.SeedSequence([int(master), int(cell), int(trial)]).generate_state(2, np.uint32)
    return int(state[0]) << 32 | int(state[1])


def _unit(rng):
    """Random rational in ``(0, 1]`` with denominator ``DENOMINATOR_CAP``."""
    return Fraction(int(rng.integers(1, DENOMINATOR_CAP + 1)), DENOMINATOR_CAP)


def _signed(rng, nonnegative):
    k = int(rng.integers(0 if nonnegative else -DENOMINATOR_CAP, DENOMINATOR_CAP + 1))
    return Fraction(k, DENOMINATOR_CAP)


def _draw(rng, n, m, profile, kind):
    """All random choices of an instance, before scaling the small terms."""
    if kind == "c0":
        dom_w = [Fraction(1)] * n
        cod_w = [Fraction(1)] * m
    else:
        dom_w = [Fraction(int(rng.integers(1, 10)), int(rng.integers(1, 5))) for _ in range(n)]
        cod_w = [Fraction(int(rng.integers(1, 10)), int(rng.integers(1, 5))) for _ in range(m)]

    n_light = int(rng.integers(0, n // 2 + 1)) if n > 1 else 0
    light = set(int(i) for i in rng.choice(n, size=n_light, replace=False))
    heavy = [i for i in range(n) if i not in light]

    if profile == "norming-perturbed":
        signs = {i: 1 for i in range(n)}
        groups = [1] * m
    else:
        signs = {i: int(rng.choice((-1, 1))) for i in range(n)}
        groups = [int(rng.choice((-1, 1))) for _ in range(m)]
        if m >= 2:
            groups[0], groups[1] = 1, -1

    density = 0.5 if profile == "sparse" else 1.0
    leak_prob = 0.3 if profile == "sign-pattern" else 0.0
    big = [[Fraction(0)] * n for _ in range(m)]
    small = [[Fraction(0)] * n for _ in range(m)]
    for j in range(m):
        for i in range(n):
            if i in light:
                if rng.random() < 0.7:
                    small[j][i] = _unit(rng)
            elif groups[j] == signs[i]:
                if rng.random() < density:
                    big[j][i] = _unit(rng)
            elif rng.random() < leak_prob:
                small[j][i] = _unit(rng)
    if not any(big[j][i] for j in range(m) for i in heavy):
        # keep S away from a pure small-term operator
        i = heavy[0]
        j = next((j for j in range(m) if groups[j] == signs[i]), 0)
        signs[i] = groups[j]
        big[j][i] = _unit(rng)

    anchor = heavy[int(rng.integers(0, len(heavy)))]
    drift = {i: (Fraction(0) if i == anchor else _unit(rng)) for i in heavy}
    light_vals = {i: _signed(rng, profile == "norming-perturbed") for i in light}
    return dom_w, cod_w, signs, big, small, drift, light_vals


def _assemble(draw, scale, threshold):
    dom_w, cod_w, signs, big, small, drift, light_vals = draw
    m, n = len(big), len(big[0])
    raw = [[big[j][i] + scale * threshold * small[j][i] for i in range(n)] for j in range(m)]
    mass = sum(w * sum(row) for w, row in zip(cod_w, raw))
    matrix = tuple(tuple(a / mass for a in row) for row in raw)
    f0 = []
    for i in range(n):
        if i in light_vals:
            f0.append(light_vals[i])
        else:
            f0.append(signs[i] * (1 - scale * threshold * drift[i]))
    dom, cod = MeasureSpace(tuple(dom_w)), MeasureSpace(tuple(cod_w))
    return PositiveOperator(matrix, dom, cod), LatticeVector(tuple(f0), dom)


def _pad_tail(S, f0, tail):
    if not tail:
        return S, f0
    dom = MeasureSpace(S.domain.weights + (Fraction(1),) * tail)
    matrix = tuple(row + (Fraction(0),) * tail for row in S.matrix)
    return (
        PositiveOperator(matrix, dom, S.codomain),
        LatticeVector(f0.values + (Fraction(0),) * tail, dom),
    )


def _to_mode(S, f0, eps, mode):
    if mode is arith.ArithmeticMode.RATIONAL:
        return S, f0, eps
    with arith.use_mode(mode):
        dom = MeasureSpace(S.domain.weights)
        cod = MeasureSpace(S.codomain.weights)
        return (
            PositiveOperator(S.matrix, dom, cod),
            LatticeVector(f0.values, dom),
            arith.to_scalar(eps),
        )


def gen_instance(
    seed, n, m, eps, profile="norming-perturbed", kind="linfty", mode=None, tail=0
):
    """Deterministic random instance satisfying the corrector's hypotheses.

    The small terms (perturbation of ``f0``, leakage and light columns) are
    proportional to ``(eps/58)^4 * 4^-k``; ``k`` is the smallest exponent for
    which the exact deficit ``1 - ||S f0||_1`` falls below the threshold, so
    instances sit close to the edge of the hypothesis.
    """
    if n < 1 or m < 1:
        raise ValueError("n and m must be at least 1")
    if profile not in PROFILES:
        raise ValueError(f"unknown profile {profile!r}; choose from {PROFILES}")
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}; choose from {KINDS}")
    if kind == "linfty" and tail:
        raise ValueError("a declared tail only makes sense for c0 instances")
    if not (0 <= tail < n):
        raise ValueError("tail must be in [0, n)")
    mode = arith.ArithmeticMode(mode) if mode is not None else arith.get_mode()

    with arith.use_mode(arith.ArithmeticMode.RATIONAL):
        eps_q = arith.to_scalar(eps)
        _, threshold = eta_of_eps(eps_q)
        rng = instance_rng(seed)
        draw = _draw(rng, n - tail, m, profile, kind)
        scale = Fraction(1)
        for _ in range(MAX_SHRINK_STEPS):
            S, f0 = _assemble(draw, scale, threshold)
            if l1_norm(apply(S, f0)) > 1 - threshold:
                break
            scale /= 4
        else:
            raise InfeasiblePerturbation(f"seed {seed}: no admissible perturbation scale found")
        S, f0 = _pad_tail(S, f0, tail)
        inst = Instance(S, f0, eps_q, arith.ArithmeticMode.RATIONAL, kind, seed, tail, profile)
        check_instance(inst)

    S, f0, eps_m = _to_mode(S, f0, eps_q, mode)
    inst = Instance(S, f0, eps_m, mode, kind, seed, tail, profile)
    with arith.use_mode(mode):
        try:
            check_instance(inst)
        except InvariantViolated as exc:
            raise InfeasiblePerturbation(f"seed {seed}: lost in {mode.value} conversion: {exc}") from exc
    return inst


def gen_lemma_instance(seed, n, eps=None):
    """Random ``(f1, f2, eps)`` satisfying the disjoint-support hypotheses exactly.

    Atoms are owned by ``f1``, by ``f2`` or shared; owned atoms may carry a
    little mass of the other function.  The shared and cross terms shrink by
    powers of 4 until ``||f1 - f2||_1 >= 1 - eps^2``; the total mass is set to
    ``1 - theta eps^2`` with random ``theta`` in ``[0, 1)``.  Rational mode.
    """
    with arith.use_mode(arith.ArithmeticMode.RATIONAL):
        rng = instance_rng(seed)
        if eps is None:
            eps = Fraction(int(rng.integers(1, 200)), 1000)
        eps = arith.to_scalar(eps)
        if not (0 < eps < Fraction(1, 5)):
            raise ValueError("eps must lie in (0, 1/5)")
        weights = tuple(Fraction(int(rng.integers(1, 10)), int(rng.integers(1, 5))) for _ in range(n))
        space = MeasureSpace(weights)
        main1, main2 = [Fraction(0)] * n, [Fraction(0)] * n
        side1, side2 = [Fraction(0)] * n, [Fraction(0)] * n
        for t in range(n):
            owner = rng.random()
            if owner < 0.45:
                main1[t] = _unit(rng)
                if rng.random() < 0.3:
                    side2[t] = _unit(rng)
            elif owner < 0.9:
                main2[t] = _unit(rng)
                if rng.random() < 0.3:
                    side1[t] = _unit(rng)
            else:
                side1[t] = _unit(rng)
                side2[t] = side1[t] * (1 + _signed(rng, False) / 4)
        if not any(main1) and not any(main2):
            main1[0] = _unit(rng)
        theta = Fraction(int(rng.integers(0, 1000)), 1000)
        kappa = eps * eps
        for _ in range(MAX_SHRINK_STEPS):
            raw1 = LatticeVector(tuple(a + kappa * b for a, b in zip(main1, side1)), space)
            raw2 = LatticeVector(tuple(a + kappa * b for a, b in zip(main2, side2)), space)
            c = (1 - theta * eps * eps) / l1_norm(raw1 + raw2)
            f1, f2 = raw1 * c, raw2 * c
            if l1_norm(f1 - f2) >= 1 - eps * eps:
                return f1, f2, eps
            kappa /= 4
        raise InfeasiblePerturbation(f"seed {seed}: no admissible lemma instance")


def run_instance(inst, cap=DEFAULT_ENUMERATION_CAP):
    """Correct and verify one instance; returns ``(correction, report)``."""
    with arith.use_mode(inst.mode):
        if inst.kind == "c0":
            c = correct_c0_l1(inst.S, inst.f0, inst.eps, tail_declared_zero=True, tail=inst.tail, cap=cap)
        else:
            c = correct_linfty_l1(inst.S, inst.f0, inst.eps, cap=cap)
        report = verify_correction(inst.S, inst.f0, inst.eps, c, cap=cap)
    return c, report


# --- serialization ---------------------------------------------------------


def instance_to_json(inst):
    return {
        "S": codec.encode_operator(inst.S),
        "f0": codec.encode_vector(inst.f0),
        "measures": {
            "domain": codec.encode_space(inst.S.domain),
            "codomain": codec.encode_space(inst.S.codomain),
        },
        "eps": codec.enc(inst.eps),
        "mode": inst.mode.value,
        "kind": inst.kind,
        "seed": inst.seed,
        "tail": inst.tail,
        "profile": inst.profile,
    }


def instance_from_json(obj, mode=None, validate=True):
    if not isinstance(obj, dict):
        raise ParseError("instance must be a JSON object", "$")
    mode = arith.ArithmeticMode(mode or obj.get("mode") or arith.get_mode().value)
    with arith.use_mode(mode):
        try:
            S = codec.decode_operator(codec._field(obj, "S", "$"), "S")
        except NotPositive as exc:
            raise InvariantViolated(str(exc), "NotPositive") from None
        measures = obj.get("measures")
        if measures is not None:
            for key, space in (("domain", S.domain), ("codomain", S.codomain)):
                if key in measures and codec.decode_space(measures[key], f"measures.{key}") != space:
                    raise ParseError(f"{key} measure disagrees with S.{key}", f"measures.{key}")
        f0 = codec.decode_vector(codec._field(obj, "f0", "$"), S.domain, "f0")
        eps = codec._scalar(obj.get("eps", "1/2"), "eps")
        if not S.is_positive():
            bad = next((j, i) for j, row in enumerate(S.matrix) for i, a in enumerate(row) if a < 0)
            raise InvariantViolated(f"S entry {bad} is negative", "NotPositive")
        S = PositiveOperator.from_operator(S)
        tail = obj.get("tail", 0)
        if not isinstance(tail, int) or isinstance(tail, bool):
            raise ParseError("tail must be an integer", "tail")
        inst = Instance(
            S, f0, eps, mode, obj.get("kind", "linfty"), obj.get("seed"), tail, obj.get("profile")
        )
        if validate:
            check_instance(inst)
    return inst


def save_instance(inst, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(instance_to_json(inst), fh, indent=1)
        fh.write("\n")


def load_instance(path, mode=None, validate=True):
    with open(path, encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(exc.msg, f"{path}:{exc.lineno}:{exc.colno}") from None
    return instance_from_json(obj, mode=mode, validate=validate)


# --- sweeps ------------------------------------------------------------------

CSV_COLUMNS = (
    "seed",
    "n",
    "m",
    "eps",
    "dist_point",
    "dist_op_exact",
    "dist_op_bound",
    "ratio_point",
    "ratio_op",
    "runtime_ms",
    "all_checks_pass",
)


@dataclass
class SweepRow:
    seed: int
    n: int
    m: int
    eps: object
    dist_point: object = None
    dist_op_exact: object = None
    dist_op_bound: object = None
    ratio_point: object = None
    ratio_op: object = None
    runtime_ms: Optional[float] = None
    all_checks_pass: bool = False
    # not written to CSV
    cell: int = 0
    profile: Optional[str] = None
    error: Optional[str] = None


@dataclass
class SweepConfig:
    dims: list
    eps: list
    trials: int
    mode: str = "rational"
    kind: str = "linfty"
    profiles: list = field(default_factory=lambda: list(PROFILES))
    seed: int = 0
    cap: int = DEFAULT_ENUMERATION_CAP
    max_tail: int = 0
    record_runtime: bool = False

    @classmethod
    def from_dict(cls, obj):
        known = {k: v for k, v in obj.items() if k in cls.__dataclass_fields__}
        unknown = set(obj) - set(known)
        if unknown:
            raise ParseError(f"unknown sweep config keys {sorted(unknown)}", "config")
        cfg = cls(**known)
        cfg.dims = [tuple(int(x) for x in d) for d in cfg.dims]
        return cfg

    def cells(self):
        return list(product(self.dims, self.eps))


def _run_trial(cfg, cell, trial, n, m, eps):
    seed = derive_seed(cfg.seed, cell, trial)
    profile = cfg.profiles[trial % len(cfg.profiles)]
    mode = arith.ArithmeticMode(cfg.mode)
    with arith.use_mode(mode):
        eps_s = arith.to_scalar(eps)
    row = SweepRow(seed=seed, n=n, m=m, eps=eps_s, cell=cell, profile=profile)
    start = time.perf_counter()
    try:
        tail = 0
        if cfg.kind == "c0" and cfg.max_tail:
            tail = int(instance_rng(seed + 1).integers(0, min(cfg.max_tail, n - 1) + 1))
        inst = gen_instance(seed, n, m, eps, profile=profile, kind=cfg.kind, mode=mode, tail=tail)
        c, report = run_instance(inst, cap=cfg.cap)
        cert = c.certificate
        with arith.use_mode(mode):
            row.dist_point = cert.dist_point
            row.dist_op_exact = cert.dist_op_exact
            row.dist_op_bound = cert.dist_op_bound
            achieved = cert.dist_op_exact if cert.dist_op_exact is not None else cert.dist_op_bound
            row.ratio_point = cert.dist_point / inst.eps
            row.ratio_op = achieved / inst.eps
            row.all_checks_pass = report.passed and cert.passed
    except (BPBError, ArithmeticError) as exc:
        row.error = f"{type(exc).__name__}: {exc}"
        row.all_checks_pass = False
    if cfg.record_runtime:
        row.runtime_ms = round((time.perf_counter() - start) * 1000.0, 3)
    return row


def _run_cell(args):
    cfg, cell, (n, m), eps = args
    return [_run_trial(cfg, cell, t, n, m, eps) for t in range(cfg.trials)]


def run_sweep(config, workers=1):
    """Run every ``(dims, eps)`` cell for ``trials`` instances.

    Failures (including exceptions) become rows with ``all_checks_pass``
    false; the sweep never aborts.  Rows are ordered by cell then trial.
    """
    cfg = config if isinstance(config, SweepConfig) else SweepConfig.from_dict(config)
    if cfg.trials <= 0:
        return []
    jobs = [(cfg, cell, dims, eps) for cell, (dims, eps) in enumerate(cfg.cells())]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_run_cell, jobs))
    else:
        chunks = [_run_cell(job) for job in jobs]
    return [row for chunk in chunks for row in chunk]


def _cell_text(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, str):
        return value
    return arith.scalar_str(value)


def rows_to_csv(rows):
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow([_cell_text(getattr(row, col)) for col in CSV_COLUMNS])
    return out.getvalue()


def write_csv(rows, path):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(rows_to_csv(rows))


def is_fixed_point(row):
    """``T = S`` exactly, read off a zero operator distance."""
    value = row.dist_op_exact if row.dist_op_exact is not None else row.dist_op_bound
    return value is not None and value == 0


def summarize(rows):
    passing = [r for r in rows if r.all_checks_pass]
    return {
        "rows": len(rows),
        "passed": len(passing),
        "failed": len(rows) - len(passing),
        "max_ratio_point": max((r.ratio_point for r in passing), default=None),
        "max_ratio_op": max((r.ratio_op for r in passing), default=None),
        "fixed_points": sum(1 for r in passing if is_fixed_point(r)),
    }


TIGHTNESS_COLUMNS = (
    "cell",
    "n",
    "m",
    "eps",
    "trials",
    "passed",
    "max_ratio_point",
    "max_ratio_op",
    "fixed_points",
)


def tightness_report(rows):
    """Per-cell maxima of ``dist/eps`` over passing rows, as a list of dicts."""
    cells = {}
    for row in rows:
        cells.setdefault(row.cell, []).append(row)
    report = []
    for cell in sorted(cells):
        group = cells[cell]
        summary = summarize(group)
        first = group[0]
        report.append(
            {
                "cell": cell,
                "n": first.n,
                "m": first.m,
                "eps": first.eps,
                "trials": len(group),
                "passed": summary["passed"],
                "max_ratio_point": summary["max_ratio_point"],
                "max_ratio_op": summary["max_ratio_op"],
                "fixed_points": summary["fixed_points"],
            }
        )
    return report


def tightness_to_csv(report):
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(TIGHTNESS_COLUMNS)
    for entry in report:
        writer.writerow([_cell_text(entry[col]) for col in TIGHTNESS_COLUMNS])
    return out.getvalue()
