"""Command line entry point: ``bpb {correct,lemma,norm,sweep,counterexample,gen}``.

The arithmetic mode is taken from ``--mode`` when given, else from the
``BPB_MODE`` environment variable, else rational.
"""

import argparse
import json
import sys

from . import arith, codec
from .correct import correct_c0_l1, correct_linfty_l1, verify_correction
from .counterexample import (
    LIMIT_NORM,
    attainment_gap,
    convexity_trials,
    identity_norm,
    identity_norm_bruteforce,
)
from .disjoint import disjointify
from .errors import BPBError, ParseError
from .harness import (
    KINDS,
    PROFILES,
    SweepConfig,
    gen_instance,
    instance_to_json,
    load_instance,
    rows_to_csv,
    run_sweep,
    save_instance,
    summarize,
    tightness_report,
    tightness_to_csv,
)
from .lattice import DEFAULT_ENUMERATION_CAP, MeasureSpace, opnorm_exact, opnorm_positive


def _read_json(path):
    with open(path, encoding="utf-8") as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(exc.msg, f"{path}:{exc.lineno}:{exc.colno}") from None


def _emit(obj, out):
    text = json.dumps(obj, indent=1)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def cmd_correct(args):
    inst = load_instance(args.instance, mode=args.mode, validate=False)
    with arith.use_mode(inst.mode):
        eps = arith.to_scalar(args.eps) if args.eps else inst.eps
        if args.c0 or inst.kind == "c0":
            c = correct_c0_l1(
                inst.S, inst.f0, eps, tail_declared_zero=True, tail=inst.tail,
                normalize=args.normalize, cap=args.cap,
            )
        else:
            c = correct_linfty_l1(inst.S, inst.f0, eps, normalize=args.normalize, cap=args.cap)
        S = inst.S.scaled(c.certificate.scale) if args.normalize else inst.S
        report = verify_correction(S, inst.f0, eps, c, cap=args.cap)
        payload = {
            "eps": codec.enc(eps),
            "mode": inst.mode.value,
            "normalized": bool(args.normalize),
            "correction": codec.encode_correction(c),
            "verification": codec.encode_report(report),
        }
    _emit(payload, args.out)
    for line in report.lines():
        print(line, file=sys.stderr)
    return 0 if report.passed and c.certificate.passed else 1


def cmd_lemma(args):
    obj = _read_json(args.instance)
    mode = arith.ArithmeticMode(args.mode or obj.get("mode") or arith.get_mode().value)
    with arith.use_mode(mode):
        n = len(codec._list(codec._field(obj, "f1", "$"), "f1"))
        space = codec.decode_space(obj["measure"], "measure") if "measure" in obj else MeasureSpace.counting(n)
        f1 = codec.decode_vector(obj["f1"], space, "f1")
        f2 = codec.decode_vector(codec._field(obj, "f2", "$"), space, "f2")
        eps = codec._scalar(codec._field(obj, "eps", "$"), "eps")
        w = disjointify(f1, f2, eps)
        if args.json:
            _emit(codec.encode_witness(w), None)
        else:
            print(f"W  = {sorted(w.W)}")
            print(f"G1 = {sorted(w.G1)}")
            print(f"G2 = {sorted(w.G2)}")
            print(f"normalizer = {arith.scalar_str(w.normalizer)}")
            print("g1 = [" + ", ".join(arith.scalar_str(a) for a in w.g1) + "]")
            print("g2 = [" + ", ".join(arith.scalar_str(a) for a in w.g2) + "]")
            for item in w.certificate:
                print(item.describe())
    return 0 if w.passed else 1


def cmd_norm(args):
    obj = _read_json(args.op)
    mode = arith.ArithmeticMode(args.mode or arith.get_mode().value)
    with arith.use_mode(mode):
        T = codec.decode_operator(obj.get("S", obj), "operator")
        result = {}
        if T.is_positive():
            result["opnorm_positive"] = codec.enc(opnorm_positive(T))
        if args.exact or not T.is_positive():
            result["opnorm_exact"] = codec.enc(opnorm_exact(T, cap=args.cap))
    _emit(result, None)
    return 0


def cmd_sweep(args):
    cfg = SweepConfig.from_dict(_read_json(args.config))
    if args.mode:
        cfg.mode = args.mode
    rows = run_sweep(cfg, workers=args.workers)
    text = rows_to_csv(rows)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    report = tightness_report(rows)
    if args.report:
        with open(args.report, "w", encoding="utf-8", newline="") as fh:
            fh.write(tightness_to_csv(report))
    summary = summarize(rows)
    printable = {k: (arith.scalar_str(v) if v is not None and not isinstance(v, int) else v) for k, v in summary.items()}
    print(json.dumps(printable), file=sys.stderr)
    return 0 if summary["failed"] == 0 else 1


def cmd_counterexample(args):
    print("N  identity_norm(N)       brute_force            |diff|")
    for N in range(1, args.n_max + 1):
        exact = identity_norm(N)
        line = f"{N:<3}{exact:<23.16f}"
        if N <= args.brute_max:
            brute = identity_norm_bruteforce(N)
            line += f"{brute:<23.16f}{abs(exact - brute):.2e}"
        print(line)
    print(f"limit 1 + 1/sqrt(3) = {LIMIT_NORM:.16f}")
    print()
    print("k  attainment_gap(k)")
    for k in range(1, args.k_max + 1):
        print(f"{k:<3}{attainment_gap(k):.6e}")
    status = 0
    if args.convexity_trials:
        passed, failed = convexity_trials(args.convexity_trials, seed=args.seed)
        print()
        print(f"strict convexity: {passed}/{args.convexity_trials} midpoint trials passed")
        status = 0 if not failed else 1
    return status


def cmd_gen(args):
    inst = gen_instance(
        args.seed, args.n, args.m, args.eps, profile=args.profile, kind=args.kind,
        mode=args.mode, tail=args.tail,
    )
    if args.out:
        save_instance(inst, args.out)
    else:
        _emit(instance_to_json(inst), None)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="bpb", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add_mode(p):
        p.add_argument("--mode", choices=[m.value for m in arith.ArithmeticMode], default=None)

    p = sub.add_parser("correct", help="correct an instance and verify the result")
    p.add_argument("--instance", required=True)
    p.add_argument("--eps", help="p/q; defaults to the instance's eps")
    p.add_argument("--normalize", action="store_true", help="rescale S to norm one first")
    p.add_argument("--c0", action="store_true", help="use the c0 pipeline")
    p.add_argument("--cap", type=int, default=DEFAULT_ENUMERATION_CAP)
    p.add_argument("--out")
    add_mode(p)
    p.set_defaults(func=cmd_correct)

    p = sub.add_parser("lemma", help="disjoint-support witness for (f1, f2, eps)")
    p.add_argument("--instance", required=True)
    p.add_argument("--json", action="store_true")
    add_mode(p)
    p.set_defaults(func=cmd_lemma)

    p = sub.add_parser("norm", help="L_inf -> L_1 operator norm")
    p.add_argument("--op", required=True)
    p.add_argument("--exact", action="store_true", help="also run sign enumeration")
    p.add_argument("--cap", type=int, default=DEFAULT_ENUMERATION_CAP)
    add_mode(p)
    p.set_defaults(func=cmd_norm)

    p = sub.add_parser("sweep", help="run an experiment sweep, write CSV")
    p.add_argument("--config", required=True)
    p.add_argument("--out")
    p.add_argument("--report", help="per-cell tightness CSV")
    p.add_argument("--workers", type=int, default=1)
    add_mode(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("counterexample", help="renormed c0 tables")
    p.add_argument("--n-max", type=int, default=12)
    p.add_argument("--brute-max", type=int, default=12)
    p.add_argument("--k-max", type=int, default=30)
    p.add_argument("--convexity-trials", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_counterexample)

    p = sub.add_parser("gen", help="generate a random instance")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--m", type=int, default=4)
    p.add_argument("--eps", default="1/2")
    p.add_argument("--profile", choices=PROFILES, default=PROFILES[0])
    p.add_argument("--kind", choices=KINDS, default=KINDS[0])
    p.add_argument("--tail", type=int, default=0)
    p.add_argument("--out")
    add_mode(p)
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BPBError as exc:
        print(f"bpb {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
