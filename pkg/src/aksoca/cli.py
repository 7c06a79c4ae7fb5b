"""Command-line driver: validation, generation, constructions and law suites.

Exit status is 0 when every check passes, 1 when some check fails and 2 on
usage or input-format errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from .aks import AbstractKrivineStructure, saturate, validate_aks
from .constructions import aks_to_foca_bullet, aks_to_ioca_perp, foca_to_aks, heyting_from_aks
from .errors import AksocaError, AxiomViolationError, InstanceFormatError
from .generators import (GeneratorParams, HeytingParams, VectorPolarityParams, gen_heyting_aks, gen_random_aks,
                         gen_vector_polarity)
from .instance_io import load_instance, parse_instance, serialize_instance
from .oca import FiniteOca, classify_oca, heyting_preorder
from .polarity import check_polarity_laws
from .reports import CheckReport, all_passed
from .suite import SUITES, SuiteOptions, run_suite

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0, help="seed for sampled checks and generators")
    p.add_argument("--cap", type=int, default=14, help="largest carrier enumerated exhaustively")
    p.add_argument("--samples", type=int, default=None, help="sample count when a check is too large to enumerate")
    p.add_argument("--json-report", metavar="FILE", help="also write a JSON report ('-' for stdout)")
    p.add_argument("--figures", metavar="DIR", help="write heatmaps of the instance matrices into DIR")


def _output(p: argparse.ArgumentParser) -> None:
    p.add_argument("-o", "--output", metavar="FILE", help="write the instance here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="aksoca", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="validate instance files")
    p.add_argument("paths", nargs="+")
    p.add_argument("--saturate", action="store_true", help="saturate structures instead of rejecting them")
    _common(p)

    p = sub.add_parser("saturate", help="saturate the pole of a structure and print it")
    p.add_argument("path")
    _common(p)
    _output(p)

    p = sub.add_parser("gen-aks", help="generate a seeded saturated structure")
    p.add_argument("--family", choices=("random", "heyting"), default="random")
    p.add_argument("--terms", type=int, default=4)
    p.add_argument("--stacks", type=int, default=4)
    p.add_argument("--density", type=Fraction, default=Fraction(1, 4), help="pole density (random family)")
    p.add_argument("--qp-seeds", type=int, default=1, help="number of quasi-proof generators (random family)")
    p.add_argument("--perturbation", type=Fraction, default=Fraction(0), help="extra pole density (heyting family)")
    _common(p)
    _output(p)

    p = sub.add_parser("gen-vec", help="generate the vector polarity over F_p^3")
    p.add_argument("--p", type=int, default=2, choices=(2, 3))
    p.add_argument("--shift", help="shift vector for the push, e.g. 0,1,0")
    _common(p)
    _output(p)

    for name, what in (("build-foca", "bullet algebra of a structure"), ("build-ioca", "perp algebra of a structure"),
                       ("build-aks", "structure of a full-adjunction algebra")):
        p = sub.add_parser(name, help=f"print the {what}")
        p.add_argument("path")
        _common(p)
        _output(p)

    p = sub.add_parser("heyting", help="print the realizability preorder of a structure or algebra")
    p.add_argument("path")
    _common(p)

    p = sub.add_parser("laws", help="run a law suite over instance files")
    p.add_argument("suite", choices=SUITES)
    p.add_argument("paths", nargs="+")
    p.add_argument("--max-index", type=int, default=3, help="largest index set for the indexed checks")
    _common(p)

    p = sub.add_parser("roundtrip", help="check that parsing and printing are mutually inverse")
    p.add_argument("paths", nargs="+")
    _common(p)
    return parser


# -- helpers ------------------------------------------------------------------------

def _load(path: str, saturate_on_load: bool = False):
    try:
        return load_instance(path, saturate_on_load)
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror or exc}") from None
    except InstanceFormatError as exc:
        raise UsageError(f"{path}: {exc}") from None


def _emit_instance(obj, args) -> None:
    text = serialize_instance(obj)
    if getattr(args, "output", None):
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


def _figures(obj, args, stem: str) -> None:
    if args.figures:
        from .plotting import render_figures
        for path in render_figures(obj, args.figures, stem):
            print(f"figure\t{path}", file=sys.stderr)


def _report(results: list[tuple[str, list[CheckReport]]], args) -> int:
    for label, reports in results:
        for rep in reports:
            print(f"{label}\t{rep.line()}")
    ok = all(all_passed(reps) for _, reps in results)
    if args.json_report:
        payload = {"passed": ok,
                   "instances": [{"path": label, "passed": all_passed(reps), "reports": [r.to_dict() for r in reps]}
                                 for label, reps in results]}
        text = json.dumps(payload, indent=2)
        if args.json_report == "-":
            print(text)
        else:
            Path(args.json_report).write_text(text + "\n")
    return EXIT_PASS if ok else EXIT_FAIL


def _require(obj, kind, path: str, what: str):
    if not isinstance(obj, kind):
        raise UsageError(f"{path}: expected {what}, got {type(obj).__name__}")
    return obj


# -- commands -----------------------------------------------------------------------

def _cmd_check(args) -> int:
    results = []
    for path in args.paths:
        try:
            obj = load_instance(path, args.saturate)
        except AxiomViolationError as exc:
            rep = CheckReport("aks.axioms", checked=1)
            rep.record(str(exc))
            results.append((path, [rep]))
            continue
        except (OSError, InstanceFormatError) as exc:
            raise UsageError(f"{path}: {exc}") from None
        if isinstance(obj, AbstractKrivineStructure):
            reps = [validate_aks(obj)]
        elif isinstance(obj, FiniteOca):
            cls, reps = classify_oca(obj)
            reps = [r for r in reps if r.name != "oca.full_adjunction"]
            summary = CheckReport("oca.class", checked=1)
            summary.notes["class"] = None if cls is None else cls.name
            if cls is None:
                summary.record({"class": None})
            reps.append(summary)
            print(f"{path}\tclass\t{summary.notes['class']}")
        else:
            reps = check_polarity_laws(obj, samples=args.samples, seed=args.seed)
        _figures(obj, args, Path(path).stem)
        results.append((path, reps))
    return _report(results, args)


def _cmd_saturate(args) -> int:
    obj = _require(_load(args.path, saturate_on_load=True), AbstractKrivineStructure, args.path, "a structure")
    _emit_instance(saturate(obj), args)
    _figures(obj, args, Path(args.path).stem)
    return EXIT_PASS


def _cmd_gen_aks(args) -> int:
    try:
        if args.family == "heyting":
            k = gen_heyting_aks(HeytingParams(perturbation=args.perturbation, rng_seed=args.seed))
        else:
            k = gen_random_aks(GeneratorParams(args.terms, args.stacks, args.density, args.qp_seeds, args.seed))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _emit_instance(k, args)
    _figures(k, args, f"aks_{args.family}_{args.seed}")
    return EXIT_PASS


def _cmd_gen_vec(args) -> int:
    shift = None
    if args.shift:
        try:
            shift = tuple(int(c) for c in args.shift.split(","))
            params = VectorPolarityParams(args.p, shift)
        except ValueError as exc:
            raise UsageError(f"--shift: {exc}") from None
    else:
        params = VectorPolarityParams(args.p)
    rl = gen_vector_polarity(params)
    _emit_instance(rl, args)
    _figures(rl, args, f"vec_f{args.p}")
    return EXIT_PASS


def _cmd_build(args) -> int:
    obj = _load(args.path)
    if args.command == "build-aks":
        a = _require(obj, FiniteOca, args.path, "an algebra")
        out = foca_to_aks(a)
    else:
        k = _require(obj, AbstractKrivineStructure, args.path, "a structure")
        out = aks_to_foca_bullet(k, args.cap) if args.command == "build-foca" else aks_to_ioca_perp(k, args.cap)
    _emit_instance(out, args)
    _figures(out, args, f"{Path(args.path).stem}_{args.command[6:]}")
    return EXIT_PASS


def _cmd_heyting(args) -> int:
    obj = _load(args.path)
    if isinstance(obj, AbstractKrivineStructure):
        pre = heyting_from_aks(obj, "bullet", args.cap)
        labels = [format(m, "b").zfill(obj.stacks.size)[::-1] for m in pre.masks]
        order = pre.order
    else:
        a = _require(obj, FiniteOca, args.path, "a structure or an algebra")
        labels = [a.carrier.label(i) for i in range(a.n)]
        order = heyting_preorder(a).order
    print("\t" + "\t".join(labels))
    for lab, row in zip(labels, np.asarray(order)):
        print(lab + "\t" + "\t".join("1" if x else "0" for x in row))
    _figures(obj, args, Path(args.path).stem)
    return EXIT_PASS


def _cmd_laws(args) -> int:
    opt = SuiteOptions(seed=args.seed, cap=args.cap, samples=args.samples, max_index=args.max_index)
    results = []
    for path in args.paths:
        try:
            obj = load_instance(path)
        except AxiomViolationError as exc:
            rep = CheckReport("aks.axioms", checked=1)
            rep.record(str(exc))
            results.append((path, [rep]))
            continue
        except (OSError, InstanceFormatError) as exc:
            raise UsageError(f"{path}: {exc}") from None
        results.append((path, run_suite(obj, args.suite, opt)))
        _figures(obj, args, Path(path).stem)
    return _report(results, args)


def _cmd_roundtrip(args) -> int:
    results = []
    for path in args.paths:
        try:
            text = Path(path).read_text()
            first = parse_instance(text)
        except (OSError, InstanceFormatError) as exc:
            raise UsageError(f"{path}: {exc}") from None
        canon = serialize_instance(first)
        again = serialize_instance(parse_instance(canon))
        rep = CheckReport("io.roundtrip", checked=1)
        if canon != again:
            rep.record({"path": path})
        results.append((path, [rep]))
    return _report(results, args)


_COMMANDS = {"check": _cmd_check, "saturate": _cmd_saturate, "gen-aks": _cmd_gen_aks, "gen-vec": _cmd_gen_vec,
             "build-foca": _cmd_build, "build-ioca": _cmd_build, "build-aks": _cmd_build, "heyting": _cmd_heyting,
             "laws": _cmd_laws, "roundtrip": _cmd_roundtrip}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"aksoca: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except AksocaError as exc:
        print(f"aksoca: error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
