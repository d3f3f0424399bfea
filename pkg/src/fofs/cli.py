"""Command-line interface.

Exit codes: 0 success (accepted, valid, nothing found), 1 a negative verdict
that was computed successfully (rejected proof, violation, countermodel),
2 a usage or input error.
"""
from __future__ import annotations

import argparse
import json
import sys

from .frameclasses import FrameClassSpec, check_membership
from .logics import ALL_LOGICS, LogicId
from .parsing import parse_formula, parse_term_list, print_formula
from .proof import DERIVED_NAMES, check_proof, derive_schema, dump_proof, load_proof, proof_to_json
from .search import SearchBounds, classical_dne, find_countermodel, soundness_fuzz
from .semantics import dump_model, eval as eval_formula, load_model, model_to_json, validate_model
from .trace import (
    VARIANTS, AmalgamationError, build_trace_fragment, enumerate_ferrers, load_oracle, random_oracle,
)

DEFAULT_SEED = 20240521


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _emit(out, args, doc, text):
    if args.format == "structured":
        out.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    else:
        out.write(text if text.endswith("\n") else text + "\n")


def _read(path):
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None


def _report(out, args, rep, ok_text="valid"):
    lines = [ok_text] if rep.ok else [str(v) for v in rep]
    _emit(out, args, rep.to_json(), "\n".join(lines))
    return 0 if rep.ok else 1


# ---------------------------------------------------------------- subcommands

def cmd_parse(args, out):
    f = parse_formula(args.formula, None, parse_term_list(args.vars or ""))
    text = print_formula(f)
    _emit(out, args, {"formula": text}, text)
    return 0


def cmd_check(args, out):
    v = check_proof(load_proof(_read(args.proof)))
    _emit(out, args, {"accepted": v.accepted, "line": v.line, "reason": v.reason}, str(v))
    return 0 if v else 1


def _derive_args(name, raw):
    def need(k):
        if len(raw) != k:
            raise UsageError(f"{name} takes {k} argument(s), got {len(raw)}")

    if name == "Lemma26_1":
        if not raw:
            raise UsageError("Lemma26_1 takes at least one sentence")
        return [[parse_formula(a) for a in raw]]
    if name in ("Lemma26_2", "Lemma26_3"):
        need(2)
        return [parse_formula(a) for a in raw]
    if name == "Lemma26_4":
        need(3)
        return list(raw)
    if name == "Lemma26_5":
        need(3)
        return [parse_formula(raw[0], None, [raw[1]]), raw[2]]
    if name == "Necessitation":
        need(1)
        return [load_proof(_read(raw[0]))]
    if name == "RuBox":
        need(3)
        return [load_proof(_read(p)) for p in raw]
    if name == "GenGen":
        need(3)
        return [load_proof(_read(raw[0])), raw[1], raw[2]]
    need(3)
    return [load_proof(_read(raw[0])), parse_term_list(raw[1]), parse_term_list(raw[2])]


def cmd_derive(args, out):
    names = {n.lower(): n for n in DERIVED_NAMES}
    name = names.get(args.name.lower())
    if name is None:
        raise UsageError(f"unknown schema {args.name!r}; expected one of {', '.join(DERIVED_NAMES)}")
    logic = LogicId.parse(args.logic) if args.logic else None
    p = derive_schema(name, *_derive_args(name, args.args), logic=logic)
    text = dump_proof(p)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
        _emit(out, args, {"written": args.output, "conclusion": print_formula(p.conclusion)},
              f"wrote {args.output}: {print_formula(p.conclusion)}")
    else:
        _emit(out, args, proof_to_json(p), text)
    return 0


def _assignment(text):
    g = {}
    for part in parse_term_list(text or ""):
        if "=" not in part:
            raise UsageError(f"assignment entries look like x=e0, got {part!r}")
        x, a = part.split("=", 1)
        g[x.strip()] = a.strip()
    return g


def cmd_eval(args, out):
    m = load_model(_read(args.model))
    g = _assignment(args.assign)
    if args.world not in m.frame.index:
        raise UsageError(f"unknown world {args.world!r}")
    # element names in model files may be numbers
    for x, a in list(g.items()):
        if a not in m.eidx:
            try:
                if int(a) in m.eidx:
                    g[x] = int(a)
            except ValueError:
                pass
    f = parse_formula(args.formula, m.signature, list(g))
    v = eval_formula(m, args.world, g, f)
    _emit(out, args, {"world": args.world, "formula": print_formula(f), "value": v}, "true" if v else "false")
    return 0 if v else 1


def cmd_validate(args, out):
    return _report(out, args, validate_model(load_model(_read(args.model))))


def cmd_class(args, out):
    m = load_model(_read(args.model))
    spec = FrameClassSpec.parse(args.cls)
    return _report(out, args, validate_model(m) + check_membership(m, spec), f"member of {spec.token}")


def cmd_fuzz(args, out):
    toks = args.logic or ["fs"]
    logics = list(ALL_LOGICS) if toks == ["all"] else [LogicId.parse(t) for t in toks]
    extra = {"DNE": classical_dne} if args.control else None
    docs, lines, bad = [], [], 0
    for lg in logics:
        rep = soundness_fuzz(lg, args.models, args.instances, args.seed, schemas=extra)
        bad += len(rep)
        docs.append({"logic": lg.token, "violations": len(rep), "report": rep.to_json()})
        lines.append(f"{lg.token}: {len(rep)} violation(s)")
        lines.extend(f"  {v}" for v in list(rep)[:args.show])
    doc = {"models": args.models, "instances": args.instances, "seed": args.seed, "logics": docs}
    _emit(out, args, doc, "\n".join(lines))
    return 0 if bad == 0 else 1


def cmd_refute(args, out):
    arities = {}
    gamma = [parse_formula(a, None, (), arities) for a in args.assume]
    goal = parse_formula(args.goal, None, (), arities)
    spec = FrameClassSpec.parse(args.cls)
    bounds = SearchBounds.parse(args.bounds)
    r = find_countermodel(gamma, goal, spec, bounds, minimal=args.minimal)
    if not r:
        _emit(out, args, {"result": "not-found", "stats": r.stats},
              f"no countermodel within bounds {args.bounds} ({r.models_examined} models examined)")
        return 0
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(dump_model(r.model) + "\n")
    _emit(out, args, {"result": "found", "world": r.world, "model": model_to_json(r.model)},
          f"countermodel found at world {r.world}\n{dump_model(r.model)}")
    return 1


def cmd_ferrers(args, out):
    fs = enumerate_ferrers(args.l, args.m)
    doc = {"l": args.l, "m": args.m, "count": len(fs)}
    text = str(len(fs))
    if args.list:
        doc["sets"] = [{"heights": list(f.heights), "points": [list(p) for p in f.points()]} for f in fs]
        text = "\n".join([text] + [" ".join(f"({i},{j})" for i, j in f.points()) for f in fs])
    _emit(out, args, doc, text)
    return 0


def _pair(text, what):
    parts = [p for p in text.split(",") if p.strip()]
    try:
        a, b = (int(p) for p in parts)
    except ValueError:
        raise UsageError(f"{what} must look like L,M: {text!r}") from None
    return a, b


def cmd_trace(args, out):
    depth = _pair(args.depth, "depth")
    if args.oracle:
        o = load_oracle(_read(args.oracle))
    else:
        o = random_oracle(depth, args.seed)
    try:
        fr = build_trace_fragment(o, depth, args.variant)
    except AmalgamationError as e:
        raise UsageError(f"oracle amalgamation table incomplete: {e}") from None
    lines = [f"{fr.frame.n} records, variant {fr.variant}, depth {depth[0]},{depth[1]}"]
    if args.list:
        lines += [f"  r{k} {r}" for k, r in enumerate(fr.records)]
    lines += ["valid"] if fr.ok else [str(v) for v in fr.report]
    _emit(out, args, fr.to_json(), "\n".join(lines))
    return 0 if fr.ok else 1


# ---------------------------------------------------------------- parser

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "structured"), default=argparse.SUPPRESS)
    p = _Parser(prog="fofs", description="First-order Fischer Servi logic: proofs, models, traces.")
    p.add_argument("--format", choices=("text", "structured"), default="text",
                   help="output style, accepted before or after the subcommand")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    s = sub.add_parser("parse", parents=[common], help="print the canonical form of a formula")
    s.add_argument("formula")
    s.add_argument("--vars", help="comma-separated variables allowed free")
    s.set_defaults(func=cmd_parse)

    s = sub.add_parser("check", parents=[common], help="check a proof file")
    s.add_argument("-p", "--proof", required=True)
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("derive", parents=[common], help="build a derived-lemma proof",
                       description="Arguments: Lemma26_1 SENT...; Lemma26_2/3 SENT SENT; "
                                   "Lemma26_4 C1 C2 C3; Lemma26_5 FORMULA VAR CONST; Necessitation PROOF; "
                                   "RuBox PROOF PROOF PROOF; GenGen PROOF CONST VAR; ExSuff PROOF CONSTS VARS.")
    s.add_argument("name")
    s.add_argument("args", nargs="*")
    s.add_argument("-o", "--output")
    s.add_argument("--logic")
    s.set_defaults(func=cmd_derive)

    s = sub.add_parser("eval", parents=[common], help="evaluate a formula at a world")
    s.add_argument("-m", "--model", required=True)
    s.add_argument("-w", "--world", required=True)
    s.add_argument("-f", "--formula", required=True)
    s.add_argument("-g", "--assign", help="variable assignment, e.g. x=e0,y=e1")
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("validate", parents=[common], help="validate a model file")
    s.add_argument("-m", "--model", required=True)
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("class", parents=[common], help="check frame-class membership")
    s.add_argument("-m", "--model", required=True)
    s.add_argument("-c", "--class", dest="cls", required=True)
    s.set_defaults(func=cmd_class)

    s = sub.add_parser("fuzz", parents=[common], help="soundness fuzzing over random models")
    s.add_argument("-l", "--logic", action="append", help="class token, repeatable, or 'all'")
    s.add_argument("-n", "--models", type=int, default=200)
    s.add_argument("-k", "--instances", type=int, default=50)
    s.add_argument("--seed", type=int, default=DEFAULT_SEED)
    s.add_argument("--control", action="store_true", help="add classical double negation as a control")
    s.add_argument("--show", type=int, default=5, help="violations listed per logic in text mode")
    s.set_defaults(func=cmd_fuzz)

    s = sub.add_parser("refute", parents=[common], help="search for a countermodel")
    s.add_argument("-g", "--goal", required=True)
    s.add_argument("-a", "--assume", action="append", default=[])
    s.add_argument("-c", "--class", dest="cls", default="fs")
    s.add_argument("-b", "--bounds", default="3,3")
    s.add_argument("-o", "--output")
    s.add_argument("--minimal", action="store_true")
    s.set_defaults(func=cmd_refute)

    s = sub.add_parser("ferrers", parents=[common], help="count or list Ferrers sets")
    s.add_argument("l", type=int)
    s.add_argument("m", type=int)
    s.add_argument("--list", action="store_true")
    s.set_defaults(func=cmd_ferrers)

    s = sub.add_parser("trace", parents=[common], help="build a trace-frame fragment")
    s.add_argument("-o", "--oracle", help="oracle file; a seeded random oracle when omitted")
    s.add_argument("-d", "--depth", default="1,1")
    s.add_argument("-v", "--variant", choices=VARIANTS, default="base")
    s.add_argument("--seed", type=int, default=DEFAULT_SEED)
    s.add_argument("--list", action="store_true")
    s.set_defaults(func=cmd_trace)
    return p


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    p = build_parser()
    try:
        args = p.parse_args(argv)
        return args.func(args, out)
    except UsageError as e:
        err.write(f"error: {e}\n")
        return 2
    except SystemExit as e:  # --help
        return int(e.code or 0)
    except (ValueError, KeyError) as e:
        err.write(f"error: {e}\n")
        return 2


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
