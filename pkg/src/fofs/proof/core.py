"""Proof objects, the checker, and the proof file format.

Every line of a proof is a theorem; there is no assumption rule.  A proof
from assumptions Gamma = [g1, ..., gk] of phi ends in the line
``(g1 & ... & gk) -> phi`` (conjunction nested to the left).  With no
assumptions the last line is ``phi`` itself or ``true -> phi``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from ..logics import LogicId
from ..parsing import parse_formula, print_formula
from ..syntax import (
    TOP, Box, CaptureError, Dia, Forall, Formula, Imp, abstract_constant, big_and,
    constants_of, free_vars, is_sentence,
)
from .ipc import ipc_entails
from .schemas import AXIOM_NAMES, RULE_NAMES, align_instance, make_axiom, match_axiom

__all__ = ["ProofLine", "Proof", "Verdict", "check_proof", "ProofBuilder",
           "proof_to_json", "proof_from_json", "dump_proof", "load_proof", "gamma_form",
           "ProofFormatError"]

_CONST_KEYS = ("c", "c1", "c2", "constant")
_FORMULA_KEYS = ("phi", "psi")


class ProofFormatError(ValueError):
    pass


@dataclass(frozen=True)
class ProofLine:
    id: int
    formula: Formula
    rule: str
    premises: tuple = ()
    bindings: Mapping = field(default_factory=dict)


@dataclass(frozen=True)
class Proof:
    logic: LogicId
    assumptions: tuple
    lines: tuple
    conclusion: Formula

    @property
    def last(self) -> Formula:
        return self.lines[-1].formula


@dataclass(frozen=True)
class Verdict:
    accepted: bool
    line: int | None = None
    reason: str = ""

    def __bool__(self):
        return self.accepted

    def __str__(self):
        if self.accepted:
            return "accepted"
        where = f"line {self.line}: " if self.line is not None else ""
        return f"rejected: {where}{self.reason}"


def gamma_form(assumptions: Iterable[Formula], phi: Formula) -> Formula:
    """The theorem a proof of ``phi`` from ``assumptions`` must end in."""
    gs = list(assumptions)
    return Imp(big_and(gs), phi) if gs else phi


# ---------------------------------------------------------------- checking

def _check_axiom(ln: ProofLine, logic: LogicId) -> str | None:
    why = match_axiom(ln.rule, ln.formula, logic)
    if why:
        return why
    b = dict(ln.bindings)
    if ln.rule != "INT" and b:
        try:
            built = make_axiom(ln.rule, **b)
        except (KeyError, ValueError, TypeError, CaptureError) as e:
            return f"bindings do not instantiate {ln.rule}: {e}"
        if built != ln.formula:
            return f"bindings instantiate {ln.rule} to a different formula"
    return None


def _check_gen(ln: ProofLine, prem: Formula, assumption_consts: set) -> str | None:
    f = ln.formula
    if not isinstance(f, Forall):
        return "GEN must conclude a universal sentence"
    x = f.var
    if x not in free_vars(f.body):
        return "GEN: the generalized variable does not occur in the body"
    c = ln.bindings.get("constant")
    if c is None:
        cs = align_instance(f.body, x, prem)
        if not cs or len(cs) != 1:
            return "GEN: conclusion is not the generalization of the premise over one constant"
        c = next(iter(cs))
    if ln.bindings.get("variable", x) != x:
        return "GEN: bound variable differs from the cited one"
    if c not in constants_of(prem):
        return f"GEN: constant {c} does not occur in the premise"
    if c in assumption_consts:
        return f"GEN: constant {c} occurs in the assumptions"
    try:
        body = abstract_constant(prem, c, x)
    except CaptureError:
        return f"GEN: {x} is not substitutable for {c} in the premise"
    if body != f.body:
        return f"GEN: conclusion is not forall {x} of the premise with every {c} replaced"
    return None


def _check_reg(ln: ProofLine, prem: Formula, op) -> str | None:
    if not isinstance(prem, Imp):
        return f"{ln.rule} needs an implication as premise"
    if ln.formula != Imp(op(prem.left), op(prem.right)):
        return f"{ln.rule}: conclusion does not match the premise"
    return None


def check_proof(p: Proof) -> Verdict:
    if not p.lines:
        return Verdict(False, None, "proof has no lines")
    for g in p.assumptions:
        if not is_sentence(g):
            return Verdict(False, None, f"assumption {print_formula(g)} is not a sentence")
    if not is_sentence(p.conclusion):
        return Verdict(False, None, "conclusion is not a sentence")
    aconsts = set()
    for g in p.assumptions:
        aconsts |= constants_of(g)
    seen: dict[int, Formula] = {}
    for ln in p.lines:
        bad = _check_line(ln, p.logic, seen, aconsts)
        if bad:
            return Verdict(False, ln.id, bad)
        seen[ln.id] = ln.formula
    last = p.last
    ok = last == gamma_form(p.assumptions, p.conclusion) or last == p.conclusion
    if not p.assumptions and last == Imp(TOP, p.conclusion):
        ok = True
    if not ok:
        return Verdict(False, p.lines[-1].id,
                       "last line is neither the conclusion nor (conjunction of assumptions) -> conclusion")
    return Verdict(True)


def _check_line(ln: ProofLine, logic: LogicId, seen: dict, aconsts: set) -> str | None:
    if ln.id in seen:
        return f"duplicate line id {ln.id}"
    if not is_sentence(ln.formula):
        return "formula is not a sentence"
    for q in ln.premises:
        if q not in seen:
            return f"premise {q} does not precede this line"
    prems = [seen[q] for q in ln.premises]
    rule = ln.rule
    if rule in AXIOM_NAMES:
        if prems:
            return f"axiom {rule} takes no premises"
        return _check_axiom(ln, logic)
    if rule == "MP":
        if len(prems) != 2:
            return "MP needs exactly two premises"
        a, b = prems
        if b == Imp(a, ln.formula) or a == Imp(b, ln.formula):
            return None
        return "MP: premises are not phi and phi -> conclusion"
    if rule == "GEN":
        if len(prems) != 1:
            return "GEN needs exactly one premise"
        return _check_gen(ln, prems[0], aconsts)
    if rule in ("REG-BOX", "REG-DIA"):
        if len(prems) != 1:
            return f"{rule} needs exactly one premise"
        return _check_reg(ln, prems[0], Box if rule == "REG-BOX" else Dia)
    if rule == "IPC":
        if ipc_entails(prems, ln.formula):
            return None
        return "IPC: conclusion does not follow intuitionistically from the premises"
    return f"unknown rule {rule!r}"


# ---------------------------------------------------------------- building

class ProofBuilder:
    """Accumulates proof lines; identical formulas are proved once."""

    def __init__(self, logic: LogicId | None = None):
        self.logic = logic or LogicId()
        self.lines: list[ProofLine] = []
        self._by_formula: dict[Formula, int] = {}

    def add(self, formula: Formula, rule: str, premises: Iterable[int] = (), **bindings) -> int:
        known = self._by_formula.get(formula)
        if known is not None:
            return known
        lid = len(self.lines)
        self.lines.append(ProofLine(lid, formula, rule, tuple(premises), bindings))
        self._by_formula[formula] = lid
        return lid

    def has(self, formula: Formula) -> int | None:
        return self._by_formula.get(formula)

    def formula(self, lid: int) -> Formula:
        return self.lines[lid].formula

    def axiom(self, name: str, **params) -> int:
        """Add the instance of ``name`` built from ``params``."""
        return self.add(make_axiom(name, **params), name, (), **params)

    def mp(self, a: int, ab: int) -> int:
        f = self.formula(ab)
        if not (isinstance(f, Imp) and f.left == self.formula(a)):
            raise ValueError("MP: second line is not an implication from the first")
        return self.add(f.right, "MP", (a, ab))

    def ipc(self, formula: Formula, premises: Iterable[int] = ()) -> int:
        premises = tuple(premises)
        if not ipc_entails([self.formula(q) for q in premises], formula):
            raise ValueError(f"IPC step does not hold: {print_formula(formula)}")
        return self.add(formula, "IPC", premises)

    def reg_box(self, lid: int) -> int:
        f = self.formula(lid)
        return self.add(Imp(Box(f.left), Box(f.right)), "REG-BOX", (lid,))

    def reg_dia(self, lid: int) -> int:
        f = self.formula(lid)
        return self.add(Imp(Dia(f.left), Dia(f.right)), "REG-DIA", (lid,))

    def gen(self, lid: int, c: str, x: str) -> int:
        body = abstract_constant(self.formula(lid), c, x)
        return self.add(Forall(x, body), "GEN", (lid,), constant=c, variable=x)

    def include(self, proof: Proof) -> int:
        """Splice in another proof's lines; returns the id of its last line here."""
        remap = {}
        for ln in proof.lines:
            known = self._by_formula.get(ln.formula)
            if known is not None:
                remap[ln.id] = known
                continue
            remap[ln.id] = self.add(ln.formula, ln.rule, [remap[q] for q in ln.premises],
                                    **dict(ln.bindings))
        return remap[proof.lines[-1].id]

    def build(self, conclusion: Formula, assumptions: Iterable[Formula] = (),
              last: int | None = None) -> Proof:
        """Finish with ``last`` (default: the line proving the required form) as final line."""
        assumptions = tuple(assumptions)
        target = gamma_form(assumptions, conclusion)
        if last is None:
            last = self._by_formula.get(target)
            if last is None:
                raise ValueError(f"no line proves {print_formula(target)}")
        return Proof(self.logic, assumptions, _prune(self.lines, last), conclusion)


def _prune(lines: list[ProofLine], last: int) -> tuple:
    """Keep only lines ``last`` depends on, renumbered from 0 in order."""
    need = {last}
    for ln in reversed(lines[: last + 1]):
        if ln.id in need:
            need.update(ln.premises)
    remap = {}
    out = []
    for ln in lines[: last + 1]:
        if ln.id in need:
            remap[ln.id] = len(out)
            out.append(ProofLine(len(out), ln.formula, ln.rule,
                                 tuple(remap[q] for q in ln.premises), ln.bindings))
    return tuple(out)


# ---------------------------------------------------------------- file format

def _binding_to_json(b: Mapping) -> dict:
    out = {}
    for k, v in b.items():
        out[k] = print_formula(v) if isinstance(v, Formula) else v
    fv = set()
    for k in _FORMULA_KEYS:
        if isinstance(b.get(k), Formula):
            fv |= free_vars(b[k])
    if fv:
        out["vars"] = sorted(fv)
    return out


def proof_to_json(p: Proof) -> dict:
    return {
        "logic": p.logic.token,
        "assumptions": [print_formula(g) for g in p.assumptions],
        "lines": [{"id": ln.id, "formula": print_formula(ln.formula), "rule": ln.rule,
                   "premises": list(ln.premises), "bindings": _binding_to_json(ln.bindings)}
                  for ln in p.lines],
        "conclusion": print_formula(p.conclusion),
    }


def proof_from_json(doc: Mapping) -> Proof:
    arities: dict[str, int] = {}

    def fm(text, variables=()):
        if not isinstance(text, str):
            raise ProofFormatError(f"expected a formula string, got {text!r}")
        return parse_formula(text, None, variables, arities)

    try:
        logic = LogicId.parse(doc["logic"])
        assumptions = tuple(fm(t) for t in doc.get("assumptions", []))
        lines = []
        for raw in doc["lines"]:
            rule = raw["rule"]
            if rule not in AXIOM_NAMES + RULE_NAMES:
                raise ProofFormatError(f"unknown rule name {rule!r}")
            b = dict(raw.get("bindings") or {})
            vs = b.pop("vars", [])
            for k in _FORMULA_KEYS:
                if k in b:
                    b[k] = fm(b[k], vs)
            for k in b:
                if k not in _FORMULA_KEYS + _CONST_KEYS + ("variable",):
                    raise ProofFormatError(f"unknown binding {k!r}")
            lines.append(ProofLine(int(raw["id"]), fm(raw["formula"]), rule,
                                   tuple(int(q) for q in raw.get("premises", [])), b))
        conclusion = fm(doc["conclusion"])
    except KeyError as e:
        raise ProofFormatError(f"missing field {e.args[0]!r}") from None
    return Proof(logic, assumptions, tuple(lines), conclusion)


def dump_proof(p: Proof) -> str:
    return json.dumps(proof_to_json(p), indent=2)


def load_proof(text: str) -> Proof:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ProofFormatError(f"malformed proof file: {e.msg} (line {e.lineno}, column {e.colno})") from None
    return proof_from_json(doc)
