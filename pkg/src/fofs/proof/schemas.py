"""Axiom schema recognizers and constructors.

Each recognizer takes a sentence and returns ``None`` when it is an instance
of the schema, or a short reason why not.
"""
from __future__ import annotations

from ..syntax import (
    BOT, TOP, And, Box, Const, Dia, Eq, Exists, Forall, Formula, Imp, Or, Pred,
    Var, constants_of, free_vars, iff, is_modal_free, neg, substitute_var,
)
from .ipc import ipc_skeleton_valid

__all__ = ["AXIOM_NAMES", "RULE_NAMES", "match_axiom", "make_axiom", "align_instance"]

AXIOM_NAMES = ("INT", "KB-a", "KB-b", "KD-a", "KD-b", "FS1", "FS2", "UNIV", "EXIST",
               "FORALL-ANT", "FORALL-CON", "ID-REF", "ID-SUB", "D", "T-BOX", "T-DIA",
               "4-BOX", "4-DIA", "NI", "ND")
RULE_NAMES = ("MP", "GEN", "REG-BOX", "REG-DIA", "IPC")


# ---------------------------------------------------------------- constructors

def make_axiom(name: str, **kw) -> Formula:
    """Build an axiom instance from its parameters.

    Propositional schemas take ``phi``/``psi``; ``UNIV``/``EXIST`` take a
    one-place ``phi`` and a constant ``c``; ``FORALL-ANT`` takes one-place
    ``phi`` and sentence ``psi``; ``FORALL-CON`` takes sentence ``phi`` and
    one-place ``psi``; identity schemas take constants ``c1``, ``c2``
    (and a one-place ``phi`` for ``ID-SUB``).
    """
    phi, psi = kw.get("phi"), kw.get("psi")
    if name == "KB-a":
        return iff(Box(And(phi, psi)), And(Box(phi), Box(psi)))
    if name == "KB-b":
        return Box(TOP)
    if name == "KD-a":
        return iff(Dia(Or(phi, psi)), Or(Dia(phi), Dia(psi)))
    if name == "KD-b":
        return neg(Dia(BOT))
    if name == "FS1":
        return Imp(Imp(Dia(phi), Box(psi)), Box(Imp(phi, psi)))
    if name == "FS2":
        return Imp(Dia(Imp(phi, psi)), Imp(Box(phi), Dia(psi)))
    if name in ("UNIV", "EXIST"):
        x = _one_var(phi)
        inst = substitute_var(phi, x, Const(kw["c"]))
        if name == "UNIV":
            return Imp(Forall(x, phi), inst)
        return Imp(inst, Exists(x, phi))
    if name == "FORALL-ANT":
        x = _one_var(phi)
        return Imp(Forall(x, Imp(phi, psi)), Imp(Exists(x, phi), psi))
    if name == "FORALL-CON":
        x = _one_var(psi)
        return Imp(Forall(x, Imp(phi, psi)), Imp(phi, Forall(x, psi)))
    if name == "ID-REF":
        c = Const(kw["c"])
        return Eq(c, c)
    if name == "ID-SUB":
        x = _one_var(phi)
        c1, c2 = Const(kw["c1"]), Const(kw["c2"])
        return Imp(Eq(c1, c2), Imp(substitute_var(phi, x, c1), substitute_var(phi, x, c2)))
    if name == "D":
        return Imp(Box(phi), Dia(phi))
    if name == "T-BOX":
        return Imp(Box(phi), phi)
    if name == "T-DIA":
        return Imp(phi, Dia(phi))
    if name == "4-BOX":
        return Imp(Box(phi), Box(Box(phi)))
    if name == "4-DIA":
        return Imp(Dia(Dia(phi)), Dia(phi))
    if name == "NI":
        e = Eq(Const(kw["c1"]), Const(kw["c2"]))
        return Imp(e, Box(e))
    if name == "ND":
        e = Eq(Const(kw["c1"]), Const(kw["c2"]))
        return Imp(Dia(e), e)
    raise ValueError(f"no constructor for schema {name!r}")


def _one_var(phi: Formula) -> str:
    fv = free_vars(phi)
    if len(fv) != 1:
        raise ValueError(f"expected a one-place formula, free variables are {sorted(fv)}")
    return next(iter(fv))


# ---------------------------------------------------------------- alignment

def align_instance(pattern: Formula, x: str, target: Formula) -> set | None:
    """Constants standing at the free-``x`` positions of ``pattern`` in ``target``.

    Returns ``None`` if ``target`` is not ``pattern`` with each free ``x``
    replaced by some constant, else the set of constants used there.
    """
    found: set = set()

    def term(p, t, bound) -> bool:
        if isinstance(p, Var) and p.name == x and x not in bound:
            if isinstance(t, Const):
                found.add(t.name)
                return True
            return False
        return p == t

    def go(p, t, bound) -> bool:
        if type(p) is not type(t):
            return False
        if isinstance(p, Pred):
            return (p.name == t.name and len(p.args) == len(t.args)
                    and all(term(a, b, bound) for a, b in zip(p.args, t.args)))
        if isinstance(p, Eq):
            return term(p.left, t.left, bound) and term(p.right, t.right, bound)
        if isinstance(p, (And, Or, Imp)):
            return go(p.left, t.left, bound) and go(p.right, t.right, bound)
        if isinstance(p, (Box, Dia)):
            return go(p.body, t.body, bound)
        if isinstance(p, (Forall, Exists)):
            return p.var == t.var and go(p.body, t.body, bound | {p.var})
        return True

    return found if go(pattern, target, frozenset()) else None


def _idsub_positions(a: Formula, b: Formula, c1: str, c2: str) -> int | None:
    """Count positions where ``a`` has ``c1`` and ``b`` has ``c2``; ``None`` on any other difference."""
    count = 0

    def term(s, t) -> bool:
        nonlocal count
        if isinstance(s, Const) and isinstance(t, Const) and s.name == c1 and t.name == c2:
            count += 1
            return True
        return s == t

    def go(p, q) -> bool:
        if type(p) is not type(q):
            return False
        if isinstance(p, Pred):
            return (p.name == q.name and len(p.args) == len(q.args)
                    and all(term(s, t) for s, t in zip(p.args, q.args)))
        if isinstance(p, Eq):
            return term(p.left, q.left) and term(p.right, q.right)
        if isinstance(p, (And, Or, Imp)):
            return go(p.left, q.left) and go(p.right, q.right)
        if isinstance(p, (Box, Dia)):
            return go(p.body, q.body)
        if isinstance(p, (Forall, Exists)):
            return p.var == q.var and go(p.body, q.body)
        return True

    return count if go(a, b) else None


def _split_iff(f):
    """(l, r) if f is (l -> r) & (r -> l)."""
    if (isinstance(f, And) and isinstance(f.left, Imp) and isinstance(f.right, Imp)
            and f.left.left == f.right.right and f.left.right == f.right.left):
        return f.left.left, f.left.right
    return None


# ---------------------------------------------------------------- recognizers

def _int(f, logic):
    return None if ipc_skeleton_valid(f) else "not a substitution instance of an IPC theorem"


def _kb_a(f, logic):
    lr = _split_iff(f)
    if lr:
        l, r = lr
        if (isinstance(l, Box) and isinstance(l.body, And) and isinstance(r, And)
                and r.left == Box(l.body.left) and r.right == Box(l.body.right)):
            return None
    return "not of the form box(phi & psi) <-> (box phi & box psi)"


def _kd_a(f, logic):
    lr = _split_iff(f)
    if lr:
        l, r = lr
        if (isinstance(l, Dia) and isinstance(l.body, Or) and isinstance(r, Or)
                and r.left == Dia(l.body.left) and r.right == Dia(l.body.right)):
            return None
    return "not of the form dia(phi | psi) <-> (dia phi | dia psi)"


def _exact(target, text):
    def rec(f, logic):
        return None if f == target else f"not the formula {text}"
    return rec


def _fs1(f, logic):
    if (isinstance(f, Imp) and isinstance(f.left, Imp) and isinstance(f.left.left, Dia)
            and isinstance(f.left.right, Box) and isinstance(f.right, Box)
            and f.right.body == Imp(f.left.left.body, f.left.right.body)):
        return None
    return "not of the form (dia phi -> box psi) -> box(phi -> psi)"


def _fs2(f, logic):
    if (isinstance(f, Imp) and isinstance(f.left, Dia) and isinstance(f.left.body, Imp)
            and f.right == Imp(Box(f.left.body.left), Dia(f.left.body.right))):
        return None
    return "not of the form dia(phi -> psi) -> (box phi -> dia psi)"


def _quant_instance(q, inst, what):
    if free_vars(q.body) != {q.var}:
        return f"{what}: the quantified formula must be one-place in {q.var}"
    cs = align_instance(q.body, q.var, inst)
    if cs is None or len(cs) != 1:
        return f"{what}: the instance is not phi(c) for a single constant c"
    return None


def _univ(f, logic):
    if isinstance(f, Imp) and isinstance(f.left, Forall):
        return _quant_instance(f.left, f.right, "UNIV")
    return "not of the form forall x. phi(x) -> phi(c)"


def _exist(f, logic):
    if isinstance(f, Imp) and isinstance(f.right, Exists):
        return _quant_instance(f.right, f.left, "EXIST")
    return "not of the form phi(c) -> exists x. phi(x)"


def _forall_ant(f, logic):
    if (isinstance(f, Imp) and isinstance(f.left, Forall) and isinstance(f.left.body, Imp)
            and isinstance(f.right, Imp) and isinstance(f.right.left, Exists)):
        x = f.left.var
        phi, psi = f.left.body.left, f.left.body.right
        ex = f.right.left
        if ex.var == x and ex.body == phi and f.right.right == psi:
            if free_vars(phi) != {x}:
                return "FORALL-ANT: phi must be one-place"
            if free_vars(psi):
                return "FORALL-ANT: psi must be a sentence"
            return None
    return "not of the form forall x.(phi(x) -> psi) -> (exists x. phi(x) -> psi)"


def _forall_con(f, logic):
    if (isinstance(f, Imp) and isinstance(f.left, Forall) and isinstance(f.left.body, Imp)
            and isinstance(f.right, Imp) and isinstance(f.right.right, Forall)):
        x = f.left.var
        phi, psi = f.left.body.left, f.left.body.right
        fa = f.right.right
        if fa.var == x and fa.body == psi and f.right.left == phi:
            if free_vars(psi) != {x}:
                return "FORALL-CON: psi must be one-place"
            if free_vars(phi):
                return "FORALL-CON: phi must be a sentence"
            return None
    return "not of the form forall x.(phi -> psi(x)) -> (phi -> forall x. psi(x))"


def _id_ref(f, logic):
    if isinstance(f, Eq) and isinstance(f.left, Const) and f.left == f.right:
        return None
    return "not of the form c = c"


def _id_sub(f, logic):
    if not (isinstance(f, Imp) and isinstance(f.left, Eq) and isinstance(f.right, Imp)):
        return "not of the form c1 = c2 -> (phi(c1) -> phi(c2))"
    c1, c2 = f.left.left.name, f.left.right.name
    a, b = f.right.left, f.right.right
    n = _idsub_positions(a, b, c1, c2)
    if c1 == c2:
        ok = a == b and c1 in constants_of(a)
    else:
        ok = bool(n)
    if not ok:
        return "ID-SUB: consequent is not phi(c1) -> phi(c2) for a one-place phi"
    if not logic.ni and not is_modal_free(a):
        return "ID-SUB: phi is not modal-free (the restriction is lifted only with NI)"
    return None


def _modal(shape, text, needs):
    def rec(f, logic):
        if needs not in logic.axioms():
            return f"{text} is not an axiom of {logic.token}"
        return None if shape(f) else f"not of the form {text}"
    return rec


def _is(f, cls):
    return isinstance(f, cls)


_RECOGNIZERS = {
    "INT": _int,
    "KB-a": _kb_a,
    "KB-b": _exact(Box(TOP), "box true"),
    "KD-a": _kd_a,
    "KD-b": _exact(neg(Dia(BOT)), "~dia false"),
    "FS1": _fs1,
    "FS2": _fs2,
    "UNIV": _univ,
    "EXIST": _exist,
    "FORALL-ANT": _forall_ant,
    "FORALL-CON": _forall_con,
    "ID-REF": _id_ref,
    "ID-SUB": _id_sub,
    "D": _modal(lambda f: _is(f, Imp) and _is(f.left, Box) and f.right == Dia(f.left.body),
                "box phi -> dia phi", "D"),
    "T-BOX": _modal(lambda f: _is(f, Imp) and _is(f.left, Box) and f.right == f.left.body,
                    "box phi -> phi", "T-BOX"),
    "T-DIA": _modal(lambda f: _is(f, Imp) and f.right == Dia(f.left),
                    "phi -> dia phi", "T-DIA"),
    "4-BOX": _modal(lambda f: _is(f, Imp) and _is(f.left, Box) and f.right == Box(f.left),
                    "box phi -> box box phi", "4-BOX"),
    "4-DIA": _modal(lambda f: _is(f, Imp) and _is(f.right, Dia)
                    and f.left == Dia(f.right), "dia dia phi -> dia phi", "4-DIA"),
    "NI": _modal(lambda f: _is(f, Imp) and _is(f.left, Eq) and f.right == Box(f.left),
                 "c1 = c2 -> box c1 = c2", "NI"),
    "ND": _modal(lambda f: _is(f, Imp) and _is(f.right, Eq) and f.left == Dia(f.right),
                 "dia c1 = c2 -> c1 = c2", "ND"),
}


def match_axiom(name: str, f: Formula, logic) -> str | None:
    rec = _RECOGNIZERS.get(name)
    if rec is None:
        return f"unknown axiom {name!r}"
    if name not in logic.axioms():
        return f"{name} is not an axiom of {logic.token}"
    return rec(f, logic)
