"""Text front end for formulas.

Grammar (``->`` is right associative, ``|`` and ``&`` left associative)::

    formula := 'forall' IDENT '.' formula | 'exists' IDENT '.' formula | imp
    imp     := disj ('->' imp | '<->' imp)?
    disj    := conj ('|' conj)*
    conj    := unary ('&' unary)*
    unary   := 'box' unary | 'dia' unary | '~' unary | atom
    atom    := IDENT '(' term (',' term)* ')' | term '=' term
             | 'true' | 'false' | '(' formula ')'
"""
from __future__ import annotations

import re
from typing import Iterable

from .syntax import (
    BOT, TOP, And, Bot, Box, Const, Dia, Eq, Exists, Forall, Formula, Imp,
    KEYWORDS, Or, Pred, Signature, SyntaxErrorAt, Var, iff, neg,
)

__all__ = ["parse_formula", "print_formula", "parse_term_list", "tokenize"]

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<arrow><->|->)
  | (?P<ident>@?[A-Za-z_][A-Za-z0-9_]*|@[0-9][A-Za-z0-9_]*)
  | (?P<punct>[()|&~=.,])
""", re.VERBOSE)


def tokenize(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise SyntaxErrorAt(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind != "ws":
            val = m.group(kind)
            if kind == "ident" and val in KEYWORDS:
                kind = "kw"
            out.append((kind, val, pos))
        pos = m.end()
    out.append(("eof", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str, sig: Signature | None, variables: Iterable[str],
                 arities: dict[str, int] | None):
        self.toks = tokenize(text)
        self.i = 0
        self.sig = sig
        self.free = set(variables)
        self.arities = arities if arities is not None else {}

    # token helpers
    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, val: str):
        kind, v, pos = self.take()
        if v != val or kind in ("ident", "kw", "eof"):
            raise SyntaxErrorAt(f"expected {val!r}, found {v or 'end of input'!r}", pos)

    def at(self, val: str) -> bool:
        kind, v, _ = self.peek()
        return v == val and kind not in ("ident", "eof")

    # grammar
    def formula(self, bound: tuple) -> Formula:
        kind, v, pos = self.peek()
        if kind == "kw" and v in ("forall", "exists"):
            self.take()
            k2, name, p2 = self.take()
            if k2 != "ident" or name.startswith("@"):
                raise SyntaxErrorAt("expected a variable name after quantifier", p2)
            if self.sig is not None and self.sig.has_constant(name):
                raise SyntaxErrorAt(f"bound variable {name!r} clashes with a constant", p2)
            self.expect(".")
            body = self.formula(bound + (name,))
            return (Forall if v == "forall" else Exists)(name, body)
        return self.imp(bound)

    def imp(self, bound):
        left = self.disj(bound)
        if self.at("->"):
            self.take()
            return Imp(left, self.imp(bound))
        if self.at("<->"):
            self.take()
            return iff(left, self.imp(bound))
        return left

    def disj(self, bound):
        f = self.conj(bound)
        while self.at("|"):
            self.take()
            f = Or(f, self.conj(bound))
        return f

    def conj(self, bound):
        f = self.unary(bound)
        while self.at("&"):
            self.take()
            f = And(f, self.unary(bound))
        return f

    def unary(self, bound):
        kind, v, pos = self.peek()
        if kind == "kw" and v == "box":
            self.take()
            return Box(self.unary(bound))
        if kind == "kw" and v == "dia":
            self.take()
            return Dia(self.unary(bound))
        if kind == "punct" and v == "~":
            self.take()
            return neg(self.unary(bound))
        return self.atom(bound)

    def atom(self, bound):
        kind, v, pos = self.peek()
        if kind == "kw" and v == "true":
            self.take()
            return TOP
        if kind == "kw" and v == "false":
            self.take()
            return BOT
        if kind == "punct" and v == "(":
            self.take()
            f = self.formula(bound)
            self.expect(")")
            return f
        if kind == "ident":
            nxt = self.toks[self.i + 1]
            if nxt[1] == "(" and nxt[0] == "punct":
                return self.predication(bound)
            left = self.term(bound)
            self.expect("=")
            return Eq(left, self.term(bound))
        raise SyntaxErrorAt(f"expected a formula, found {v or 'end of input'!r}", pos)

    def predication(self, bound):
        _, name, pos = self.take()
        if name.startswith("@"):
            raise SyntaxErrorAt(f"{name!r} cannot be a predicate", pos)
        self.expect("(")
        args = [self.term(bound)]
        while self.at(","):
            self.take()
            args.append(self.term(bound))
        self.expect(")")
        if self.sig is not None:
            ar = self.sig.arity(name)
            if ar is None:
                raise SyntaxErrorAt(f"unknown predicate {name!r}", pos)
        else:
            ar = self.arities.setdefault(name, len(args))
        if ar != len(args):
            raise SyntaxErrorAt(f"arity mismatch: {name} takes {ar} argument(s), got {len(args)}", pos)
        return Pred(name, tuple(args))

    def term(self, bound):
        kind, name, pos = self.take()
        if kind != "ident":
            raise SyntaxErrorAt(f"expected a term, found {name or 'end of input'!r}", pos)
        if name in bound or name in self.free:
            return Var(name)
        if self.sig is None or self.sig.has_constant(name):
            return Const(name)
        raise SyntaxErrorAt(f"unbound name {name!r}", pos)


def parse_formula(text: str, sig: Signature | None = None, variables: Iterable[str] = (),
                  arities: dict[str, int] | None = None) -> Formula:
    """Parse ``text``.

    With ``sig=None`` every unbound name is read as a constant and predicate
    arities are inferred (and recorded in ``arities`` if a dict is passed, so
    several formulas can share one inference table).  ``variables`` lists
    names allowed to occur free.
    """
    p = _Parser(text, sig, variables, arities)
    f = p.formula(())
    kind, v, pos = p.peek()
    if kind != "eof":
        raise SyntaxErrorAt(f"unexpected {v!r} after end of formula", pos)
    return f


def parse_term_list(text: str) -> list[str]:
    return [t.strip() for t in text.split(",") if t.strip()]


# ---------------------------------------------------------------- printing

_QUANT, _IMP, _DISJ, _CONJ, _UNARY = range(5)


def print_formula(f: Formula) -> str:
    return _pr(f, _QUANT)


def _pr(f: Formula, ctx: int) -> str:
    if isinstance(f, Pred):
        return f"{f.name}({', '.join(t.name for t in f.args)})"
    if isinstance(f, Eq):
        return f"{f.left.name} = {f.right.name}"
    if isinstance(f, Bot):
        return "false"
    if isinstance(f, Imp):
        if f == TOP:
            return "true"
        if isinstance(f.right, Bot):
            return "~" + _pr(f.left, _UNARY)
        s, lvl = f"{_pr(f.left, _DISJ)} -> {_pr(f.right, _IMP)}", _IMP
    elif isinstance(f, Or):
        s, lvl = f"{_pr(f.left, _DISJ)} | {_pr(f.right, _CONJ)}", _DISJ
    elif isinstance(f, And):
        s, lvl = f"{_pr(f.left, _CONJ)} & {_pr(f.right, _UNARY)}", _CONJ
    elif isinstance(f, Box):
        return "box " + _pr(f.body, _UNARY)
    elif isinstance(f, Dia):
        return "dia " + _pr(f.body, _UNARY)
    elif isinstance(f, (Forall, Exists)):
        kw = "forall" if isinstance(f, Forall) else "exists"
        s, lvl = f"{kw} {f.var}. {_pr(f.body, _QUANT)}", _QUANT
    else:
        raise TypeError(f"not a formula: {f!r}")
    return f"({s})" if ctx > lvl else s
