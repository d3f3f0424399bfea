"""Terms, formulas, signatures and substitution.

The core syntax has exactly ten formula constructors: predicate application,
equality, ``And``, ``Or``, ``Imp``, ``Box``, ``Dia``, ``Forall``, ``Exists``
and ``Bot``.  Negation, the biconditional and ``true`` are abbreviations
built by :func:`neg`, :func:`iff` and :data:`TOP`.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import reduce
from typing import Iterable, Iterator, Mapping

__all__ = [
    "Signature", "GridSignature", "Term", "Var", "Const", "Formula",
    "Pred", "Eq", "And", "Or", "Imp", "Box", "Dia", "Forall", "Exists", "Bot",
    "BOT", "TOP", "neg", "iff", "big_and", "big_or", "SyntaxErrorAt",
    "CaptureError", "NotOnePlaceError", "free_vars", "is_sentence",
    "constants_of", "predicates_of", "abstract_constant", "abstract_constants",
    "instantiate", "substitute_var", "subformulas", "is_modal_free", "depth",
    "grid_signature", "pool_name", "plus_name",
]

IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
GENERATED_RE = re.compile(r"@[A-Za-z0-9_]+\Z")
KEYWORDS = frozenset({"forall", "exists", "box", "dia", "true", "false"})


class SyntaxErrorAt(ValueError):
    """A lexical, grammatical or name-resolution error at a text position."""

    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class CaptureError(ValueError):
    pass


class NotOnePlaceError(ValueError):
    pass


# ---------------------------------------------------------------- signatures

class Signature:
    """Finite materialization of a signature: constants plus predicate arities."""

    __slots__ = ("constants", "_preds", "_hash")

    def __init__(self, constants: Iterable[str] = (), predicates: Mapping[str, int] | None = None,
                 *, allow_generated: bool = False):
        consts = tuple(dict.fromkeys(constants))
        preds = dict(predicates or {})
        for c in consts:
            if GENERATED_RE.match(c):
                if not allow_generated:
                    raise ValueError(f"constant name {c!r} uses the reserved '@' prefix")
            elif not IDENT_RE.match(c) or c in KEYWORDS:
                raise ValueError(f"bad constant name {c!r}")
        for p, n in preds.items():
            if not IDENT_RE.match(p) or p in KEYWORDS:
                raise ValueError(f"bad predicate name {p!r}")
            if not isinstance(n, int) or n < 1:
                raise ValueError(f"predicate {p} must have arity >= 1, got {n!r}")
        clash = set(consts) & set(preds)
        if clash:
            raise ValueError(f"names used both as constant and predicate: {sorted(clash)}")
        self.constants = consts
        self._preds = tuple(sorted(preds.items()))
        self._hash = hash((self.constants, self._preds))

    @property
    def predicates(self) -> dict[str, int]:
        return dict(self._preds)

    def arity(self, name: str) -> int | None:
        for p, n in self._preds:
            if p == name:
                return n
        return None

    def has_constant(self, name: str) -> bool:
        return name in self.constants

    def with_constants(self, extra: Iterable[str]) -> "Signature":
        return Signature(self.constants + tuple(extra), self.predicates, allow_generated=True)

    def constant_set(self) -> frozenset[str]:
        return frozenset(self.constants)

    def __eq__(self, other):
        return (isinstance(other, Signature) and self.constants == other.constants
                and self._preds == other._preds)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Signature(constants={list(self.constants)!r}, predicates={self.predicates!r})"

    def to_json(self) -> dict:
        return {"constants": list(self.constants), "predicates": self.predicates}

    @classmethod
    def from_json(cls, doc: Mapping) -> "Signature":
        return cls(doc.get("constants", ()), doc.get("predicates", {}))


def pool_name(i: int, j: int, k: int) -> str:
    return f"@{i}_{j}_{k}"


def plus_name(i: int, j: int) -> str:
    return f"@{i}_{j}_plus"


@dataclass(frozen=True)
class GridSignature:
    """The grid of signatures sigma_{l,m}, with pools materialized to ``depth`` names each."""

    base: Signature
    depth: int = 2

    def __post_init__(self):
        if self.depth < 1:
            raise ValueError("pool depth must be at least 1")
        for c in self.base.constants:
            if c.startswith("@"):
                raise ValueError(f"base constant {c!r} collides with generated pool names")

    def pool(self, i: int, j: int) -> tuple[str, ...]:
        return tuple(pool_name(i, j, k) for k in range(self.depth))

    def plus(self, i: int, j: int) -> str:
        return plus_name(i, j)

    def constants(self, l: int, m: int) -> tuple[str, ...]:
        if l < 0 or m < 0:
            raise ValueError("grid indices must be non-negative")
        extra = [c for i in range(l) for j in range(m) for c in self.pool(i, j)]
        return self.base.constants + tuple(extra)

    def signature(self, l: int, m: int) -> Signature:
        if l == 0 or m == 0:
            return self.base
        return Signature(self.constants(l, m), self.base.predicates, allow_generated=True)

    def plus_signature(self, l: int, m: int) -> Signature:
        return self.signature(l, m).with_constants([self.plus(l, m)])


def grid_signature(base: Signature, l: int, m: int, depth: int = 2) -> Signature:
    return GridSignature(base, depth).signature(l, m)


# ---------------------------------------------------------------- terms

@dataclass(frozen=True, slots=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True, slots=True)
class Const:
    name: str

    def __str__(self):
        return self.name


Term = Var | Const


# ---------------------------------------------------------------- formulas

class Formula:
    """Base class; subclasses are immutable and hash-consed by structure."""

    __slots__ = ()

    def __str__(self):
        from .parsing import print_formula
        return print_formula(self)


def _formula(cls):
    names: list[str] = []
    tag = cls.__name__

    def __post_init__(self):
        object.__setattr__(self, "_h", hash((tag,) + tuple(getattr(self, n) for n in names)))

    def __hash__(self):
        return self._h

    cls.__post_init__ = __post_init__
    cls = dataclass(frozen=True, eq=True)(cls)
    names.extend(n for n, f in cls.__dataclass_fields__.items() if f.compare)
    field_eq = cls.__eq__

    def __eq__(self, other):
        if self is other:
            return True
        if other.__class__ is not self.__class__ or self._h != other._h:
            return False
        return field_eq(self, other)

    cls.__eq__ = __eq__
    cls.__hash__ = __hash__
    return cls


@_formula
class Pred(Formula):
    name: str
    args: tuple
    _h: int = field(init=False, repr=False, compare=False, default=0)


@_formula
class Eq(Formula):
    left: Term
    right: Term
    _h: int = field(init=False, repr=False, compare=False, default=0)


@_formula
class And(Formula):
    left: Formula
    right: Formula
    _h: int = field(init=False, repr=False, compare=False, default=0)


@_formula
class Or(Formula):
    left: Formula
    right: Formula
    _h: int = field(init=False, repr=False, compare=False, default=0)


@_formula
class Imp(Formula):
    left: Formula
    right: Formula
    _h: int = field(init=False, repr=False, compare=False, default=0)


@_formula
class Box(Formula):
    body: Formula
    _h: int = field(init=False, repr=False, compare=False, default=0)


@_formula
class Dia(Formula):
    body: Formula
    _h: int = field(init=False, repr=False, compare=False, default=0)


@_formula
class Forall(Formula):
    var: str
    body: Formula
    _h: int = field(init=False, repr=False, compare=False, default=0)


@_formula
class Exists(Formula):
    var: str
    body: Formula
    _h: int = field(init=False, repr=False, compare=False, default=0)


@_formula
class Bot(Formula):
    _h: int = field(init=False, repr=False, compare=False, default=0)


BOT = Bot()
TOP = Imp(BOT, BOT)

BINARY = (And, Or, Imp)
MODAL = (Box, Dia)
QUANT = (Forall, Exists)


def neg(f: Formula) -> Formula:
    return Imp(f, BOT)


def iff(a: Formula, b: Formula) -> Formula:
    return And(Imp(a, b), Imp(b, a))


def big_and(fs: Iterable[Formula]) -> Formula:
    """Left-nested conjunction; the empty conjunction is ``true``."""
    fs = list(fs)
    return reduce(And, fs) if fs else TOP


def big_or(fs: Iterable[Formula]) -> Formula:
    """Left-nested disjunction; the empty disjunction is ``false``."""
    fs = list(fs)
    return reduce(Or, fs) if fs else BOT


# ---------------------------------------------------------------- traversal

def _terms(f: Formula) -> tuple:
    if isinstance(f, Pred):
        return f.args
    if isinstance(f, Eq):
        return (f.left, f.right)
    return ()


def free_vars(f: Formula) -> frozenset[str]:
    if isinstance(f, (Pred, Eq)):
        return frozenset(t.name for t in _terms(f) if isinstance(t, Var))
    if isinstance(f, BINARY):
        return free_vars(f.left) | free_vars(f.right)
    if isinstance(f, MODAL):
        return free_vars(f.body)
    if isinstance(f, QUANT):
        return free_vars(f.body) - {f.var}
    return frozenset()


def is_sentence(f: Formula) -> bool:
    return not free_vars(f)


def constants_of(f: Formula) -> frozenset[str]:
    out: set[str] = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, (Pred, Eq)):
            out.update(t.name for t in _terms(g) if isinstance(t, Const))
        elif isinstance(g, BINARY):
            stack += (g.left, g.right)
        elif isinstance(g, (Box, Dia, Forall, Exists)):
            stack.append(g.body)
    return frozenset(out)


def predicates_of(f: Formula) -> dict[str, int]:
    out: dict[str, int] = {}
    for g in subformulas(f):
        if isinstance(g, Pred):
            out[g.name] = len(g.args)
    return out


def bound_vars(f: Formula) -> frozenset[str]:
    out = set()
    for g in subformulas(f):
        if isinstance(g, QUANT):
            out.add(g.var)
    return frozenset(out)


def variables_of(f: Formula) -> frozenset[str]:
    return bound_vars(f) | frozenset(
        t.name for g in subformulas(f) for t in _terms(g) if isinstance(t, Var))


def subformulas(f: Formula) -> Iterator[Formula]:
    """Pre-order traversal, duplicates included."""
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        if isinstance(g, BINARY):
            stack += (g.right, g.left)
        elif isinstance(g, (Box, Dia, Forall, Exists)):
            stack.append(g.body)


def is_modal_free(f: Formula) -> bool:
    return not any(isinstance(g, MODAL) for g in subformulas(f))


def depth(f: Formula) -> int:
    if isinstance(f, BINARY):
        return 1 + max(depth(f.left), depth(f.right))
    if isinstance(f, (Box, Dia, Forall, Exists)):
        return 1 + depth(f.body)
    return 0


def size(f: Formula) -> int:
    return sum(1 for _ in subformulas(f))


# ---------------------------------------------------------------- substitution

def _map_terms(f: Formula, fn) -> Formula:
    """Rebuild ``f`` applying ``fn(term, bound)`` at every term position."""

    def go(g: Formula, bound: frozenset) -> Formula:
        if isinstance(g, Pred):
            return Pred(g.name, tuple(fn(t, bound) for t in g.args))
        if isinstance(g, Eq):
            return Eq(fn(g.left, bound), fn(g.right, bound))
        if isinstance(g, BINARY):
            return type(g)(go(g.left, bound), go(g.right, bound))
        if isinstance(g, MODAL):
            return type(g)(go(g.body, bound))
        if isinstance(g, QUANT):
            return type(g)(g.var, go(g.body, bound | {g.var}))
        return g

    return go(f, frozenset())


def abstract_constant(f: Formula, c: str, x: str) -> Formula:
    """Replace every occurrence of constant ``c`` by variable ``x``.

    Raises :class:`CaptureError` if an occurrence of ``c`` sits under a
    binder for ``x``.
    """

    def fn(t, bound):
        if isinstance(t, Const) and t.name == c:
            if x in bound:
                raise CaptureError(f"occurrence of {c} lies under a binder for {x}")
            return Var(x)
        return t

    return _map_terms(f, fn)


def abstract_constants(f: Formula, cs: Iterable[str], xs: Iterable[str]) -> Formula:
    cs, xs = list(cs), list(xs)
    if len(cs) != len(xs) or len(set(cs)) != len(cs) or len(set(xs)) != len(xs):
        raise ValueError("need equally many distinct constants and distinct variables")
    for c, x in zip(cs, xs):
        f = abstract_constant(f, c, x)
    return f


def substitute_var(f: Formula, x: str, t: Term) -> Formula:
    """Replace the free occurrences of ``x`` by ``t`` (capture-checked)."""

    def fn(s, bound):
        if isinstance(s, Var) and s.name == x and x not in bound:
            if isinstance(t, Var) and t.name in bound:
                raise CaptureError(f"variable {t.name} would be captured")
            return t
        return s

    return _map_terms(f, fn)


def the_free_var(f: Formula) -> str:
    fv = free_vars(f)
    if len(fv) != 1:
        raise NotOnePlaceError(f"expected exactly one free variable, found {sorted(fv)}")
    return next(iter(fv))


def instantiate(f: Formula, t: Term | str) -> Formula:
    """phi(t) for a one-place formula phi; a bare string names a constant."""
    if isinstance(t, str):
        t = Const(t)
    return substitute_var(f, the_free_var(f), t)


def rename_constants(f: Formula, mapping: Mapping[str, str]) -> Formula:
    def fn(t, bound):
        if isinstance(t, Const) and t.name in mapping:
            return Const(mapping[t.name])
        return t

    return _map_terms(f, fn)


def fresh_name(avoid: Iterable[str], stem: str = "c") -> str:
    avoid = set(avoid)
    if stem not in avoid:
        return stem
    k = 0
    while f"{stem}{k}" in avoid:
        k += 1
    return f"{stem}{k}"
