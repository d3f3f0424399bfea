"""Seeded random formulas over a signature, for fuzzing and sampling."""
from __future__ import annotations

import random

from .syntax import (
    BOT, And, Box, Const, Dia, Eq, Exists, Forall, Formula, Imp, Or, Pred, Signature, Var, free_vars,
)

__all__ = ["random_formula", "random_sentence", "random_one_place"]

_VARS = ("x", "y", "z", "u", "v")


def _term(sig: Signature, rng: random.Random, scope: list[str]):
    pool = [Var(x) for x in scope] + [Const(c) for c in sig.constants]
    if not pool:
        return None
    return rng.choice(pool)


def _atom(sig, rng, scope) -> Formula:
    preds = sorted(sig.predicates.items())
    opts = []
    if preds:
        opts.append("pred")
    if scope or sig.constants:
        opts.append("eq")
    opts.append("bot")
    kind = rng.choice(opts) if rng.random() > 0.1 else "bot"
    if kind == "pred":
        name, ar = rng.choice(preds)
        args = [_term(sig, rng, scope) for _ in range(ar)]
        if any(a is None for a in args):
            return BOT
        return Pred(name, tuple(args))
    if kind == "eq":
        return Eq(_term(sig, rng, scope), _term(sig, rng, scope))
    return BOT


def random_formula(sig: Signature, rng: random.Random, depth: int, free=()) -> Formula:
    """A formula of depth at most ``depth`` whose free variables lie in ``free``."""
    return _gen(sig, rng, depth, list(free))


def _gen(sig, rng, d, scope):
    if d <= 0 or rng.random() < 0.2:
        return _atom(sig, rng, scope)
    k = rng.randrange(8)
    if k < 3:
        cls = (And, Or, Imp)[k]
        return cls(_gen(sig, rng, d - 1, scope), _gen(sig, rng, d - 1, scope))
    if k == 3:
        return Box(_gen(sig, rng, d - 1, scope))
    if k == 4:
        return Dia(_gen(sig, rng, d - 1, scope))
    if k in (5, 6):
        x = next((v for v in _VARS if v not in scope), None)
        if x is None:
            return _atom(sig, rng, scope)
        body = _gen(sig, rng, d - 1, scope + [x])
        return (Forall if k == 5 else Exists)(x, body)
    return Imp(_gen(sig, rng, d - 1, scope), BOT)


def random_sentence(sig: Signature, rng: random.Random, depth: int) -> Formula:
    return _gen(sig, rng, depth, [])


def random_one_place(sig: Signature, rng: random.Random, depth: int, x: str = "x") -> Formula:
    """A formula whose only free variable is ``x``."""
    f = _gen(sig, rng, depth, [x])
    for _ in range(5):
        if x in free_vars(f):
            return f
        f = _gen(sig, rng, depth, [x])
    if x in free_vars(f):
        return f
    preds = sorted(sig.predicates.items())
    if preds:
        name, ar = rng.choice(preds)
        atom = Pred(name, (Var(x),) * ar)
    else:
        atom = Eq(Var(x), Var(x))
    return And(f, atom) if rng.random() < 0.5 else Or(atom, f)
