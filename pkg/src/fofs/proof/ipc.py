"""Intuitionistic propositional provability by contraction-free backward search (G4ip).

Formulas reuse the main AST.  Anything that is not ``And``/``Or``/``Imp``/
``Bot`` counts as a propositional atom, which is how the modal and
quantified skeleton of a sentence is frozen: two occurrences are the same
atom exactly when they are syntactically identical.
"""
from __future__ import annotations

from functools import lru_cache

from ..syntax import And, Bot, Box, Dia, Exists, Forall, Formula, Imp, Or, subformulas

__all__ = ["ipc_decide", "ipc_skeleton_valid", "is_propositional", "NotPropositionalError"]


class NotPropositionalError(ValueError):
    pass


def _is_conn(f) -> bool:
    return isinstance(f, (And, Or, Imp, Bot))


def is_propositional(f: Formula) -> bool:
    return not any(isinstance(g, (Box, Dia, Forall, Exists)) for g in subformulas(f))


def ipc_decide(f: Formula) -> bool:
    """True iff ``f`` (atoms, and, or, implies, false only) is an IPC theorem."""
    if not is_propositional(f):
        raise NotPropositionalError("ipc_decide expects a propositional formula")
    return _prove(frozenset(), f)


def ipc_skeleton_valid(f: Formula) -> bool:
    """True iff ``f`` is a substitution instance of an IPC theorem.

    Maximal subformulas headed by a predicate, ``=``, a modality or a
    quantifier are treated as atoms.
    """
    return _prove(frozenset(), f)


def ipc_entails(premises, goal: Formula) -> bool:
    return _prove(frozenset(premises), goal)


@lru_cache(maxsize=1 << 17)
def _prove(gamma: frozenset, goal: Formula) -> bool:
    if isinstance(goal, Bot) or not _is_conn(goal):
        if goal in gamma:
            return True
    for f in gamma:
        if isinstance(f, Bot):
            return True

    # invertible left rules
    for f in gamma:
        if isinstance(f, And):
            return _prove((gamma - {f}) | {f.left, f.right}, goal)
        if isinstance(f, Or):
            rest = gamma - {f}
            return _prove(rest | {f.left}, goal) and _prove(rest | {f.right}, goal)
        if isinstance(f, Imp):
            a, b = f.left, f.right
            if isinstance(a, Bot):
                return _prove(gamma - {f}, goal)
            if not _is_conn(a) and a in gamma:
                return _prove((gamma - {f}) | {b}, goal)
            if isinstance(a, And):
                return _prove((gamma - {f}) | {Imp(a.left, Imp(a.right, b))}, goal)
            if isinstance(a, Or):
                return _prove((gamma - {f}) | {Imp(a.left, b), Imp(a.right, b)}, goal)

    # invertible right rules
    if isinstance(goal, And):
        return _prove(gamma, goal.left) and _prove(gamma, goal.right)
    if isinstance(goal, Imp):
        return _prove(gamma | {goal.left}, goal.right)

    # non-invertible choices
    if isinstance(goal, Or):
        if _prove(gamma, goal.left) or _prove(gamma, goal.right):
            return True
    for f in gamma:
        if isinstance(f, Imp) and isinstance(f.left, Imp):
            d, b = f.left.right, f.right
            rest = gamma - {f}
            if _prove(rest | {Imp(d, b)}, f.left) and _prove(rest | {b}, goal):
                return True
    return False
