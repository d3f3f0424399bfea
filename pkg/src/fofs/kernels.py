"""Kernel selection and formula compilation.

The compiled extension ``fofs._kernels`` is used when it was built and the
environment variable ``FOFS_PURE_PYTHON`` is unset; otherwise the
pure-Python twin ``fofs._pykernels`` is used.  Both expose ``Program``,
``KModel`` and ``frame_flags`` with identical behaviour.
"""
from __future__ import annotations

import os

from . import _pykernels
from ._pykernels import (
    OP_ALL, OP_AND, OP_BOT, OP_BOX, OP_DIA, OP_EQ, OP_EX, OP_IMP, OP_OR, OP_PRED,
)
from .syntax import And, Bot, Box, Dia, Eq, Exists, Forall, Imp, Or, Pred, Var

__all__ = ["BACKEND", "backend", "compile_formula", "impl_for", "frame_flags", "fc_relations",
           "python_backend", "compiled_backend"]

python_backend = _pykernels
compiled_backend = None
if not os.environ.get("FOFS_PURE_PYTHON"):
    try:
        from . import _kernels as compiled_backend  # type: ignore[no-redef]
    except ImportError:
        compiled_backend = None

backend = compiled_backend or _pykernels
BACKEND = "compiled" if compiled_backend is not None else "python"

_TAGS = {And: OP_AND, Or: OP_OR, Imp: OP_IMP}


def compile_formula(f, pred_ids, const_slots, free_vars=(), impl=None):
    """Flatten ``f`` into a kernel program.

    ``pred_ids`` numbers the predicates; ``const_slots`` maps each constant
    to the environment slot holding its element.  Free variables listed in
    ``free_vars`` take the slots after the constants, in order.
    """
    impl = impl or backend
    ops, xa, xb, xc, args = [], [], [], [], []
    base = len(const_slots)
    nslots = base + len(free_vars)
    bound_from = nslots
    # per node: quantifier slots read below it but bound above it
    open_slots = []

    def term(t, scope):
        if isinstance(t, Var):
            if t.name not in scope:
                raise ValueError(f"unbound variable {t.name}")
            return scope[t.name]
        return const_slots[t.name]

    def node(op, a=0, b=0, c=0, reads=frozenset()):
        ops.append(op)
        xa.append(a)
        xb.append(b)
        xc.append(c)
        open_slots.append(reads)
        return len(ops) - 1

    def bound(*ts):
        return frozenset(t for t in ts if t >= bound_from)

    def go(g, scope, depth):
        nonlocal nslots
        if isinstance(g, Pred):
            ts = [term(t, scope) for t in g.args]
            start = len(args)
            args.extend(ts)
            return node(OP_PRED, pred_ids[g.name], start, len(ts), bound(*ts))
        if isinstance(g, Eq):
            a, b = term(g.left, scope), term(g.right, scope)
            return node(OP_EQ, a, b, 0, bound(a, b))
        if isinstance(g, (And, Or, Imp)):
            a = go(g.left, scope, depth)
            b = go(g.right, scope, depth)
            return node(_TAGS[type(g)], a, b, 0, open_slots[a] | open_slots[b])
        if isinstance(g, (Box, Dia)):
            a = go(g.body, scope, depth)
            return node(OP_BOX if isinstance(g, Box) else OP_DIA, a, 0, 0, open_slots[a])
        if isinstance(g, (Forall, Exists)):
            slot = depth
            nslots = max(nslots, slot + 1)
            inner = dict(scope)
            inner[g.var] = slot
            child = go(g.body, inner, depth + 1)
            return node(OP_ALL if isinstance(g, Forall) else OP_EX, child, slot, 0,
                        open_slots[child] - {slot})
        if isinstance(g, Bot):
            return node(OP_BOT)
        raise TypeError(f"not a formula: {g!r}")

    scope = {x: base + i for i, x in enumerate(free_vars)}
    root = go(f, scope, nslots)
    # nodes independent of quantified variables; leaves are cheaper to read than to cache
    inv = [int(not o and op not in (OP_PRED, OP_EQ, OP_BOT)) for o, op in zip(open_slots, ops)]
    return impl.Program(ops, xa, xb, xc, args, root, max(nslots, 1), inv)


def impl_for(n_worlds, impl=None):
    """The backend able to handle ``n_worlds`` (compiled kernels stop at 64)."""
    impl = impl or backend
    if impl is not _pykernels and n_worlds > 64:
        return _pykernels
    return impl


def frame_flags(n, leq, rs):
    if compiled_backend is not None and backend is compiled_backend and n <= 64:
        return compiled_backend.frame_flags(n, leq, rs)
    return _pykernels.frame_flags(n, leq, rs)


def fc_relations(n, leq, conds=0):
    if compiled_backend is not None and backend is compiled_backend and n <= 5:
        return compiled_backend.fc_relations(n, leq, conds)
    return _pykernels.fc_relations(n, leq, conds)
