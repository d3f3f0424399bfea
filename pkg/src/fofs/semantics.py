"""Finite birelational models with domain systems, their validators and truth.

A model is built from plain labels (worlds, elements) and interned to small
integers.  Two evaluators are provided: :func:`eval`, which follows the truth
clauses literally, and :meth:`Model.truth_mask`, which evaluates at all
worlds at once through the bitset kernels.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass
from typing import Iterable, Mapping

from . import kernels
from .parsing import print_formula
from .syntax import (
    And, Bot, Box, Dia, Eq, Exists, Forall, Formula, Imp, Or, Pred, Signature, Var,
    constants_of, free_vars,
)

__all__ = ["Frame", "Model", "Violation", "Report", "validate_frame", "validate_model", "eval",
           "check_persistence", "restrict_generated", "load_model", "dump_model",
           "model_from_json", "model_to_json", "ModelFormatError", "UnboundVariableError",
           "Evaluator"]


class ModelFormatError(ValueError):
    pass


class UnboundVariableError(ValueError):
    pass


@dataclass(frozen=True)
class Violation:
    kind: str
    where: tuple
    message: str

    def __str__(self):
        return f"{self.kind}: {self.message}"

    def to_json(self):
        return {"kind": self.kind, "where": [_jsonable(x) for x in self.where],
                "message": self.message}


def _jsonable(x):
    if isinstance(x, (str, int, float, bool)) or x is None:
        return x
    if isinstance(x, (tuple, list)):
        return [_jsonable(y) for y in x]
    return str(x)


class Report:
    """A list of violations; empty means valid."""

    def __init__(self, violations: Iterable[Violation] = ()):
        self.violations = list(violations)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __len__(self):
        return len(self.violations)

    def __iter__(self):
        return iter(self.violations)

    def __add__(self, other: "Report") -> "Report":
        return Report(self.violations + list(other))

    def kinds(self) -> set:
        return {v.kind for v in self.violations}

    def to_json(self):
        return {"ok": self.ok, "violations": [v.to_json() for v in self.violations]}

    def __repr__(self):
        return f"Report({self.violations!r})"


def _bits(mask: int):
    w = 0
    while mask:
        if mask & 1:
            yield w
        mask >>= 1
        w += 1


# ---------------------------------------------------------------- frames

class Frame:
    """Worlds with the relations taken literally as given."""

    def __init__(self, worlds: Iterable, leq: Iterable, modal: Iterable):
        self.worlds = tuple(worlds)
        if len(set(self.worlds)) != len(self.worlds):
            raise ValueError("duplicate world names")
        self.index = {w: i for i, w in enumerate(self.worlds)}
        n = len(self.worlds)
        self.leq_mask = [0] * n
        self.r_mask = [0] * n
        for rel, masks in ((leq, self.leq_mask), (modal, self.r_mask)):
            for a, b in rel:
                if a not in self.index or b not in self.index:
                    raise ValueError(f"relation mentions unknown world in ({a!r}, {b!r})")
                masks[self.index[a]] |= 1 << self.index[b]

    @classmethod
    def from_masks(cls, worlds, leq_mask, r_mask) -> "Frame":
        f = cls.__new__(cls)
        f.worlds = tuple(worlds)
        f.index = {w: i for i, w in enumerate(f.worlds)}
        f.leq_mask = list(leq_mask)
        f.r_mask = list(r_mask)
        return f

    @classmethod
    def closed(cls, worlds, leq_generators, modal) -> "Frame":
        """Reflexive-transitive closure of the ``leq`` generators; R literal."""
        f = cls(worlds, leq_generators, modal)
        n = len(f.worlds)
        m = [f.leq_mask[i] | (1 << i) for i in range(n)]
        changed = True
        while changed:
            changed = False
            for i in range(n):
                acc = m[i]
                for j in _bits(m[i]):
                    acc |= m[j]
                if acc != m[i]:
                    m[i] = acc
                    changed = True
        f.leq_mask = m
        return f

    @property
    def n(self) -> int:
        return len(self.worlds)

    def leq_pairs(self):
        return [(self.worlds[i], self.worlds[j]) for i in range(self.n) for j in _bits(self.leq_mask[i])]

    def modal_pairs(self):
        return [(self.worlds[i], self.worlds[j]) for i in range(self.n) for j in _bits(self.r_mask[i])]

    def leq(self, a, b) -> bool:
        return bool(self.leq_mask[self.index[a]] >> self.index[b] & 1)

    def r(self, a, b) -> bool:
        return bool(self.r_mask[self.index[a]] >> self.index[b] & 1)

    def box_mask(self) -> list[int]:
        """For each world, the worlds reached by a leq-step then an R-step."""
        out = []
        for i in range(self.n):
            acc = 0
            for j in _bits(self.leq_mask[i]):
                acc |= self.r_mask[j]
            out.append(acc)
        return out

    def __eq__(self, other):
        return (isinstance(other, Frame) and self.worlds == other.worlds
                and self.leq_mask == other.leq_mask and self.r_mask == other.r_mask)

    def __repr__(self):
        return f"Frame(worlds={list(self.worlds)!r}, leq={self.leq_pairs()!r}, modal={self.modal_pairs()!r})"


def validate_frame(f: Frame, exhaustive: bool = True) -> Report:
    """Reflexivity, transitivity, antisymmetry of leq, then FC1 and FC2.

    The kernel flags decide validity; witnesses are collected only for the
    conditions that fail (all of them when ``exhaustive``, else the first found).
    """
    n = f.n
    L, M = f.leq_mask, f.r_mask
    flags = kernels.frame_flags(n, L, M)
    out = []
    if not flags:
        return Report()
    W = f.worlds

    def add(kind, where, msg):
        out.append(Violation(kind, tuple(W[i] for i in where), msg))
        return not exhaustive

    if flags & 1:
        for w in range(n):
            if not L[w] >> w & 1 and add("reflexivity", (w,), f"{W[w]} is not leq-related to itself"):
                break
    if flags & 2:
        done = False
        for w in range(n):
            for v in _bits(L[w]):
                for u in _bits(L[v] & ~L[w]):
                    if add("transitivity", (w, v, u), f"{W[w]} <= {W[v]} <= {W[u]} but not {W[w]} <= {W[u]}"):
                        done = True
                        break
                if done:
                    break
            if done:
                break
    if flags & 4:
        for w in range(n):
            for v in _bits(L[w]):
                if v > w and L[v] >> w & 1:
                    add("antisymmetry", (w, v), f"{W[w]} <= {W[v]} and {W[v]} <= {W[w]}")
    if flags & 8:
        box = f.box_mask()
        for w in range(n):
            for v in _bits(M[w]):
                for v2 in _bits(L[v] & ~box[w]):
                    add("FC1", (w, v, v2),
                        f"{W[w]} R {W[v]} <= {W[v2]} but no w' with {W[w]} <= w' R {W[v2]}")
    if flags & 16:
        for w in range(n):
            for w2 in _bits(L[w]):
                for v in _bits(M[w]):
                    if not L[v] & M[w2]:
                        add("FC2", (w, w2, v),
                            f"{W[w]} <= {W[w2]} and {W[w]} R {W[v]} but no v' with {W[v]} <= v' and {W[w2]} R v'")
    if not out:  # flags from the kernel must always come with witnesses
        raise AssertionError("kernel reported a violation the witness scan could not find")
    return Report(out if exhaustive else out[:1])


# ---------------------------------------------------------------- models

class Model:
    """(W, leq, R, D, I) over a signature; relations are taken as given."""

    def __init__(self, frame: Frame, domains: Mapping, equal: Mapping | None = None,
                 constants: Mapping | None = None, predicates: Mapping | None = None,
                 signature: Signature | None = None):
        self.frame = frame
        W = frame.worlds
        constants = dict(constants or {})
        predicates = dict(predicates or {})
        equal = dict(equal or {})
        elems: dict = {}
        for w in W:
            for a in domains.get(w, ()):
                elems.setdefault(a, len(elems))
        for a in constants.values():
            elems.setdefault(a, len(elems))
        self.elements = tuple(elems)
        self.eidx = elems
        self.dom = [frozenset(elems[a] for a in domains.get(w, ())) for w in W]
        self.problems: list[Violation] = []

        # equality: representative per element of each world's domain
        self.rep = []
        for i, w in enumerate(W):
            rep = {a: a for a in self.dom[i]}
            seen = set()
            for block in equal.get(w, ()):
                ids = []
                for a in block:
                    if a not in elems or elems[a] not in self.dom[i]:
                        self.problems.append(Violation(
                            "equality-partition", (w, a), f"block member {a!r} is not in the domain of {w}"))
                        continue
                    ids.append(elems[a])
                for a in ids:
                    if a in seen:
                        self.problems.append(Violation(
                            "equality-partition", (w, self.elements[a]),
                            f"{self.elements[a]!r} is in two equality blocks at {w}"))
                    seen.add(a)
                if ids:
                    r = min(ids)
                    for a in ids:
                        rep[a] = r
            self.rep.append(rep)

        self.const = {c: elems[a] for c, a in constants.items()}

        arities: dict[str, int] = {}
        self.ext = []
        for w in W:
            table = {}
            for p, tuples in dict(predicates.get(w, {})).items():
                ts = set()
                for t in tuples:
                    t = tuple(t)
                    arities.setdefault(p, len(t))
                    if any(a not in elems for a in t):
                        self.problems.append(Violation(
                            "predicate-domain", (w, p, t), f"{p}{t!r} at {w} uses unknown elements"))
                        continue
                    ts.add(tuple(elems[a] for a in t))
                table[p] = frozenset(ts)
            self.ext.append(table)
        if signature is None:
            signature = Signature(sorted(constants), arities, allow_generated=True)
        self.signature = signature
        self._kcache = None
        self._names_cache = None

    # convenience
    @property
    def worlds(self):
        return self.frame.worlds

    @property
    def n(self):
        return self.frame.n

    def world_index(self, w) -> int:
        if w in self.frame.index:
            return self.frame.index[w]
        raise KeyError(f"unknown world {w!r}")

    def domain(self, w) -> frozenset:
        i = self.world_index(w)
        return frozenset(self.elements[a] for a in self.dom[i])

    def equal(self, w, a, b) -> bool:
        i = self.world_index(w)
        ea, eb = self.eidx[a], self.eidx[b]
        rep = self.rep[i]
        return ea in rep and eb in rep and rep[ea] == rep[eb]

    def blocks(self, i: int) -> list[list[int]]:
        groups: dict[int, list[int]] = {}
        for a in sorted(self.dom[i]):
            groups.setdefault(self.rep[i][a], []).append(a)
        return list(groups.values())

    def extension(self, w, p) -> frozenset:
        i = self.world_index(w)
        return frozenset(tuple(self.elements[a] for a in t) for t in self.ext[i].get(p, ()))

    # ---------------------------------------------------------- kernel view
    def _kernel_data(self):
        if self._kcache is None:
            n, E = self.n, len(self.elements)
            f = self.frame
            domw = [0] * E
            for i in range(n):
                for a in self.dom[i]:
                    domw[a] |= 1 << i
            eqm = [0] * (E * E)
            for i in range(n):
                rep = self.rep[i]
                for a in self.dom[i]:
                    for b in self.dom[i]:
                        if rep[a] == rep[b]:
                            eqm[a * E + b] |= 1 << i
            preds = sorted(self.signature.predicates.items())
            pid = {p: k for k, (p, _) in enumerate(preds)}
            poff, total = [], 0
            for p, ar in preds:
                poff.append(total)
                total += E ** ar
            pm = [0] * total
            for i in range(n):
                for p, ts in self.ext[i].items():
                    if p not in pid:
                        continue
                    k = pid[p]
                    for t in ts:
                        if len(t) != preds[k][1]:
                            continue
                        idx = poff[k]
                        mult = 1
                        for a in t:
                            idx += a * mult
                            mult *= E
                        pm[idx] |= 1 << i
            impl = kernels.impl_for(n)
            km = impl.KModel(n, f.leq_mask, f.box_mask(), f.r_mask, domw, eqm, E, poff, pm)
            self._kcache = (impl, km, pid)
        return self._kcache

    def compile(self, f: Formula, free=()):
        impl, _, pid = self._kernel_data()
        consts = sorted(constants_of(f))
        prog = kernels.compile_formula(f, pid, {c: k for k, c in enumerate(consts)}, free, impl)
        return prog, tuple(consts)

    def truth_mask(self, f: Formula, g: Mapping | None = None) -> int:
        """Bit i set iff ``f`` holds at world i under ``g``."""
        free = sorted(free_vars(f))
        g = g or {}
        for x in free:
            if x not in g:
                raise UnboundVariableError(f"free variable {x} has no value")
        prog, consts = self.compile(f, free)
        _, km, _ = self._kernel_data()
        env = [self.const[c] for c in consts] + [self.eidx[g[x]] for x in free]
        valid = km.full
        for x in free:
            a = self.eidx[g[x]]
            valid &= sum(1 << i for i in range(self.n) if a in self.dom[i])
        return km.eval(prog, env, valid)

    def true_at(self, f: Formula, w, g=None) -> bool:
        return bool(self.truth_mask(f, g) >> self.world_index(w) & 1)

    def __repr__(self):
        return f"Model({self.n} worlds, {len(self.elements)} elements)"


def validate_model(m: Model) -> Report:
    out = list(validate_frame(m.frame).violations)
    out += m.problems
    f = m.frame
    W = f.worlds
    E = m.elements
    n = f.n
    for i in range(n):
        for rel, name in ((f.leq_mask, "domain-leq"), (f.r_mask, "domain-R")):
            for j in _bits(rel[i]):
                for a in sorted(m.dom[i] - m.dom[j]):
                    out.append(Violation(name, (W[i], W[j], E[a]),
                                         f"{E[a]!r} is in D({W[i]}) but not in D({W[j]})"))
    for i in range(n):
        for j in _bits(f.leq_mask[i]):
            if i == j:
                continue
            ri, rj = m.rep[i], m.rep[j]
            for a in sorted(m.dom[i]):
                for b in sorted(m.dom[i]):
                    if a < b and ri[a] == ri[b] and a in rj and b in rj and rj[a] != rj[b]:
                        out.append(Violation("equality-coarsening", (W[i], W[j], E[a], E[b]),
                                             f"{E[a]!r} ~ {E[b]!r} at {W[i]} but not at {W[j]}"))
    sig = m.signature
    for c in sig.constants:
        if c not in m.const:
            out.append(Violation("constant-missing", (c,), f"constant {c} has no denotation"))
            continue
        a = m.const[c]
        for i in range(n):
            if a not in m.dom[i]:
                out.append(Violation("constant-domain", (c, W[i], E[a]),
                                     f"constant {c} denotes {E[a]!r}, absent from D({W[i]})"))
    arity = sig.predicates
    for i in range(n):
        for p, ts in m.ext[i].items():
            if p not in arity:
                out.append(Violation("predicate-unknown", (W[i], p), f"{p} is not in the signature"))
                continue
            for t in sorted(ts):
                if len(t) != arity[p]:
                    out.append(Violation("arity", (W[i], p, tuple(E[a] for a in t)),
                                         f"{p} has arity {arity[p]} but a tuple of length {len(t)} at {W[i]}"))
                elif any(a not in m.dom[i] for a in t):
                    out.append(Violation("predicate-domain", (W[i], p, tuple(E[a] for a in t)),
                                         f"{p}{tuple(E[a] for a in t)!r} at {W[i]} leaves D({W[i]})"))
    for i in range(n):
        for j in _bits(f.leq_mask[i]):
            if i == j:
                continue
            for p, ts in m.ext[i].items():
                for t in sorted(ts - m.ext[j].get(p, frozenset())):
                    out.append(Violation("monotonicity", (W[i], W[j], p, tuple(E[a] for a in t)),
                                         f"{p}{tuple(E[a] for a in t)!r} holds at {W[i]} but not at {W[j]}"))
    for i in range(n):
        rep = m.rep[i]
        for p, ts in m.ext[i].items():
            canon = {}
            for t in ts:
                if all(a in rep for a in t):
                    canon.setdefault(tuple(rep[a] for a in t), set()).add(t)
            for key, members in canon.items():
                # every tuple congruent to a member must be present
                choices = [[b for b in m.dom[i] if rep[b] == r] for r in key]
                total = 1
                for ch in choices:
                    total *= len(ch)
                if total != len(members):
                    missing = _first_missing(choices, members)
                    out.append(Violation("congruence", (W[i], p, tuple(E[a] for a in missing)),
                                         f"{p}{tuple(E[a] for a in missing)!r} is congruent to a tuple in the "
                                         f"extension at {W[i]} but missing"))
    return Report(out)


def _first_missing(choices, members):
    from itertools import product
    for t in product(*[sorted(c) for c in choices]):
        if t not in members:
            return t
    raise AssertionError("no missing tuple")


# ---------------------------------------------------------------- literal evaluation

class Evaluator:
    """Clause-by-clause truth, memoized per (formula, world, relevant assignment)."""

    def __init__(self, m: Model):
        self.m = m
        self.f = m.frame
        self.box = m.frame.box_mask()
        self.memo: dict = {}
        self.fv: dict = {}

    def _free(self, f):
        r = self.fv.get(f)
        if r is None:
            r = self.fv[f] = tuple(sorted(free_vars(f)))
        return r

    def _den(self, t, g):
        if isinstance(t, Var):
            return g[t.name]
        return self.m.const[t.name]

    def holds(self, w: int, g: dict, f: Formula) -> bool:
        key = (f, w, tuple(g[x] for x in self._free(f)))
        r = self.memo.get(key)
        if r is None:
            r = self.memo[key] = self._holds(w, g, f)
        return r

    def _holds(self, w, g, f) -> bool:
        m = self.m
        if isinstance(f, Pred):
            return tuple(self._den(t, g) for t in f.args) in m.ext[w].get(f.name, ())
        if isinstance(f, Eq):
            a, b = self._den(f.left, g), self._den(f.right, g)
            rep = m.rep[w]
            return a in rep and b in rep and rep[a] == rep[b]
        if isinstance(f, And):
            return self.holds(w, g, f.left) and self.holds(w, g, f.right)
        if isinstance(f, Or):
            return self.holds(w, g, f.left) or self.holds(w, g, f.right)
        if isinstance(f, Imp):
            return all(not self.holds(v, g, f.left) or self.holds(v, g, f.right)
                       for v in _bits(self.f.leq_mask[w]))
        if isinstance(f, Box):
            return all(self.holds(v, g, f.body) for v in _bits(self.box[w]))
        if isinstance(f, Dia):
            return any(self.holds(v, g, f.body) for v in _bits(self.f.r_mask[w]))
        if isinstance(f, Forall):
            for v in _bits(self.f.leq_mask[w]):
                for a in m.dom[v]:
                    h = dict(g)
                    h[f.var] = a
                    if not self.holds(v, h, f.body):
                        return False
            return True
        if isinstance(f, Exists):
            for a in m.dom[w]:
                h = dict(g)
                h[f.var] = a
                if self.holds(w, h, f.body):
                    return True
            return False
        if isinstance(f, Bot):
            return False
        raise TypeError(f"not a formula: {f!r}")


def eval(m: Model, w, g: Mapping | None, f: Formula, evaluator: Evaluator | None = None) -> bool:
    """Truth of ``f`` at world ``w`` under assignment ``g`` (variable -> element)."""
    g = dict(g or {})
    for x in free_vars(f):
        if x not in g:
            raise UnboundVariableError(f"free variable {x} has no value")
    wi = m.world_index(w)
    env = {}
    for x, a in g.items():
        if a not in m.eidx or m.eidx[a] not in m.dom[wi]:
            raise ValueError(f"value {a!r} of {x} is not in the domain of {w}")
        env[x] = m.eidx[a]
    ev = evaluator or Evaluator(m)
    return ev.holds(wi, env, f)


# ---------------------------------------------------------------- persistence

def check_persistence(m: Model, samples: int = 500, seed: int = 0, max_depth: int = 4) -> Report:
    """Sample (world, assignment, formula) and test truth is preserved up leq."""
    from .gen import random_formula
    rng = random.Random(seed)
    ev = Evaluator(m)
    out = []
    sig = m.signature
    W = m.worlds
    for _ in range(samples):
        wi = rng.randrange(m.n)
        dom = sorted(m.dom[wi])
        free = ("x",) if dom and rng.random() < 0.5 else ()
        f = random_formula(sig, rng, rng.randint(0, max_depth), free)
        g = {x: rng.choice(dom) for x in free}
        if not ev.holds(wi, g, f):
            continue
        for vi in _bits(m.frame.leq_mask[wi]):
            if not ev.holds(vi, g, f):
                out.append(Violation("persistence", (W[wi], W[vi], print_formula(f)),
                                     f"{print_formula(f)} holds at {W[wi]} but not at {W[vi]} "
                                     f"(assignment {dict((x, m.elements[a]) for x, a in g.items())})"))
    return Report(out)


# ---------------------------------------------------------------- restriction

def generated_worlds(m: Model, seeds) -> list[int]:
    f = m.frame
    todo = [m.world_index(w) for w in seeds]
    seen = set(todo)
    while todo:
        i = todo.pop()
        for j in _bits(f.leq_mask[i] | f.r_mask[i]):
            if j not in seen:
                seen.add(j)
                todo.append(j)
    return sorted(seen)


def restrict_generated(m: Model, seeds) -> Model:
    """The submodel on the leq/R-closure of ``seeds``."""
    seeds = list(seeds)
    if not seeds:
        raise ValueError("seed set must be nonempty")
    keep = generated_worlds(m, seeds)
    return _submodel(m, keep)


def _submodel(m: Model, keep: list[int]) -> Model:
    f = m.frame
    pos = {i: k for k, i in enumerate(keep)}
    worlds = [f.worlds[i] for i in keep]

    def remap(mask):
        out = 0
        for i in _bits(mask):
            if i in pos:
                out |= 1 << pos[i]
        return out

    frame = Frame.from_masks(worlds, [remap(f.leq_mask[i]) for i in keep],
                             [remap(f.r_mask[i]) for i in keep])
    E = m.elements
    domains = {f.worlds[i]: [E[a] for a in sorted(m.dom[i])] for i in keep}
    equal = {f.worlds[i]: [[E[a] for a in b] for b in m.blocks(i)] for i in keep}
    consts = {c: E[a] for c, a in m.const.items()}
    preds = {f.worlds[i]: {p: sorted(tuple(E[a] for a in t) for t in ts) for p, ts in m.ext[i].items()}
             for i in keep}
    return Model(frame, domains, equal, consts, preds, m.signature)


# ---------------------------------------------------------------- file format

def model_to_json(m: Model) -> dict:
    f = m.frame
    E = m.elements
    W = f.worlds
    doc = {
        "worlds": list(W),
        "int_leq": [[a, b] for a, b in f.leq_pairs()],
        "modal": [[a, b] for a, b in f.modal_pairs()],
        "domains": {str(W[i]): [E[a] for a in sorted(m.dom[i])] for i in range(f.n)},
        "equal": {str(W[i]): [[E[a] for a in b] for b in m.blocks(i) if len(b) > 1] for i in range(f.n)},
        "constants": {c: E[a] for c, a in sorted(m.const.items())},
        "predicates": {str(W[i]): {p: sorted([E[a] for a in t] for t in ts)
                                   for p, ts in sorted(m.ext[i].items()) if ts}
                       for i in range(f.n)},
        "signature": m.signature.to_json(),
    }
    return doc


def model_from_json(doc: Mapping) -> Model:
    try:
        worlds = [str(w) for w in doc["worlds"]]
        leq = [(str(a), str(b)) for a, b in doc.get("int_leq", [])]
        modal = [(str(a), str(b)) for a, b in doc.get("modal", [])]
        frame = Frame.closed(worlds, leq, modal)
    except (KeyError, TypeError, ValueError) as e:
        raise ModelFormatError(f"bad frame in model file: {e}") from None
    anti = [v for v in validate_frame(frame) if v.kind == "antisymmetry"]
    if anti:
        raise ModelFormatError(f"closing int_leq breaks antisymmetry: {anti[0].message}")

    def keyed(name):
        table = doc.get(name, {}) or {}
        if not isinstance(table, Mapping):
            raise ModelFormatError(f"{name} must be an object keyed by world")
        out = {}
        for k, v in table.items():
            if k not in frame.index:
                raise ModelFormatError(f"{name} mentions unknown world {k!r}")
            out[k] = v
        return out

    def hashable(x):
        return tuple(hashable(y) for y in x) if isinstance(x, list) else x

    domains = {k: [hashable(a) for a in v] for k, v in keyed("domains").items()}
    equal = {k: [[hashable(a) for a in b] for b in v] for k, v in keyed("equal").items()}
    preds = {k: {p: [tuple(hashable(a) for a in t) for t in ts] for p, ts in v.items()}
             for k, v in keyed("predicates").items()}
    consts = {c: hashable(a) for c, a in (doc.get("constants") or {}).items()}
    sig = None
    if "signature" in doc:
        try:
            sig = Signature(doc["signature"].get("constants", ()), doc["signature"].get("predicates", {}),
                            allow_generated=True)
        except (ValueError, AttributeError) as e:
            raise ModelFormatError(f"bad signature: {e}") from None
    else:
        arities = {}
        for table in preds.values():
            for p, ts in table.items():
                for t in ts:
                    arities.setdefault(p, len(t))
        try:
            sig = Signature(sorted(consts), arities, allow_generated=True)
        except ValueError as e:
            raise ModelFormatError(f"bad signature: {e}") from None
    return Model(frame, domains, equal, consts, preds, sig)


def dump_model(m: Model) -> str:
    return json.dumps(model_to_json(m), indent=2)


def load_model(text: str) -> Model:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ModelFormatError(f"malformed model file: {e.msg} (line {e.lineno}, column {e.colno})") from None
    if not isinstance(doc, Mapping):
        raise ModelFormatError("model file must hold an object")
    return model_from_json(doc)
