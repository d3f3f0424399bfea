"""Frame classes of the modal bases and identity refinements; seeded in-class models."""
from __future__ import annotations

import random
from dataclasses import dataclass

from .logics import ALL_LOGICS, LogicId
from .semantics import Frame, Model, Report, Violation, _bits
from .syntax import Signature

__all__ = ["FrameClassSpec", "ModelBounds", "check_membership", "random_model", "repair_relation",
           "default_signature", "CLASS_TOKENS", "check_frame_conditions"]

CLASS_TOKENS = tuple(l.token for l in ALL_LOGICS)


@dataclass(frozen=True)
class FrameClassSpec:
    logic: LogicId
    modal_conditions: frozenset
    equality_transfer: frozenset

    @classmethod
    def of(cls, logic: LogicId | str) -> "FrameClassSpec":
        if isinstance(logic, str):
            logic = LogicId.parse(logic)
        transfer = set()
        if logic.ni:
            transfer.add("forward")
        if logic.nd:
            transfer.add("backward")
        return cls(logic, logic.modal_conditions, frozenset(transfer))

    @classmethod
    def parse(cls, token: str) -> "FrameClassSpec":
        return cls.of(LogicId.parse(token))

    @property
    def token(self) -> str:
        return self.logic.token

    def __str__(self):
        return self.token


@dataclass(frozen=True)
class ModelBounds:
    worlds: int = 3
    domain: int = 2
    predicates: int = 1

    def __post_init__(self):
        if min(self.worlds, self.domain, self.predicates) < 1:
            raise ValueError("model bounds must all be at least 1")


def check_frame_conditions(f: Frame, conds) -> Report:
    """The modal conditions (serial, reflexive, transitive) on R alone."""
    W = f.worlds
    R = f.r_mask
    n = f.n
    out = []
    if "serial" in conds:
        for w in range(n):
            if not R[w]:
                out.append(Violation("seriality", (W[w],), f"{W[w]} has no R-successor"))
    if "reflexive" in conds:
        for w in range(n):
            if not R[w] >> w & 1:
                out.append(Violation("reflexivity-R", (W[w],), f"{W[w]} is not R-related to itself"))
    if "transitive" in conds:
        for w in range(n):
            for v in _bits(R[w]):
                for u in _bits(R[v] & ~R[w]):
                    out.append(Violation("transitivity-R", (W[w], W[v], W[u]),
                                         f"{W[w]} R {W[v]} R {W[u]} but not {W[w]} R {W[u]}"))
    return Report(out)


def check_membership(m: Model, spec: FrameClassSpec) -> Report:
    """Modal conditions of the class and the identity transfer conditions."""
    f = m.frame
    W = f.worlds
    R = f.r_mask
    n = f.n
    out = list(check_frame_conditions(f, spec.modal_conditions))
    E = m.elements
    if "forward" in spec.equality_transfer:
        for w in range(n):
            for v in _bits(R[w]):
                rw, rv = m.rep[w], m.rep[v]
                for a in sorted(m.dom[w]):
                    for b in sorted(m.dom[w]):
                        if a < b and rw[a] == rw[b] and not (a in rv and b in rv and rv[a] == rv[b]):
                            out.append(Violation("forward-transfer", (W[w], W[v], E[a], E[b]),
                                                 f"{E[a]!r} ~ {E[b]!r} at {W[w]} but not at {W[v]} (R-successor)"))
    if "backward" in spec.equality_transfer:
        for w in range(n):
            for v in _bits(R[w]):
                rw, rv = m.rep[w], m.rep[v]
                for a in sorted(m.dom[w]):
                    for b in sorted(m.dom[w]):
                        if a < b and a in rv and b in rv and rv[a] == rv[b] and rw[a] != rw[b]:
                            out.append(Violation("backward-transfer", (W[w], W[v], E[a], E[b]),
                                                 f"{E[a]!r} ~ {E[b]!r} at {W[v]} but not at its R-predecessor {W[w]}"))
    return Report(out)


def repair_relation(n: int, leq: list[int], r: list[int], conds=frozenset()) -> list[int]:
    """Smallest R' containing ``r`` closed under FC1/FC2 repair and the class conditions.

    FC1 is discharged by w R v <= v' implying w R v', FC2 by w <= w' and
    w R v implying w' R v.
    """
    r = list(r)
    while True:
        new = list(r)
        if "reflexive" in conds:
            for w in range(n):
                new[w] |= 1 << w
        if "serial" in conds:
            for w in range(n):
                if not new[w]:
                    new[w] = 1 << w
        for w in range(n):
            acc = 0
            for v in _bits(new[w]):
                acc |= leq[v]
            new[w] = acc
        up = [0] * n
        for w in range(n):
            for w2 in _bits(leq[w]):
                up[w2] |= new[w]
        new = up
        if "transitive" in conds:
            changed = True
            while changed:
                changed = False
                for w in range(n):
                    acc = new[w]
                    for v in _bits(new[w]):
                        acc |= new[v]
                    if acc != new[w]:
                        new[w] = acc
                        changed = True
        if new == r:
            return r
        r = new


def default_signature(predicates: int, constants: int = 1) -> Signature:
    names = ["P", "Q", "S", "T", "U", "V"]
    preds = {(names[k] if k < len(names) else f"P{k}"): 1 for k in range(predicates)}
    consts = [("c", "d", "e")[k] if k < 3 else f"c{k}" for k in range(constants)]
    return Signature(consts, preds)


class _UF:
    def __init__(self, items):
        self.p = {a: a for a in items}

    def find(self, a):
        while self.p[a] != a:
            self.p[a] = self.p[self.p[a]]
            a = self.p[a]
        return a

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if rb < ra:
            ra, rb = rb, ra
        self.p[rb] = ra
        return True

    def add(self, a):
        self.p.setdefault(a, a)


def random_model(spec: FrameClassSpec | LogicId | str, bounds: ModelBounds | tuple = ModelBounds(),
                 seed: int = 0, sig: Signature | None = None, density: float = 0.35) -> Model:
    """A model in the class of ``spec``; the same seed always gives the same model."""
    if not isinstance(spec, FrameClassSpec):
        spec = FrameClassSpec.of(spec)
    if not isinstance(bounds, ModelBounds):
        bounds = ModelBounds(*bounds)
    rng = random.Random(seed)
    if sig is None:
        sig = default_signature(bounds.predicates)
    n = rng.randint(1, bounds.worlds)
    E = rng.randint(1, bounds.domain)

    # intuitionistic order: random DAG on 0..n-1 then closure
    leq = [1 << w for w in range(n)]
    p_edge = rng.choice((0.2, 0.4, 0.6))
    for w in range(n):
        for v in range(w + 1, n):
            if rng.random() < p_edge:
                leq[w] |= 1 << v
    for w in reversed(range(n)):
        for v in _bits(leq[w]):
            leq[w] |= leq[v]
    r = [0] * n
    p_r = rng.choice((0.15, 0.3, 0.5))
    for w in range(n):
        for v in range(n):
            if rng.random() < p_r:
                r[w] |= 1 << v
    r = repair_relation(n, leq, r, spec.modal_conditions)

    # domains: random base sets, then unions along leq and R to a fixpoint
    const_elem = {c: rng.randrange(E) for c in sig.constants}
    fixed = set(const_elem.values())
    dom = []
    for w in range(n):
        d = {a for a in range(E) if rng.random() < 0.5} | fixed
        if not d and rng.random() < 0.7:
            d.add(rng.randrange(E))
        dom.append(d)
    succ = [leq[w] | r[w] for w in range(n)]
    changed = True
    while changed:
        changed = False
        for w in range(n):
            for v in _bits(succ[w]):
                if not dom[w] <= dom[v]:
                    dom[v] |= dom[w]
                    changed = True

    # equality: random merges, then forced merges to a fixpoint
    ufs = [_UF(sorted(dom[w])) for w in range(n)]
    for w in range(n):
        items = sorted(dom[w])
        if len(items) > 1 and rng.random() < 0.4:
            a, b = rng.sample(items, 2)
            ufs[w].union(a, b)
    forward = "forward" in spec.equality_transfer
    backward = "backward" in spec.equality_transfer
    changed = True
    while changed:
        changed = False
        for w in range(n):
            block = [(a, ufs[w].find(a)) for a in sorted(dom[w])]
            targets = [v for v in _bits(leq[w]) if v != w]
            if forward:
                targets += [v for v in _bits(r[w]) if v != w]
            for v in targets:
                for a, ra in block:
                    if ra != a and ufs[v].union(a, ra):
                        changed = True
            if backward:
                for v in _bits(r[w]):
                    for a in sorted(dom[w]):
                        for b in sorted(dom[w]):
                            if a < b and ufs[v].find(a) == ufs[v].find(b) and ufs[w].union(a, b):
                                changed = True

    # predicate extensions: random tuples, closed under congruence and monotonicity
    from itertools import product
    preds = sorted(sig.predicates.items())
    ext = [{p: set() for p, _ in preds} for _ in range(n)]
    for w in range(n):
        d = sorted(dom[w])
        for p, ar in preds:
            for t in product(d, repeat=ar):
                if rng.random() < density:
                    ext[w][p].add(t)
    changed = True
    while changed:
        changed = False
        for w in range(n):
            uf = ufs[w]
            classes = {}
            for a in dom[w]:
                classes.setdefault(uf.find(a), []).append(a)
            for p, _ in preds:
                cur = ext[w][p]
                add = set()
                for t in cur:
                    for t2 in product(*[classes[uf.find(a)] for a in t]):
                        if t2 not in cur:
                            add.add(t2)
                if add:
                    cur |= add
                    changed = True
                for v in _bits(leq[w]):
                    if v != w and not cur <= ext[v][p]:
                        ext[v][p] |= cur
                        changed = True

    names = [f"w{k}" for k in range(n)]
    frame = Frame.from_masks(names, leq, r)
    elems = [f"e{a}" for a in range(E)]
    domains = {names[w]: [elems[a] for a in sorted(dom[w])] for w in range(n)}
    equal = {}
    for w in range(n):
        groups = {}
        for a in sorted(dom[w]):
            groups.setdefault(ufs[w].find(a), []).append(elems[a])
        equal[names[w]] = [g for g in groups.values() if len(g) > 1]
    constants = {c: elems[a] for c, a in const_elem.items()}
    predicates = {names[w]: {p: [tuple(elems[a] for a in t) for t in sorted(ext[w][p])] for p, _ in preds}
                  for w in range(n)}
    return Model(frame, domains, equal, constants, predicates, sig)
