"""Bounded, deterministic derivability search and pair-consistency testing."""
from __future__ import annotations

from dataclasses import dataclass

from ..logics import LogicId
from ..parsing import print_formula
from ..syntax import (
    BOT, And, Box, Const, Dia, Eq, Exists, Forall, Formula, Imp, Or, Signature, abstract_constant,
    big_and, big_or, constants_of, free_vars, fresh_name, is_modal_free, is_sentence, subformulas,
    substitute_var, variables_of,
)
from .core import Proof, ProofBuilder, gamma_form
from .derive import lemma_dia_box_and
from .ipc import ipc_entails

__all__ = ["TheoryApprox", "Proven", "Unknown", "Refuted", "bounded_derive",
           "pair_consistent_bounded", "box_projection", "diamond_complement", "sort_key"]


def sort_key(f: Formula):
    s = print_formula(f)
    return (len(s), s)


@dataclass(frozen=True)
class TheoryApprox:
    """A finitely presented pair: sentences asserted and sentences denied."""

    signature: Signature | None
    asserted: tuple = ()
    denied: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "asserted", tuple(dict.fromkeys(self.asserted)))
        object.__setattr__(self, "denied", tuple(dict.fromkeys(self.denied)))
        for f in self.asserted + self.denied:
            if not is_sentence(f):
                raise ValueError(f"{print_formula(f)} is not a sentence")

    def overlap(self) -> tuple:
        return tuple(f for f in self.asserted if f in self.denied)

    def assert_(self, *fs) -> "TheoryApprox":
        return TheoryApprox(self.signature, self.asserted + fs, self.denied)

    def deny(self, *fs) -> "TheoryApprox":
        return TheoryApprox(self.signature, self.asserted, self.denied + fs)


@dataclass(frozen=True)
class Proven:
    proof: Proof
    steps: int

    def __bool__(self):
        return True


@dataclass(frozen=True)
class Unknown:
    steps: int

    def __bool__(self):
        return False


@dataclass(frozen=True)
class Refuted:
    proof: Proof
    steps: int

    def __bool__(self):
        return True


def box_projection(t: TheoryApprox) -> tuple:
    return tuple(f.body for f in t.asserted if isinstance(f, Box))


def diamond_complement(t: TheoryApprox) -> tuple:
    return tuple(f.body for f in t.denied if isinstance(f, Dia))


class _Budget(Exception):
    pass


class _Search:
    def __init__(self, gamma, goal, budget, logic):
        self.gamma = tuple(dict.fromkeys(gamma))
        self.goal = goal
        self.budget = budget
        self.steps = 0
        self.logic = logic
        self.b = ProofBuilder(logic)
        self.thms: list[int] = []      # theorem lines
        self.glines: list[int] = []    # lines of the form (and gamma) -> X
        self.a = big_and(self.gamma) if self.gamma else None
        pool = set()
        for f in self.gamma + (goal,):
            pool.update(g for g in subformulas(f) if is_sentence(g))
        self.pool = sorted(pool, key=sort_key)
        consts = set()
        for f in self.gamma + (goal,):
            consts |= constants_of(f)
        self.consts = sorted(consts)
        self.tried: set = set()

    def tick(self):
        if self.steps >= self.budget:
            raise _Budget
        self.steps += 1

    def theorems(self):
        return [self.b.formula(i) for i in self.thms]

    def add_thm(self, lid):
        if lid not in self.thms:
            self.thms.append(lid)

    def ipc_holds(self, goal, with_gamma=False) -> bool:
        self.tick()
        prem = self.theorems() + [self.b.formula(i) for i in self.glines]
        if with_gamma:
            prem += list(self.gamma)
        return ipc_entails(prem, goal)

    def close(self, goal) -> Proof:
        """Write the final IPC line with a minimal premise subset."""
        target = gamma_form(self.gamma, goal)
        prem = self.thms + self.glines
        need = list(prem)
        for q in prem:
            trial = [p for p in need if p != q]
            if ipc_entails([self.b.formula(p) for p in trial], target):
                need = trial
        last = self.b.has(target)
        if last is None:
            last = self.b.ipc(target, need)
        return self.b.build(goal, self.gamma, last=last)

    # candidate generation, in fixed order
    def axiom_candidates(self):
        ax = self.logic.axioms()
        out = [("KB-b", {}), ("KD-b", {})]
        boxes = [f for f in self.pool if isinstance(f, Box)]
        dias = [f for f in self.pool if isinstance(f, Dia)]
        for f in self.pool:
            if isinstance(f, Box):
                g = f.body
                if isinstance(g, And):
                    out.append(("KB-a", dict(phi=g.left, psi=g.right)))
                if isinstance(g, Imp):
                    out.append(("FS1", dict(phi=g.left, psi=g.right)))
                for n in ("D", "T-BOX", "4-BOX"):
                    if n in ax:
                        out.append((n, dict(phi=g)))
            elif isinstance(f, Dia):
                g = f.body
                if isinstance(g, Or):
                    out.append(("KD-a", dict(phi=g.left, psi=g.right)))
                if isinstance(g, Imp):
                    out.append(("FS2", dict(phi=g.left, psi=g.right)))
                if "T-DIA" in ax:
                    out.append(("T-DIA", dict(phi=g)))
                if "4-DIA" in ax and isinstance(g, Dia):
                    out.append(("4-DIA", dict(phi=g.body)))
            elif isinstance(f, Forall):
                for c in self.consts:
                    out.append(("UNIV", dict(phi=f.body, c=c)))
            elif isinstance(f, Exists):
                for c in self.consts:
                    out.append(("EXIST", dict(phi=f.body, c=c)))
            elif isinstance(f, Eq):
                c1, c2 = f.left.name, f.right.name
                out.append(("ID-REF", dict(c=c1)))
                out.append(("ID-REF", dict(c=c2)))
                for n in ("NI", "ND"):
                    if n in ax:
                        out.append((n, dict(c1=c1, c2=c2)))
                for g in self.pool:
                    if c1 != c2 and c1 in constants_of(g) and (self.logic.ni or is_modal_free(g)):
                        x = fresh_name(variables_of(g), "x")
                        out.append(("ID-SUB", dict(phi=abstract_constant(g, c1, x), c1=c1, c2=c2)))
        for f in boxes:
            for g in boxes:
                if f != g:
                    out.append(("KB-a", dict(phi=f.body, psi=g.body)))
        for f in dias:
            for g in boxes:
                out.append(("L2", dict(phi=f.body, psi=g.body)))
        return out

    def run(self):
        if self.ipc_holds(self.goal, with_gamma=True):
            return self.close(self.goal)
        changed = True
        while changed:
            changed = False
            for name, params in self.axiom_candidates():
                key = (name, tuple(sorted((k, v) for k, v in params.items())))
                if key in self.tried or (name != "L2" and name not in self.logic.axioms()):
                    continue
                self.tried.add(key)
                self.tick()
                try:
                    if name == "L2":
                        lid = lemma_dia_box_and(builder=self.b, **params)
                    else:
                        lid = self.b.axiom(name, **params)
                except ValueError:
                    continue
                self.add_thm(lid)
                changed = True
            if changed and self.ipc_holds(self.goal, with_gamma=True):
                return self.close(self.goal)
            # regularity on pool pairs, box then diamond
            for op in (Box, Dia):
                ops = [f for f in self.pool if isinstance(f, op)]
                srcs = list(ops)
                if op is Box:
                    # conjoined boxes, reachable through the KB-a instances above
                    srcs += [Box(And(f.body, g.body)) for f in ops for g in ops if f != g]
                for f in srcs:
                    for g in ops:
                        if f == g:
                            continue
                        key = ("REG", op.__name__, f, g)
                        if key in self.tried:
                            continue
                        imp = Imp(f.body, g.body)
                        if self.ipc_holds(imp):
                            self.tried.add(key)
                            lid = self.b.ipc(imp, self._support(imp))
                            r = self.b.reg_box(lid) if op is Box else self.b.reg_dia(lid)
                            self.add_thm(r)
                            changed = True
            if changed and self.ipc_holds(self.goal, with_gamma=True):
                return self.close(self.goal)
            # generalization on universal pool members
            for f in self.pool:
                if not isinstance(f, Forall) or f.var not in free_vars(f.body):
                    continue
                key = ("GEN", f)
                if key in self.tried:
                    continue
                used = set(self.consts)
                for h in self.theorems():
                    used |= constants_of(h)
                c = fresh_name(used, "g")
                inst = substitute_var(f.body, f.var, Const(c))
                if self.gamma:
                    target = Imp(self.a, inst)
                    if self.ipc_holds(inst, with_gamma=True):
                        self.tried.add(key)
                        lid = self.b.ipc(target, self._support(target))
                        g = self.b.gen(lid, c, f.var)
                        fc = self.b.axiom("FORALL-CON", phi=self.a, psi=f.body)
                        self.glines.append(self.b.mp(g, fc))
                        changed = True
                elif self.ipc_holds(inst):
                    self.tried.add(key)
                    lid = self.b.ipc(inst, self._support(inst))
                    self.add_thm(self.b.gen(lid, c, f.var))
                    changed = True
            if changed and self.ipc_holds(self.goal, with_gamma=True):
                return self.close(self.goal)
        return None

    def _support(self, target):
        prem = self.thms + self.glines
        need = list(prem)
        for q in prem:
            trial = [p for p in need if p != q]
            if ipc_entails([self.b.formula(p) for p in trial], target):
                need = trial
        return need


def bounded_derive(gamma, phi: Formula, budget: int = 2000, logic: LogicId | None = None):
    """Search for a proof of ``gamma |- phi`` within ``budget`` steps.

    Returns :class:`Proven` or :class:`Unknown`; ``Unknown`` says nothing
    about derivability.
    """
    if budget < 0:
        raise ValueError("budget must be non-negative")
    s = _Search(tuple(gamma), phi, budget, logic or LogicId())
    try:
        proof = s.run()
    except _Budget:
        return Unknown(s.steps)
    if proof is None:
        return Unknown(s.steps)
    return Proven(proof, s.steps)


def pair_consistent_bounded(pair: TheoryApprox, budget: int = 2000, logic: LogicId | None = None):
    """``Refuted`` with a proof of asserted |- (disjunction of denied), or ``Unknown``."""
    target = big_or(pair.denied) if pair.denied else BOT
    r = bounded_derive(pair.asserted, target, budget, logic)
    if isinstance(r, Proven):
        return Refuted(r.proof, r.steps)
    return r
