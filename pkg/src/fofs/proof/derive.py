"""Builders for the derived theorems and rules of FOFS.

Each builder returns a :class:`Proof` that :func:`check_proof` accepts and
whose conclusion is exactly the requested instance.  Proofs from
assumptions follow the convention of :mod:`fofs.proof.core`.
"""
from __future__ import annotations

from ..logics import LogicId
from ..syntax import (
    TOP, And, Box, Const, Dia, Eq, Exists, Forall, Formula, Imp, Var, abstract_constant,
    big_and, big_or, constants_of, free_vars, is_sentence, variables_of,
)
from .core import Proof, ProofBuilder, gamma_form

__all__ = ["SideConditionError", "DERIVED_NAMES", "derive_schema", "lemma_necdis",
           "lemma_dia_box_and", "lemma_fs2_reverse", "lemma_eq_euclid", "lemma_dia_forall",
           "necessitation", "rubox", "gengen", "exsuff", "lift"]


class SideConditionError(ValueError):
    pass


def _sentence(f, what="argument"):
    if not isinstance(f, Formula) or not is_sentence(f):
        raise SideConditionError(f"{what} must be a sentence")


def lift(b: ProofBuilder, proof: Proof, gamma: tuple) -> int:
    """Include ``proof`` and return a line proving its conclusion from ``gamma``.

    ``proof``'s own assumptions must be among ``gamma``.
    """
    missing = [g for g in proof.assumptions if g not in gamma]
    if missing:
        raise SideConditionError("sub-proof uses assumptions outside the combined set")
    last = b.include(proof)
    target = gamma_form(gamma, proof.conclusion)
    if b.formula(last) == target:
        return last
    return b.ipc(target, [last])


# ---------------------------------------------------------------- theorems

def lemma_necdis(phis, logic: LogicId | None = None) -> Proof:
    """(box phi_1 | ... | box phi_n) -> box (phi_1 | ... | phi_n)."""
    phis = list(phis)
    if not phis:
        raise SideConditionError("need at least one disjunct")
    for f in phis:
        _sentence(f)
    b = ProofBuilder(logic)
    disj = big_or(phis)
    regs = []
    for f in phis:
        k = b.add(Imp(f, disj), "INT")
        regs.append(b.reg_box(k))
    goal = Imp(big_or([Box(f) for f in phis]), Box(disj))
    b.ipc(goal, regs)
    return b.build(goal)


def lemma_dia_box_and(phi, psi, logic: LogicId | None = None, builder=None):
    """(dia phi & box psi) -> dia (phi & psi)."""
    _sentence(phi)
    _sentence(psi)
    b = builder or ProofBuilder(logic)
    i1 = b.add(Imp(phi, Imp(psi, And(phi, psi))), "INT")
    i2 = b.reg_dia(i1)
    i3 = b.axiom("FS2", phi=psi, psi=And(phi, psi))
    goal = Imp(And(Dia(phi), Box(psi)), Dia(And(phi, psi)))
    last = b.ipc(goal, [i2, i3])
    return last if builder else b.build(goal)


def lemma_fs2_reverse(phi, psi, logic: LogicId | None = None) -> Proof:
    """(dia phi & box (phi -> psi)) -> dia psi."""
    b = ProofBuilder(logic)
    i1 = lemma_dia_box_and(phi, Imp(phi, psi), builder=b)
    i2 = b.add(Imp(And(phi, Imp(phi, psi)), psi), "INT")
    i3 = b.reg_dia(i2)
    goal = Imp(And(Dia(phi), Box(Imp(phi, psi))), Dia(psi))
    b.ipc(goal, [i1, i3])
    return b.build(goal)


def lemma_eq_euclid(c1: str, c2: str, c3: str, logic: LogicId | None = None) -> Proof:
    """(c1 = c2 & c1 = c3) -> c2 = c3."""
    b = ProofBuilder(logic)
    x = "x"
    i1 = b.axiom("ID-SUB", phi=Eq(Var(x), Const(c3)), c1=c1, c2=c2)
    e = lambda s, t: Eq(Const(s), Const(t))
    goal = Imp(And(e(c1, c2), e(c1, c3)), e(c2, c3))
    b.ipc(goal, [i1])
    return b.build(goal)


def lemma_dia_forall(phi: Formula, c: str, logic: LogicId | None = None) -> Proof:
    """dia forall x. phi(x) -> forall x. dia phi(x), using ``c`` as the eigen-constant."""
    fv = free_vars(phi)
    if len(fv) != 1:
        raise SideConditionError("phi must be a one-place formula")
    if c in constants_of(phi):
        raise SideConditionError(f"constant {c} occurs in phi")
    x = next(iter(fv))
    b = ProofBuilder(logic)
    fa = Forall(x, phi)
    i1 = b.axiom("UNIV", phi=phi, c=c)
    i2 = b.reg_dia(i1)
    i3 = b.gen(i2, c, x)
    i4 = b.axiom("FORALL-CON", phi=Dia(fa), psi=Dia(phi))
    b.mp(i3, i4)
    return b.build(Imp(Dia(fa), Forall(x, Dia(phi))))


# ---------------------------------------------------------------- rules

def necessitation(p: Proof) -> Proof:
    """From a proof of |- phi, a proof of |- box phi."""
    if p.assumptions:
        raise SideConditionError("necessitation applies to theorems only")
    b = ProofBuilder(p.logic)
    phi = p.conclusion
    last = lift(b, p, ())
    i1 = b.ipc(Imp(TOP, phi), [last])
    i2 = b.reg_box(i1)
    i3 = b.axiom("KB-b")
    b.mp(i3, i2)
    return b.build(Box(phi))


def _unbox(p: Proof, what: str) -> Formula:
    if not isinstance(p.conclusion, Box):
        raise SideConditionError(f"{what} must conclude a boxed sentence")
    return p.conclusion.body


def rubox(p_phi: Proof, p_psi: Proof, p_chi: Proof) -> Proof:
    """From G |- box phi, G |- box psi and |- (phi & psi) -> chi, a proof of G |- box chi."""
    phi, psi = _unbox(p_phi, "first proof"), _unbox(p_psi, "second proof")
    if p_chi.assumptions:
        raise SideConditionError("third proof must be a theorem")
    imp = p_chi.conclusion
    if not (isinstance(imp, Imp) and imp.left == And(phi, psi)):
        raise SideConditionError("third proof must conclude (phi & psi) -> chi")
    chi = imp.right
    gamma = tuple(dict.fromkeys(p_phi.assumptions + p_psi.assumptions))
    b = ProofBuilder(p_phi.logic)
    pq = And(phi, psi)
    big = And(pq, imp)
    i1 = b.add(Imp(big, chi), "INT")
    i2 = b.reg_box(i1)
    i3 = b.axiom("KB-a", phi=pq, psi=imp)
    i4 = b.ipc(Imp(And(Box(pq), Box(imp)), Box(chi)), [i2, i3])
    l_phi = lift(b, p_phi, gamma)
    l_psi = lift(b, p_psi, gamma)
    i5 = b.axiom("KB-a", phi=phi, psi=psi)
    i6 = b.ipc(gamma_form(gamma, Box(pq)), [l_phi, l_psi, i5])
    i7 = b.include(necessitation(p_chi))
    b.ipc(gamma_form(gamma, Box(chi)), [i4, i6, i7])
    return b.build(Box(chi), gamma)


def gengen(p: Proof, c: str, x: str) -> Proof:
    """From G |- phi(c), with c absent from G and phi(x), a proof of G |- forall x. phi(x)."""
    gamma = p.assumptions
    for g in gamma:
        if c in constants_of(g):
            raise SideConditionError(f"constant {c} occurs in the assumptions")
    if c not in constants_of(p.conclusion):
        raise SideConditionError(f"constant {c} does not occur in the conclusion")
    if x in variables_of(p.conclusion):
        raise SideConditionError(f"variable {x} already occurs in the conclusion")
    body = abstract_constant(p.conclusion, c, x)
    b = ProofBuilder(p.logic)
    last = lift(b, p, gamma)
    if not gamma:
        b.gen(last, c, x)
        return b.build(Forall(x, body))
    a = big_and(gamma)
    i1 = b.gen(last, c, x)
    i2 = b.axiom("FORALL-CON", phi=a, psi=body)
    b.mp(i1, i2)
    return b.build(Forall(x, body), gamma)


def exsuff(p: Proof, cs, xs) -> Proof:
    """From G |- phi -> psi, a proof of G |- (exists x1 ... exists xp. phi~) -> psi.

    ``phi~`` replaces each ``cs[i]`` by ``xs[i]``; the constants must not occur
    in ``psi`` or ``G`` and the variables must not occur in ``phi``.
    """
    cs, xs = list(cs), list(xs)
    imp = p.conclusion
    if not isinstance(imp, Imp):
        raise SideConditionError("proof must conclude an implication")
    phi, psi = imp.left, imp.right
    if len(cs) != len(xs) or len(set(cs)) != len(cs) or len(set(xs)) != len(xs):
        raise SideConditionError("need equally many distinct constants and variables")
    gamma = p.assumptions
    for c in cs:
        if c not in constants_of(phi):
            raise SideConditionError(f"constant {c} does not occur in phi")
        if c in constants_of(psi) or any(c in constants_of(g) for g in gamma):
            raise SideConditionError(f"constant {c} occurs in psi or the assumptions")
    for x in xs:
        if x in variables_of(phi):
            raise SideConditionError(f"variable {x} occurs in phi")
    b = ProofBuilder(p.logic)
    cur = lift(b, p, gamma)
    ante = phi
    for c, x in reversed(list(zip(cs, xs))):
        body = abstract_constant(ante, c, x)
        # gengen on the current line, then FORALL-ANT
        line = b.formula(cur)
        g = b.gen(cur, c, x)
        if gamma:
            a = big_and(gamma)
            fc = b.axiom("FORALL-CON", phi=a, psi=abstract_constant(line.right, c, x))
            g = b.mp(g, fc)
        fa = b.axiom("FORALL-ANT", phi=body, psi=psi)
        ante = Exists(x, body)
        cur = b.ipc(gamma_form(gamma, Imp(ante, psi)), [g, fa])
    return b.build(Imp(ante, psi), gamma)


# ---------------------------------------------------------------- dispatch

DERIVED_NAMES = ("Lemma26_1", "Lemma26_2", "Lemma26_3", "Lemma26_4", "Lemma26_5",
                 "Necessitation", "RuBox", "GenGen", "ExSuff")


def derive_schema(name: str, *args, logic: LogicId | None = None) -> Proof:
    """Build the named derived proof.

    Arguments by name: ``Lemma26_1`` a list of sentences; ``Lemma26_2`` and
    ``Lemma26_3`` two sentences; ``Lemma26_4`` three constants;
    ``Lemma26_5`` a one-place formula and a fresh constant;
    ``Necessitation`` a proof; ``RuBox`` three proofs; ``GenGen`` a proof,
    a constant and a variable; ``ExSuff`` a proof, constants and variables.
    """
    key = name.lower().replace("-", "_")
    table = {n.lower(): n for n in DERIVED_NAMES}
    if key not in table:
        raise SideConditionError(f"unknown derived schema {name!r}; expected one of {', '.join(DERIVED_NAMES)}")
    n = table[key]
    if n == "Lemma26_1":
        return lemma_necdis(args[0], logic)
    if n == "Lemma26_2":
        return lemma_dia_box_and(args[0], args[1], logic)
    if n == "Lemma26_3":
        return lemma_fs2_reverse(args[0], args[1], logic)
    if n == "Lemma26_4":
        return lemma_eq_euclid(*args[:3], logic=logic)
    if n == "Lemma26_5":
        return lemma_dia_forall(args[0], args[1], logic)
    if n == "Necessitation":
        return necessitation(args[0])
    if n == "RuBox":
        return rubox(*args[:3])
    if n == "GenGen":
        return gengen(*args[:3])
    return exsuff(*args[:3])
