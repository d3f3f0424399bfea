import itertools
import random

import pytest
from hypothesis import given, strategies as st

from fofs.frameclasses import random_model
from fofs.gen import random_sentence
from fofs.logics import ALL_LOGICS, LogicId
from fofs.parsing import parse_formula as p
from fofs.proof import (
    DERIVED_NAMES, NotPropositionalError, Proof, ProofBuilder, ProofFormatError, ProofLine, Proven, Refuted,
    SideConditionError, TheoryApprox, Unknown, bounded_derive, box_projection, check_proof, derive_schema,
    diamond_complement, dump_proof, ipc_decide, load_proof, make_axiom, pair_consistent_bounded,
)
from fofs.semantics import Evaluator
from fofs.syntax import BOT, TOP, constants_of, And, Box, Const, Dia, Imp, Or, Pred, Signature, Var

from instances import SIG, derived_instance

Pc, Qc = p("P(c)"), p("Q(c)")


def one_line(formula, rule, logic=LogicId(), **b):
    return Proof(logic, (), (ProofLine(0, formula, rule, (), b),), formula)


# ---------------------------------------------------------------- checker

def test_kbb_accepted():
    assert check_proof(one_line(Box(TOP), "KB-b"))


def test_idsub_modal_rejected_in_fs_accepted_with_ni():
    phi = Dia(Pred("P", (Var("x"),)))
    f = make_axiom("ID-SUB", phi=phi, c1="c", c2="d")
    v = check_proof(one_line(f, "ID-SUB", phi=phi, c1="c", c2="d"))
    assert not v and "modal-free" in v.reason
    assert check_proof(one_line(f, "ID-SUB", LogicId.parse("fs+ni"), phi=phi, c1="c", c2="d"))


def test_ni_axiom_and_extension_axioms_need_their_logic():
    ni = make_axiom("NI", c1="c", c2="d")
    assert not check_proof(one_line(ni, "NI"))
    assert check_proof(one_line(ni, "NI", LogicId.parse("fs+ni")))
    t = make_axiom("T-BOX", phi=Pc)
    assert not check_proof(one_line(t, "T-BOX"))
    assert check_proof(one_line(t, "T-BOX", LogicId.parse("fs-t")))
    four = make_axiom("4-DIA", phi=Pc)
    assert check_proof(one_line(four, "4-DIA", LogicId.parse("fs-s4")))
    assert not check_proof(one_line(four, "4-DIA", LogicId.parse("fs-d")))


def test_rejects_wrong_premise_order_and_forward_reference():
    b = ProofBuilder()
    i = b.axiom("KB-b")
    pr = b.build(Box(TOP))
    bad = Proof(pr.logic, (), (ProofLine(0, Pc, "MP", (0, 1)),), Pc)
    assert not check_proof(bad)
    assert not check_proof(Proof(pr.logic, (), pr.lines, Qc))
    assert i == 0


def test_gen_side_conditions():
    b = ProofBuilder()
    i = b.ipc(Imp(Pc, Pc))
    b.gen(i, "c", "x")
    assert check_proof(b.build(p("forall x. P(x) -> P(x)")))
    f = p("forall x. P(x) -> P(x)")
    lines = (ProofLine(0, Imp(Pc, Pc), "IPC"), ProofLine(1, f, "GEN", (0,), {"constant": "c", "variable": "x"}))
    assert check_proof(Proof(LogicId(), (), lines, f))
    # constant used in the assumptions
    g = Imp(Pc, Imp(Pc, Pc))
    lines2 = (ProofLine(0, g, "IPC"),
              ProofLine(1, p("forall x. P(x) -> P(x) -> P(x)"), "GEN", (0,), {"constant": "c", "variable": "x"}))
    v = check_proof(Proof(LogicId(), (Pc,), lines2, Imp(Pc, Pc)))
    assert not v


def test_int_lines_need_ipc_theorems():
    assert check_proof(one_line(Or(Box(Pc), Imp(Box(Pc), BOT)), "IPC")) is not None
    assert not check_proof(one_line(Or(Box(Pc), Imp(Box(Pc), BOT)), "IPC"))
    assert check_proof(one_line(Imp(Box(Pc), Box(Pc)), "IPC"))


@given(st.integers(0, 10**6))
def test_never_accepts_random_non_axiom(seed):
    rng = random.Random(seed)
    f = random_sentence(SIG, rng, 3)
    for rule in ("KB-b", "FS1", "FS2", "KD-a", "UNIV"):
        v = check_proof(one_line(f, rule))
        if v:
            # a genuine instance: must hold on random models
            assert _valid_on_models(f, LogicId(), 20, seed)


def _valid_on_models(f, logic, n, seed):
    sig = Signature(sorted(set(SIG.constants) | constants_of(f)), SIG.predicates)
    for k in range(n):
        m = random_model(logic, (3, 2, 2), seed * 31 + k, sig)
        ev = Evaluator(m)
        if not all(ev.holds(w, {}, f) for w in range(m.n)):
            return False
    return True


# ---------------------------------------------------------------- ipc

ATOMS = [Pred(a, (Const("c"),)) for a in ("P", "Q", "S")]


def _posets(n):
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    for bits in range(1 << len(pairs)):
        up = [{i} for i in range(n)]
        for k, (i, j) in enumerate(pairs):
            if bits >> k & 1:
                up[i].add(j)
        if all(up[v] <= up[w] for w in range(n) for v in up[w]):
            yield up


def _kripke_models(max_worlds, atoms):
    for n in range(1, max_worlds + 1):
        for up in _posets(n):
            upsets = [frozenset(s) for r in range(n + 1) for s in itertools.combinations(range(n), r)
                      if all(up[w] <= set(s) for w in s)]
            for val in itertools.product(upsets, repeat=len(atoms)):
                yield n, up, dict(zip(atoms, val))


def _force(f, w, up, val):
    if f == BOT:
        return False
    if isinstance(f, Pred):
        return w in val[f]
    if isinstance(f, And):
        return _force(f.left, w, up, val) and _force(f.right, w, up, val)
    if isinstance(f, Or):
        return _force(f.left, w, up, val) or _force(f.right, w, up, val)
    return all(not _force(f.left, v, up, val) or _force(f.right, v, up, val) for v in up[w])


def _kripke_valid(f, models):
    return all(_force(f, w, up, val) for n, up, val in models for w in range(n))


def _formulas(atoms, depth):
    layer = list(atoms) + [BOT]
    allf = list(layer)
    for _ in range(depth):
        new = [c(a, b) for a in allf for b in allf for c in (And, Or, Imp)]
        allf = list(dict.fromkeys(allf + new))
    return allf


def test_ipc_examples():
    assert ipc_decide(Imp(Pc, Pc))
    assert not ipc_decide(Imp(Imp(Imp(Pc, BOT), BOT), Pc))
    assert not ipc_decide(Imp(Imp(Imp(Pc, Qc), Pc), Pc))
    with pytest.raises(NotPropositionalError):
        ipc_decide(Box(Pc))


def test_ipc_agrees_with_kripke_search_depth2():
    atoms = ATOMS[:2]
    models = list(_kripke_models(3, atoms))
    for f in _formulas(atoms, 2):
        assert ipc_decide(f) == _kripke_valid(f, models), f


def test_ipc_agrees_with_kripke_search_sampled_depth3():
    models = list(_kripke_models(3, ATOMS))
    rng = random.Random(3)

    def gen(d):
        if d == 0 or rng.random() < 0.25:
            return rng.choice(ATOMS + [BOT])
        return rng.choice((And, Or, Imp))(gen(d - 1), gen(d - 1))

    for _ in range(300):
        f = gen(3)
        if ipc_decide(f):
            assert _kripke_valid(f, models), f
        else:
            assert not _kripke_valid(f, models), f


# ---------------------------------------------------------------- derived lemmas

@pytest.mark.parametrize("name", DERIVED_NAMES)
def test_derived_round_trip(name):
    rng = random.Random(hash(name) % 1000)
    for _ in range(15):
        pr = derived_instance(name, rng)
        assert check_proof(pr), name
        assert check_proof(load_proof(dump_proof(pr)))


def test_lemma5_conclusion_exact():
    pr = derive_schema("Lemma26_5", p("P(x)", None, ["x"]), "c")
    assert pr.conclusion == p("dia (forall x. P(x)) -> (forall x. dia P(x))")
    assert check_proof(pr)


def test_necessitation_of_box_top():
    pr = derive_schema("Necessitation", one_line(Box(TOP), "KB-b"))
    assert pr.conclusion == Box(Box(TOP)) and check_proof(pr)


def test_rubox_example():
    gamma = [Box(Pc), Box(Qc)]
    a = bounded_derive(gamma, Box(Pc)).proof
    b = bounded_derive(gamma, Box(Qc)).proof
    c = bounded_derive([], Imp(And(Pc, Qc), Pc)).proof
    pr = derive_schema("RuBox", a, b, c)
    assert pr.conclusion == Box(Pc) and check_proof(pr)


def test_side_conditions():
    with pytest.raises(SideConditionError):
        derive_schema("Lemma26_5", p("P(x) & Q(c)", None, ["x"]), "c")
    with pytest.raises(SideConditionError):
        derive_schema("Necessitation", bounded_derive([Pc], Pc).proof)
    with pytest.raises(SideConditionError):
        derive_schema("GenGen", bounded_derive([Pc], Pc).proof, "c", "x")
    with pytest.raises(SideConditionError):
        derive_schema("NoSuchLemma")


def test_accepted_proofs_valid_on_models():
    rng = random.Random(5)
    for name in DERIVED_NAMES:
        pr = derived_instance(name, rng)
        if pr.assumptions:
            continue
        assert _valid_on_models(pr.conclusion, pr.logic, 25, 9), name


# ---------------------------------------------------------------- bounded search

def test_bounded_derive_examples():
    r = bounded_derive([Pc], Or(Pc, Qc), 50)
    assert isinstance(r, Proven) and check_proof(r.proof)
    assert isinstance(bounded_derive([], BOT, 3000), Unknown)
    r = bounded_derive([Box(Pc)], Box(Or(Pc, Qc)), 100)
    assert isinstance(r, Proven) and check_proof(r.proof)
    assert any(ln.rule == "REG-BOX" for ln in r.proof.lines)


def test_bounded_derive_k_distribution():
    r = bounded_derive([p("box (Q(c) -> P(c))")], p("box Q(c) -> box P(c)"))
    assert isinstance(r, Proven) and check_proof(r.proof)


@given(st.integers(0, 10**6), st.integers(0, 60))
def test_bounded_derive_monotone(seed, budget):
    rng = random.Random(seed)
    gamma = [random_sentence(SIG, rng, 2) for _ in range(rng.randint(0, 2))]
    goal = random_sentence(SIG, rng, 2)
    r = bounded_derive(gamma, goal, budget)
    if isinstance(r, Proven):
        assert check_proof(r.proof)
        r2 = bounded_derive(gamma, goal, budget + rng.randint(1, 100))
        assert isinstance(r2, Proven) and r2.proof.conclusion == r.proof.conclusion


def test_pair_consistency_examples():
    assert isinstance(pair_consistent_bounded(TheoryApprox(None, (Pc,), (Pc,))), Refuted)
    r = pair_consistent_bounded(TheoryApprox(None, (Imp(Pc, Qc), Pc), (Qc,)))
    assert isinstance(r, Refuted) and check_proof(r.proof)
    for b in (0, 10, 500):
        assert isinstance(pair_consistent_bounded(TheoryApprox(None, (Pc,), (Qc,)), b), Unknown)


def test_projections():
    t = TheoryApprox(None, (Box(Pc), Qc), (Dia(Qc),))
    assert box_projection(t) == (Pc,)
    assert diamond_complement(t) == (Qc,)
    r = bounded_derive([Box(Pc), Box(Qc)], Box(And(Pc, Qc)))
    assert isinstance(r, Proven) and any(ln.rule == "KB-a" for ln in r.proof.lines)


def test_proof_file_errors():
    with pytest.raises(ProofFormatError):
        load_proof("{")
    with pytest.raises(ProofFormatError):
        load_proof('{"logic": "fs", "lines": [{"id": 0, "formula": "P(c)", "rule": "MAGIC"}], "conclusion": "P(c)"}')


@pytest.mark.parametrize("logic", ALL_LOGICS, ids=lambda l: l.token)
def test_logic_tokens_round_trip(logic):
    assert LogicId.parse(logic.token) == logic


def test_signature_parse_with_sig():
    sig = Signature(["c"], {"P": 1})
    assert p("P(c)", sig) == Pc
