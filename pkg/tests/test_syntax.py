import random

import pytest
from hypothesis import given, strategies as st

from fofs.gen import random_formula, random_sentence
from fofs.parsing import parse_formula as p, print_formula
from fofs.syntax import (
    BOT, TOP, And, Box, CaptureError, Const, Dia, Eq, Forall, GridSignature, Imp, NotOnePlaceError, Or, Pred,
    Signature, SyntaxErrorAt, Var, abstract_constant, abstract_constants, free_vars, grid_signature,
    instantiate, is_sentence,
)

SIG = Signature(["c", "d"], {"P": 1, "Q": 1, "S": 2})
Pc, Qc = Pred("P", (Const("c"),)), Pred("Q", (Const("c"),))


def test_box_parse():
    assert p("box (P(c) -> Q(c))", SIG) == Box(Imp(Pc, Qc))


def test_unary_binds_tighter_than_or():
    assert p("dia P(c) | Q(c)", SIG) == Or(Dia(Pc), Qc)


def test_arity_mismatch_has_position():
    with pytest.raises(SyntaxErrorAt) as e:
        p("P(c, d)", SIG)
    assert e.value.position is not None


@pytest.mark.parametrize("text", ["P(c", "P(c) &", "box", "forall . P(c)", "P(c) $ Q(c)", "R(c)"])
def test_bad_input_rejected(text):
    with pytest.raises(SyntaxErrorAt):
        p(text, SIG)


def test_print_examples():
    assert print_formula(Box(Imp(Pc, Qc))) == "box (P(c) -> Q(c))"
    assert print_formula(BOT) == "false"
    assert print_formula(Forall("x", Pred("P", (Var("x"),)))) == "forall x. P(x)"


def test_sugar_expands():
    assert p("~P(c)", SIG) == Imp(Pc, BOT)
    assert p("true", SIG) == TOP == Imp(BOT, BOT)
    assert p("P(c) <-> Q(c)", SIG) == And(Imp(Pc, Qc), Imp(Qc, Pc))


def test_implication_right_assoc():
    assert p("P(c) -> Q(c) -> P(c)", SIG) == Imp(Pc, Imp(Qc, Pc))


def test_reserved_names():
    with pytest.raises(ValueError):
        Signature(["@0_0_0"])
    with pytest.raises(ValueError):
        Signature(["c"], {"c": 1})
    with pytest.raises(ValueError):
        Signature([], {"P": 0})


@given(st.integers(0, 10**6))
def test_round_trip(seed):
    rng = random.Random(seed)
    f = random_formula(SIG, rng, rng.randint(0, 5), ("x",))
    assert p(print_formula(f), SIG, ["x"]) == f


def test_round_trip_thousand():
    rng = random.Random(7)
    for _ in range(1000):
        f = random_sentence(SIG, rng, 4)
        assert p(print_formula(f), SIG) == f


def test_abstract_constant():
    assert abstract_constant(Pc, "c", "x") == Pred("P", (Var("x"),))
    assert abstract_constant(Eq(Const("c"), Const("c")), "c", "x") == Eq(Var("x"), Var("x"))
    with pytest.raises(CaptureError):
        abstract_constant(And(Forall("x", Pred("P", (Var("x"),))), Forall("x", Pred("S", (Var("x"), Const("c"))))),
                          "c", "x")


def test_abstract_capture_under_binder():
    with pytest.raises(CaptureError):
        abstract_constant(Forall("x", Pred("S", (Var("x"), Const("c")))), "c", "x")


@given(st.integers(0, 10**6))
def test_abstraction_order_independent(seed):
    rng = random.Random(seed)
    f = random_sentence(SIG, rng, 4)
    try:
        a = abstract_constants(f, ["c", "d"], ["u", "v"])
        b = abstract_constants(f, ["d", "c"], ["v", "u"])
    except CaptureError:
        return
    assert a == b


def test_instantiate():
    px, qx = Pred("P", (Var("x"),)), Pred("Q", (Var("x"),))
    assert instantiate(And(px, qx), "c") == And(Pc, Qc)
    assert instantiate(Eq(Var("x"), Var("x")), "c") == Eq(Const("c"), Const("c"))
    with pytest.raises(NotOnePlaceError):
        instantiate(And(px, Pred("Q", (Var("y"),))), "c")


def test_free_vars():
    assert free_vars(p("forall x. P(x)", SIG)) == set()
    assert free_vars(p("P(x) -> (exists x. Q(x))", SIG, ["x"])) == {"x"}
    assert free_vars(p("c = c", SIG)) == set()
    assert is_sentence(p("c = c", SIG))


def test_grid_examples():
    base = Signature(["c"], {"P": 1})
    assert grid_signature(base, 0, 0) == base
    s11 = set(grid_signature(base, 1, 1).constants)
    assert s11 > set(base.constants) and not (s11 - {"c"}) & set(base.constants)
    g = GridSignature(base, 2)
    assert set(g.constants(2, 1)) & set(g.constants(1, 2)) == set(g.constants(1, 1))


def test_grid_facts():
    g = GridSignature(Signature(["c", "d"], {"P": 1}), 3)
    for l in range(5):
        for m in range(5):
            s = lambda a, b: set(g.constants(a, b))
            assert s(l + 1, m) & s(l, m + 1) == s(l, m)
            assert s(l + 1, m + 1) - (s(l, m + 1) | s(l + 1, m))
    pools = [set(g.pool(i, j)) for i in range(4) for j in range(4)]
    assert sum(map(len, pools)) == len(set().union(*pools))
    assert g.plus(1, 2) not in set(g.constants(4, 4))


def test_grid_rejects_collision():
    with pytest.raises(ValueError):
        GridSignature(Signature(["@0_0_0"], {}, allow_generated=True))
