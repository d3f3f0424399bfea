import json
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fofs import kernels, _pykernels
from fofs.frameclasses import CLASS_TOKENS, random_model
from fofs.gen import random_formula, random_sentence
from fofs.parsing import parse_formula as p
from fofs.semantics import (
    Frame, Model, ModelFormatError, UnboundVariableError, check_persistence, dump_model, eval,
    load_model, model_to_json, restrict_generated, validate_frame, validate_model,
)
from fofs.syntax import Signature

import naive

SIG = Signature(["c", "d"], {"P": 1, "Q": 1, "S": 2})


def two_chain(**kw):
    """w0 <= w1, w0 R w1, w1 R w1; one element a everywhere."""
    f = Frame.closed(["w0", "w1"], [("w0", "w1")], [("w0", "w1"), ("w1", "w1")])
    args = dict(domains={"w0": ["a"], "w1": ["a"]}, constants={"c": "a"},
                predicates={"w1": {"P": [("a",)]}})
    args.update(kw)
    return Model(f, signature=Signature(["c"], {"P": 1}), **args)


# ---------------------------------------------------------------- frames

def test_frame_construction():
    f = Frame(["a", "b"], [("a", "a"), ("b", "b"), ("a", "b")], [("a", "b")])
    assert f.leq("a", "b") and not f.leq("b", "a") and f.r("a", "b")
    assert f.box_mask() == [0b10, 0]
    with pytest.raises(ValueError):
        Frame(["a", "a"], [], [])
    with pytest.raises(ValueError):
        Frame(["a"], [("a", "z")], [])
    g = Frame.closed([0, 1, 2], [(0, 1), (1, 2)], [])
    assert g.leq(0, 2) and g.leq(2, 2)


def test_validate_frame_examples():
    assert validate_frame(Frame.closed(["w"], [], [("w", "w")])).ok
    # w R v, v <= v2, but w sees nothing that reaches v2
    f = Frame.closed(["w", "v", "v2"], [("v", "v2")], [("w", "v")])
    rep = validate_frame(f)
    assert rep.kinds() == {"FC1"}
    assert rep.violations[0].where == ("w", "v", "v2")
    # w <= w2, w R v, w2 sees nothing above v
    g = Frame.closed(["w", "w2", "v"], [("w", "w2")], [("w", "v")])
    assert validate_frame(g).kinds() == {"FC2"}
    h = Frame(["a", "b"], [("a", "b"), ("b", "a")], [])
    assert validate_frame(h).kinds() == {"reflexivity", "transitivity", "antisymmetry"}
    assert len(validate_frame(h, exhaustive=False)) == 1


@pytest.mark.parametrize("n", [1, 2])
def test_validate_frame_matches_brute_force_all_relations(n):
    Rs = naive.all_relations(n)
    for L in naive.all_relations(n):
        flags = naive.frame_flags(L, Rs)
        lm = naive.to_masks(L)
        for R, fl in zip(Rs, flags):
            rep = validate_frame(Frame.from_masks(range(n), lm, naive.to_masks(R)))
            assert sum(naive.FLAG[k] for k in rep.kinds()) == fl
            leq = {(int(a), int(b)) for a, b in zip(*np.nonzero(L))}
            r = {(int(a), int(b)) for a, b in zip(*np.nonzero(R))}
            assert {(v.kind, v.where) for v in rep} == naive.frame_witnesses(n, leq, r)


def test_validate_frame_matches_brute_force_three_worlds():
    rng = np.random.default_rng(0)
    Rs = naive.all_relations(3)
    for L in naive.posets(3) + [naive.all_relations(3)[k] for k in rng.integers(0, 512, 6)]:
        flags = naive.frame_flags(L, Rs)
        lm = naive.to_masks(L)
        for k, (R, fl) in enumerate(zip(Rs, flags)):
            rep = validate_frame(Frame.from_masks(range(3), lm, naive.to_masks(R)))
            assert sum(naive.FLAG[x] for x in rep.kinds()) == fl
            if k % 17 == 0:
                leq = {(int(a), int(b)) for a, b in zip(*np.nonzero(L))}
                r = {(int(a), int(b)) for a, b in zip(*np.nonzero(R))}
                assert {(v.kind, v.where) for v in rep} == naive.frame_witnesses(3, leq, r)


# ---------------------------------------------------------------- models

def test_valid_model_and_violation_kinds():
    assert validate_model(two_chain()).ok
    m = two_chain(predicates={"w0": {"P": [("a",)]}})
    assert "monotonicity" in validate_model(m).kinds()
    m = two_chain(domains={"w0": ["a", "b"], "w1": ["a"]})
    assert "domain-leq" in validate_model(m).kinds()
    m = two_chain(domains={"w0": ["a", "b"], "w1": ["a", "b"]}, equal={"w0": [["a", "b"]]})
    assert "equality-coarsening" in validate_model(m).kinds()
    m = two_chain(domains={"w0": ["a", "b"], "w1": ["a", "b"]}, equal={"w1": [["a", "b"]]},
                  predicates={"w1": {"P": [("a",)]}})
    assert "congruence" in validate_model(m).kinds()
    m = two_chain(predicates={"w1": {"P": [("a", "a")]}})
    assert "arity" in validate_model(m).kinds()
    m = two_chain(constants={})
    assert "constant-missing" in validate_model(m).kinds()
    m = two_chain(equal={"w0": [["a"], ["a"]]})
    assert "equality-partition" in validate_model(m).kinds()
    m = two_chain(predicates={"w1": {"R": [("a",)]}})
    assert "predicate-unknown" in validate_model(m).kinds()


@pytest.mark.parametrize("token", CLASS_TOKENS)
def test_random_models_are_valid(token):
    for seed in range(15):
        assert validate_model(random_model(token, (4, 3, 2), seed, SIG)).ok


def test_eval_examples():
    m = two_chain()
    assert not eval(m, "w0", {}, p("P(c)"))
    assert eval(m, "w1", {}, p("P(c)"))
    assert eval(m, "w0", {}, p("dia P(c)"))
    assert eval(m, "w0", {}, p("box P(c)"))
    assert not eval(m, "w0", {}, p("P(c) | ~P(c)"))
    assert eval(m, "w0", {}, p("~~P(c)"))
    assert eval(m, "w0", {"x": "a"}, p("x = c", None, ["x"]))
    with pytest.raises(UnboundVariableError):
        eval(m, "w0", {}, p("P(x)", None, ["x"]))
    with pytest.raises(ValueError):
        eval(m, "w0", {"x": "zz"}, p("P(x)", None, ["x"]))
    with pytest.raises(KeyError):
        eval(m, "nowhere", {}, p("P(c)"))


def _random_pair(seed):
    rng = random.Random(seed)
    m = random_model(rng.choice(CLASS_TOKENS), (4, 3, 2), seed, SIG)
    return rng, m


@given(st.integers(0, 10**6))
def test_evaluator_matches_clause_oracle(seed):
    rng, m = _random_pair(seed)
    for _ in range(5):
        f = random_formula(SIG, rng, rng.randint(0, 4), ("x",))
        for w in m.worlds:
            for a in sorted(m.domain(w), key=repr):
                assert eval(m, w, {"x": a}, f) == naive.holds(m, w, {"x": a}, f)


@pytest.mark.parametrize("which", ["python", "compiled"])
def test_kernel_truth_masks_match_evaluator(which):
    impl = _pykernels if which == "python" else kernels.compiled_backend
    if impl is None:
        pytest.skip("compiled kernels not built")
    saved = kernels.backend
    kernels.backend = impl
    try:
        for seed in range(60):
            rng, m = _random_pair(seed)
            for _ in range(8):
                f = random_sentence(SIG, rng, rng.randint(0, 4))
                mask = m.truth_mask(f)
                for i, w in enumerate(m.worlds):
                    assert bool(mask >> i & 1) == eval(m, w, {}, f)
    finally:
        kernels.backend = saved


@given(st.integers(0, 10**6))
def test_persistence_on_valid_models(seed):
    _, m = _random_pair(seed)
    assert check_persistence(m, samples=100, seed=seed).ok


def test_persistence_failure_detected_on_broken_model():
    m = two_chain(predicates={"w0": {"P": [("a",)]}})
    rep = check_persistence(m, samples=300, seed=1)
    assert not rep.ok and "persistence" in rep.kinds()


@given(st.integers(0, 10**6))
def test_generated_submodel_preserves_truth(seed):
    rng, m = _random_pair(seed)
    w = rng.choice(m.worlds)
    sub = restrict_generated(m, [w])
    assert validate_model(sub).ok
    for _ in range(6):
        f = random_sentence(SIG, rng, 3)
        for v in sub.worlds:
            assert eval(sub, v, {}, f) == eval(m, v, {}, f)


def test_restrict_needs_seed():
    with pytest.raises(ValueError):
        restrict_generated(two_chain(), [])


@settings(max_examples=30)
@given(st.integers(0, 10**6))
def test_json_round_trip(seed):
    _, m = _random_pair(seed)
    m2 = load_model(dump_model(m))
    assert model_to_json(m2) == model_to_json(m)


def test_json_errors():
    with pytest.raises(ModelFormatError):
        load_model("[1,")
    with pytest.raises(ModelFormatError):
        load_model("[]")
    with pytest.raises(ModelFormatError):
        load_model(json.dumps({"worlds": ["a", "b"], "int_leq": [["a", "b"], ["b", "a"]]}))
    with pytest.raises(ModelFormatError):
        load_model(json.dumps({"worlds": ["a"], "domains": {"zz": []}}))


def test_json_signature_inferred_and_leq_closed():
    m = load_model(json.dumps({
        "worlds": ["a", "b", "c"], "int_leq": [["a", "b"], ["b", "c"]], "modal": [],
        "domains": {"a": [1], "b": [1], "c": [1]}, "constants": {"k": 1},
        "predicates": {"c": {"P": [[1]]}},
    }))
    assert m.frame.leq("a", "c")
    assert m.signature.predicates == {"P": 1} and m.signature.constants == ("k",)
    assert validate_model(m).ok
