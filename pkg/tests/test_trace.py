import json
import random
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from fofs.frameclasses import check_frame_conditions
from fofs.parsing import parse_formula as p
from fofs.proof import TheoryApprox, check_proof, pair_consistent_bounded
from fofs.proof.search import Refuted
from fofs.semantics import validate_frame
from fofs.syntax import Signature
from fofs.trace import (
    VARIANTS, AmalgamationError, BudgetExhausted, FerrersSet, InitialRefutation, OracleFormatError, Record,
    SaturatedApprox, TheoryOracle, bounded_saturate, build_trace_fragment, compute_obligations, dump_oracle,
    end_extends, enumerate_ferrers, enumerate_records, fc2_witness, is_phi_averse, load_oracle, random_oracle,
    single_label_oracle, validate_ferrers, validate_record,
)

import naive

VARIANT_CONDS = {"base": (), "4": ("transitive",), "T": ("reflexive",), "S4": ("reflexive", "transitive")}


# ---------------------------------------------------------------- Ferrers sets

@pytest.mark.parametrize("l,m", [(l, m) for l in range(5) for m in range(5)])
def test_enumeration_matches_subset_filtering(l, m):
    got = [frozenset(f.points()) for f in enumerate_ferrers(l, m)]
    assert len(got) == len(set(got))
    assert set(got) == {naive.mask_points(int(x), l, m) for x in naive.ferrers_masks(l, m)}


def test_one_one_has_two():
    fs = enumerate_ferrers(1, 1)
    assert len(fs) == 2
    assert {f.heights for f in fs} == {(2, 2), (2, 1)}


@pytest.mark.parametrize("l,m", [(0, 0), (1, 1), (2, 1), (1, 2), (2, 2)])
def test_validate_ferrers_on_every_subset(l, m):
    cells = [(i, j) for i in range(l + 1) for j in range(m + 1)]
    good = {naive.mask_points(int(x), l, m) for x in naive.ferrers_masks(l, m)}
    for bits in product((0, 1), repeat=len(cells)):
        s = frozenset(c for c, b in zip(cells, bits) if b)
        assert validate_ferrers(l, m, s).ok == (s in good)


def test_validate_ferrers_kinds():
    assert validate_ferrers(1, 1, [(0, 1), (1, 1)]).kinds() == {"origin"}
    assert validate_ferrers(1, 1, [(0, 0), (0, 1)]).kinds() == {"corner"}
    assert validate_ferrers(1, 1, [(0, 0), (0, 1), (1, 1), (5, 5)]).kinds() == {"bounds"}
    assert validate_ferrers(2, 1, [(0, 0), (0, 1), (2, 1)]).kinds() == {"left-closure"}
    assert validate_ferrers(1, 1, [(0, 0), (1, 0), (1, 1)]).kinds() == {"up-closure", "left-closure"}


def test_ferrers_set_api():
    f = FerrersSet(2, 1, (2, 1, 1))
    assert (1, 0) not in f and (1, 1) in f and len(f) == 4
    assert f.points() == ((0, 0), (0, 1), (1, 1), (2, 1))
    assert FerrersSet.from_points(2, 1, f.points()) == f
    assert f.restrict(1, 1) == FerrersSet(1, 1, (2, 1))
    assert f.restrict(0, 0) == FerrersSet(0, 0, (1,))
    with pytest.raises(ValueError):
        f.restrict(1, 0)
    for bad in [(2, 1, 0), (1, 1, 1), (2, 1, 2), (2, 2)]:
        with pytest.raises(ValueError):
            FerrersSet(2, 1, bad)
    with pytest.raises(ValueError):
        enumerate_ferrers(11, 0)
    with pytest.raises(ValueError):
        FerrersSet.from_points(1, 1, [(0, 1), (1, 1)])


@given(st.integers(0, 4), st.integers(0, 4), st.data())
def test_restriction_of_ferrers_is_ferrers(l, m, data):
    f = data.draw(st.sampled_from(enumerate_ferrers(l, m)))
    i, j = data.draw(st.sampled_from(f.points()))
    g = f.restrict(i, j)
    assert validate_ferrers(i, j, g.points()).ok
    assert set(g.points()) == {(a, b) for a, b in f.points() if a <= i and b <= j}


# ---------------------------------------------------------------- oracles and records

def chain_oracle():
    """Label a in every cell of a 2x2 grid, a second label b on the diagonal, all edges."""
    labels = {f"{x}{i}{j}": (i, j) for i in range(3) for j in range(3) for x in "ab" if x == "a" or i == j}
    U = [(a, b) for a in labels for b in labels if labels[b] == (labels[a][0], labels[a][1] + 1)]
    R = [(a, b) for a in labels for b in labels if labels[b] == (labels[a][0] + 1, labels[a][1])]
    o = TheoryOracle(labels, U, R)
    table = {(g, gp, d): f"a{labels[d][0]}{labels[gp][1]}" for g, gp, d in o.queries()}
    return TheoryOracle(labels, U, R, table)


def test_oracle_validation():
    o = TheoryOracle({"x": (0, 0), "y": (0, 1), "z": (1, 0)}, U=[("x", "z")], R=[("x", "y")],
                     amalgamation={("x", "y", "z"): "x"})
    assert o.validate().kinds() == {"U-index", "R-index", "amalgamation"}
    q = TheoryOracle({"x": (0, 0)}, U=[("x", "nope")])
    assert q.validate().kinds() == {"unknown-label"}
    assert single_label_oracle().validate().ok
    assert chain_oracle().validate().ok


def test_oracle_json_round_trip_and_errors():
    o = random_oracle((2, 2), seed=4)
    o2 = load_oracle(dump_oracle(o))
    assert o2.to_json() == o.to_json()
    bad = [
        "{", "[]", '{"labels": [], "extra": 1}', '{"U": []}',
        '{"labels": [{"name": "a", "i": 0}]}',
        '{"labels": [{"name": "a", "i": -1, "j": 0}]}',
        '{"labels": [{"name": "a", "i": 0, "j": 0}, {"name": "a", "i": 0, "j": 1}]}',
        '{"labels": [{"name": "a", "i": 0, "j": 0}], "U": [["a", "b"]]}',
        '{"labels": [{"name": "a", "i": 0, "j": 0}], "R": [["a"]]}',
        '{"labels": [{"name": "a", "i": 0, "j": 0}], "amalgamation": [["a","a","a","a"], ["a","a","a","b"]]}',
    ]
    for text in bad:
        with pytest.raises(OracleFormatError):
            load_oracle(text)
    with pytest.raises(ValueError):
        TheoryOracle({"a": (0, 0)}, amalgamation=lambda *q: None).to_json()


def test_records_and_end_extension():
    o = chain_oracle()
    f = FerrersSet(1, 1, (2, 1))
    r = Record.from_map(f, {(0, 0): "a00", (0, 1): "a01", (1, 1): "b11"})
    assert validate_record(r, o).ok and r.ur == "b11" and r.label(0, 1) == "a01"
    with pytest.raises(KeyError):
        r.label(1, 0)
    small = r.restrict(0, 1)
    assert end_extends(small, r) and end_extends(r, r) and not end_extends(r, small)
    assert not end_extends(r.restrict(0, 0), Record(FerrersSet(0, 0, (1,)), ("b00",)))
    bad = Record.from_map(f, {(0, 0): "a01", (0, 1): "a01", (1, 1): "zz"})
    assert validate_record(bad, o).kinds() == {"label-index", "unknown-label", "vertical", "horizontal"}
    with pytest.raises(ValueError):
        Record(f, ("a00",))
    assert str(r) == "<0:a00,a01 | 1:b11>"


@pytest.mark.parametrize("seed", range(4))
def test_enumerate_records_matches_brute_force(seed):
    o = random_oracle((1, 2), seed=seed)
    got = set(enumerate_records(o, (1, 2)))
    expect = set()
    for l in range(2):
        for m in range(3):
            for f in enumerate_ferrers(l, m):
                pts = f.points()
                for labs in product(*[o.at(i, j) for i, j in pts]):
                    r = Record(f, labs)
                    if validate_record(r, o).ok:
                        expect.add(r)
    assert got == expect


# ---------------------------------------------------------------- fragments

def _fragment_oracles():
    out = [("single", single_label_oracle()), ("chain", chain_oracle())]
    out += [(f"random{s}", random_oracle((2, 2), seed=s)) for s in range(6)]
    return out


@pytest.mark.parametrize("name,oracle", _fragment_oracles(), ids=[n for n, _ in _fragment_oracles()])
@pytest.mark.parametrize("variant", VARIANTS)
def test_fragment_valid_with_variant_properties(name, oracle, variant):
    fr = build_trace_fragment(oracle, (2, 2), variant)
    assert fr.ok, fr.report.violations[:2]
    assert validate_frame(fr.frame).ok
    assert check_frame_conditions(fr.frame, VARIANT_CONDS[variant]).ok
    # relations read directly off end extension
    recs = fr.records
    for a in recs:
        for b in recs:
            ee = end_extends(a, b)
            assert fr.frame.leq(a, b) == (ee and a.l == b.l)
            d = b.l - a.l
            want = {"base": d == 1, "4": d >= 1, "T": d in (0, 1), "S4": d >= 0}[variant]
            assert fr.frame.r(a, b) == (ee and a.m == b.m and want)


def test_fragment_json_and_errors():
    fr = build_trace_fragment(random_oracle((1, 1), per_cell=1, density=1.0), (1, 1), "base")
    doc = fr.to_json()
    # one Ferrers set for each corner except (1,1), which has two
    assert len(doc["worlds"]) == 5 and doc["report"]["ok"]
    assert json.loads(json.dumps(doc)) == doc
    with pytest.raises(ValueError):
        build_trace_fragment(single_label_oracle(), (1, 1), "K4")
    with pytest.raises(ValueError):
        build_trace_fragment(TheoryOracle({"x": (0, 0), "y": (0, 0)}, R=[("x", "y")]), (1, 1))


def test_seriality_analogue_on_total_oracles():
    for seed in range(4):
        o = random_oracle((2, 2), seed=seed, density=1.0)
        fr = build_trace_fragment(o, (2, 2), "base")
        assert fr.ok
        for k, r in enumerate(fr.records):
            if r.l < 2:
                assert fr.frame.r_mask[k], str(r)


def test_missing_amalgamation_raises():
    labels = {"g": (0, 0), "gp": (0, 1), "d": (1, 0), "dp": (1, 1)}
    o = TheoryOracle(labels, U=[("g", "gp"), ("d", "dp")], R=[("g", "d"), ("gp", "dp")])
    with pytest.raises(AmalgamationError) as e:
        build_trace_fragment(o, (1, 1), "base")
    assert e.value.triple == ("g", "gp", "d")
    ok = TheoryOracle(labels, o.U, o.R, {("g", "gp", "d"): "dp"})
    assert build_trace_fragment(ok, (1, 1), "base").ok


def test_fc2_witness_gaps_and_replay():
    base = chain_oracle()
    calls = []

    def ask(g, gp, d):
        calls.append((g, gp, d))
        return base.amalgamate(g, gp, d)

    o = TheoryOracle(base.labels, base.U, base.R, ask)
    rng = random.Random(2)
    recs = enumerate_records(base, (2, 2))
    seen = set()
    for _ in range(400):
        rho = rng.choice(recs)
        ups = [r for r in recs if r.l == rho.l and end_extends(rho, r)]
        rs = [r for r in recs if r.m == rho.m and r.l >= rho.l and end_extends(rho, r)]
        rho_p, tau = rng.choice(ups), rng.choice(rs)
        calls.clear()
        w = fc2_witness(rho, rho_p, tau, o)
        seen.add((rho_p.m - rho.m, tau.l - rho.l))
        assert validate_record(w, base).ok
        assert end_extends(tau, w) and end_extends(rho_p, w)
        assert w.l == tau.l and w.m == rho_p.m
        assert len(calls) == (rho_p.m - rho.m) * (tau.l - rho.l)
        # replaying the recorded answers through a table gives the same witness
        table = {q: base.amalgamate(*q) for q in calls}
        assert fc2_witness(rho, rho_p, tau, TheoryOracle(base.labels, base.U, base.R, table)) == w
    assert {0, 1, 2} <= {a for a, _ in seen}
    with pytest.raises(ValueError):
        fc2_witness(recs[-1], recs[0], recs[0], base)


# ---------------------------------------------------------------- obligations

SIG_C = Signature(["c"], {"P": 1, "Q": 1})


def test_obligations_single_step():
    chain = [TheoryApprox(SIG_C, ()), TheoryApprox(SIG_C, (p("P(c)"),))]
    om = compute_obligations(chain, [p("box P(c)")])
    assert [str(o) for o in om[1]] == ["box P(c)"]
    assert [str(o) for o in om[0]] == ["box box P(c)"]
    for o in om[0]:
        assert check_proof(o.proof)


def test_obligations_follow_boxed_implication():
    chain = [TheoryApprox(SIG_C, ()), TheoryApprox(SIG_C, (p("box (Q(c) -> P(c))"),))]
    om = compute_obligations(chain, [p("box P(c)")])
    got = {str(o) for o in om[0]}
    assert {"box box P(c)", "box box Q(c)"} <= got
    for o in om[0]:
        assert check_proof(o.proof)
        assert o.proof.assumptions == chain[1].asserted


def test_obligations_empty_and_restricted():
    chain = [TheoryApprox(SIG_C, ()), TheoryApprox(SIG_C, (p("P(c)"),)), TheoryApprox(SIG_C, ())]
    assert compute_obligations(chain, []) == [(), (), ()]
    sig0 = Signature([], {"P": 1})
    chain = [TheoryApprox(sig0, ()), TheoryApprox(SIG_C, (p("P(c)"),))]
    assert compute_obligations(chain, [p("box P(c)")])[0] == ()
    with pytest.raises(ValueError):
        compute_obligations([], [])


# ---------------------------------------------------------------- saturation

TARGET = Signature(["c", "d1", "d2", "d3", "d4"], {"P": 1, "Q": 1})


def test_saturation_examples():
    t = TheoryApprox(SIG_C, (p("P(c) | Q(c)"),), (p("Q(c)"),))
    r = bounded_saturate(t, TARGET, 10)
    assert isinstance(r, SaturatedApprox)
    assert p("P(c)") in r.approx.asserted
    e = bounded_saturate(TheoryApprox(SIG_C, (p("exists x. P(x)"),)), TARGET, 10)
    assert p("P(d1)") in e.approx.asserted
    assert e.processed[0].kind == "existential" and e.processed[0].constant == "d1"
    z = bounded_saturate(t, TARGET, 0)
    assert isinstance(z, BudgetExhausted) and z.approx == t
    with pytest.raises(InitialRefutation) as err:
        bounded_saturate(TheoryApprox(SIG_C, (p("P(c)"),), (p("P(c)"),)), TARGET, 5)
    assert check_proof(err.value.proof)
    with pytest.raises(ValueError):
        bounded_saturate(t, Signature(["d1"], {"P": 1}), 5)
    with pytest.raises(ValueError):
        bounded_saturate(t, TARGET, 5, mode="sideways")


def test_saturation_diamond_mode():
    t = TheoryApprox(SIG_C, (p("box P(c) -> dia Q(c)"),), ())
    r = bounded_saturate(t, TARGET, 12, mode="diamond")
    assert any(s.kind == "diamond" for s in r.processed)


def test_fresh_constants_exhausted_are_blocked():
    t = TheoryApprox(SIG_C, (p("exists x. P(x)"), p("exists x. Q(x)")))
    r = bounded_saturate(t, Signature(["c", "d1"], {"P": 1, "Q": 1}), 10)
    assert len(r.blocked) == 1 and r.blocked[0].kind == "existential"


def random_pair(seed):
    rng = random.Random(seed)
    atoms = [p(f"{q}({c})") for q in "PQ" for c in ("c",)]
    one = [p("P(x)", None, ["x"]), p("Q(x)", None, ["x"]), p("P(x) | Q(x)", None, ["x"])]

    def sentence(d):
        k = rng.randrange(6 if d else 1)
        if k == 0:
            return rng.choice(atoms)
        from fofs.syntax import Exists, Or, Imp, Box, Dia
        if k == 1:
            return Exists("x", rng.choice(one))
        if k in (2, 3):
            return Or(sentence(d - 1), sentence(d - 1))
        if k == 4:
            return Dia(sentence(d - 1))
        return Imp(sentence(d - 1), sentence(d - 1)) if rng.random() < 0.5 else Box(sentence(d - 1))

    asserted = tuple(sentence(2) for _ in range(rng.randint(1, 3)))
    denied = tuple(rng.choice(atoms) for _ in range(rng.randint(0, 1)))
    return TheoryApprox(SIG_C, asserted, denied)


def consistent_pairs(n, start=0):
    out, seed = [], start
    while len(out) < n:
        t = random_pair(seed)
        seed += 1
        if not isinstance(pair_consistent_bounded(t, 200), Refuted):
            out.append(t)
    return out


def saturation_failures(t, budgets=(2, 5, 12), mode="plain"):
    """Invariant violations for one input; empty when all hold."""
    bad = []
    prev = None
    for b in budgets:
        r = bounded_saturate(t, TARGET, b, mode=mode)
        a = r.approx
        if isinstance(pair_consistent_bounded(a, 200), Refuted):
            bad.append(f"refuted at budget {b}")
        if not set(t.asserted) <= set(a.asserted) or a.denied != t.denied:
            bad.append(f"input not preserved at budget {b}")
        for s in r.processed:
            if s.kind == "existential":
                if s.added is None or s.added not in a.asserted or s.constant in t.signature.constants:
                    bad.append(f"existential {s.sentence} not witnessed")
        if prev is not None:
            if not set(prev.approx.asserted) <= set(a.asserted):
                bad.append(f"not monotone from budget to {b}")
            if r.processed[:len(prev.processed)] != prev.processed:
                bad.append(f"history differs at budget {b}")
        prev = r
    return bad


@settings(max_examples=25)
@given(st.integers(0, 10**6), st.sampled_from(["plain", "diamond"]))
def test_saturation_invariants(seed, mode):
    t = consistent_pairs(1, seed)[0]
    assert saturation_failures(t, mode=mode) == []


def test_phi_averse():
    phi = p("P(c)")
    t = TheoryApprox(SIG_C, (p("box (P(c) | Q(c))"),))
    rep = is_phi_averse(t, phi)
    assert rep.kinds() == {"phi-averse"}
    assert is_phi_averse(t.assert_(p("dia Q(c)")), phi).ok
    assert is_phi_averse(t.assert_(p("box Q(c)"), p("box Q(c) -> dia Q(c)")), phi, derive_budget=300).ok
