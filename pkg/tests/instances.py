"""Random argument builders for the derived-lemma schemas, shared by several test files."""
import random

from fofs.gen import random_one_place, random_sentence
from fofs.proof import Proven, bounded_derive, derive_schema
from fofs.syntax import And, Box, Imp, Pred, Signature, Var, constants_of, fresh_name, instantiate, variables_of

SIG = Signature(["c", "d"], {"P": 1, "Q": 1})
SIG_D = Signature(["d"], {"P": 1, "Q": 1})


def _proof(gamma, goal):
    r = bounded_derive(gamma, goal, 400)
    assert isinstance(r, Proven), goal
    return r.proof


def derived_instance(name: str, rng: random.Random):
    """A proof from derive_schema for ``name`` with random arguments."""
    s = lambda: random_sentence(SIG, rng, 2)
    if name == "Lemma26_1":
        return derive_schema(name, [s() for _ in range(rng.randint(1, 3))])
    if name in ("Lemma26_2", "Lemma26_3"):
        return derive_schema(name, s(), s())
    if name == "Lemma26_4":
        return derive_schema(name, *[rng.choice("cde") for _ in range(3)])
    if name == "Lemma26_5":
        return derive_schema(name, random_one_place(SIG, rng, 2), "e")
    if name == "Necessitation":
        inner = derived_instance(rng.choice(["Lemma26_2", "Lemma26_3", "Lemma26_4"]), rng)
        return derive_schema(name, inner)
    if name == "RuBox":
        phi, psi = s(), s()
        gamma = [Box(phi), Box(psi)] + ([s()] if rng.random() < 0.5 else [])
        chi = rng.choice([phi, psi, And(psi, phi)])
        return derive_schema(name, _proof(gamma, Box(phi)), _proof(gamma, Box(psi)),
                             _proof([], Imp(And(phi, psi), chi)))
    if name == "GenGen":
        phi = random_one_place(SIG_D, rng, 2)
        body = instantiate(phi, "c")
        if rng.random() < 0.5:
            gamma = [random_sentence(SIG_D, rng, 1)]
            goal = Imp(gamma[0], And(gamma[0], Imp(body, body)))
        else:
            goal = Imp(body, body)
            gamma = []
        return derive_schema(name, _proof(gamma, goal), "c", fresh_name(variables_of(goal), "z"))
    if name == "ExSuff":
        psi = random_sentence(SIG_D, rng, 2)
        phi = And(Pred("P", (Var("x"),)), psi) if rng.random() < 0.5 else And(psi, Pred("Q", (Var("x"),)))
        ante = instantiate(phi, "c")
        assert "c" not in constants_of(psi)
        return derive_schema(name, _proof([], Imp(ante, psi)), ["c"], [fresh_name(variables_of(ante), "z")])
    raise KeyError(name)
