"""Ferrers sets, records over theory oracles, trace-frame fragments and budgeted saturation.

Theories are abstract here: a :class:`TheoryOracle` names finitely many
labels, each pinned to a grid index (i, j), with the candidate relations U
(vertical, intuitionistic) and Rth (horizontal, modal) between them and an
amalgamation table answering the FC2 queries.  Records are labelings of
Ferrers sets by such labels; a fragment is the finite frame of all records
up to a given depth.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from typing import Callable, Iterable, Mapping

from .logics import LogicId
from .parsing import print_formula
from .proof import Proof, TheoryApprox, bounded_derive, pair_consistent_bounded
from .proof.search import Proven, Refuted, sort_key
from .semantics import Frame, Report, Violation, _bits, validate_frame
from .syntax import (
    Box, Const, Dia, Exists, Formula, Imp, Or, Signature, big_or, constants_of, is_sentence,
    subformulas, substitute_var,
)

__all__ = ["FERRERS_CAP", "FerrersSet", "validate_ferrers", "enumerate_ferrers", "Record",
           "end_extends", "validate_record", "TheoryOracle", "OracleFormatError", "AmalgamationError",
           "load_oracle", "dump_oracle", "random_oracle", "single_label_oracle", "VARIANTS",
           "TraceFragment", "build_trace_fragment", "enumerate_records", "fc2_witness",
           "Obligation", "compute_obligations", "SaturationStep", "SaturatedApprox",
           "BudgetExhausted", "InitialRefutation", "bounded_saturate", "is_phi_averse"]

FERRERS_CAP = 10
VARIANTS = ("base", "4", "T", "S4")


# ---------------------------------------------------------------- Ferrers sets

@dataclass(frozen=True)
class FerrersSet:
    """An (l, m)-Ferrers set as column heights counted down from row m."""

    l: int
    m: int
    heights: tuple

    def __post_init__(self):
        h = tuple(self.heights)
        object.__setattr__(self, "heights", h)
        if self.l < 0 or self.m < 0:
            raise ValueError("Ferrers indices must be non-negative")
        if len(h) != self.l + 1:
            raise ValueError(f"expected {self.l + 1} column heights, got {len(h)}")
        if h[0] != self.m + 1:
            raise ValueError("column 0 must be full (it holds (0,0))")
        if h[-1] < 1:
            raise ValueError(f"column {self.l} must hold ({self.l},{self.m})")
        if any(a < b for a, b in zip(h, h[1:])):
            raise ValueError(f"column heights must be weakly decreasing: {list(h)}")

    @classmethod
    def from_points(cls, l: int, m: int, points: Iterable) -> "FerrersSet":
        pts = {tuple(p) for p in points}
        rep = validate_ferrers(l, m, pts)
        if not rep.ok:
            raise ValueError(str(rep.violations[0]))
        return cls(l, m, tuple(sum(1 for (i, _) in pts if i == c) for c in range(l + 1)))

    @classmethod
    def full(cls, l: int, m: int) -> "FerrersSet":
        return cls(l, m, (m + 1,) * (l + 1))

    def bottom(self, i: int) -> int:
        """Lowest row present in column ``i``."""
        return self.m + 1 - self.heights[i]

    def __contains__(self, p) -> bool:
        i, j = p
        return 0 <= i <= self.l and 0 <= j <= self.m and j >= self.bottom(i)

    def points(self) -> tuple:
        return tuple((i, j) for i in range(self.l + 1) for j in range(self.bottom(i), self.m + 1))

    def __len__(self):
        return sum(self.heights)

    def restrict(self, l: int, m: int) -> "FerrersSet":
        """The intersection with [0,l]x[0,m]; (l, m) must be a member."""
        if (l, m) not in self:
            raise ValueError(f"({l},{m}) is not in the Ferrers set")
        return FerrersSet(l, m, tuple(max(0, m - self.m + self.heights[i]) for i in range(l + 1)))

    def __str__(self):
        return f"F({self.l},{self.m};{','.join(map(str, self.heights))})"


def validate_ferrers(l: int, m: int, candidate: Iterable) -> Report:
    pts = {tuple(p) for p in candidate}
    out = []
    for p in sorted(pts):
        i, j = p
        if not (0 <= i <= l and 0 <= j <= m):
            out.append(Violation("bounds", (p,), f"{p} lies outside [0,{l}]x[0,{m}]"))
    if (0, 0) not in pts:
        out.append(Violation("origin", ((0, 0),), "(0,0) is missing"))
    if (l, m) not in pts:
        out.append(Violation("corner", ((l, m),), f"({l},{m}) is missing"))
    for i, j in sorted(pts):
        if not (0 <= i <= l and 0 <= j <= m):
            continue
        if i > 0 and (i - 1, j) not in pts:
            out.append(Violation("left-closure", ((i, j),), f"({i},{j}) present but ({i - 1},{j}) missing"))
        if j < m and (i, j + 1) not in pts:
            out.append(Violation("up-closure", ((i, j),), f"({i},{j}) present but ({i},{j + 1}) missing"))
    return Report(out)


def enumerate_ferrers(l: int, m: int, cap: int = FERRERS_CAP) -> list[FerrersSet]:
    """All (l, m)-Ferrers sets; lexicographic order on the height vector, decreasing."""
    if l < 0 or m < 0:
        raise ValueError("Ferrers indices must be non-negative")
    if l > cap or m > cap:
        raise ValueError(f"({l},{m}) exceeds the enumeration cap {cap}")
    return [FerrersSet(l, m, (m + 1,) + hs)
            for hs in combinations_with_replacement(range(m + 1, 0, -1), l)]


# ---------------------------------------------------------------- oracles

class OracleFormatError(ValueError):
    pass


class AmalgamationError(Exception):
    """The oracle has no answer for an FC2 query (gamma Rth delta, gamma U gamma')."""

    def __init__(self, triple, message=None):
        self.triple = tuple(triple)
        g, gp, d = self.triple
        super().__init__(message or f"no amalgamation for gamma={g}, gamma'={gp}, delta={d}")


class TheoryOracle:
    """Finitely many theory labels with U, Rth and an amalgamation table."""

    def __init__(self, labels: Mapping[str, tuple], U: Iterable = (), R: Iterable = (),
                 amalgamation: Mapping | Callable | None = None):
        self.labels = {str(a): (int(i), int(j)) for a, (i, j) in labels.items()}
        self.U = frozenset((a, b) for a, b in U)
        self.R = frozenset((a, b) for a, b in R)
        if callable(amalgamation):
            self._call, self.table = amalgamation, None
        else:
            self._call, self.table = None, dict(amalgamation or {})
        self.u_succ = {a: set() for a in self.labels}
        self.r_succ = {a: set() for a in self.labels}
        for a, b in self.U:
            self.u_succ.setdefault(a, set()).add(b)
        for a, b in self.R:
            self.r_succ.setdefault(a, set()).add(b)
        self._cells = {}
        for a in sorted(self.labels):
            self._cells.setdefault(self.labels[a], []).append(a)

    def index(self, a) -> tuple:
        return self.labels[a]

    def at(self, i: int, j: int) -> list:
        return self._cells.get((i, j), [])

    def u(self, a, b) -> bool:
        return (a, b) in self.U

    def rth(self, a, b) -> bool:
        return (a, b) in self.R

    def amalgamate(self, gamma, gamma_p, delta):
        """Delta' with gamma' Rth Delta' and delta U Delta'."""
        key = (gamma, gamma_p, delta)
        ans = self._call(*key) if self._call is not None else self.table.get(key)
        if ans is None:
            raise AmalgamationError(key)
        return ans

    def validate(self) -> Report:
        out = []
        for a, b in sorted(self.U):
            if a not in self.labels or b not in self.labels:
                out.append(Violation("unknown-label", (a, b), f"U mentions an unknown label in ({a}, {b})"))
                continue
            (i, j), (i2, j2) = self.labels[a], self.labels[b]
            if (i2, j2) != (i, j + 1):
                out.append(Violation("U-index", (a, b), f"U relates {a}@{(i, j)} to {b}@{(i2, j2)}"))
        for a, b in sorted(self.R):
            if a not in self.labels or b not in self.labels:
                out.append(Violation("unknown-label", (a, b), f"Rth mentions an unknown label in ({a}, {b})"))
                continue
            (i, j), (i2, j2) = self.labels[a], self.labels[b]
            if (i2, j2) != (i + 1, j):
                out.append(Violation("R-index", (a, b), f"Rth relates {a}@{(i, j)} to {b}@{(i2, j2)}"))
        for (g, gp, d), dp in sorted((self.table or {}).items()):
            bad = [s for s, ok in (("gamma Rth delta", (g, d) in self.R), ("gamma U gamma'", (g, gp) in self.U),
                                   ("gamma' Rth delta'", (gp, dp) in self.R), ("delta U delta'", (d, dp) in self.U))
                   if not ok]
            if bad:
                out.append(Violation("amalgamation", (g, gp, d, dp), f"entry fails {', '.join(bad)}"))
        return Report(out)

    def queries(self) -> list:
        """Every FC2 query the relations pose, in a fixed order."""
        out = []
        for g in sorted(self.labels):
            for d in sorted(self.r_succ.get(g, ())):
                for gp in sorted(self.u_succ.get(g, ())):
                    out.append((g, gp, d))
        return out

    def to_json(self) -> dict:
        if self.table is None:
            raise ValueError("an oracle with a callback has no finite table to write")
        return {"labels": [{"name": a, "i": i, "j": j} for a, (i, j) in sorted(self.labels.items())],
                "U": [list(p) for p in sorted(self.U)], "R": [list(p) for p in sorted(self.R)],
                "amalgamation": [[g, gp, d, dp] for (g, gp, d), dp in sorted(self.table.items())]}

    @classmethod
    def from_json(cls, doc) -> "TheoryOracle":
        if not isinstance(doc, Mapping):
            raise OracleFormatError("oracle document must be an object")
        extra = set(doc) - {"labels", "U", "R", "amalgamation"}
        if extra:
            raise OracleFormatError(f"unknown keys {sorted(extra)}")
        if "labels" not in doc:
            raise OracleFormatError("missing key 'labels'")
        labels = {}
        for k, e in enumerate(doc["labels"]):
            if not isinstance(e, Mapping) or set(e) != {"name", "i", "j"}:
                raise OracleFormatError(f"labels[{k}]: expected an object with name, i, j")
            name, i, j = e["name"], e["i"], e["j"]
            if not isinstance(name, str) or not name:
                raise OracleFormatError(f"labels[{k}]: name must be a non-empty string")
            if not all(isinstance(x, int) and not isinstance(x, bool) and x >= 0 for x in (i, j)):
                raise OracleFormatError(f"labels[{k}]: i and j must be non-negative integers")
            if name in labels:
                raise OracleFormatError(f"labels[{k}]: duplicate label {name!r}")
            labels[name] = (i, j)

        def pairs(key, width):
            rows = doc.get(key, [])
            if not isinstance(rows, list):
                raise OracleFormatError(f"{key}: expected a list")
            out = []
            for k, row in enumerate(rows):
                if not isinstance(row, list) or len(row) != width:
                    raise OracleFormatError(f"{key}[{k}]: expected a list of {width} label names")
                for x in row:
                    if x not in labels:
                        raise OracleFormatError(f"{key}[{k}]: unknown label {x!r}")
                out.append(tuple(row))
            return out

        U, R = pairs("U", 2), pairs("R", 2)
        table = {}
        for k, (g, gp, d, dp) in enumerate(pairs("amalgamation", 4)):
            if (g, gp, d) in table and table[(g, gp, d)] != dp:
                raise OracleFormatError(f"amalgamation[{k}]: conflicting answer for ({g}, {gp}, {d})")
            table[(g, gp, d)] = dp
        return cls(labels, U, R, table)

    def __repr__(self):
        return f"TheoryOracle({len(self.labels)} labels, |U|={len(self.U)}, |R|={len(self.R)})"


def load_oracle(text: str) -> TheoryOracle:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise OracleFormatError(f"line {e.lineno} column {e.colno}: {e.msg}") from None
    return TheoryOracle.from_json(doc)


def dump_oracle(o: TheoryOracle) -> str:
    return json.dumps(o.to_json(), indent=1, sort_keys=True)


def single_label_oracle(name: str = "g") -> TheoryOracle:
    return TheoryOracle({name: (0, 0)})


def random_oracle(depth=(2, 2), seed: int = 0, per_cell: int = 2, density: float = 0.6) -> TheoryOracle:
    """A seeded oracle on the grid up to ``depth`` whose amalgamation table is complete.

    Missing answers are filled with an existing label of the target cell when
    one fits, otherwise by adding the two required edges to a chosen label;
    the loop runs until every query has an answer.
    """
    L, M = depth
    rng = random.Random(seed)
    labels = {}
    for i in range(L + 1):
        for j in range(M + 1):
            for k in range(rng.randint(1, per_cell)):
                labels[f"t{i}_{j}_{k}"] = (i, j)
    cells = {}
    for a in sorted(labels):
        cells.setdefault(labels[a], []).append(a)
    U, R = set(), set()
    for a in sorted(labels):
        i, j = labels[a]
        for b in cells.get((i, j + 1), ()):
            if rng.random() < density:
                U.add((a, b))
        for b in cells.get((i + 1, j), ()):
            if rng.random() < density:
                R.add((a, b))
    table = {}
    while True:
        o = TheoryOracle(labels, U, R, table)
        todo = [q for q in o.queries() if q not in table]
        if not todo:
            return o
        for g, gp, d in todo:
            target = cells[(labels[d][0], labels[gp][1])]
            fits = [x for x in target if (gp, x) in R and (d, x) in U]
            x = rng.choice(fits) if fits else rng.choice(target)
            R.add((gp, x))
            U.add((d, x))
            table[(g, gp, d)] = x


# ---------------------------------------------------------------- records

@dataclass(frozen=True)
class Record:
    """Labels for the points of a Ferrers set, listed in ``ferrers.points()`` order."""

    ferrers: FerrersSet
    labels: tuple

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        if len(self.labels) != len(self.ferrers):
            raise ValueError("one label per point is required")

    @classmethod
    def from_map(cls, ferrers: FerrersSet, labeling: Mapping) -> "Record":
        pts = ferrers.points()
        if set(labeling) != set(pts):
            raise ValueError("labeling must be defined exactly on the Ferrers set")
        return cls(ferrers, tuple(labeling[p] for p in pts))

    @property
    def l(self):
        return self.ferrers.l

    @property
    def m(self):
        return self.ferrers.m

    def labeling(self) -> dict:
        return dict(zip(self.ferrers.points(), self.labels))

    def label(self, i: int, j: int):
        f = self.ferrers
        if (i, j) not in f:
            raise KeyError((i, j))
        return self.labels[sum(f.heights[:i]) + j - f.bottom(i)]

    @property
    def ur(self):
        return self.labels[-1]

    def restrict(self, l: int, m: int) -> "Record":
        f = self.ferrers.restrict(l, m)
        return Record(f, tuple(self.label(i, j) for i, j in f.points()))

    def __str__(self):
        cols = []
        for i in range(self.l + 1):
            col = [self.label(i, j) for j in range(self.ferrers.bottom(i), self.m + 1)]
            cols.append(f"{self.ferrers.bottom(i)}:" + ",".join(map(str, col)))
        return "<" + " | ".join(cols) + ">"


def end_extends(r1: Record, r2: Record) -> bool:
    """True when ``r2`` end-extends ``r1``."""
    l, m = r1.l, r1.m
    if l > r2.l or m > r2.m or (l, m) not in r2.ferrers:
        return False
    return r2.restrict(l, m) == r1


def validate_record(r: Record, oracle: TheoryOracle) -> Report:
    out = []
    lab = r.labeling()
    for (i, j), a in sorted(lab.items()):
        if a not in oracle.labels:
            out.append(Violation("unknown-label", ((i, j), a), f"{a} at ({i},{j}) is not an oracle label"))
            continue
        if oracle.index(a) != (i, j):
            out.append(Violation("label-index", ((i, j), a), f"{a} has index {oracle.index(a)}, placed at ({i},{j})"))
        if (i + 1, j) in lab and not oracle.rth(a, lab[(i + 1, j)]):
            out.append(Violation("horizontal", ((i, j), (i + 1, j)), f"{a} Rth {lab[(i + 1, j)]} fails"))
        if (i, j + 1) in lab and not oracle.u(a, lab[(i, j + 1)]):
            out.append(Violation("vertical", ((i, j), (i, j + 1)), f"{a} U {lab[(i, j + 1)]} fails"))
    return Report(out)


def enumerate_records(oracle: TheoryOracle, depth, limit: int = 50000) -> list[Record]:
    """Every record over ``oracle`` with indices at most ``depth``, in a fixed order."""
    L, M = depth
    out = []
    for l in range(L + 1):
        for m in range(M + 1):
            for f in enumerate_ferrers(l, m, cap=max(FERRERS_CAP, L, M)):
                pts = f.points()
                pos = {p: k for k, p in enumerate(pts)}
                chosen = [None] * len(pts)

                def fill(k):
                    if k == len(pts):
                        out.append(Record(f, tuple(chosen)))
                        if len(out) > limit:
                            raise ValueError(f"more than {limit} records; lower the depth")
                        return
                    i, j = pts[k]
                    cands = oracle.at(i, j)
                    if (i - 1, j) in pos:
                        left = oracle.r_succ.get(chosen[pos[(i - 1, j)]], set())
                        cands = [a for a in cands if a in left]
                    if (i, j - 1) in pos:
                        below = oracle.u_succ.get(chosen[pos[(i, j - 1)]], set())
                        cands = [a for a in cands if a in below]
                    for a in cands:
                        chosen[k] = a
                        fill(k + 1)

                fill(0)
    return out


# ---------------------------------------------------------------- fragments

def _r_ok(variant: str, small: Record, big: Record) -> bool:
    d = big.l - small.l
    if big.m != small.m:
        return False
    if variant == "base":
        return d == 1
    if variant == "4":
        return d >= 1
    if variant == "T":
        return d in (0, 1)
    if variant == "S4":
        return d >= 0
    raise ValueError(f"unknown variant {variant!r}; expected one of {', '.join(VARIANTS)}")


@dataclass
class TraceFragment:
    frame: Frame
    variant: str
    depth: tuple
    records: list
    report: Report = field(default_factory=Report)

    @property
    def ok(self) -> bool:
        return self.report.ok

    def to_json(self) -> dict:
        idx = {r: k for k, r in enumerate(self.records)}
        f = self.frame
        return {"variant": self.variant, "depth": list(self.depth),
                "worlds": [{"id": k, "l": r.l, "m": r.m, "heights": list(r.ferrers.heights),
                            "labels": list(r.labels)} for k, r in enumerate(self.records)],
                "leq": [[idx[a], idx[b]] for a, b in f.leq_pairs()],
                "R": [[idx[a], idx[b]] for a, b in f.modal_pairs()],
                "report": self.report.to_json()}


def build_trace_fragment(oracle: TheoryOracle, depth=(1, 1), variant: str = "base",
                         check_witnesses: bool = True) -> TraceFragment:
    """The frame of all records up to ``depth`` with end extension and the variant's R.

    The report holds validate_frame's findings plus, when
    ``check_witnesses``, any FC2 witness built from the amalgamation table
    that fails to be a world with the required relations.  A missing
    amalgamation answer raises :class:`AmalgamationError`.
    """
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; expected one of {', '.join(VARIANTS)}")
    bad = oracle.validate()
    if not bad.ok:
        raise ValueError(f"oracle violates its invariants: {bad.violations[0]}")
    L, M = depth
    if L < 0 or M < 0:
        raise ValueError("depth must be non-negative")
    recs = enumerate_records(oracle, depth)
    idx = {r: k for k, r in enumerate(recs)}
    n = len(recs)
    leq, rm = [0] * n, [0] * n
    # every corner restriction of a record is itself a record of the fragment
    for k, big in enumerate(recs):
        for (l, m) in big.ferrers.points():
            s = idx[big.restrict(l, m)]
            small = recs[s]
            if l == big.l:
                leq[s] |= 1 << k
            if _r_ok(variant, small, big):
                rm[s] |= 1 << k
    frame = Frame.from_masks(recs, leq, rm)
    report = validate_frame(frame)
    if check_witnesses:
        out = []
        for s, rho in enumerate(recs):
            for t in _bits(rm[s]):
                tau = recs[t]
                for p in _bits(leq[s]):
                    if p == s:
                        continue
                    rho_p = recs[p]
                    w = fc2_witness(rho, rho_p, tau, oracle)
                    k = idx.get(w)
                    if k is None or not (leq[t] >> k & 1) or not (rm[p] >> k & 1):
                        out.append(Violation("fc2-witness", (rho, rho_p, tau),
                                             f"amalgamated record {w} is not an R-successor of {rho_p} above {tau}"))
        report = report + Report(out)
    return TraceFragment(frame, variant, (L, M), recs, report)


def fc2_witness(rho: Record, rho_p: Record, tau: Record, oracle: TheoryOracle) -> Record:
    """tau' with tau end-extended by tau' and tau' an R-successor of rho'.

    New top rows are filled one at a time: columns up to rho's first index
    copy rho', the rest come from single amalgamation queries.  With
    tau.l == rho.l + 1 this is the base-variant construction; larger gaps
    chain the query along the row.
    """
    if rho_p.l != rho.l or not end_extends(rho, rho_p):
        raise ValueError("rho' must end-extend rho with the same first index")
    if tau.m != rho.m or tau.l < rho.l or not end_extends(rho, tau):
        raise ValueError("tau must end-extend rho with the same second index")
    l, lt = rho.l, tau.l
    cur = tau
    for k in range(rho.m + 1, rho_p.m + 1):
        row = [rho_p.label(i, k) for i in range(l + 1)]
        for i in range(l + 1, lt + 1):
            row.append(oracle.amalgamate(cur.label(i - 1, k - 1), row[i - 1], cur.label(i, k - 1)))
        lab = cur.labeling()
        for i, a in enumerate(row):
            lab[(i, k)] = a
        f = FerrersSet(lt, k, tuple(h + 1 for h in cur.ferrers.heights))
        cur = Record.from_map(f, lab)
    return cur


# ---------------------------------------------------------------- obligations

@dataclass(frozen=True)
class Obligation:
    """A member box(beta) of an obligation set, with the proof that admitted it."""

    formula: Formula
    proof: Proof | None = None

    def __str__(self):
        return print_formula(self.formula)


def _candidates(sentences, cap: int):
    pool = set()
    for f in sentences:
        pool.update(g for g in subformulas(f) if is_sentence(g))
    pool |= {Box(g) for g in pool}
    return sorted(pool, key=sort_key)[:cap]


def compute_obligations(chain, omega_n, budget: int = 300, pool_cap: int = 64,
                        gamma_star: TheoryApprox | None = None, logic: LogicId | None = None) -> list:
    """Obligation sets Omega_0 .. Omega_n, propagated down a chain of theory approximations.

    ``chain`` lists TheoryApprox values (or (label, TheoryApprox) pairs) for
    Gamma_0 .. Gamma_n.  box(beta) joins Omega_k when the next theory
    (``gamma_star`` in place of Gamma_n) derives beta -> (disjunction of
    Omega_{k+1}) within ``budget`` steps.  Candidates beta are the sentence
    subformulas of the chain and of Omega_n together with their boxes, at
    most ``pool_cap`` of them, and must use only the constants of the
    level's signature when one is given.
    """
    thys = [c[1] if isinstance(c, tuple) else c for c in chain]
    if not thys:
        raise ValueError("chain must be nonempty")
    n = len(thys) - 1
    omega_n = tuple(dict.fromkeys(omega_n))
    sents = [f for t in thys for f in t.asserted + t.denied] + list(omega_n)
    if gamma_star is not None:
        sents += list(gamma_star.asserted + gamma_star.denied)
    pool = _candidates(sents, pool_cap)
    out = [()] * (n + 1)
    out[n] = tuple(Obligation(g) for g in omega_n)
    for k in range(n - 1, -1, -1):
        above = [o.formula for o in out[k + 1]]
        if not above:
            continue
        gamma = (gamma_star if (k == n - 1 and gamma_star is not None) else thys[k + 1]).asserted
        sig = thys[k].signature
        allowed = None if sig is None else sig.constant_set()
        target = big_or(above)
        got = []
        for beta in pool:
            if allowed is not None and not constants_of(beta) <= allowed:
                continue
            r = bounded_derive(gamma, Imp(beta, target), budget, logic)
            if isinstance(r, Proven):
                got.append(Obligation(Box(beta), r.proof))
        out[k] = tuple(got)
    return out


# ---------------------------------------------------------------- saturation

class InitialRefutation(ValueError):
    def __init__(self, proof: Proof):
        self.proof = proof
        super().__init__("the pair is refuted at this budget")


@dataclass(frozen=True)
class SaturationStep:
    step: int
    kind: str          # disjunction, existential, diamond
    sentence: Formula
    added: Formula | None = None   # None: the sentence was rejected (diamond) or blocked
    constant: str | None = None

    def to_json(self):
        return {"step": self.step, "kind": self.kind, "sentence": print_formula(self.sentence),
                "added": None if self.added is None else print_formula(self.added),
                "constant": self.constant}


@dataclass(frozen=True)
class SaturatedApprox:
    """Every candidate of the finite frontier was handled before the budget ran out."""

    approx: TheoryApprox
    processed: tuple
    steps: int
    blocked: tuple = ()


@dataclass(frozen=True)
class BudgetExhausted:
    partial: TheoryApprox
    processed: tuple
    steps: int
    blocked: tuple = ()

    @property
    def approx(self):
        return self.partial


class _Saturator:
    def __init__(self, pair, target_sig, derive_budget, logic):
        self.t = pair
        self.sig = target_sig
        self.db = derive_budget
        self.logic = logic
        self.processed = []
        self.blocked = []
        self.done = set()
        self.proved = {}
        self.reserved = set(pair.signature.constants) if pair.signature is not None else set()

    def derives(self, phi) -> bool:
        key = (self.t.asserted, phi)
        if key not in self.proved:
            self.proved[key] = phi in self.t.asserted or isinstance(
                bounded_derive(self.t.asserted, phi, self.db, self.logic), Proven)
        return self.proved[key]

    def consistent_with(self, phi) -> bool:
        trial = self.t.assert_(phi)
        return not isinstance(pair_consistent_bounded(trial, self.db, self.logic), Refuted)

    def pool(self, cls):
        s = set()
        for f in self.t.asserted + self.t.denied:
            s.update(g for g in subformulas(f) if isinstance(g, cls) and is_sentence(g))
        return sorted((g for g in s if g not in self.done), key=sort_key)

    def used_constants(self):
        cs = set(self.reserved)
        for f in self.t.asserted + self.t.denied:
            cs |= constants_of(f)
        return cs

    def disjunction(self, n) -> bool:
        for d in self.pool(Or):
            if not self.derives(d) or self.derives(d.left) or self.derives(d.right):
                continue
            self.done.add(d)
            for side in (d.left, d.right):
                if self.consistent_with(side):
                    self.t = self.t.assert_(side)
                    self.processed.append(SaturationStep(n, "disjunction", d, side))
                    return True
            self.blocked.append(SaturationStep(n, "disjunction", d))
            return True
        return False

    def existential(self, n) -> bool:
        for e in self.pool(Exists):
            if not self.derives(e):
                continue
            used = self.used_constants()
            if any(self.derives(substitute_var(e.body, e.var, Const(c))) for c in sorted(used)):
                continue
            self.done.add(e)
            fresh = next((c for c in self.sig.constants if c not in used), None)
            inst = None if fresh is None else substitute_var(e.body, e.var, Const(fresh))
            if inst is not None and self.consistent_with(inst):
                self.t = self.t.assert_(inst)
                self.processed.append(SaturationStep(n, "existential", e, inst, fresh))
            else:
                self.blocked.append(SaturationStep(n, "existential", e, None, fresh))
            return True
        return False

    def diamond(self, n) -> bool:
        for z in self.pool(Dia):
            if self.derives(z):
                continue
            self.done.add(z)
            if self.consistent_with(z):
                self.t = self.t.assert_(z)
                self.processed.append(SaturationStep(n, "diamond", z, z))
                return True
            self.processed.append(SaturationStep(n, "diamond", z, None))
        return False


def bounded_saturate(pair: TheoryApprox, target_sig: Signature, budget: int, mode: str = "plain",
                     derive_budget: int = 200, logic: LogicId | None = None):
    """Extend ``pair`` by the alternating saturation schedule for at most ``budget`` steps.

    Plain mode alternates a disjunction step and an existential step; diamond
    mode cycles disjunction, existential, diamond.  Candidates are the
    sentence subformulas of the current pair in length-then-text order.
    Derivability and consistency are the bounded tests at ``derive_budget``,
    and every addition is re-checked so the result is never refuted at that
    budget.  A sentence whose every option is refuted is recorded as blocked.
    """
    if mode not in ("plain", "diamond"):
        raise ValueError(f"unknown mode {mode!r}")
    if budget < 0:
        raise ValueError("budget must be non-negative")
    if pair.signature is not None and not pair.signature.constant_set() <= target_sig.constant_set():
        raise ValueError("target signature must extend the pair's signature")
    r = pair_consistent_bounded(pair, derive_budget, logic)
    if isinstance(r, Refuted):
        raise InitialRefutation(r.proof)
    s = _Saturator(pair, target_sig, derive_budget, logic)
    phases = (s.disjunction, s.existential) if mode == "plain" else (s.disjunction, s.existential, s.diamond)
    idle = 0
    for n in range(budget):
        if phases[n % len(phases)](n + 1):
            idle = 0
        else:
            idle += 1
            if idle >= len(phases):
                return SaturatedApprox(s.t, tuple(s.processed), n + 1, tuple(s.blocked))
    return BudgetExhausted(s.t, tuple(s.processed), budget, tuple(s.blocked))


def is_phi_averse(t: TheoryApprox, phi: Formula, derive_budget: int | None = None,
                  logic: LogicId | None = None) -> Report:
    """Each asserted box(phi | psi) needs dia(psi) asserted (or derived within ``derive_budget``)."""
    out = []
    for f in t.asserted:
        if isinstance(f, Box) and isinstance(f.body, Or) and f.body.left == phi:
            want = Dia(f.body.right)
            if want in t.asserted:
                continue
            if derive_budget is not None and isinstance(bounded_derive(t.asserted, want, derive_budget, logic), Proven):
                continue
            out.append(Violation("phi-averse", (print_formula(f),),
                                 f"{print_formula(f)} asserted without {print_formula(want)}"))
    return Report(out)
