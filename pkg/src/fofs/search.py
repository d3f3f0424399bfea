"""Bounded model enumeration, countermodel search and the soundness fuzz harness.

Countermodel search works on rooted models: truth at a world only depends on
the submodel it generates, so a witness may always be taken to be the root.
Skeletons (frame, domains, equality, constants) are enumerated up to
renaming; predicate extensions are then filled in by depth-first search,
pruned with an interval evaluation of the sequent.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations_with_replacement, permutations, product

from . import _pykernels, kernels
from .frameclasses import FrameClassSpec, check_membership, random_model
from .gen import random_one_place, random_sentence
from .logics import LogicId
from .parsing import print_formula
from .proof.ipc import ipc_skeleton_valid
from .proof.schemas import make_axiom
from .semantics import Evaluator, Frame, Model, Report, Violation, _bits, validate_model
from .syntax import (
    BOT, And, Const, Eq, Exists, Forall, Formula, Imp, Or, Pred, Signature, constants_of,
    neg, predicates_of, subformulas,
)

__all__ = ["SearchBounds", "Found", "NotFoundWithinBounds", "enumerate_models", "find_countermodel",
           "soundness_fuzz", "rooted_frames", "frames_up_to_iso", "random_int_tautology",
           "random_axiom_instance", "classical_dne", "model_key"]


@dataclass(frozen=True)
class SearchBounds:
    max_worlds: int = 3
    max_domain: int = 3
    max_predicates: int | None = None
    tuple_cap: int | None = None

    def __post_init__(self):
        for v in (self.max_worlds, self.max_domain, self.max_predicates, self.tuple_cap):
            if v is not None and v < 1:
                raise ValueError("search bounds must be at least 1")

    @classmethod
    def parse(cls, text: str) -> "SearchBounds":
        """``"W,D"`` or ``"W,D,P"`` or ``"W,D,P,T"``."""
        parts = [int(p) for p in text.split(",") if p.strip()]
        if not 2 <= len(parts) <= 4:
            raise ValueError(f"bounds must look like W,D[,P[,T]]: {text!r}")
        return cls(*parts)


@dataclass
class Found:
    model: Model
    world: str
    stats: dict = field(default_factory=dict)

    def __bool__(self):
        return True


@dataclass
class NotFoundWithinBounds:
    stats: dict = field(default_factory=dict)

    def __bool__(self):
        return False

    @property
    def models_examined(self) -> int:
        return self.stats.get("models", 0)


_COND_BITS = {"serial": 1, "reflexive": 2, "transitive": 4}


def _cond_bits(conds) -> int:
    return sum(_COND_BITS[c] for c in conds)


# ---------------------------------------------------------------- frames

@lru_cache(maxsize=None)
def _natural_posets(n: int) -> tuple:
    """Partial orders with i <= j only if i <= j as integers; every poset has such a labeling."""
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    out = []
    for bits in range(1 << len(pairs)):
        leq = [1 << w for w in range(n)]
        for k, (i, j) in enumerate(pairs):
            if bits >> k & 1:
                leq[i] |= 1 << j
        if all(not leq[v] & ~leq[w] for w in range(n) for v in _bits(leq[w])):
            out.append(tuple(leq))
    return tuple(out)


def _decode(n, code):
    row = (1 << n) - 1
    return tuple((code >> (w * n)) & row for w in range(n))


def _permute(rows, perm):
    """Relabel world w as perm[w]."""
    out = [0] * len(rows)
    for w, m in enumerate(rows):
        acc = 0
        for v in _bits(m):
            acc |= 1 << perm[v]
        out[perm[w]] = acc
    return tuple(out)


def _reach(n, leq, r):
    reach = [leq[w] | r[w] | 1 << w for w in range(n)]
    changed = True
    while changed:
        changed = False
        for w in range(n):
            acc = reach[w]
            for v in _bits(reach[w]):
                acc |= reach[v]
            if acc != reach[w]:
                reach[w] = acc
                changed = True
    return reach


@lru_cache(maxsize=None)
def rooted_frames(n: int, conds: frozenset = frozenset()) -> tuple:
    """Frames on worlds 0..n-1 generated by world 0, one per renaming class fixing the root."""
    seen = set()
    cb = _cond_bits(conds)
    full = (1 << n) - 1
    for leq in _natural_posets(n):
        for code in kernels.fc_relations(n, list(leq), cb):
            r = _decode(n, code)
            reach = _reach(n, leq, r)
            for root in range(n):
                if reach[root] != full:
                    continue
                best = None
                others = [w for w in range(n) if w != root]
                for rest in permutations(range(1, n)):
                    perm = [0] * n
                    perm[root] = 0
                    for w, t in zip(others, rest):
                        perm[w] = t
                    key = (_permute(leq, perm), _permute(r, perm))
                    if best is None or key < best:
                        best = key
                seen.add(best)
    return tuple(sorted(seen))


@lru_cache(maxsize=None)
def frames_up_to_iso(n: int, conds: frozenset = frozenset()) -> tuple:
    """All valid frames on n worlds satisfying ``conds``, one per renaming class."""
    seen = set()
    cb = _cond_bits(conds)
    for leq in _natural_posets(n):
        for code in kernels.fc_relations(n, list(leq), cb):
            r = _decode(n, code)
            best = min((_permute(leq, p), _permute(r, p)) for p in permutations(range(n)))
            seen.add(best)
    return tuple(sorted(seen))


@lru_cache(maxsize=1 << 16)
def _upsets(n, rel, within=None):
    """Subsets closed under ``rel`` successors, optionally inside ``within``."""
    full = (1 << n) - 1 if within is None else within
    out = []
    sub = full
    while True:
        ok = True
        for w in _bits(sub):
            if rel[w] & ~sub:
                ok = False
                break
        if ok:
            out.append(sub)
        if sub == 0:
            break
        sub = (sub - 1) & full
    return tuple(sorted(out, key=lambda m: (bin(m).count("1"), m)))


@lru_cache(maxsize=1 << 14)
def _box_rows(n, leq, r):
    out = []
    for w in range(n):
        acc = 0
        for v in _bits(leq[w]):
            acc |= r[v]
        out.append(acc)
    return tuple(out)


# ---------------------------------------------------------------- skeletons

@dataclass
class _Skeleton:
    n: int
    leq: tuple
    r: tuple
    domw: list          # element -> world mask
    consts: dict        # constant -> element
    eq: dict            # (a, b) with a < b -> world mask where a ~ b

    def dom_sum(self):
        return sum(bin(m).count("1") for m in self.domw)


def _rgs(k, limit):
    """Restricted growth strings of length k with values < limit."""
    def go(prefix, mx):
        if len(prefix) == k:
            yield tuple(prefix)
            return
        for v in range(min(mx + 2, limit)):
            yield from go(prefix + [v], max(mx, v))
    yield from go([], -1)


def _equalities(n, leq, r, domw, spec, needed):
    """Equality systems: per pair a < b, the up-closed set of worlds where a ~ b."""
    E = len(domw)
    pairs = [(a, b) for a in range(E) for b in range(a + 1, E)]
    if not needed or not pairs:
        yield {}
        return
    opts = [_upsets(n, leq, domw[a] & domw[b]) for a, b in pairs]
    forward = "forward" in spec.equality_transfer
    backward = "backward" in spec.equality_transfer
    idx = {p: k for k, p in enumerate(pairs)}
    triples = [(idx[(a, b)], idx[(b, c)], idx[(a, c)]) for a in range(E) for b in range(a + 1, E)
               for c in range(b + 1, E)]
    edges = [(w, v) for w in range(n) for v in _bits(r[w])]
    for choice in product(*opts):
        ok = True
        for ab, bc, ac in triples:
            x, y, z = choice[ab], choice[bc], choice[ac]
            if x & y & ~z or x & z & ~y or y & z & ~x:
                ok = False
                break
        if ok and (forward or backward):
            for k, (a, b) in enumerate(pairs):
                m = choice[k]
                both = domw[a] & domw[b]
                for w, v in edges:
                    if both >> w & 1:
                        if forward and m >> w & 1 and not m >> v & 1:
                            ok = False
                        elif backward and m >> v & 1 and not m >> w & 1:
                            ok = False
                if not ok:
                    break
        if ok:
            yield dict(zip(pairs, choice))


def _domain_systems(n, frame, consts, max_domain, extra_elements):
    leq, r = frame
    reach = tuple(_reach(n, leq, r))
    full = (1 << n) - 1
    ups = [u for u in _upsets(n, reach) if u]
    for assign in _rgs(len(consts), max_domain):
        j = max(assign) + 1 if assign else 0
        room = max_domain - j if extra_elements else 0
        cmap = dict(zip(consts, assign))
        for e in range(room + 1):
            for combo in combinations_with_replacement(range(len(ups)), e):
                yield [full] * j + [ups[k] for k in combo], cmap


# ---------------------------------------------------------------- countermodels

class _Problem:
    def __init__(self, gamma, goal, spec: FrameClassSpec, bounds: SearchBounds):
        self.gamma = tuple(gamma)
        self.goal = goal
        self.spec = spec
        self.bounds = bounds
        fs = self.gamma + (goal,)
        arities = {}
        consts = set()
        for f in fs:
            for p, a in predicates_of(f).items():
                if arities.setdefault(p, a) != a:
                    raise ValueError(f"predicate {p} used with two arities")
            consts |= constants_of(f)
        if bounds.max_predicates is not None and len(arities) > bounds.max_predicates:
            raise ValueError(f"sequent uses {len(arities)} predicates, above the bound {bounds.max_predicates}")
        self.sig = Signature(sorted(consts), arities, allow_generated=True)
        self.consts = sorted(consts)
        self.preds = sorted(arities.items())
        self.pid = {p: k for k, (p, _) in enumerate(self.preds)}
        subs = [g for f in fs for g in subformulas(f)]
        self.quantified = any(isinstance(g, (Forall, Exists)) for g in subs)
        # without '=' in the sequent the identity partition is complete for refutation
        self.needs_eq = any(isinstance(g, Eq) for g in subs)
        # which identities an atom can see: two variables see everything; otherwise
        # only classes holding an element of eq_anchor, and pairs inside eq_named
        self.eq_open = False
        self.eq_anchor, self.eq_named = set(), set()
        for g in subs:
            if isinstance(g, Eq) and g.left != g.right:
                names = {t.name for t in (g.left, g.right) if isinstance(t, Const)}
                if not names:
                    self.eq_open = True
                elif len(names) == 1:
                    self.eq_anchor |= names
                else:
                    self.eq_named |= names
        self.needs_eq = self.eq_open or bool(self.eq_anchor or self.eq_named)
        cslots = {c: k for k, c in enumerate(self.consts)}
        self.impl = kernels.backend
        self.gprogs = [kernels.compile_formula(f, self.pid, cslots, (), self.impl) for f in self.gamma]
        self.goalprog = kernels.compile_formula(goal, self.pid, cslots, (), self.impl)
        self.layouts = {}
        # argument patterns of predicate atoms: a constant name or None for a variable
        self.patterns = {}
        for g in subs:
            if isinstance(g, Pred):
                pat = tuple(t.name if isinstance(t, Const) else None for t in g.args)
                self.patterns.setdefault(self.pid[g.name], set()).add(pat)

    def layout(self, E):
        """Predicate slot layout for E elements: offsets, slot tuples, slot predicate."""
        lay = self.layouts.get(E)
        if lay is None:
            poff, slots, slot_pred = [], [], []
            for k, (p, ar) in enumerate(self.preds):
                poff.append(len(slots))
                for code in range(E ** ar):
                    t, x = [], code
                    for _ in range(ar):
                        t.append(x % E)
                        x //= E
                    slots.append(tuple(t))
                    slot_pred.append(k)
            index = {(slot_pred[s], t): s for s, t in enumerate(slots)}
            lay = self.layouts[E] = (poff, slots, slot_pred, index)
        return lay


def _viable(km, pb, env) -> bool:
    """False when no completion of the current partial model can be a witness at world 0."""
    lo, _ = km.eval_interval(pb.goalprog, env)
    if lo & 1:
        return False
    for p in pb.gprogs:
        _, hi = km.eval_interval(p, env)
        if not hi & 1:
            return False
    return True


def _swaps(domw, j):
    """Adjacent extra elements with one domain; swapping them is a skeleton automorphism."""
    return [(a, a + 1) for a in range(j, len(domw) - 1) if domw[a] == domw[a + 1]]


def _not_leader(eq, swaps) -> bool:
    """True when some swap maps the equality choice to a lexicographically smaller one."""
    if not swaps:
        return False
    keys = sorted(eq)
    cur = [eq[k] for k in keys]
    for a, b in swaps:
        def sw(x):
            return b if x == a else a if x == b else x
        img = []
        for x, y in keys:
            u, v = sw(x), sw(y)
            img.append(eq[(u, v) if u < v else (v, u)])
        if img < cur:
            return True
    return False


def _invisible(eq, E, anchor, named) -> bool:
    """True when some identity no atom can see is present.

    Dropping it leaves a finer identity system with the same truths, which
    is enumerated too: classes holding an ``anchor`` element stay whole,
    pairs inside ``named`` stay, all other identities are removed.
    """
    for (a, b), m in eq.items():
        if not m or (a in named and b in named):
            continue
        via = 0
        for k in anchor:
            via |= (m if k == a or k == b else eq[(min(k, a), max(k, a))] & eq[(min(k, b), max(k, b))])
        if m != via:
            return True
    return False


def _mergeable(domw, eq) -> bool:
    """Two elements with one domain, equal wherever they exist, act as a single element.

    The skeleton with them merged is smaller and enumerated anyway.
    """
    return any(m and domw[a] == domw[b] == m for (a, b), m in eq.items())


class _DomainContext:
    """Kernel model for one (frame, domain system); equality and slots vary on top."""

    def __init__(self, pb, n, leq, r, domw, cmap):
        self.pb = pb
        self.n, self.leq, self.r, self.domw, self.cmap = n, leq, r, domw, cmap
        E = self.E = len(domw)
        poff, self.slots, self.slot_pred, self.index = pb.layout(E)
        full = (1 << n) - 1
        region = []
        for t in self.slots:
            m = full
            for a in t:
                m &= domw[a]
            region.append(m)
        self.region = region
        self.env = [cmap[c] for c in pb.consts]
        self.ident = [0] * (E * E)
        for a in range(E):
            self.ident[a * E + a] = domw[a]
        impl = kernels.impl_for(n, pb.impl)
        self.km = impl.KModel(n, leq, _box_rows(n, leq, r), r, domw, self.ident, E, poff,
                              [0] * len(self.slots), region)
        self.cands = None
        self.swaps = _swaps(domw, len(set(cmap.values())))
        # slots no atom can read; their values are filled in after the search
        self.read = []
        for t, k in zip(self.slots, self.slot_pred):
            self.read.append(any(all(c is None or cmap[c] == a for c, a in zip(pat, t))
                                 for pat in pb.patterns.get(k, ())))

    def viable(self) -> bool:
        return _viable(self.km, self.pb, self.env)

    def loosen_eq(self):
        E, domw = self.E, self.domw
        may = [domw[a] & domw[b] for a in range(E) for b in range(E)]
        self.km.set_eq(self.ident, may)

    def set_eq(self, eq):
        E = self.E
        eqm = list(self.ident)
        for (a, b), m in eq.items():
            eqm[a * E + b] = eqm[b * E + a] = m
        self.eqm = eqm
        self.km.set_eq(eqm)

    def reps(self):
        """Per world, the least equal element of each element (None when nothing merges)."""
        E, eqm = self.E, self.eqm
        out = []
        for w in range(self.n):
            rep = list(range(E))
            moved = False
            for a in range(E):
                for b in range(a):
                    if eqm[b * E + a] >> w & 1:
                        rep[a] = b
                        moved = True
                        break
            out.append(rep if moved else None)
        return out

    def forced_at(self, s, reps):
        """Congruence: bit w of slot s equals bit w of the slot of its representative tuple."""
        t, reg = self.slots[s], self.region[s]
        out = []
        for w, rep in enumerate(reps):
            if rep is not None and reg >> w & 1:
                rt = tuple(rep[a] for a in t)
                if rt != t:
                    out.append((w, self.index[(self.slot_pred[s], rt)]))
        return out

    def order(self, eq, read):
        """Symmetry breaking between interchangeable extra elements.

        When swapping a and b fixes the identity system, the diagonal slot of
        one read predicate must not be larger for a than for b.
        """
        out = [()] * len(self.slots)
        for a, b in self.swaps:
            if any(eq.get((min(a, k), max(a, k)), 0) != eq.get((min(b, k), max(b, k)), 0)
                   for k in range(self.E) if k != a and k != b):
                continue
            for k, (_, ar) in enumerate(self.pb.preds):
                sa, sb = self.index[(k, (a,) * ar)], self.index[(k, (b,) * ar)]
                if read[sa] and read[sb]:
                    out[sb] = out[sb] + (sa,)
                    break
        return out

    def search(self, eq, stats):
        """Fill predicate slots; a Model witness or None."""
        pb = self.pb
        if self.cands is None:
            self.cands = [_upsets(self.n, self.leq, reg) for reg in self.region]
        km = self.km
        ns = len(self.slots)
        reps = self.reps() if any(eq.values()) else [None] * self.n
        merged = any(r is not None for r in reps)
        forced = [None] * ns
        # representative tuples have smaller slot numbers, so one backward sweep closes relevance
        read = list(self.read) if pb.bounds.tuple_cap is None else [True] * ns
        for s in reversed(range(ns)):
            if read[s]:
                forced[s] = self.forced_at(s, reps) if merged else ()
                for _, d in forced[s]:
                    read[d] = True
        cands = [self.cands[s] if read[s] else (0,) for s in range(ns)]
        forced_on = [forced[s] if read[s] else () for s in range(ns)]
        order = self.order(eq, read)
        if pb.bounds.tuple_cap is None and hasattr(km, "search"):
            res, nodes, models = km.search(pb.goalprog, pb.gprogs, self.env, cands, forced_on, self.region,
                                           order)
            stats["nodes"] += nodes
            stats["models"] += models
        else:
            res = _py_search(km, pb, self.env, cands, forced_on, self.region, self.slot_pred, stats, order)
        if res is None:
            return None
        for s in range(ns):
            if not read[s]:
                # copy from the representative tuple; this keeps congruence and monotonicity
                m = 0
                for w, d in (self.forced_at(s, reps) if merged else ()):
                    if res[d] >> w & 1:
                        m |= 1 << w
                res[s] = m
        sk = _Skeleton(self.n, self.leq, self.r, self.domw, self.cmap, eq)
        return _to_model(pb, sk, self.slots, self.slot_pred, res)


def _search_domain(pb, spec, n, frame, domw, cmap, stats):
    leq, r = frame
    ctx = _DomainContext(pb, n, leq, r, domw, cmap)
    if not pb.needs_eq or ctx.E < 2:
        stats["skeletons"] += 1
        stats["nodes"] += 1
        return ctx.search({}, stats) if ctx.viable() else None
    ctx.loosen_eq()
    stats["nodes"] += 1
    if not ctx.viable():
        return None
    swaps = ctx.swaps
    anchor = sorted({cmap[c] for c in pb.eq_anchor})
    named = {cmap[c] for c in pb.eq_named}
    for eq in _equalities(n, leq, r, domw, spec, True):
        if _mergeable(domw, eq) or _not_leader(eq, swaps):
            continue
        if not pb.eq_open and _invisible(eq, ctx.E, anchor, named):
            continue
        stats["skeletons"] += 1
        ctx.set_eq(eq)
        stats["nodes"] += 1
        if not ctx.viable():
            continue
        m = ctx.search(eq, stats)
        if m is not None:
            return m
    return None


def _py_search(km, pb, env, cands, forced, region, slot_pred, stats, order=None):
    cap = pb.bounds.tuple_cap
    accept = None if cap is None else _tuple_cap_check(km.n, pb, slot_pred, cap)
    return _pykernels.extension_search(km, pb.goalprog, pb.gprogs, env, cands, forced, region, stats, accept,
                                       order)


def _tuple_cap_check(n, pb, slot_pred, cap):
    def accept(masks):
        for k in range(len(pb.preds)):
            for w in range(n):
                if sum(1 for s, m in enumerate(masks) if slot_pred[s] == k and m >> w & 1) > cap:
                    return False
        return True
    return accept


def _to_model(pb, sk, slots, slot_pred, masks) -> Model:
    n = sk.n
    E = len(sk.domw)
    names = [f"w{k}" for k in range(n)]
    elems = [f"e{a}" for a in range(E)]
    frame = Frame.from_masks(names, sk.leq, sk.r)
    domains = {names[w]: [elems[a] for a in range(E) if sk.domw[a] >> w & 1] for w in range(n)}
    equal = {}
    for w in range(n):
        blocks = {}
        for a in range(E):
            if not sk.domw[a] >> w & 1:
                continue
            r_ = a
            for b in range(a):
                if sk.eq.get((b, a), 0) >> w & 1:
                    r_ = b
                    break
            blocks.setdefault(r_, []).append(elems[a])
        equal[names[w]] = [b for b in blocks.values() if len(b) > 1]
    preds = {w: {} for w in names}
    for s, m in enumerate(masks):
        p = pb.preds[slot_pred[s]][0]
        for w in _bits(m):
            preds[names[w]].setdefault(p, []).append(tuple(elems[a] for a in slots[s]))
    consts = {c: elems[a] for c, a in sk.consts.items()}
    return Model(frame, domains, equal, consts, preds, pb.sig)


def find_countermodel(gamma, goal: Formula, spec: FrameClassSpec | LogicId | str = "fs",
                      bounds: SearchBounds = SearchBounds(), minimal: bool = False):
    """A model of the class with a world forcing every member of ``gamma`` but not ``goal``.

    With ``minimal`` the witness has the fewest worlds, then the least total
    domain size, among all witnesses within the bounds.
    """
    if not isinstance(spec, FrameClassSpec):
        spec = FrameClassSpec.of(spec)
    pb = _Problem(gamma, goal, spec, bounds)
    stats = {"frames": 0, "skeletons": 0, "nodes": 0, "models": 0}
    for n in range(1, bounds.max_worlds + 1):
        frames = rooted_frames(n, frozenset(spec.modal_conditions))
        stats["frames"] += len(frames)
        work = ((fr, domw, cmap) for fr in frames
                for domw, cmap in _domain_systems(n, fr, pb.consts, bounds.max_domain, pb.quantified))
        if minimal:
            work = sorted(work, key=lambda item: sum(bin(m).count("1") for m in item[1]))
        for fr, domw, cmap in work:
            m = _search_domain(pb, spec, n, fr, domw, cmap, stats)
            if m is not None:
                _confirm(m, pb, spec)
                return Found(m, m.worlds[0], stats)
    return NotFoundWithinBounds(stats)


def _confirm(m: Model, pb: _Problem, spec):
    rep = validate_model(m) + check_membership(m, spec)
    if not rep.ok:
        raise AssertionError(f"search produced an invalid model: {rep.violations[0]}")
    ev = Evaluator(m)
    if ev.holds(0, {}, pb.goal) or not all(ev.holds(0, {}, g) for g in pb.gamma):
        raise AssertionError("search witness failed direct evaluation")


# ---------------------------------------------------------------- enumeration

def model_key(m: Model) -> tuple:
    """Encoding of ``m`` that is minimal over all world and element renamings."""
    n, E = m.n, len(m.elements)
    f = m.frame
    consts = sorted(m.const)
    preds = sorted(m.signature.predicates.items())
    best = None
    for pw in permutations(range(n)):
        leq = _permute(f.leq_mask, pw)
        r = _permute(f.r_mask, pw)
        for pe in permutations(range(E)):
            dom = [0] * n
            for w in range(n):
                dom[pw[w]] = sum(1 << pe[a] for a in m.dom[w])
            eq = [0] * n
            ext = [None] * n
            for w in range(n):
                rep = m.rep[w]
                bits = 0
                for a in m.dom[w]:
                    for b in m.dom[w]:
                        if rep[a] == rep[b]:
                            bits |= 1 << (pe[a] * E + pe[b])
                eq[pw[w]] = bits
                ext[pw[w]] = tuple(tuple(sorted(tuple(pe[a] for a in t) for t in m.ext[w].get(p, ())))
                                   for p, _ in preds)
            key = (leq, r, tuple(dom), tuple(eq), tuple(pe[m.const[c]] for c in consts), tuple(ext))
            if best is None or key < best:
                best = key
    return (n, E) + best


def enumerate_models(spec: FrameClassSpec | LogicId | str, sig: Signature, bounds: SearchBounds):
    """Every valid in-class model within bounds, once per renaming class, in a fixed order."""
    if not isinstance(spec, FrameClassSpec):
        spec = FrameClassSpec.of(spec)
    preds = sorted(sig.predicates.items())
    if bounds.max_predicates is not None:
        preds = preds[:bounds.max_predicates]
    sig = Signature(sig.constants, dict(preds), allow_generated=True)
    consts = sorted(sig.constants)
    seen = set()
    for n in range(1, bounds.max_worlds + 1):
        for leq, r in frames_up_to_iso(n, frozenset(spec.modal_conditions)):
            reach = tuple(_reach(n, leq, r))
            ups = _upsets(n, reach)
            full = (1 << n) - 1
            for E in range(0 if not consts else 1, bounds.max_domain + 1):
                for domw in product([u for u in ups if u], repeat=E):
                    for assign in product(range(E), repeat=len(consts)):
                        if any(domw[a] != full for a in assign):
                            continue
                        for eq in _equalities(n, leq, r, list(domw), spec, True):
                            sk = _Skeleton(n, leq, r, list(domw), dict(zip(consts, assign)), eq)
                            for m in _all_extensions(sk, sig, bounds.tuple_cap):
                                k = model_key(m)
                                if k not in seen:
                                    seen.add(k)
                                    yield m


def _all_extensions(sk: _Skeleton, sig: Signature, cap):
    """Every congruent, monotone interpretation of the predicates on a skeleton."""
    class _P:
        pass
    pb = _P()
    pb.preds = sorted(sig.predicates.items())
    pb.sig = sig
    n, E = sk.n, len(sk.domw)
    slots, slot_pred = [], []
    for k, (p, ar) in enumerate(pb.preds):
        for t in product(range(E), repeat=ar):
            slots.append(t)
            slot_pred.append(k)
    region = []
    for t in slots:
        m = (1 << n) - 1
        for a in t:
            m &= sk.domw[a]
        region.append(m)
    cands = [_upsets(n, sk.leq, reg) for reg in region]
    for masks in product(*cands):
        m = _to_model(pb, sk, slots, slot_pred, masks)
        if cap is not None and any(len(ts) > cap for tab in m.ext for ts in tab.values()):
            continue
        if validate_model(m).ok:
            yield m


# ---------------------------------------------------------------- soundness fuzzing

def random_int_tautology(rng: random.Random, atoms, depth: int = 3, tries: int = 200) -> Formula:
    """A random combination of ``atoms`` whose propositional skeleton IPC proves."""
    for _ in range(tries):
        f = _prop(rng, atoms, depth)
        if ipc_skeleton_valid(f):
            return f
    a = rng.choice(atoms)
    return Imp(a, a)


def _prop(rng, atoms, d):
    if d <= 0 or rng.random() < 0.25:
        return rng.choice(list(atoms) + [BOT])
    k = rng.randrange(4)
    a, b = _prop(rng, atoms, d - 1), _prop(rng, atoms, d - 1)
    return (And(a, b), Or(a, b), Imp(a, b), Imp(a, Imp(b, a)))[k]


def random_axiom_instance(name: str, sig: Signature, rng: random.Random, depth: int = 2) -> Formula:
    consts = list(sig.constants)
    if name == "INT":
        atoms = [random_sentence(sig, rng, depth) for _ in range(3)]
        return random_int_tautology(rng, atoms)
    if name in ("UNIV", "EXIST"):
        return make_axiom(name, phi=random_one_place(sig, rng, depth), c=rng.choice(consts))
    if name == "FORALL-ANT":
        return make_axiom(name, phi=random_one_place(sig, rng, depth), psi=random_sentence(sig, rng, depth))
    if name == "FORALL-CON":
        return make_axiom(name, phi=random_sentence(sig, rng, depth), psi=random_one_place(sig, rng, depth))
    if name == "ID-REF":
        return make_axiom(name, c=rng.choice(consts))
    if name in ("NI", "ND"):
        return make_axiom(name, c1=rng.choice(consts), c2=rng.choice(consts))
    if name == "ID-SUB":
        return make_axiom(name, phi=_modal_free_one_place(sig, rng, depth),
                          c1=rng.choice(consts), c2=rng.choice(consts))
    return make_axiom(name, phi=random_sentence(sig, rng, depth), psi=random_sentence(sig, rng, depth))


def _modal_free_one_place(sig, rng, depth):
    from .syntax import is_modal_free
    for _ in range(50):
        f = random_one_place(sig, rng, depth)
        if is_modal_free(f):
            return f
    return random_one_place(sig, rng, 0)


def classical_dne(sig: Signature, rng: random.Random, depth: int = 0) -> Formula:
    """Double-negation elimination, valid classically but not here (a negative control)."""
    p = Pred(sorted(sig.predicates)[0], (Const(rng.choice(sig.constants)),) * sig.predicates[sorted(sig.predicates)[0]])
    return Imp(neg(neg(p)), p)


FUZZ_SIGNATURE = Signature(("c", "d"), {"P": 1, "Q": 1, "S": 2})


def soundness_fuzz(logic: LogicId | str = "fs", n_models: int = 200, n_instances: int = 50, seed: int = 0,
                   schemas=None, bounds=(4, 3, 2), sig: Signature = FUZZ_SIGNATURE, depth: int = 2) -> Report:
    """Evaluate random axiom instances of ``logic`` at every world of random in-class models.

    ``schemas`` maps extra names to instance builders ``(sig, rng) -> Formula``;
    the axioms of the logic are always included.
    """
    if isinstance(logic, str):
        logic = LogicId.parse(logic)
    spec = FrameClassSpec.of(logic)
    rng = random.Random(seed)
    instances = []
    for name in logic.axioms():
        for _ in range(n_instances):
            instances.append((name, random_axiom_instance(name, sig, rng, depth)))
    for name, build in (schemas or {}).items():
        for _ in range(n_instances):
            instances.append((name, build(sig, rng)))
    preds = sorted(sig.predicates)
    pid = {p: k for k, p in enumerate(preds)}
    consts = list(sig.constants)
    cslots = {c: k for k, c in enumerate(consts)}
    compiled = {}
    out = []
    for k in range(n_models):
        mseed = seed * 1_000_003 + k
        m = random_model(spec, bounds, mseed, sig)
        impl, km, _ = m._kernel_data()
        key = id(impl)
        if key not in compiled:
            compiled[key] = [kernels.compile_formula(f, pid, cslots, (), impl) for _, f in instances]
        env = [m.const[c] for c in consts]
        full = km.full
        for (name, f), prog in zip(instances, compiled[key]):
            mask = km.eval(prog, env)
            if mask != full:
                bad = [m.worlds[w] for w in _bits(full & ~mask)]
                out.append(Violation("unsound", (name, print_formula(f), mseed, bad[0]),
                                     f"{name} instance {print_formula(f)} fails at {bad[0]} "
                                     f"of model seed {mseed}"))
    return Report(out)
