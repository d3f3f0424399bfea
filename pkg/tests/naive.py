"""Brute-force reference checks used as oracles by the tests.

Nothing here imports the library's checking code; relations are plain
numpy boolean arrays or sets of pairs.
"""
from itertools import permutations, product

import numpy as np

FLAG = {"reflexivity": 1, "transitivity": 2, "antisymmetry": 4, "FC1": 8, "FC2": 16}


def posets(n):
    """Every partial order on range(n), as an (n, n) boolean array."""
    out = []
    for bits in product((0, 1), repeat=n * n):
        L = np.array(bits, dtype=bool).reshape(n, n)
        if not L.diagonal().all():
            continue
        if ((L & L.T) & ~np.eye(n, dtype=bool)).any():
            continue
        if ((L.astype(int) @ L.astype(int) > 0) & ~L).any():
            continue
        out.append(L)
    return out


def iso_posets(n):
    """One partial order per isomorphism class."""
    seen, out = set(), []
    for L in posets(n):
        key = min(L[np.ix_(p, p)].tobytes() for p in map(list, permutations(range(n))))
        if key not in seen:
            seen.add(key)
            out.append(L)
    return out


def all_relations(n):
    """Every relation on range(n): array of shape (2**(n*n), n, n); row w of code k is bits w*n.. of k."""
    codes = np.arange(1 << (n * n), dtype=np.int64)
    bits = (codes[:, None] >> np.arange(n * n)) & 1
    return bits.astype(bool).reshape(-1, n, n)


def to_masks(A):
    n = A.shape[-1]
    weights = 1 << np.arange(n)
    return [int(x) for x in (A.astype(np.int64) * weights).sum(-1)]


def _compose(A, B):
    return np.einsum("...ij,...jk->...ik", A.astype(np.int64), B.astype(np.int64)) > 0


def frame_flags(L, R):
    """Bitmask of failed frame conditions for one leq array L and a batch R of shape (B, n, n)."""
    B, n = R.shape[0], L.shape[0]
    out = np.zeros(B, dtype=np.int64)
    fixed = 0
    if not L.diagonal().all():
        fixed |= FLAG["reflexivity"]
    if (_compose(L, L) & ~L).any():
        fixed |= FLAG["transitivity"]
    if ((L & L.T) & ~np.eye(n, dtype=bool)).any():
        fixed |= FLAG["antisymmetry"]
    out |= fixed
    Lb = np.broadcast_to(L, R.shape)
    # FC1: w R v <= v2 needs some w' with w <= w' R v2
    fc1 = (_compose(R, Lb) & ~_compose(Lb, R)).any(axis=(1, 2))
    out[fc1] |= FLAG["FC1"]
    # FC2: w <= w2 and w R v needs some v' with v <= v' and w2 R v'
    reach = _compose(R, np.broadcast_to(L.T, R.shape))   # [w2, v]: some v' with w2 R v' and v <= v'
    miss = _compose(Lb, ~reach)                           # [w, v]: some w2 >= w missing v
    fc2 = (R & miss).any(axis=(1, 2))
    out[fc2] |= FLAG["FC2"]
    return out


def frame_witnesses(n, leq, r):
    """Violation witnesses from the definitions; leq and r are sets of pairs."""
    W = range(n)
    out = set()
    for w in W:
        if (w, w) not in leq:
            out.add(("reflexivity", (w,)))
    for w, v, u in product(W, W, W):
        if (w, v) in leq and (v, u) in leq and (w, u) not in leq:
            out.add(("transitivity", (w, v, u)))
        if (w, v) in r and (v, u) in leq and not any((w, x) in leq and (x, u) in r for x in W):
            out.add(("FC1", (w, v, u)))
        if (w, v) in leq and (w, u) in r and not any((u, x) in leq and (v, x) in r for x in W):
            out.add(("FC2", (w, v, u)))
    for w, v in product(W, W):
        if w < v and (w, v) in leq and (v, w) in leq:
            out.add(("antisymmetry", (w, v)))
    return out


def modal_conditions(R, conds):
    """Boolean per relation in the batch: R satisfies every condition in conds."""
    ok = np.ones(R.shape[0], dtype=bool)
    if "serial" in conds:
        ok &= R.any(axis=2).all(axis=1)
    if "reflexive" in conds:
        ok &= R.diagonal(axis1=1, axis2=2).all(axis=1)
    if "transitive" in conds:
        ok &= ~(_compose(R, R) & ~R).any(axis=(1, 2))
    return ok


def transfer_ok(n, r, same, forward, backward):
    """Identity transfer along R; same[w] is True when the two elements are identified at w."""
    for w, v in r:
        if forward and same[w] and not same[v]:
            return False
        if backward and same[v] and not same[w]:
            return False
    return True


# ---------------------------------------------------------------- evaluation

def holds(model, w, g, f):
    """Truth by the clauses, read off the model's public accessors."""
    from fofs.syntax import And, Bot, Box, Dia, Eq, Exists, Forall, Imp, Or, Pred, Var

    fr = model.frame
    W = fr.worlds

    def den(t):
        return g[t.name] if isinstance(t, Var) else model.elements[model.const[t.name]]

    if isinstance(f, Bot):
        return False
    if isinstance(f, Pred):
        return tuple(den(t) for t in f.args) in model.extension(w, f.name)
    if isinstance(f, Eq):
        a, b = den(f.left), den(f.right)
        d = model.domain(w)
        return a in d and b in d and model.equal(w, a, b)
    if isinstance(f, And):
        return holds(model, w, g, f.left) and holds(model, w, g, f.right)
    if isinstance(f, Or):
        return holds(model, w, g, f.left) or holds(model, w, g, f.right)
    if isinstance(f, Imp):
        return all(not holds(model, v, g, f.left) or holds(model, v, g, f.right)
                   for v in W if fr.leq(w, v))
    if isinstance(f, Box):
        return all(holds(model, u, g, f.body)
                   for v in W if fr.leq(w, v) for u in W if fr.r(v, u))
    if isinstance(f, Dia):
        return any(holds(model, u, g, f.body) for u in W if fr.r(w, u))
    if isinstance(f, Forall):
        return all(holds(model, v, {**g, f.var: a}, f.body)
                   for v in W if fr.leq(w, v) for a in model.domain(v))
    if isinstance(f, Exists):
        return any(holds(model, w, {**g, f.var: a}, f.body) for a in model.domain(w))
    raise TypeError(f)


# ---------------------------------------------------------------- Ferrers sets

def ferrers_masks(l, m, chunk=1 << 20):
    """Subsets of [0,l]x[0,m] (point (i,j) is bit i*(m+1)+j) that are Ferrers sets."""
    h = m + 1
    nbits = (l + 1) * h
    not_first_col = sum(1 << (i * h + j) for i in range(1, l + 1) for j in range(h))
    not_top_row = sum(1 << (i * h + j) for i in range(l + 1) for j in range(m))
    origin, corner = 1, 1 << (l * h + m)
    out = []
    total = 1 << nbits
    for start in range(0, total, chunk):
        S = np.arange(start, min(total, start + chunk), dtype=np.int64)
        ok = ((S & origin) != 0) & ((S & corner) != 0)
        ok &= (((S & not_first_col) >> h) & ~S) == 0    # (i,j) needs (i-1,j)
        ok &= (((S & not_top_row) << 1) & ~S) == 0      # (i,j) needs (i,j+1)
        out.append(S[ok])
    return np.concatenate(out)


def mask_points(mask, l, m):
    h = m + 1
    return frozenset((i, j) for i in range(l + 1) for j in range(h) if mask >> (i * h + j) & 1)
