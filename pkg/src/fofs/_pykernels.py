"""Pure-Python bitset kernels; the reference behaviour for the compiled ones.

Worlds are bit positions in Python ints.  A program is a flat node table
produced by :func:`fofs.kernels.compile_formula`.
"""

OP_BOT, OP_PRED, OP_EQ, OP_AND, OP_OR, OP_IMP, OP_BOX, OP_DIA, OP_ALL, OP_EX = range(10)


class Program:
    __slots__ = ("ops", "xa", "xb", "xc", "args", "root", "nslots", "inv")

    def __init__(self, ops, xa, xb, xc, args, root, nslots, inv=None):
        self.ops = list(ops)
        self.xa = list(xa)
        self.xb = list(xb)
        self.xc = list(xc)
        self.args = list(args)
        self.root = root
        self.nslots = nslots
        # invariance flags are a hint for the compiled evaluator only
        self.inv = list(inv) if inv is not None else [0] * len(self.ops)


def _upward_ok(n, rel, bad, valid):
    """Worlds w in ``valid`` with rel[w] & bad == 0."""
    if not bad:
        return valid
    out = 0
    w = 0
    v = valid
    while v:
        if v & 1 and not rel[w] & bad:
            out |= 1 << w
        v >>= 1
        w += 1
    return out


def _some(n, rel, target, valid):
    out = 0
    w = 0
    v = valid
    while v:
        if v & 1 and rel[w] & target:
            out |= 1 << w
        v >>= 1
        w += 1
    return out


class KModel:
    """Bitset view of a finite model.

    ``pm`` holds one world mask per (predicate, tuple) slot, predicate ``p``
    starting at ``poff[p]``; ``pm_may`` is the upper bound used by interval
    evaluation (defaults to ``pm``), and ``eqm_may`` likewise for equality.
    Programs read constants from ``env`` slots, so one program serves every
    model over the same signature.
    """

    def __init__(self, n, up, boxr, rs, domw, eqm, n_elems, poff, pm, pm_may=None, eqm_may=None):
        self.n = n
        self.poff = list(poff)
        self.full = (1 << n) - 1
        self.up = list(up)
        self.boxr = list(boxr)
        self.rs = list(rs)
        self.domw = list(domw)
        self.eqm = list(eqm)
        self.eqm_may = list(eqm if eqm_may is None else eqm_may)
        self.E = n_elems
        self.pm = list(pm)
        self.pm_may = list(pm if pm_may is None else pm_may)

    def set_eq(self, eqm, eqm_may=None):
        self.eqm = list(eqm)
        self.eqm_may = list(eqm if eqm_may is None else eqm_may)

    def set_pred(self, idx, must, may=None):
        self.pm[idx] = must
        self.pm_may[idx] = must if may is None else may

    def get_pred(self, idx):
        return self.pm[idx], self.pm_may[idx]

    def _arg(self, prog, t, env):
        return env[t] if t >= 0 else -t - 1

    def _index(self, prog, i, env):
        idx = self.poff[prog.xa[i]]
        mult = 1
        base = prog.xb[i]
        for k in range(prog.xc[i]):
            t = prog.args[base + k]
            idx += (env[t] if t >= 0 else -t - 1) * mult
            mult *= self.E
        return idx

    def eval(self, prog, env=None, valid=None):
        env = list(env) if env else []
        env += [0] * (prog.nslots - len(env))
        if valid is None:
            valid = self.full
        return self._ev(prog, prog.root, env, valid)

    def _ev(self, p, i, env, valid):
        op = p.ops[i]
        if op == OP_PRED:
            return self.pm[self._index(p, i, env)] & valid
        if op == OP_EQ:
            a = self._arg(p, p.xa[i], env)
            b = self._arg(p, p.xb[i], env)
            return self.eqm[a * self.E + b] & valid
        if op == OP_AND:
            return self._ev(p, p.xa[i], env, valid) & self._ev(p, p.xb[i], env, valid)
        if op == OP_OR:
            return self._ev(p, p.xa[i], env, valid) | self._ev(p, p.xb[i], env, valid)
        if op == OP_IMP:
            a = self._ev(p, p.xa[i], env, valid)
            b = self._ev(p, p.xb[i], env, valid)
            return _upward_ok(self.n, self.up, valid & a & ~b, valid)
        if op == OP_BOX:
            f = self._ev(p, p.xa[i], env, valid)
            return _upward_ok(self.n, self.boxr, valid & ~f, valid)
        if op == OP_DIA:
            f = self._ev(p, p.xa[i], env, valid)
            return _some(self.n, self.rs, f, valid)
        if op == OP_ALL:
            slot, child = p.xb[i], p.xa[i]
            old = env[slot]
            res = valid
            for a in range(self.E):
                va = valid & self.domw[a]
                if not va:
                    continue
                env[slot] = a
                f = self._ev(p, child, env, va)
                res &= _upward_ok(self.n, self.up, va & ~f, valid)
            env[slot] = old
            return res
        if op == OP_EX:
            slot, child = p.xb[i], p.xa[i]
            old = env[slot]
            res = 0
            for a in range(self.E):
                va = valid & self.domw[a]
                if va:
                    env[slot] = a
                    res |= self._ev(p, child, env, va)
            env[slot] = old
            return res
        return 0

    def eval_interval(self, prog, env=None):
        env = list(env) if env else []
        env += [0] * (prog.nslots - len(env))
        return self._iv(prog, prog.root, env, self.full)

    def _iv(self, p, i, env, valid):
        op = p.ops[i]
        if op == OP_PRED:
            k = self._index(p, i, env)
            return self.pm[k] & valid, self.pm_may[k] & valid
        if op == OP_EQ:
            a = self._arg(p, p.xa[i], env)
            b = self._arg(p, p.xb[i], env)
            return self.eqm[a * self.E + b] & valid, self.eqm_may[a * self.E + b] & valid
        if op == OP_AND:
            l1, h1 = self._iv(p, p.xa[i], env, valid)
            l2, h2 = self._iv(p, p.xb[i], env, valid)
            return l1 & l2, h1 & h2
        if op == OP_OR:
            l1, h1 = self._iv(p, p.xa[i], env, valid)
            l2, h2 = self._iv(p, p.xb[i], env, valid)
            return l1 | l2, h1 | h2
        if op == OP_IMP:
            l1, h1 = self._iv(p, p.xa[i], env, valid)
            l2, h2 = self._iv(p, p.xb[i], env, valid)
            return (_upward_ok(self.n, self.up, valid & h1 & ~l2, valid),
                    _upward_ok(self.n, self.up, valid & l1 & ~h2, valid))
        if op == OP_BOX:
            lo, hi = self._iv(p, p.xa[i], env, valid)
            return (_upward_ok(self.n, self.boxr, valid & ~lo, valid),
                    _upward_ok(self.n, self.boxr, valid & ~hi, valid))
        if op == OP_DIA:
            lo, hi = self._iv(p, p.xa[i], env, valid)
            return _some(self.n, self.rs, lo, valid), _some(self.n, self.rs, hi, valid)
        if op == OP_ALL:
            slot, child = p.xb[i], p.xa[i]
            old = env[slot]
            rl = rh = valid
            for a in range(self.E):
                va = valid & self.domw[a]
                if not va:
                    continue
                env[slot] = a
                lo, hi = self._iv(p, child, env, va)
                rl &= _upward_ok(self.n, self.up, va & ~lo, valid)
                rh &= _upward_ok(self.n, self.up, va & ~hi, valid)
            env[slot] = old
            return rl, rh
        if op == OP_EX:
            slot, child = p.xb[i], p.xa[i]
            old = env[slot]
            rl = rh = 0
            for a in range(self.E):
                va = valid & self.domw[a]
                if va:
                    env[slot] = a
                    lo, hi = self._iv(p, child, env, va)
                    rl |= lo
                    rh |= hi
            env[slot] = old
            return rl, rh
        return 0, 0


def frame_flags(n, leq, rs):
    """Bit flags of violated frame conditions.

    ``leq[w]`` and ``rs[w]`` are successor masks.  Bits: 1 reflexivity,
    2 transitivity, 4 antisymmetry, 8 FC1, 16 FC2.
    """
    flags = 0
    for w in range(n):
        if not leq[w] >> w & 1:
            flags |= 1
        for v in range(n):
            if leq[w] >> v & 1:
                if leq[v] & ~leq[w]:
                    flags |= 2
                if v != w and leq[v] >> w & 1:
                    flags |= 4
    for w in range(n):
        lr = 0
        for w2 in range(n):
            if leq[w] >> w2 & 1:
                lr |= rs[w2]
        rl = 0
        for v in range(n):
            if rs[w] >> v & 1:
                rl |= leq[v]
        if rl & ~lr:
            flags |= 8
        for w2 in range(n):
            if leq[w] >> w2 & 1:
                for v in range(n):
                    if rs[w] >> v & 1 and not leq[v] & rs[w2]:
                        flags |= 16
    return flags


def _frame_ok(n, leq, rs, conds):
    for w in range(n):
        if conds & 1 and not rs[w]:
            return False
        if conds & 2 and not rs[w] >> w & 1:
            return False
    if conds & 4:
        for w in range(n):
            for v in range(n):
                if rs[w] >> v & 1 and rs[v] & ~rs[w]:
                    return False
    for w in range(n):
        lr = 0
        rl = 0
        for v in range(n):
            if leq[w] >> v & 1:
                lr |= rs[v]
            if rs[w] >> v & 1:
                rl |= leq[v]
        if rl & ~lr:
            return False
        for w2 in range(n):
            if leq[w] >> w2 & 1:
                for v in range(n):
                    if rs[w] >> v & 1 and not leq[v] & rs[w2]:
                        return False
    return True


def fc_relations(n, leq, conds=0):
    """All R (as n*n-bit codes, row w at bits w*n..) satisfying FC1, FC2 over ``leq``.

    ``conds`` bits: 1 serial, 2 reflexive, 4 transitive.
    """
    out = []
    row = (1 << n) - 1
    for code in range(1 << (n * n)):
        rs = [(code >> (w * n)) & row for w in range(n)]
        if _frame_ok(n, leq, rs, conds):
            out.append(code)
    return out


def extension_search(km, goal, gammas, env, cands, forced, region, stats=None, accept=None, order=None):
    """Depth-first search for predicate slot masks making ``gammas`` true and ``goal`` false at world 0.

    ``cands[s]`` lists the masks allowed for slot s; ``forced[s]`` holds
    pairs (w, d): bit w of slot s must equal bit w of the earlier slot d.
    Unassigned slots are bounded by ``region``.  Returns the list of chosen
    masks or None; ``stats`` (a dict) counts nodes and complete models.
    ``accept`` optionally filters complete assignments; ``order[s]`` lists
    earlier slots whose mask may not exceed the mask of slot s.
    """
    n_slots = len(cands)
    chosen = [0] * n_slots
    nodes = models = 0

    def viable():
        nonlocal nodes
        nodes += 1
        lo, _ = km.eval_interval(goal, env)
        if lo & 1:
            return False
        for p in gammas:
            _, hi = km.eval_interval(p, env)
            if not hi & 1:
                return False
        return True

    def complete():
        nonlocal models
        models += 1
        if accept is not None and not accept(chosen):
            return False
        if km.eval(goal, env) & 1:
            return False
        return all(km.eval(p, env) & 1 for p in gammas)

    def go(s):
        nonlocal nodes
        if s == n_slots:
            return complete()
        for m in cands[s]:
            if any((m >> w & 1) != (chosen[d] >> w & 1) for w, d in forced[s]):
                continue
            if order is not None and any(chosen[d] > m for d in order[s]):
                continue
            chosen[s] = m
            km.set_pred(s, m, m)
            if s == n_slots - 1:
                # fully assigned: the exact check replaces the interval one
                nodes += 1
                if complete():
                    return True
            elif viable() and go(s + 1):
                return True
        chosen[s] = 0
        km.set_pred(s, 0, region[s])
        return False

    found = viable() and go(0)
    if stats is not None:
        stats["nodes"] = stats.get("nodes", 0) + nodes
        stats["models"] = stats.get("models", 0) + models
    return list(chosen) if found else None
