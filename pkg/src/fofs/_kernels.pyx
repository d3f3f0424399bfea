# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled bitset kernels (at most 64 worlds); same interface as ``_pykernels``."""

from libc.stdint cimport uint64_t, int64_t
from libc.stdlib cimport malloc, free

cdef enum:
    OP_BOT = 0
    OP_PRED = 1
    OP_EQ = 2
    OP_AND = 3
    OP_OR = 4
    OP_IMP = 5
    OP_BOX = 6
    OP_DIA = 7
    OP_ALL = 8
    OP_EX = 9

MAX_WORLDS = 64

cdef enum:
    LANE_WORLDS = 16

# pass counter for the per-node caches of loop-invariant subformulas
cdef unsigned long long _pass = 0


cdef int* _int_array(values) except NULL:
    cdef Py_ssize_t n = len(values)
    cdef int* out = <int*> malloc((n + 1) * sizeof(int))
    if out == NULL:
        raise MemoryError()
    cdef Py_ssize_t i
    for i in range(n):
        out[i] = values[i]
    return out


cdef uint64_t* _mask_array(values, Py_ssize_t n) except NULL:
    cdef uint64_t* out = <uint64_t*> malloc((n + 1) * sizeof(uint64_t))
    if out == NULL:
        raise MemoryError()
    cdef Py_ssize_t i
    for i in range(n):
        out[i] = <uint64_t> values[i]
    return out


cdef class Program:
    cdef int* ops
    cdef int* xa
    cdef int* xb
    cdef int* xc
    cdef int* args
    cdef int* inv
    cdef unsigned long long* cpass
    cdef uint64_t* clo
    cdef uint64_t* chi
    cdef public int root
    cdef public int nslots
    cdef public int size

    def __cinit__(self, ops, xa, xb, xc, args, root, nslots, inv=None):
        self.ops = _int_array(ops)
        self.xa = _int_array(xa)
        self.xb = _int_array(xb)
        self.xc = _int_array(xc)
        self.args = _int_array(args)
        self.root = root
        self.nslots = nslots
        self.size = len(ops)
        self.inv = _int_array(inv if inv is not None else [0] * len(ops))
        self.cpass = <unsigned long long*> malloc((self.size + 1) * sizeof(unsigned long long))
        self.clo = _mask_array([0] * self.size, self.size)
        self.chi = _mask_array([0] * self.size, self.size)
        if self.cpass == NULL:
            raise MemoryError()
        cdef int k
        for k in range(self.size + 1):
            self.cpass[k] = 0

    def __dealloc__(self):
        free(self.ops)
        free(self.xa)
        free(self.xb)
        free(self.xc)
        free(self.args)
        free(self.inv)
        free(self.cpass)
        free(self.clo)
        free(self.chi)


cdef inline uint64_t _upward_ok(int n, uint64_t* rel, uint64_t bad, uint64_t valid) nogil:
    if bad == 0:
        return valid
    cdef uint64_t out = 0
    cdef int w
    for w in range(n):
        if (valid >> w) & 1 and (rel[w] & bad) == 0:
            out |= (<uint64_t> 1) << w
    return out


cdef inline uint64_t _some(int n, uint64_t* rel, uint64_t target, uint64_t valid) nogil:
    cdef uint64_t out = 0
    cdef int w
    if target == 0:
        return 0
    for w in range(n):
        if (valid >> w) & 1 and (rel[w] & target) != 0:
            out |= (<uint64_t> 1) << w
    return out


cdef class KModel:
    cdef readonly int n
    cdef readonly int E
    cdef Py_ssize_t npm
    cdef readonly uint64_t full
    cdef uint64_t* up
    cdef uint64_t* boxr
    cdef uint64_t* rs
    cdef uint64_t* domw
    cdef uint64_t* eqm
    cdef uint64_t* eqm_may
    cdef uint64_t* pm
    cdef uint64_t* pm_may
    cdef int* poff
    cdef int npred
    cdef int env[64]
    cdef bint cache_ok
    # state of a running search, shared with its helpers
    cdef uint64_t* s_cv
    cdef int* s_co
    cdef int* s_fo
    cdef int* s_fwa
    cdef int* s_fda
    cdef int* s_oo
    cdef int* s_oda
    cdef uint64_t* s_chosen
    cdef uint64_t* s_lanes
    cdef int s_ns, s_tail, s_nl
    cdef uint64_t lane_all
    cdef uint64_t* lane_pm

    def __cinit__(self, n, up, boxr, rs, domw, eqm, n_elems, poff, pm, pm_may=None, eqm_may=None):
        if n > MAX_WORLDS:
            raise ValueError("compiled kernels handle at most 64 worlds")
        self.n = n
        self.E = n_elems
        self.full = ((<uint64_t> 1) << n) - 1 if n < 64 else <uint64_t> 0xFFFFFFFFFFFFFFFF
        self.up = _mask_array(up, n)
        self.boxr = _mask_array(boxr, n)
        self.rs = _mask_array(rs, n)
        self.domw = _mask_array(domw, n_elems)
        self.eqm = _mask_array(eqm, n_elems * n_elems)
        self.eqm_may = _mask_array(eqm if eqm_may is None else eqm_may, n_elems * n_elems)
        self.npred = len(poff)
        self.poff = _int_array(poff)
        self.npm = len(pm)
        self.pm = _mask_array(pm, self.npm)
        self.pm_may = _mask_array(pm if pm_may is None else pm_may, self.npm)

    def __dealloc__(self):
        free(self.up)
        free(self.boxr)
        free(self.rs)
        free(self.domw)
        free(self.eqm)
        free(self.eqm_may)
        free(self.pm)
        free(self.pm_may)
        free(self.poff)

    def set_eq(self, eqm, eqm_may=None):
        cdef Py_ssize_t k, total = self.E * self.E
        for k in range(total):
            self.eqm[k] = <uint64_t> eqm[k]
            self.eqm_may[k] = <uint64_t> (eqm[k] if eqm_may is None else eqm_may[k])

    def set_pred(self, Py_ssize_t idx, must, may=None):
        if idx < 0 or idx >= self.npm:
            raise IndexError(idx)
        self.pm[idx] = <uint64_t> must
        self.pm_may[idx] = <uint64_t> (must if may is None else may)

    def get_pred(self, Py_ssize_t idx):
        if idx < 0 or idx >= self.npm:
            raise IndexError(idx)
        return self.pm[idx], self.pm_may[idx]

    cdef void _load_env(self, Program prog, env):
        cdef int k
        for k in range(64):
            self.env[k] = 0
        if env:
            for k in range(len(env)):
                self.env[k] = env[k]

    def eval(self, Program prog, env=None, valid=None):
        if prog.nslots > 64:
            raise ValueError("too many variable slots")
        self._load_env(prog, env)
        cdef uint64_t v = self.full if valid is None else <uint64_t> valid
        self._fresh(v)
        return self._ev(prog, prog.root, v)

    def search(self, Program goal, gammas, env, cands, forced, region, order=None):
        """In-kernel twin of ``_pykernels.extension_search``; returns (masks or None, nodes, models).

        The last slots, once their candidate combinations fit in 64, are
        decided together: every combination is evaluated at once, one per
        bit lane, and the first satisfying one in search order is taken.
        """
        cdef int ns = len(cands)
        cdef int k, s, ng = len(gammas)
        if goal.nslots > 64:
            raise ValueError("too many variable slots")
        for g in gammas:
            if (<Program> g).nslots > 64:
                raise ValueError("too many variable slots")
        self._load_env(goal, env)
        cdef list coff = [0], cval = [], foff = [0], fw = [], fd = [], ooff = [0], od = []
        for s in range(ns):
            cval.extend(cands[s])
            coff.append(len(cval))
            for w, d in forced[s]:
                fw.append(w)
                fd.append(d)
            foff.append(len(fw))
            if order is not None:
                od.extend(order[s])
            ooff.append(len(od))
        # first slot of the lane-parallel tail
        cdef int tail = ns + 1
        cdef long prod = 1
        if self.n <= LANE_WORLDS:
            tail = ns
            for s in reversed(range(ns)):
                prod *= len(cands[s])
                if prod > 64:
                    break
                tail = s
        cdef uint64_t* cv = _mask_array(cval, len(cval))
        cdef int* co = _int_array(coff)
        cdef int* fo = _int_array(foff)
        cdef int* fwa = _int_array(fw)
        cdef int* fda = _int_array(fd)
        cdef int* oo = _int_array(ooff)
        cdef int* oda = _int_array(od)
        cdef uint64_t* reg = _mask_array(region, ns)
        cdef uint64_t* chosen = _mask_array([0] * ns, ns)
        cdef int* pos = _int_array([0] * (ns + 1))
        cdef uint64_t* lanes = _mask_array([0] * (64 * (ns + 1)), 64 * (ns + 1))
        cdef uint64_t* lane_pm = _mask_array([0] * (LANE_WORLDS * (ns + 1)), LANE_WORLDS * (ns + 1))
        cdef long nodes = 0, models = 0
        cdef bint found = False
        cdef uint64_t m
        cdef bint ok
        cdef int hit
        self.s_cv, self.s_co, self.s_fo, self.s_fwa, self.s_fda = cv, co, fo, fwa, fda
        self.s_oo, self.s_oda, self.s_chosen, self.s_lanes = oo, oda, chosen, lanes
        self.lane_pm = lane_pm
        self.s_ns, self.s_tail, self.s_nl = ns, tail, 0
        try:
            s = 0
            nodes += 1
            if self._viable(goal, gammas, ng):
                pos[0] = co[0]
                while True:
                    if s == tail:
                        hit = self._tail(goal, gammas, ng)
                        nodes += self.s_nl
                        models += self.s_nl
                        if hit >= 0:
                            for k in range(tail, ns):
                                chosen[k] = lanes[k * 64 + hit]
                            found = True
                            break
                        s -= 1
                        if s < 0:
                            break
                        continue
                    if s == ns:
                        models += 1
                        if self._complete(goal, gammas, ng):
                            found = True
                            break
                        s -= 1
                        if s < 0:
                            break
                        continue
                    if pos[s] >= co[s + 1]:
                        chosen[s] = 0
                        self.pm[s] = 0
                        self.pm_may[s] = reg[s]
                        s -= 1
                        if s < 0:
                            break
                        continue
                    m = cv[pos[s]]
                    pos[s] += 1
                    if not self._allowed(s, m):
                        continue
                    chosen[s] = m
                    self.pm[s] = m
                    self.pm_may[s] = m
                    nodes += 1
                    if s == ns - 1:
                        # fully assigned: the exact check replaces the interval one
                        models += 1
                        if self._complete(goal, gammas, ng):
                            found = True
                            break
                    elif self._viable(goal, gammas, ng):
                        s += 1
                        pos[s] = co[s]
            result = [chosen[k] for k in range(ns)] if found else None
        finally:
            self.s_ns = 0
            free(cv)
            free(co)
            free(fo)
            free(fwa)
            free(fda)
            free(oo)
            free(oda)
            free(reg)
            free(chosen)
            free(pos)
            free(lanes)
            free(lane_pm)
        return result, nodes, models

    cdef inline bint _allowed(self, int s, uint64_t m) nogil:
        cdef int k
        for k in range(self.s_fo[s], self.s_fo[s + 1]):
            if ((m >> self.s_fwa[k]) & 1) != ((self.s_chosen[self.s_fda[k]] >> self.s_fwa[k]) & 1):
                return False
        for k in range(self.s_oo[s], self.s_oo[s + 1]):
            if self.s_chosen[self.s_oda[k]] > m:
                return False
        return True

    cdef void _fill(self, int s) nogil:
        # enumerate allowed combinations of slots s.. into lanes, in search order
        cdef int k, t
        cdef uint64_t m
        if s == self.s_ns:
            for t in range(self.s_tail, self.s_ns):
                self.s_lanes[t * 64 + self.s_nl] = self.s_chosen[t]
            self.s_nl += 1
            return
        for k in range(self.s_co[s], self.s_co[s + 1]):
            m = self.s_cv[k]
            if self._allowed(s, m):
                self.s_chosen[s] = m
                self._fill(s + 1)
        self.s_chosen[s] = 0

    cdef int _tail(self, Program goal, list gammas, int ng):
        """Index of the first tail combination that is a witness, or -1."""
        cdef int t, w, lane, k
        cdef uint64_t bits, ok
        cdef uint64_t out[LANE_WORLDS]
        self.s_nl = 0
        self._fill(self.s_tail)
        if self.s_nl == 0:
            return -1
        # lane masks per (tail slot, world)
        for t in range(self.s_tail, self.s_ns):
            for w in range(self.n):
                bits = 0
                for lane in range(self.s_nl):
                    if (self.s_lanes[t * 64 + lane] >> w) & 1:
                        bits |= (<uint64_t> 1) << lane
                self.lane_pm[t * LANE_WORLDS + w] = bits
        self.lane_all = ((<uint64_t> 1) << self.s_nl) - 1 if self.s_nl < 64 else <uint64_t> 0xFFFFFFFFFFFFFFFF
        self._lv(goal, goal.root, self.full, out)
        ok = self.lane_all & ~out[0]
        for k in range(ng):
            if ok == 0:
                break
            self._lv(<Program> gammas[k], (<Program> gammas[k]).root, self.full, out)
            ok &= out[0]
        if ok == 0:
            return -1
        lane = 0
        while not (ok >> lane) & 1:
            lane += 1
        return lane

    cdef void _lv(self, Program p, int i, uint64_t valid, uint64_t* out) nogil:
        # lane-parallel exact evaluation: out[w] holds the lanes where node i is true at w
        cdef int op = p.ops[i]
        cdef uint64_t a[LANE_WORLDS]
        cdef uint64_t b[LANE_WORLDS]
        cdef uint64_t r, va, rel
        cdef Py_ssize_t k
        cdef int w, v, slot, old, e, n = self.n
        cdef uint64_t allv = self.lane_all
        if op == OP_PRED:
            k = self._index(p, i)
            if k >= self.s_tail:
                for w in range(n):
                    out[w] = self.lane_pm[k * LANE_WORLDS + w] if (valid >> w) & 1 else 0
            else:
                for w in range(n):
                    out[w] = allv if (valid >> w) & 1 and (self.pm[k] >> w) & 1 else 0
            return
        if op == OP_EQ:
            k = self._arg(p.xa[i]) * self.E + self._arg(p.xb[i])
            for w in range(n):
                out[w] = allv if (valid >> w) & 1 and (self.eqm[k] >> w) & 1 else 0
            return
        if op == OP_AND or op == OP_OR or op == OP_IMP:
            self._lv(p, p.xa[i], valid, a)
            self._lv(p, p.xb[i], valid, b)
            if op == OP_AND:
                for w in range(n):
                    out[w] = a[w] & b[w]
            elif op == OP_OR:
                for w in range(n):
                    out[w] = a[w] | b[w]
            else:
                for w in range(n):
                    if not (valid >> w) & 1:
                        out[w] = 0
                        continue
                    r = allv
                    rel = self.up[w] & valid
                    for v in range(n):
                        if (rel >> v) & 1:
                            r &= ~a[v] | b[v]
                    out[w] = r
            return
        if op == OP_BOX or op == OP_DIA:
            self._lv(p, p.xa[i], valid, a)
            for w in range(n):
                if not (valid >> w) & 1:
                    out[w] = 0
                    continue
                if op == OP_BOX:
                    r = allv
                    rel = self.boxr[w] & valid
                    for v in range(n):
                        if (rel >> v) & 1:
                            r &= a[v]
                else:
                    r = 0
                    rel = self.rs[w] & valid
                    for v in range(n):
                        if (rel >> v) & 1:
                            r |= a[v]
                out[w] = r
            return
        if op == OP_ALL or op == OP_EX:
            slot = p.xb[i]
            old = self.env[slot]
            for w in range(n):
                out[w] = allv if op == OP_ALL and (valid >> w) & 1 else 0
            for e in range(self.E):
                va = valid & self.domw[e]
                if va == 0:
                    continue
                self.env[slot] = e
                self._lv(p, p.xa[i], va, a)
                for w in range(n):
                    if not (valid >> w) & 1:
                        continue
                    if op == OP_ALL:
                        rel = self.up[w] & va
                        for v in range(n):
                            if (rel >> v) & 1:
                                out[w] &= a[v]
                    else:
                        out[w] |= a[w]
            self.env[slot] = old
            return
        for w in range(n):
            out[w] = 0

    cdef bint _viable(self, Program goal, list gammas, int ng):
        cdef uint64_t lo = 0, hi = 0
        cdef int k
        self._fresh(self.full)
        self._iv(goal, goal.root, self.full, &lo, &hi)
        if lo & 1:
            return False
        for k in range(ng):
            self._iv(<Program> gammas[k], (<Program> gammas[k]).root, self.full, &lo, &hi)
            if not hi & 1:
                return False
        return True

    cdef bint _complete(self, Program goal, list gammas, int ng):
        cdef int k
        self._fresh(self.full)
        if self._ev(goal, goal.root, self.full) & 1:
            return False
        for k in range(ng):
            if not self._ev(<Program> gammas[k], (<Program> gammas[k]).root, self.full) & 1:
                return False
        return True

    def eval_interval(self, Program prog, env=None):
        if prog.nslots > 64:
            raise ValueError("too many variable slots")
        self._load_env(prog, env)
        cdef uint64_t lo = 0, hi = 0
        self._fresh(self.full)
        self._iv(prog, prog.root, self.full, &lo, &hi)
        return lo, hi

    cdef inline int _arg(self, int t) nogil:
        return self.env[t] if t >= 0 else -t - 1

    cdef inline Py_ssize_t _index(self, Program p, int i) nogil:
        cdef Py_ssize_t idx = self.poff[p.xa[i]]
        cdef Py_ssize_t mult = 1
        cdef int k, t
        cdef int base = p.xb[i]
        for k in range(p.xc[i]):
            t = p.args[base + k]
            idx += (self.env[t] if t >= 0 else -t - 1) * mult
            mult *= self.E
        return idx

    cdef inline void _fresh(self, uint64_t valid) nogil:
        global _pass
        _pass += 1
        self.cache_ok = valid == self.full

    cdef uint64_t _ev(self, Program p, int i, uint64_t valid) nogil:
        # invariant nodes are computed once per pass on all worlds: their truth at
        # a world never depends on the (up-closed) mask they are evaluated under
        cdef uint64_t r
        if not (self.cache_ok and p.inv[i]):
            return self._ev_raw(p, i, valid)
        if p.cpass[i] != _pass:
            p.clo[i] = self._ev_raw(p, i, self.full)
            p.cpass[i] = _pass
        return p.clo[i] & valid

    cdef uint64_t _ev_raw(self, Program p, int i, uint64_t valid) nogil:
        cdef int op = p.ops[i]
        cdef uint64_t a, b, va, res
        cdef int slot, old, e
        if op == OP_PRED:
            return self.pm[self._index(p, i)] & valid
        if op == OP_EQ:
            return self.eqm[self._arg(p.xa[i]) * self.E + self._arg(p.xb[i])] & valid
        if op == OP_AND:
            a = self._ev(p, p.xa[i], valid)
            if a == 0:
                return 0
            return a & self._ev(p, p.xb[i], valid)
        if op == OP_OR:
            return self._ev(p, p.xa[i], valid) | self._ev(p, p.xb[i], valid)
        if op == OP_IMP:
            a = self._ev(p, p.xa[i], valid)
            b = self._ev(p, p.xb[i], valid)
            return _upward_ok(self.n, self.up, valid & a & ~b, valid)
        if op == OP_BOX:
            a = self._ev(p, p.xa[i], valid)
            return _upward_ok(self.n, self.boxr, valid & ~a, valid)
        if op == OP_DIA:
            a = self._ev(p, p.xa[i], valid)
            return _some(self.n, self.rs, a, valid)
        if op == OP_ALL:
            slot = p.xb[i]
            old = self.env[slot]
            res = valid
            for e in range(self.E):
                va = valid & self.domw[e]
                if va == 0:
                    continue
                self.env[slot] = e
                a = self._ev(p, p.xa[i], va)
                res &= _upward_ok(self.n, self.up, va & ~a, valid)
                if res == 0:
                    break
            self.env[slot] = old
            return res
        if op == OP_EX:
            slot = p.xb[i]
            old = self.env[slot]
            res = 0
            for e in range(self.E):
                va = valid & self.domw[e]
                if va == 0:
                    continue
                self.env[slot] = e
                res |= self._ev(p, p.xa[i], va)
            self.env[slot] = old
            return res
        return 0

    cdef void _iv(self, Program p, int i, uint64_t valid, uint64_t* lo, uint64_t* hi) nogil:
        if not (self.cache_ok and p.inv[i]):
            self._iv_raw(p, i, valid, lo, hi)
            return
        if p.cpass[i] != _pass:
            self._iv_raw(p, i, self.full, &p.clo[i], &p.chi[i])
            p.cpass[i] = _pass
        lo[0] = p.clo[i] & valid
        hi[0] = p.chi[i] & valid

    cdef void _iv_raw(self, Program p, int i, uint64_t valid, uint64_t* lo, uint64_t* hi) nogil:
        cdef int op = p.ops[i]
        cdef uint64_t l1 = 0, h1 = 0, l2 = 0, h2 = 0, va, rl, rh, m
        cdef Py_ssize_t k
        cdef int slot, old, e
        if op == OP_PRED:
            k = self._index(p, i)
            lo[0] = self.pm[k] & valid
            hi[0] = self.pm_may[k] & valid
            return
        if op == OP_EQ:
            k = self._arg(p.xa[i]) * self.E + self._arg(p.xb[i])
            lo[0] = self.eqm[k] & valid
            hi[0] = self.eqm_may[k] & valid
            return
        if op == OP_AND or op == OP_OR or op == OP_IMP:
            self._iv(p, p.xa[i], valid, &l1, &h1)
            self._iv(p, p.xb[i], valid, &l2, &h2)
            if op == OP_AND:
                lo[0] = l1 & l2
                hi[0] = h1 & h2
            elif op == OP_OR:
                lo[0] = l1 | l2
                hi[0] = h1 | h2
            else:
                lo[0] = _upward_ok(self.n, self.up, valid & h1 & ~l2, valid)
                hi[0] = _upward_ok(self.n, self.up, valid & l1 & ~h2, valid)
            return
        if op == OP_BOX:
            self._iv(p, p.xa[i], valid, &l1, &h1)
            lo[0] = _upward_ok(self.n, self.boxr, valid & ~l1, valid)
            hi[0] = _upward_ok(self.n, self.boxr, valid & ~h1, valid)
            return
        if op == OP_DIA:
            self._iv(p, p.xa[i], valid, &l1, &h1)
            lo[0] = _some(self.n, self.rs, l1, valid)
            hi[0] = _some(self.n, self.rs, h1, valid)
            return
        if op == OP_ALL or op == OP_EX:
            slot = p.xb[i]
            old = self.env[slot]
            if op == OP_ALL:
                rl = valid
                rh = valid
            else:
                rl = 0
                rh = 0
            for e in range(self.E):
                va = valid & self.domw[e]
                if va == 0:
                    continue
                self.env[slot] = e
                self._iv(p, p.xa[i], va, &l1, &h1)
                if op == OP_ALL:
                    rl &= _upward_ok(self.n, self.up, va & ~l1, valid)
                    rh &= _upward_ok(self.n, self.up, va & ~h1, valid)
                else:
                    rl |= l1
                    rh |= h1
            self.env[slot] = old
            lo[0] = rl
            hi[0] = rh
            return
        lo[0] = 0
        hi[0] = 0


def frame_flags(int n, leq, rs):
    """Bit flags of violated frame conditions (see ``_pykernels.frame_flags``)."""
    if n > MAX_WORLDS:
        raise ValueError("compiled kernels handle at most 64 worlds")
    cdef uint64_t L[64]
    cdef uint64_t M[64]
    cdef int w, v, w2
    cdef int flags = 0
    cdef uint64_t lr, rl
    for w in range(n):
        L[w] = <uint64_t> leq[w]
        M[w] = <uint64_t> rs[w]
    for w in range(n):
        if not (L[w] >> w) & 1:
            flags |= 1
        for v in range(n):
            if (L[w] >> v) & 1:
                if L[v] & ~L[w]:
                    flags |= 2
                if v != w and (L[v] >> w) & 1:
                    flags |= 4
    for w in range(n):
        lr = 0
        rl = 0
        for w2 in range(n):
            if (L[w] >> w2) & 1:
                lr |= M[w2]
            if (M[w] >> w2) & 1:
                rl |= L[w2]
        if rl & ~lr:
            flags |= 8
        for w2 in range(n):
            if (L[w] >> w2) & 1:
                for v in range(n):
                    if (M[w] >> v) & 1 and (L[v] & M[w2]) == 0:
                        flags |= 16
    return flags


cdef bint _frame_ok(int n, uint64_t* L, uint64_t* M, int conds) nogil:
    cdef int w, v, w2
    cdef uint64_t lr, rl
    for w in range(n):
        if conds & 1 and M[w] == 0:
            return False
        if conds & 2 and not (M[w] >> w) & 1:
            return False
    if conds & 4:
        for w in range(n):
            for v in range(n):
                if (M[w] >> v) & 1 and (M[v] & ~M[w]):
                    return False
    for w in range(n):
        lr = 0
        rl = 0
        for v in range(n):
            if (L[w] >> v) & 1:
                lr |= M[v]
            if (M[w] >> v) & 1:
                rl |= L[v]
        if rl & ~lr:
            return False
        for w2 in range(n):
            if (L[w] >> w2) & 1:
                for v in range(n):
                    if (M[w] >> v) & 1 and (L[v] & M[w2]) == 0:
                        return False
    return True


def fc_relations(int n, leq, int conds=0):
    """All R satisfying FC1, FC2 (and ``conds``) over ``leq``; see ``_pykernels``."""
    if n > 5:
        raise ValueError("relation enumeration is limited to 5 worlds")
    cdef uint64_t L[8]
    cdef uint64_t M[8]
    cdef uint64_t code, total = (<uint64_t> 1) << (n * n)
    cdef uint64_t row = ((<uint64_t> 1) << n) - 1
    cdef int w
    for w in range(n):
        L[w] = <uint64_t> leq[w]
    out = []
    code = 0
    while code < total:
        for w in range(n):
            M[w] = (code >> (w * n)) & row
        if _frame_ok(n, L, M, conds):
            out.append(code)
        code += 1
    return out
