"""Compiled kernels against the pure-Python twin on the same workloads.

    python benchmarks/bench_kernels.py [--repeat 3] [--quick]

Each workload runs once per backend and must give identical answers; the
table reports the best wall time over the repeats and the speedup.
"""
import argparse
import random
import sys
import time

from fofs import _pykernels, kernels, search
from fofs.frameclasses import random_model
from fofs.gen import random_sentence
from fofs.parsing import parse_formula
from fofs.search import FUZZ_SIGNATURE, SearchBounds, find_countermodel, soundness_fuzz
from fofs.semantics import Frame, model_to_json, validate_frame


def truth_masks(quick):
    rng = random.Random(1)
    n_models = 30 if quick else 120
    jobs = []
    for s in range(n_models):
        m = random_model("fs-s4+ni", (5, 3, 2), s, FUZZ_SIGNATURE)
        jobs.append((m, [random_sentence(FUZZ_SIGNATURE, rng, 4) for _ in range(40)]))

    def work():
        out = []
        for m, fs in jobs:
            m._kcache = None
            out.append(tuple(m.truth_mask(f) for f in fs))
        return out
    return work


def fuzz(quick):
    n = 40 if quick else 200
    return lambda: soundness_fuzz("fs-d4+nd", n_models=n, n_instances=20, seed=5).to_json()


def refute(quick):
    goals = ["P(c) | ~P(c)", "box (P(c) | Q(c)) -> box P(c) | box Q(c)",
             "(forall x. box P(x)) -> box (forall x. P(x))", "dia P(c) -> box P(c)"]
    # valid goals make the search exhaust its bounds
    goals += ["box (P(c) -> Q(c)) -> box P(c) -> box Q(c)", "(dia P(c) -> box Q(c)) -> box (P(c) -> Q(c))"]
    fs = [parse_formula(g) for g in goals]
    b = SearchBounds(3, 2) if quick else SearchBounds(3, 3)

    def work():
        return [model_to_json(r.model) if r else None for r in (find_countermodel([], f, "fs", b) for f in fs)]
    return work


def frame_checks(quick):
    n = 3 if quick else 4
    leq = [(1 << n) - 1] + [1 << w for w in range(1, n)]
    row = (1 << n) - 1

    def work():
        out = 0
        for code in range(1 << (n * n)):
            r = [(code >> (n * w)) & row for w in range(n)]
            out += validate_frame(Frame.from_masks(range(n), leq, r)).ok
        return out
    return work


WORKLOADS = [("truth masks", truth_masks), ("soundness fuzz", fuzz), ("countermodel search", refute),
             ("frame validation", frame_checks)]


def clear_caches():
    # frame enumeration is memoised; without this the second backend reuses the first one's work
    for name in ("_natural_posets", "rooted_frames", "frames_up_to_iso", "_upsets", "_box_rows"):
        getattr(search, name).cache_clear()


def timed(fn, repeat):
    best, value = None, None
    for _ in range(repeat):
        clear_caches()
        t = time.perf_counter()
        value = fn()
        dt = time.perf_counter() - t
        best = dt if best is None else min(best, dt)
    return best, value


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--quick", action="store_true", help="smaller workloads")
    args = ap.parse_args(argv)
    if kernels.compiled_backend is None:
        print("compiled kernels are not built (or FOFS_PURE_PYTHON is set); nothing to compare")
        return 1
    saved = kernels.backend
    print(f"{'workload':<22}{'compiled s':>12}{'python s':>12}{'speedup':>10}  agree")
    ok = True
    try:
        for name, make in WORKLOADS:
            fn = make(args.quick)
            kernels.backend = kernels.compiled_backend
            tc, vc = timed(fn, args.repeat)
            kernels.backend = _pykernels
            tp, vp = timed(fn, args.repeat)
            same = vc == vp
            ok &= same
            print(f"{name:<22}{tc:>12.3f}{tp:>12.3f}{tp / tc:>9.1f}x  {'yes' if same else 'NO'}")
    finally:
        kernels.backend = saved
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
