"""Compare the numba and numpy CYK kernels on synthesized word-problem grammars.

    python benchmarks/bench_cyk.py [--lengths 20 50 100 200] [--repeat 3]

Each row times one membership query ``u#v^rev`` against the WP grammar of a
fixture monoid.  The first numba call (JIT compilation) is excluded.
"""

import argparse
import random
import time

from special_monoid import symbols
from special_monoid.lang import cyk_member
from special_monoid.lang.cnf import cnf_tables
from special_monoid.pipeline import synthesize
from special_monoid.presentation import SpecialPresentation
from special_monoid.symbols import HASH
from special_monoid.units import cyclic, trivial, free


def fixtures():
    b1, b2 = symbols.units(1), symbols.units(2)
    yield "bicyclic", SpecialPresentation.of("bc", "bc"), trivial()
    yield "cyclic3", SpecialPresentation.of("a", "aaa"), cyclic(3, {b1: 1})
    yield "free1", SpecialPresentation.of("ab", "ab", "ba"), free({b1: b2})


def best(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--lengths", type=int, nargs="+", default=[20, 50, 100, 200])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--numpy-max", type=int, default=100, help="skip numpy above this length (it is slow)")
    args = ap.parse_args()
    rng = random.Random(0)
    cyk_member(synthesize(*list(fixtures())[0][1:]).wp, "bc#", backend="numba")     # warm up the JIT
    print(f"{'fixture':10} {'|CNF|':>7} {'len':>5} {'numba s':>10} {'numpy s':>10} {'speedup':>8}  agree")
    for name, p, spec in fixtures():
        wp = synthesize(p, spec).wp
        size = len(cnf_tables(wp).rules)
        for n in args.lengths:
            half = (n - 1) // 2
            u = "".join(rng.choice(p.alphabet) for _ in range(half))
            w = u + HASH + u[::-1]        # u # u^rev is always a member
            t_nb = best(lambda: cyk_member(wp, w, backend="numba"), args.repeat)
            if n <= args.numpy_max:
                t_np = best(lambda: cyk_member(wp, w, backend="numpy"), args.repeat)
                agree = cyk_member(wp, w, backend="numba") == cyk_member(wp, w, backend="numpy")
                print(f"{name:10} {size:7d} {len(w):5d} {t_nb:10.4f} {t_np:10.4f} {t_np / t_nb:8.1f}  {agree}")
            else:
                print(f"{name:10} {size:7d} {len(w):5d} {t_nb:10.4f} {'-':>10} {'-':>8}  -")


if __name__ == "__main__":
    main()
