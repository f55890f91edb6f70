"""Time the compiled kernels against the pure-Python fallback.

    python bench/bench_kernels.py [--repeat 5]

Each kernel runs on random inputs drawn from the conifold and I_1 pairs.
"""

import argparse
import random
import time

from mcdual import _kernels_py, examples as ex
from mcdual.barcobar import alphabet, dual_diff_generators
from mcdual.mcalg import mc_relations
from mcdual.scalar import Novikov

try:
    from mcdual import _kernels
except ImportError:
    _kernels = None


def random_series(A, rng, max_len, count):
    terms = {}
    for _ in range(count):
        words = A.composable_words(rng.randint(1, max_len))
        w = rng.choice(words)
        terms[A.word_key(w)] = Novikov.const(rng.randint(1, 5))
    return terms


def workloads(name, s, rng):
    A = alphabet(s)
    cut = s.cutoff
    dg = [x.terms for x in dual_diff_generators(s)]
    fs = [random_series(A, rng, 3, 20) for _ in range(20)]
    p = mc_relations(s)
    words = [k[2] for f in fs for k in f]
    return [
        (f"{name} concat_mul", lambda k: [k.concat_mul(f, g, cut.max_len, cut) for f in fs for g in fs[:5]]),
        (f"{name} leibniz", lambda k: [k.leibniz(f, dg, A.deg, cut.max_len, cut) for f in fs]),
        (f"{name} find_redex", lambda k: [k.find_redex(w, p.rules, p.lens) for w in words * 50]),
    ]


def best(fn, impl, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn(impl)
        times.append(time.perf_counter() - t)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    rng = random.Random(0)
    jobs = []
    jobs += workloads("conifold", ex.build_conifold().V, rng)
    jobs += workloads("i1", ex.build_i1().V, rng)
    print(f"{'workload':<22}{'python':>10}{'cython':>10}{'speedup':>9}")
    for label, fn in jobs:
        tp = best(fn, _kernels_py, args.repeat)
        if _kernels is None:
            print(f"{label:<22}{tp * 1e3:>8.1f}ms{'-':>10}{'-':>9}")
            continue
        tc = best(fn, _kernels, args.repeat)
        print(f"{label:<22}{tp * 1e3:>8.1f}ms{tc * 1e3:>8.1f}ms{tp / tc:>8.2f}x")


if __name__ == "__main__":
    main()
