"""Benchmark: compiled vs pure-Python kernel on the maximization fixpoint.

Run with `python3 benchmarks/bench_kernel.py`.  Exercises both random
configuration families and the catalog workloads that dominate real usage
(iterated easing of the orientation problems).
"""

import random
import time

from lclre import _kernel_py, catalog, q_power
from lclre.kernel import has_compiled

try:
    from lclre import _kernel_cy
except ImportError:
    _kernel_cy = None


def random_cases(seed=11, trials=120):
    rng = random.Random(seed)
    cases = []
    for _ in range(trials):
        nlab = rng.randint(3, 6)
        arity = rng.choice([2, 3, 3, 4])
        base = {tuple(sorted(rng.randrange(1, 1 << nlab)
                             for _ in range(arity)))
                for _ in range(rng.randint(2, 10))}
        cases.append((sorted(base), arity))
    return cases


def time_kernel(mod, cases):
    t0 = time.perf_counter()
    results = [mod.maximize(base, arity) for base, arity in cases]
    return time.perf_counter() - t0, results


def time_catalog(k):
    t0 = time.perf_counter()
    q_power(catalog.sso(), k)
    return time.perf_counter() - t0


def main():
    if _kernel_cy is None:
        print("compiled kernel unavailable; nothing to compare")
        return
    cases = random_cases()
    t_pure, r_pure = time_kernel(_kernel_py, cases)
    t_comp, r_comp = time_kernel(_kernel_cy, cases)
    assert r_pure == r_comp, "kernel outputs diverge"
    print("random maximization x%d:" % len(cases))
    print("  pure:     %8.3f s" % t_pure)
    print("  compiled: %8.3f s  (%.1fx)" % (t_comp, t_pure / t_comp))

    print("iterated easing of the orientation problem (compiled=%s):"
          % has_compiled())
    for k in (3, 4, 5):
        print("  k=%d: %8.3f s" % (k, time_catalog(k)))


if __name__ == "__main__":
    main()
