"""Compare the compiled kernel with the pure-Python fallback.

Run with ``python benchmarks/bench_kernel.py [--terms N] [--size S] [--seed K]``.
Both implementations are fed the same random terms; their outputs are checked
for agreement before timing.
"""

from __future__ import annotations

import argparse
import sys
import timeit

from mell.generators import TermGenerator
from mell.kernel import _kernel_py


def load_compiled():
    try:
        from mell.kernel import _kernel
    except ImportError:
        return None
    return _kernel


def main(argv=None) -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--terms", type=int, default=300)
    ap.add_argument("--size", type=int, default=30)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--repeat", type=int, default=5)
    opts = ap.parse_args(argv)

    compiled = load_compiled()
    if compiled is None:
        print("compiled kernel not available; nothing to compare", file=sys.stderr)
        return 1
    gen = TermGenerator(opts.seed, redex_bias=0.3)
    terms = [gen.term(gen.rng.randint(opts.size // 2, opts.size)) for _ in range(opts.terms)]
    for t in terms:
        assert compiled.canonical_key(t) == _kernel_py.canonical_key(t)
        assert compiled.term_size(t) == _kernel_py.term_size(t)

    print(f"{len(terms)} terms, size up to {opts.size}, seed {opts.seed}")
    for fn in ("canonical_key", "term_size"):
        times = {}
        for label, mod in (("python", _kernel_py), ("compiled", compiled)):
            f = getattr(mod, fn)
            times[label] = min(timeit.repeat(lambda: [f(t) for t in terms], number=1, repeat=opts.repeat))
        print(f"{fn:14s} python {times['python'] * 1e3:8.2f} ms  compiled {times['compiled'] * 1e3:8.2f} ms  "
              f"speedup {times['python'] / times['compiled']:5.2f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
