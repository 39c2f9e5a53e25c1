"""Benchmark the compiled kernel against the pure-Python fallback.

Times the two hot enumeration kernels (monotone maps and ep-pairs) on poset
pairs representative of the verification suites, then a full seeded verify
case through each backend. Run from the repository root:

    python benchmarks/bench_kernels.py
"""

import time

from domkit import _kernel_py
from domkit.poset import antichain, chain, poset_from_order

try:
    from domkit import _kernel_cy
except ImportError:
    _kernel_cy = None


def diamond():
    return poset_from_order("diamond", ["b", "l", "r", "t"],
                            lambda x, y: x == y or x == "b" or y == "t")


def cube():
    elems = [f"{i}{j}{k}" for i in "01" for j in "01" for k in "01"]
    return poset_from_order("cube", elems,
                            lambda x, y: all(a <= b for a, b in zip(x, y)))


CASES = [
    ("chain4 -> chain4", chain(4), chain(4)),
    ("chain4 -> diamond", chain(4), diamond()),
    ("diamond -> diamond", diamond(), diamond()),
    ("antichain3 -> chain5", antichain(3), chain(5)),
    ("diamond -> cube", diamond(), cube()),
    ("chain3 -> cube", chain(3), cube()),
]


def run(fn, *args, repeat=20):
    best = float("inf")
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, result


def bench_kernel(name, impl):
    rows = []
    for label, A, B in CASES:
        t_mono, maps = run(impl.monotone_maps, A.n, B.n, A.relmat, B.relmat)
        t_ep, eps = run(impl.ep_pairs, A.n, B.n, A.relmat, B.relmat)
        rows.append((label, len(maps), t_mono, len(eps), t_ep))
    print(f"\n{name}")
    print(f"  {'case':24} {'#maps':>6} {'monotone_maps':>14} {'#eps':>5} {'ep_pairs':>12}")
    for label, nm, tm, ne, te in rows:
        print(f"  {label:24} {nm:6d} {tm * 1e6:11.1f} us {ne:5d} {te * 1e6:9.1f} us")
    return rows


def bench_verify(backend_name, force_pure):
    import os
    import subprocess
    import sys

    env = dict(os.environ)
    if force_pure:
        env["DOMKIT_PURE"] = "1"
    else:
        env.pop("DOMKIT_PURE", None)
    t0 = time.perf_counter()
    subprocess.run([sys.executable, "-m", "domkit", "--format", "json",
                    "verify", "--mode", "total", "--seed", "7", "--count", "50"],
                   check=True, capture_output=True, env=env)
    dt = time.perf_counter() - t0
    print(f"  verify --mode total --count 50 [{backend_name}]: {dt:.2f} s")
    return dt


def main():
    py_rows = bench_kernel("pure python kernel", _kernel_py)
    if _kernel_cy is None:
        print("\ncompiled kernel not built; install with `pip install -e .`")
        return
    cy_rows = bench_kernel("cython kernel", _kernel_cy)

    print("\nspeedup (pure / compiled)")
    for (label, _, tm_py, _, te_py), (_, _, tm_cy, _, te_cy) in zip(py_rows, cy_rows):
        print(f"  {label:24} monotone_maps x{tm_py / tm_cy:5.1f}   "
              f"ep_pairs x{te_py / te_cy:5.1f}")

    for (label, nm_py, _, ne_py, _), (_, nm_cy, _, ne_cy, _) in zip(py_rows, cy_rows):
        assert (nm_py, ne_py) == (nm_cy, ne_cy), f"backend disagreement on {label}"
    print("\nbackends agree on all counts")

    print("\nend-to-end")
    bench_verify("cython", force_pure=False)
    bench_verify("pure", force_pure=True)


if __name__ == "__main__":
    main()
