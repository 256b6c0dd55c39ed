#!/usr/bin/env python3
"""Benchmark the compiled kernel against the pure numpy fallback.

Times connected-component labeling and cubical cell counts on workloads
representative of the pipeline (smooth phantoms, thresholded masks) plus a
dense-random worst case, and the separable expansion evaluation for
context.  Run from the repository root:

    python3 benchmarks/bench_kernels.py
"""
import sys
import time
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from topoforge import basis as B  # noqa: E402
from topoforge import perturbation as PB  # noqa: E402
from topoforge import phantom as PH  # noqa: E402
from topoforge import polynomial as P  # noqa: E402
from topoforge._kernels import _pure  # noqa: E402

try:
    from topoforge._kernels import _native
except ImportError:
    _native = None

REPEATS = 5


def best_of(fn, *args):
    best = float("inf")
    for _ in range(REPEATS):
        start = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - start)
    return best * 1e3  # ms


def workloads():
    ring, _ = PH.generate(PH.PhantomSpec(PH.PhantomKind.RING, (64, 64, 64)))
    grid, _ = PH.generate(PH.PhantomSpec(PH.PhantomKind.LOOP_GRID, (64, 64, 64)))
    mask = PB.synthesize_mask(
        PB.MaskSpec(basis=B.BasisSpec(P.chebyshev(), 10, 3), dims=(64, 64, 64), seed=1)
    )
    rng = np.random.default_rng(0)
    return [
        ("ring 64^3", np.ascontiguousarray(ring)),
        ("loopgrid 64^3", np.ascontiguousarray(grid)),
        ("cheb-N10 mask >= 0.5", np.ascontiguousarray((mask >= 0.5).astype(np.uint8))),
        ("random p=0.5 64^3", np.ascontiguousarray((rng.random((64, 64, 64)) < 0.5).astype(np.uint8))),
    ]


def main():
    backends = [("pure", _pure)] + ([("native", _native)] if _native else [])
    if _native is None:
        print("note: compiled kernel not built; showing the fallback only")
    header = f"{'workload':24s} {'operation':16s}" + "".join(f"{name:>12s}" for name, _ in backends)
    if _native is not None:
        header += f"{'speedup':>10s}"
    print(header)
    print("-" * len(header))
    for name, vol in workloads():
        for op_name, call in (
            ("label C26", lambda impl, v: impl.label_components(v, 26)),
            ("label C6", lambda impl, v: impl.label_components(v, 6)),
            ("euler cells", lambda impl, v: impl.euler_cell_counts(v)),
        ):
            times = [best_of(call, impl, vol) for _, impl in backends]
            row = f"{name:24s} {op_name:16s}" + "".join(f"{t:10.2f}ms" for t in times)
            if len(times) == 2:
                row += f"{times[0] / times[1]:9.2f}x"
            print(row)

    spec = B.BasisSpec(P.chebyshev(), 10, 3)
    coeffs = PB.sample_coefficients(
        PB.MaskSpec(basis=spec, dims=(64, 64, 64), seed=1)
    )
    t = best_of(B.eval_expansion_grid, spec, coeffs, (64, 64, 64))
    print(f"\nseparable expansion eval, 64^3 N=10 (numpy einsum): {t:.2f}ms")


if __name__ == "__main__":
    main()
