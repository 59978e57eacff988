"""Compare the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 200] [--dims 4,6,9,12]

Reports the median wall time per call for the Hermitian eigensolver and the
LU determinant, plus a small end-to-end verify run under each backend.
"""
import argparse
import statistics
import time

import numpy as np

from partrace import _pykernels, matkernel
from partrace.harness.suite import SuiteConfig, run_suite

try:
    from partrace import _ckernels
except ImportError:
    _ckernels = None


def median_time(fn, repeat):
    samples = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        samples.append(time.perf_counter() - t0)
    return statistics.median(samples)


def hermitian(rng, d):
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return (g + g.conj().T) / 2


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=200)
    ap.add_argument("--dims", default="4,6,9,12")
    ap.add_argument("--suite-trials", type=int, default=50)
    args = ap.parse_args()
    dims = [int(x) for x in args.dims.split(",")]

    backends = {"python": _pykernels}
    if _ckernels is not None:
        backends["cython"] = _ckernels
    else:
        print("compiled kernels not built; timing the fallback only")

    rng = np.random.default_rng(0)
    mats = {d: hermitian(rng, d) for d in dims}
    results = {}
    for name, kernels in backends.items():
        matkernel._kernels = kernels
        for d in dims:
            a = mats[d]
            results[name, "eig", d] = median_time(lambda: matkernel.hermitian_eig(a), args.repeat)
            results[name, "det", d] = median_time(lambda: matkernel.lu_det(a), args.repeat)
        cfg = SuiteConfig(checks=("lin", "main", "ando", "complement"), dims=((2, 2), (3, 2)),
                          trials=args.suite_trials, seed=0)
        results[name, "suite", 0] = run_suite(cfg).wall_time

    print(f"{'kernel':<8}{'dim':>5}{'python':>14}{'cython':>14}{'speedup':>10}")
    for kind in ("eig", "det"):
        for d in dims:
            py = results["python", kind, d]
            cy = results.get(("cython", kind, d))
            cy_s = f"{cy * 1e6:11.1f} us" if cy else f"{'-':>14}"
            sp = f"{py / cy:9.1f}x" if cy else f"{'-':>10}"
            print(f"{kind:<8}{d:>5}{py * 1e6:11.1f} us{cy_s}{sp}")
    py = results["python", "suite", 0]
    cy = results.get(("cython", "suite", 0))
    print(f"{'verify':<8}{'':>5}{py:12.2f} s{(f'{cy:12.2f} s' if cy else '-'):>14}"
          f"{(f'{py / cy:9.1f}x' if cy else '-'):>10}")


if __name__ == "__main__":
    main()
