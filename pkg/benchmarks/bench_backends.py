"""Throughput comparison: compiled kernel vs pure-python fallback.

Both kernels run the identical closed-loop integration (the twins are
bit-identical by contract; tests/test_backend.py proves it), so the only
difference measured here is speed.  Usage:

    python3 benchmarks/bench_backends.py [seconds-per-case]
"""

import sys
import time

from outreg.scenario import ScenarioConfig, with_overrides
from outreg.simulate import _kernel_args
from outreg import _kernel_py

try:
    from outreg import _kernel
except ImportError:
    _kernel = None

# steady-orbit start: the run never diverges, so every step costs the same
STEADY = with_overrides(
    ScenarioConfig(),
    x0=(1.0, 0.5),
    eta1_0=(0.06747511312217194, 0.00448868778280543,
            -0.016868778280542986, -0.0011221719457013574),
    eta2_0=(0.38639929937691186, -0.6123391256240911, -0.10734107266496068,
            0.2836164691585286, 0.05100307576288878, -0.36460041473277044,
            -0.06712833603318155, 0.7519667729302537),
)


def measure(kernel, budget):
    # fixed 20 s runs, repeated until the time budget is filled; the horizon
    # stays well inside the regime where the steady orbit is quiet
    y0 = [*STEADY.x0, *STEADY.v0, *STEADY.eta1_0, *STEADY.eta2_0, STEADY.khat0]
    args = _kernel_args(STEADY, "nonadaptive")
    n = 20000
    steps = 0
    t0 = time.perf_counter()
    while True:
        _, diverged_at, _ = kernel.run_closed_loop(y0, STEADY.h, n, n, *args)
        assert diverged_at < 0.0, "steady scenario must not diverge"
        steps += n
        dt = time.perf_counter() - t0
        if dt >= budget:
            return steps / dt


def main():
    budget = float(sys.argv[1]) if len(sys.argv) > 1 else 1.0
    py_rate = measure(_kernel_py, budget)
    print("pure python : %12.0f steps/s" % py_rate)
    if _kernel is None:
        print("compiled    : not built (pip install -e . without OUTREG_NO_EXT)")
        return
    c_rate = measure(_kernel, budget)
    print("compiled    : %12.0f steps/s" % c_rate)
    print("speedup     : %11.1fx" % (c_rate / py_rate))


if __name__ == "__main__":
    main()
