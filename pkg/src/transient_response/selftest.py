"""Embedded analytic-identity checks run by ``trs selftest``."""
import time

import numpy as np

from .bath import (BathSpec, build_kernel_cache, sine_kernel_quad, xi,
                   xi_high_temperature, xi_ohmic)
from .grid import make_grid
from .response import (SystemParams, reference_amplitudes, response_case1,
                       response_case2)


def _sine_identity():
    bath = BathSpec.ohmic(1.0, 0.2, 10.0)
    t = np.logspace(-2, 2, 20)
    quad = np.array([sine_kernel_quad(bath, x) for x in t])
    return np.max(np.abs(quad - np.arctan(0.2 * t))), 1e-8


def _high_temperature_xi():
    bath = BathSpec.ohmic(1.0, 0.02, 1e4)
    t = np.linspace(2.0, 100.0, 20)
    quad = np.array([xi(bath, x, high_temperature=True) for x in t])
    return np.max(np.abs(xi_high_temperature(bath, t) / quad - 1)), 1e-6


def _closed_form_xi():
    bath = BathSpec.ohmic(1.0, 0.2, 1.0)
    t = np.linspace(0.5, 100.0, 20)
    quad = np.array([xi(bath, x) for x in t])
    return np.max(np.abs(xi_ohmic(bath, t) / quad - 1)), 1e-8


def _zero_coupling():
    bath = BathSpec.ohmic(0.0, 0.2, 1.0)
    sys = SystemParams.for_bath(bath)
    cache = build_kernel_cache(bath, make_grid(49.99, 0.01))
    a1 = response_case1(sys, bath, cache)
    a2 = response_case2(sys, bath, cache)
    return np.max(np.abs(a1 - a2)), 1e-14


def _fast_vs_reference():
    bath = BathSpec.ohmic(1.0, 0.2, 10.0)
    sys = SystemParams.for_bath(bath)
    cache = build_kernel_cache(bath, make_grid(3.99, 0.01))
    ref = reference_amplitudes(sys, bath, cache)
    err = 0.0
    for fast, slow in ((response_case1(sys, bath, cache), ref[1]),
                       (response_case2(sys, bath, cache), ref[2])):
        err = max(err, np.max(np.abs(fast - slow)) / np.max(np.abs(slow)))
    return err, 1e-10


CHECKS = (
    ("sine_kernel_arctan_identity", _sine_identity),
    ("high_temperature_xi", _high_temperature_xi),
    ("ohmic_xi_closed_form", _closed_form_xi),
    ("zero_coupling_coincidence", _zero_coupling),
    ("fast_path_vs_reference", _fast_vs_reference),
)


def run_selftest(tolerance_scale=1.0, out=print):
    """Run every check; return True iff all pass."""
    ok = True
    for name, check in CHECKS:
        start = time.perf_counter()
        err, tol = check()
        tol *= tolerance_scale
        passed = bool(err <= tol)
        ok &= passed
        out(f"{'PASS' if passed else 'FAIL'} {name}: error={err:.3e} "
            f"tol={tol:.1e} ({time.perf_counter() - start:.2f}s)")
    return ok
