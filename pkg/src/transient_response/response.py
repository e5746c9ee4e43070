"""Transient linear response of the driven two-level system.

For each initial condition the induced dipole moment (up to a constant
prefactor) is ``mu(t) = |A(t)| cos(omega_p t - arg A(t))`` with

    A1(t) = (1/Z1) int_0^t dt' e^{i dw (t-t')} [w1' psi1(t-t') - w0 psi1*(t-t')]
    A2(t) = (1/Z2) int_0^t dt' e^{i dw (t-t')} [w1 psi2(t, t') - w0 psi1*(t-t')]

where ``dw`` is the detuning of the drive from the renormalized transition.
The correlated case weights the upper level with the renormalized energy
E1', the factorized case with the bare energy E1.

All time integrals use the composite rule of :mod:`.quadrature` on the
kernel-cache grid.  The fast path exploits the convolution structure; the
direct double loop (:func:`reference_amplitudes`) is kept as a check.
"""
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .bath import build_kernel_cache, energy_shift
from .errors import GridMismatch, InvalidInput, IndexOutOfRange
from .lineshape import TwoTimePhase, psi1, psi2
from .quadrature import DEFAULT_QUAD, composite_weights, integrate_finite

RENORMALIZED = "renormalized"
BARE = "bare"

# psi1 is treated as zero once xi exceeds this (|psi1| < 1e-26)
XI_NEGLIGIBLE = 60.0


@dataclass(frozen=True)
class SystemParams:
    """Two-level energies and drive, in units of the transition frequency.

    ``gap_convention`` fixes which gap is the unit: ``"renormalized"`` makes
    ``e1_prime - e0 = 1`` (so ``omega_p = 1`` is exact resonance), ``"bare"``
    makes ``e1 - e0 = 1``.
    """

    omega_p: float = 1.0
    e0: float = 0.0
    gap_convention: str = RENORMALIZED
    polaron_shift: float = 0.0

    def __post_init__(self):
        if self.gap_convention not in (RENORMALIZED, BARE):
            raise InvalidInput(f"unknown gap_convention {self.gap_convention!r}")
        if not np.isfinite(self.omega_p) or not self.polaron_shift >= 0:
            raise InvalidInput("omega_p must be finite and the shift >= 0")

    @classmethod
    def for_bath(cls, bath, omega_p=1.0, e0=0.0, gap_convention=RENORMALIZED,
                 quad=DEFAULT_QUAD):
        return cls(omega_p=omega_p, e0=e0, gap_convention=gap_convention,
                   polaron_shift=energy_shift(bath, quad))

    @property
    def e1_prime(self):
        if self.gap_convention == RENORMALIZED:
            return self.e0 + 1.0
        return self.e0 + 1.0 - self.polaron_shift

    @property
    def e1(self):
        return self.e1_prime + self.polaron_shift

    @property
    def detuning(self):
        return (self.e1_prime - self.e0) - self.omega_p


@dataclass(frozen=True)
class BoltzmannWeights:
    """Upper/lower level weights and their sum.

    Both weights are taken relative to the lower-lying level, which leaves
    ``w1 / z`` and ``w0 / z`` unchanged and keeps ``beta = inf`` finite.
    """

    w1: float
    w0: float
    z: float


def boltzmann_weights(sys, beta, case):
    """Case 1 weights the upper level with E1', case 2 with the bare E1."""
    if case not in (1, 2):
        raise InvalidInput(f"case must be 1 or 2, got {case}")
    e1 = sys.e1_prime if case == 1 else sys.e1
    e = np.array([e1, sys.e0])
    if np.isinf(beta):
        w = (e == e.min()).astype(float)
    else:
        w = np.exp(-beta * (e - e.min()))
    return BoltzmannWeights(w1=float(w[0]), w0=float(w[1]), z=float(w.sum()))


def _simpson_pattern(m):
    p = np.full(m, 2.0 / 3.0)
    p[1::2] = 4.0 / 3.0
    p[0] = 1.0 / 3.0
    return p


def kernel_convolution(kernel, table, dt, n=None):
    """``c[k] = int_0^{t_k} kernel(t_k - t') table(t') dt'`` on a uniform grid.

    ``kernel`` holds samples at lags 0, dt, ... and is taken as zero beyond
    its length; ``table`` (or ones when ``None``) holds samples at the grid
    points.  ``n`` is the output length when ``table`` is ``None``.  Each ``c[k]`` equals the composite rule with ``k`` panels
    (see :func:`composite_weights`): away from ``t' = 0`` those weights,
    read backwards from ``t' = t_k``, follow one fixed Simpson pattern, so
    the bulk is a single discrete convolution and only the first four nodes
    need a per-``k`` correction.
    """
    if table is not None:
        n = len(table)
    elif n is None:
        n = len(kernel)
    kernel = np.asarray(kernel)[:n]
    m = kernel.size
    weighted = _simpson_pattern(m) * kernel
    if table is None:
        out = np.zeros(n, dtype=complex)
        out[:m] = np.cumsum(weighted)
        out[m:] = out[m - 1] if m else 0.0
        table = np.ones(n)
    else:
        table = np.asarray(table)
        out = np.convolve(table, weighted)[:n].astype(complex)
    pattern = _simpson_pattern(m + 4)
    for k in range(min(n, m + 4)):
        c = composite_weights(k)
        for j in range(min(4, k + 1)):
            lag = k - j
            if lag < m:
                out[k] += (c[j] - pattern[lag]) * kernel[lag] * table[j]
    return dt * out


def _single_point(kernel, table, dt, k):
    """``kernel_convolution(...)[k]`` from the full composite weights."""
    j = np.arange(k + 1)
    lag = k - j
    keep = lag < len(kernel)
    vals = np.zeros(k + 1, dtype=complex)
    vals[keep] = kernel[lag[keep]] * (1.0 if table is None else table[j[keep]])
    return complex(dt * np.dot(composite_weights(k), vals))


def _check_index(cache, k):
    if not 0 <= k < cache.grid.size:
        raise IndexOutOfRange(f"grid index {k} outside [0, {cache.grid.size})")


def _base_kernel(sys, bath, cache, case):
    """``e^{i dw tau} [w1 psi1 - w0 psi1*] / z`` over the kernel support."""
    wts = boltzmann_weights(sys, bath.beta, case)
    m = cache.support(XI_NEGLIGIBLE)
    p = cache.psi1[:m]
    rot = np.exp(1j * sys.detuning * cache.grid[:m])
    return rot * (wts.w1 * p - wts.w0 * np.conj(p)) / wts.z


def _case2_parts(sys, bath, cache):
    wts = boltzmann_weights(sys, bath.beta, 2)
    m = cache.support(XI_NEGLIGIBLE)
    upper = np.exp(1j * sys.detuning * cache.grid[:m]) * cache.psi1[:m] * (wts.w1 / wts.z)
    # exp(-2i S(t')) - 1; vanishes identically without coupling
    table = np.expm1(-2j * cache.sine_kernel)
    return upper, table


def response_case1(sys, bath, cache):
    """``A1`` on every point of the cache grid."""
    return kernel_convolution(_base_kernel(sys, bath, cache, 1), None,
                              cache.dt, cache.grid.size)


def response_case2(sys, bath, cache):
    """``A2`` on every point of the cache grid.

    ``A2`` is split into the case-1-shaped integral with case-2 weights plus
    the effect of the two-time phase.  Writing ``T(t) = exp(-2i S(t))``,

        T(t') / T(t) - 1 = [(T(t') - 1) - (T(t) - 1)] / T(t)

    turns that correction into one convolution against ``T - 1`` and one
    cumulative integral, both O(N * support).
    """
    n = cache.grid.size
    base = kernel_convolution(_base_kernel(sys, bath, cache, 2), None, cache.dt, n)
    upper, tm1 = _case2_parts(sys, bath, cache)
    conv = kernel_convolution(upper, tm1, cache.dt)
    cum = kernel_convolution(upper, None, cache.dt, n)
    return base + (conv - tm1 * cum) / (1.0 + tm1)


def amplitude_case1(sys, bath, cache, k):
    """``A1(t_k)``."""
    _check_index(cache, k)
    return _single_point(_base_kernel(sys, bath, cache, 1), None, cache.dt, k)


def amplitude_case2(sys, bath, cache, phase, k):
    """``A2(t_k)``.  ``phase`` must describe the same bath as ``cache``."""
    _check_index(cache, k)
    if phase.sine is None and not np.allclose(
            phase.sine_kernel(cache.grid[k]), cache.sine_kernel[k],
            rtol=1e-10, atol=1e-12):
        raise GridMismatch("phase and cache describe different baths")
    base = _single_point(_base_kernel(sys, bath, cache, 2), None, cache.dt, k)
    upper, tm1 = _case2_parts(sys, bath, cache)
    conv = _single_point(upper, tm1, cache.dt, k)
    cum = _single_point(upper, None, cache.dt, k)
    return base + (conv - tm1[k] * cum) / (1.0 + tm1[k])


def reference_amplitudes(sys, bath, cache, phase=None, cases=(1, 2)):
    """Direct O(N^2) evaluation of ``A1`` and ``A2`` from the kernels.

    For every output time the integrand is assembled from :func:`psi1` and
    :func:`psi2` and passed through :func:`integrate_finite`; nothing is
    factored or truncated.  Returns a dict ``{case: array}``.
    """
    if phase is None:
        phase = TwoTimePhase.from_bath(bath)
    grid, dw = cache.grid, sys.detuning
    w = {c: boltzmann_weights(sys, bath.beta, c) for c in (1, 2)}
    out = {c: np.zeros(grid.size, dtype=complex) for c in cases}
    for k in range(1, grid.size):
        t = grid[k]
        lag = k - np.arange(k + 1)
        p1 = psi1(cache, lag)
        rot = np.exp(1j * dw * cache.dt * lag)
        if 1 in out:
            def f1(tp, p1=p1, rot=rot, w1=w[1]):
                return rot * (w1.w1 * p1 - w1.w0 * np.conj(p1)) / w1.z
            out[1][k] = integrate_finite(f1, 0.0, t, k)
        if 2 in out:
            def f2(tp, p1=p1, rot=rot, w2=w[2], t=t):
                p2 = psi2(cache, phase, t, np.minimum(tp, t))
                return rot * (w2.w1 * p2 - w2.w0 * np.conj(p1)) / w2.z
            out[2][k] = integrate_finite(f2, 0.0, t, k)
    return out


@dataclass(frozen=True, eq=False)
class ResponseTrace:
    grid: np.ndarray
    a: np.ndarray
    amplitude: np.ndarray
    phase: np.ndarray
    phase_unwrapped: np.ndarray
    mu: np.ndarray
    intensity: np.ndarray
    case_id: int
    omega_p: float


def unwrap_phase(a):
    """Continuous ``arg a``.

    Samples where ``a`` vanishes exactly carry no phase; they inherit the
    nearest defined value instead of introducing a spurious jump.
    """
    a = np.asarray(a)
    nz = np.flatnonzero(a != 0)
    out = np.zeros(a.shape)
    if nz.size == 0:
        return out
    vals = np.unwrap(np.angle(a[nz]))
    # index of the most recent defined sample, or the first one before it
    pos = np.searchsorted(nz, np.arange(a.size), side="right") - 1
    return vals[np.maximum(pos, 0)]


def assemble_trace(a, sys, grid, case_id):
    """Fill amplitude, phases and dipole moment from complex ``A`` samples."""
    a = np.asarray(a, dtype=complex)
    grid = np.asarray(grid, dtype=float)
    if a.shape != grid.shape:
        raise GridMismatch("A samples and grid differ in length")
    amplitude = np.abs(a)
    phase = np.angle(a)
    mu = amplitude * np.cos(sys.omega_p * grid - phase)
    return ResponseTrace(grid=grid, a=a, amplitude=amplitude, phase=phase,
                         phase_unwrapped=unwrap_phase(a), mu=mu,
                         intensity=mu ** 2, case_id=case_id,
                         omega_p=sys.omega_p)


@dataclass(frozen=True)
class ComparisonReport:
    """Paired summary of the two responses.

    Rise times are ``None`` when the amplitude has not settled within the
    grid; ``stationary_m`` is False when the amplitude still drifts by more
    than the tolerance across the tail window.
    """

    rise_time_1: Optional[float]
    rise_time_2: Optional[float]
    asymptotic_amplitude_1: float
    asymptotic_amplitude_2: float
    asymptotic_phase_1: float
    asymptotic_phase_2: float
    amplitude_ratio_21: float
    phase_offset_21: float
    stationarity_tol: float
    tail_fraction: float
    stationary_1: bool = True
    stationary_2: bool = True
    tail_start: float = field(default=0.0)

    @property
    def stationary(self):
        return self.stationary_1 and self.stationary_2


def _tail_stats(trace, start, tol):
    amp = trace.amplitude
    tail = trace.grid >= start
    asym = float(np.mean(amp[tail]))
    asym_phase = float(np.mean(trace.phase_unwrapped[tail]))
    spread = float(np.ptp(amp[tail]))
    stationary = spread <= tol * asym if asym > 0 else spread == 0
    outside = np.flatnonzero(np.abs(amp - asym) > tol * asym)
    if outside.size == 0:
        rise = 0.0
    elif outside[-1] + 1 < amp.size:
        rise = float(trace.grid[outside[-1] + 1])
    else:
        rise = None
    return asym, asym_phase, rise, bool(stationary)


def compare(trace1, trace2, stationarity_tol=1e-3, tail_fraction=0.2):
    """Rise times, asymptotic amplitudes/phases and their differences.

    The asymptotic values are means over the last ``tail_fraction`` of the
    grid; the rise time is the earliest time after which ``|A|`` stays
    within ``stationarity_tol`` (relative) of its asymptote.
    """
    if not np.array_equal(trace1.grid, trace2.grid):
        raise GridMismatch("traces are on different grids")
    if not 0 < tail_fraction <= 0.5:
        raise InvalidInput("tail_fraction must lie in (0, 0.5]")
    if not stationarity_tol > 0:
        raise InvalidInput("stationarity_tol must be positive")
    start = (1.0 - tail_fraction) * trace1.grid[-1]
    a1, p1, r1, s1 = _tail_stats(trace1, start, stationarity_tol)
    a2, p2, r2, s2 = _tail_stats(trace2, start, stationarity_tol)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = float(np.float64(a2) / a1)
    offset = float(np.angle(np.exp(1j * (p2 - p1))))
    return ComparisonReport(
        rise_time_1=r1, rise_time_2=r2,
        asymptotic_amplitude_1=a1, asymptotic_amplitude_2=a2,
        asymptotic_phase_1=p1, asymptotic_phase_2=p2,
        amplitude_ratio_21=ratio, phase_offset_21=offset,
        stationarity_tol=stationarity_tol, tail_fraction=tail_fraction,
        stationary_1=s1, stationary_2=s2, tail_start=float(start))


def simulate(sys, bath, grid, quad=DEFAULT_QUAD):
    """Build the kernel cache on ``grid`` and return both traces and the cache."""
    cache = build_kernel_cache(bath, grid, quad)
    t1 = assemble_trace(response_case1(sys, bath, cache), sys, cache.grid, 1)
    t2 = assemble_trace(response_case2(sys, bath, cache), sys, cache.grid, 2)
    return t1, t2, cache
