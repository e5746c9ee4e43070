"""Lineshape kernels for the two initial conditions.

``psi1(tau)`` is the kernel for the fully equilibrated initial state.  For
the factorized initial state the bath starts displaced relative to the
excited-state equilibrium, and the kernel picks up a unit-modulus factor

    psi2(t, t') = psi1(t - t') * exp(-2i [S(t') - S(t)])

with ``S`` the sine kernel.  The extra factor changes phase only, so both
kernels share the same decoherence envelope ``exp(-xi)``.
"""
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .bath import sine_kernel_quad
from .errors import GridMismatch, IndexOutOfRange, InvalidInput


@dataclass(frozen=True)
class TwoTimePhase:
    """Source of the sine kernel used by the factorized-state phase factor.

    Ohmic baths carry ``s`` and ``omega_c`` and use ``s arctan(omega_c t)``;
    anything else supplies ``sine``, a vectorized callable for ``S(t)``.
    """

    s: float = 0.0
    omega_c: float = 1.0
    sine: Optional[Callable] = None

    @classmethod
    def from_bath(cls, bath, quad=None):
        if bath.is_ohmic:
            return cls(s=bath.density.s, omega_c=bath.density.omega_c)
        kw = {} if quad is None else {"quad": quad}

        def sine(t):
            t = np.asarray(t, dtype=float)
            flat = [sine_kernel_quad(bath, float(x), **kw) for x in t.ravel()]
            return np.reshape(flat, t.shape)[()]
        return cls(sine=sine)

    def sine_kernel(self, t):
        if self.sine is not None:
            return self.sine(t)
        return self.s * np.arctan(self.omega_c * np.asarray(t, dtype=float))


def two_time_phase(phase, t, t_prime):
    """``exp(-2i [S(t') - S(t)])`` for ``t >= t' >= 0`` (arrays broadcast)."""
    t = np.asarray(t, dtype=float)
    t_prime = np.asarray(t_prime, dtype=float)
    if np.any(t_prime > t) or np.any(t_prime < 0):
        raise InvalidInput("two_time_phase needs t >= t_prime >= 0")
    if phase.sine is None:
        # arctan(a) - arctan(b) in one piece keeps t = t' exact
        delta = phase.s * np.arctan2(phase.omega_c * (t_prime - t),
                                     1.0 + phase.omega_c ** 2 * t * t_prime)
    else:
        delta = phase.sine_kernel(t_prime) - phase.sine_kernel(t)
    out = np.exp(-2j * delta)
    return out[()] if out.ndim == 0 else out


def psi1(cache, k):
    """Cached ``psi1`` at grid index ``k`` (integer or integer array)."""
    k = np.asarray(k)
    if np.any(k < 0) or np.any(k >= cache.grid.size):
        raise IndexOutOfRange(f"grid index outside [0, {cache.grid.size})")
    out = cache.psi1[k]
    return out[()] if np.ndim(out) == 0 else out


def _grid_index(cache, tau):
    if cache.dt == 0.0:
        idx = np.zeros(np.shape(tau), dtype=int)
        ok = np.asarray(tau) == 0
    else:
        x = np.asarray(tau, dtype=float) / cache.dt
        idx = np.rint(x).astype(int)
        ok = np.abs(x - idx) <= 1e-6
    if not np.all(ok):
        raise GridMismatch("t - t_prime is not a multiple of the grid step")
    return idx


def psi2(cache, phase, t, t_prime):
    """``psi1(t - t') * two_time_phase(t, t')``.

    ``t - t_prime`` must land on the cache grid; with the response evaluated
    on that same grid this always holds and no interpolation is needed.
    """
    t = np.asarray(t, dtype=float)
    t_prime = np.asarray(t_prime, dtype=float)
    factor = two_time_phase(phase, t, t_prime)
    out = psi1(cache, _grid_index(cache, t - t_prime)) * factor
    return out[()] if np.ndim(out) == 0 else out

