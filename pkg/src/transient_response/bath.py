"""Bosonic bath: spectral densities, thermal occupation and bath integrals.

Units: hbar = k_B = 1, frequencies and energies in units of the two-level
transition frequency, times scaled by its inverse.

With ``g(w) = h(w) / w**2`` the two integrals every kernel needs are

* the dephasing exponent ``xi(t) = int g(w) coth(beta w / 2) (1 - cos w t) dw``
* the sine kernel ``S(t) = int g(w) sin(w t) dw``

(``coth(beta w / 2) = 1 + 2 n(w)`` with ``n`` the Bose occupation).
"""
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

from .errors import InvalidInput, NonConvergence
from .grid import check_grid
from .quadrature import DEFAULT_QUAD, integrate_semi_infinite

# below this fraction of the decay scale the xi integrand is replaced by its
# small-frequency form
_FLOOR_FRACTION = 1e-6
_SERIES_THRESHOLD = 1e-6


@dataclass(frozen=True)
class Ohmic:
    """``h(w) = s w exp(-w / omega_c)``."""

    s: float
    omega_c: float

    def __post_init__(self):
        if not self.s >= 0:
            raise InvalidInput(f"s must be >= 0, got {self.s}")
        if not self.omega_c > 0:
            raise InvalidInput(f"omega_c must be > 0, got {self.omega_c}")

    def __call__(self, w):
        return self.s * w * np.exp(-w / self.omega_c)

    def over_omega(self, w):
        """``h(w) / w``, finite at w = 0."""
        return self.s * np.exp(-w / self.omega_c)

    def decay_scale(self, quad=DEFAULT_QUAD):
        return self.omega_c

    breakpoints = None


@dataclass(frozen=True, eq=False)
class Tabulated:
    """Spectral density given by samples, linearly interpolated.

    Below the first sample ``h`` is continued linearly through the origin;
    above the last sample it is zero.
    """

    omega: np.ndarray
    h: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.omega, dtype=float)
        h = np.asarray(self.h, dtype=float)
        if w.ndim != 1 or w.shape != h.shape or w.size < 2:
            raise InvalidInput("tabulated density needs >= 2 matching samples")
        if np.any(np.diff(w) <= 0) or w[0] < 0:
            raise InvalidInput("tabulated frequencies must be increasing and >= 0")
        if np.any(h < 0) or not np.all(np.isfinite(h)):
            raise InvalidInput("tabulated h(w) must be finite and >= 0")
        if w[0] == 0 and h[0] != 0:
            raise InvalidInput("h(0) must vanish for h(w)/w to stay bounded")
        object.__setattr__(self, "omega", w)
        object.__setattr__(self, "h", h)

    @classmethod
    def from_file(cls, path):
        """Read two whitespace- or comma-separated columns ``omega h``."""
        data = np.loadtxt(path, delimiter=None if _is_whitespace(path) else ",",
                          comments="#", ndmin=2)
        return cls(data[:, 0], data[:, 1])

    @property
    def low_frequency_slope(self):
        w, h = self.omega, self.h
        if w[0] > 0:
            return h[0] / w[0]
        return (h[1] - h[0]) / (w[1] - w[0])

    def __call__(self, w):
        w = np.asarray(w, dtype=float)
        out = np.interp(w, self.omega, self.h, right=0.0)
        if self.omega[0] > 0:
            out = np.where(w < self.omega[0], self.low_frequency_slope * w, out)
        return out

    def over_omega(self, w):
        w = np.asarray(w, dtype=float)
        safe = np.where(w > 0, w, 1.0)
        return np.where(w > 0, self(w) / safe, self.low_frequency_slope)

    def decay_scale(self, quad=DEFAULT_QUAD):
        # integrate exactly over the tabulated support
        return self.omega[-1] / quad.cutoff_multiplier

    @property
    def breakpoints(self):
        return self.omega


def _is_whitespace(path):
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if line and not line.startswith("#"):
                return "," not in line
    return True


@dataclass(frozen=True)
class BathSpec:
    """Spectral density plus inverse temperature ``beta`` (``inf`` means T = 0)."""

    density: object
    beta: float

    def __post_init__(self):
        if not isinstance(self.density, (Ohmic, Tabulated)):
            raise InvalidInput("density must be Ohmic or Tabulated")
        if not self.beta > 0:
            raise InvalidInput(f"beta must be > 0, got {self.beta}")

    @classmethod
    def ohmic(cls, s, omega_c, temperature):
        return cls(Ohmic(s, omega_c), _beta(temperature))

    @property
    def temperature(self):
        return 1.0 / self.beta

    @property
    def is_ohmic(self):
        return isinstance(self.density, Ohmic)

    @property
    def coupling_slope(self):
        """``lim h(w) / w`` as w -> 0."""
        if self.is_ohmic:
            return self.density.s
        return self.density.low_frequency_slope


def _beta(temperature):
    if not temperature >= 0:
        raise InvalidInput(f"temperature must be >= 0, got {temperature}")
    return np.inf if temperature == 0 else 1.0 / temperature


def bose_occupation(omega, beta):
    """Bose-Einstein occupation ``1 / (exp(beta omega) - 1)``.

    For ``beta * omega < 1e-6`` the Laurent series
    ``1/x - 1/2 + x/12`` is used instead of the direct form.
    """
    omega = np.asarray(omega, dtype=float)
    if np.any(omega <= 0) or not beta > 0:
        raise InvalidInput("bose_occupation needs omega > 0 and beta > 0")
    x = beta * omega
    small = x < _SERIES_THRESHOLD
    xs = np.where(small, x, 1.0)
    with np.errstate(over="ignore"):
        direct = 1.0 / np.expm1(np.where(small, 1.0, x))
    out = np.where(small, 1.0 / xs - 0.5 + xs / 12.0, direct)
    return out[()] if out.ndim == 0 else out


def _omega_coth(omega, beta):
    """``omega * (1 + 2 n(omega))``, smooth down to omega = 0."""
    if np.isinf(beta):
        return omega
    return omega * (1.0 + 2.0 * bose_occupation(omega, beta))


def _xi_integrand(bath, t, high_temperature=False):
    """Return ``f(w)`` for the xi integral; ``t`` may be an array (quad_vec)."""
    density, beta = bath.density, bath.beta
    floor = _FLOOR_FRACTION * density.decay_scale()
    slope = bath.coupling_slope
    half_t2 = 0.5 * np.asarray(t, dtype=float) ** 2

    if high_temperature:
        def w_coth(w):
            return w + 2.0 / beta
    else:
        def w_coth(w):
            return _omega_coth(w, beta)

    def f(w):
        if w < floor:
            # h/w -> slope and 2 sin^2(wt/2) / w^2 -> t^2 / 2
            return slope * half_t2 * w_coth(w)
        # 1 - cos(wt) written as 2 sin^2(wt/2) to avoid cancellation
        s2 = 2.0 * np.sin(0.5 * w * t) ** 2
        return density.over_omega(w) * w_coth(w) / w ** 2 * s2
    return f


def xi(bath, t, quad=DEFAULT_QUAD, high_temperature=False):
    """Dephasing exponent by adaptive quadrature.

    With ``high_temperature=True`` the occupation is replaced by its
    classical limit ``n(w) = 1 / (beta w)``.
    """
    if not t >= 0:
        raise InvalidInput(f"t must be >= 0, got {t}")
    if t == 0:
        return 0.0
    res = integrate_semi_infinite(_xi_integrand(bath, t, high_temperature),
                                  quad, bath.density.decay_scale(quad),
                                  breakpoints=bath.density.breakpoints)
    if not res.converged:
        raise NonConvergence(f"xi(t={t})", res)
    return max(float(res.value), 0.0)


def _log_gamma_gap(z0, y):
    """``ln Gamma(z0) - Re ln Gamma(z0 + i y)`` for real ``z0 >= 1``."""
    z0 = np.asarray(z0, dtype=float)
    y = np.asarray(y, dtype=float)
    if np.all(z0 >= 15.0):
        # Stirling difference: the leading terms cancel analytically
        z = z0 + 1j * y
        out = -0.5 * (z0 - 0.5) * np.log1p((y / z0) ** 2) + y * np.arctan2(y, z0)
        for c, p in ((1 / 12, 1), (-1 / 360, 3), (1 / 1260, 5),
                     (-1 / 1680, 7), (1 / 1188, 9)):
            out = out + c * (z0 ** -p - (z ** -p).real)
        return out
    return special.gammaln(z0) - special.loggamma(z0 + 1j * y).real


def xi_ohmic(bath, t):
    """Closed form of xi for the Ohmic density, vectorized over ``t``.

    Expanding ``coth(beta w / 2) = 1 + 2 sum_n exp(-n beta w)`` gives

        xi = s [ln(1 + (wc t)^2) / 2 + sum_n ln(1 + (wc t)^2 / (1 + n beta wc)^2)]

    and the sum is a ratio of Gamma functions,
    ``2 [ln G(1 + b) - Re ln G(1 + b + i t / beta)]`` with ``b = 1 / (beta wc)``.
    """
    if not bath.is_ohmic:
        raise InvalidInput("xi_ohmic needs an Ohmic bath")
    s, wc = bath.density.s, bath.density.omega_c
    t = np.asarray(t, dtype=float)
    out = 0.5 * np.log1p((wc * t) ** 2)
    if np.isfinite(bath.beta):
        b = 1.0 / (bath.beta * wc)
        out = out + 2.0 * _log_gamma_gap(1.0 + b, t / bath.beta)
    out = s * np.maximum(out, 0.0)
    return out[()] if out.ndim == 0 else out


def xi_high_temperature(bath, t):
    """Classical-occupation form of xi for the Ohmic density.

    ``(s / (2 beta)) (4 t arctan(wc t) - (2 - beta wc) ln(1 + wc^2 t^2) / wc)``,
    exact for ``n(w) = 1 / (beta w)`` and non-negative whenever
    ``beta wc <= 2``.
    """
    if not bath.is_ohmic:
        raise InvalidInput("xi_high_temperature needs an Ohmic bath")
    s, wc, beta = bath.density.s, bath.density.omega_c, bath.beta
    t = np.asarray(t, dtype=float)
    out = (s / (2.0 * beta)) * (4.0 * t * np.arctan(wc * t)
                                - (2.0 - beta * wc) * np.log1p((wc * t) ** 2) / wc)
    return out[()] if out.ndim == 0 else out


def sine_kernel_quad(bath, t, quad=DEFAULT_QUAD):
    """``S(t)`` by adaptive quadrature, for any density."""
    if not t >= 0:
        raise InvalidInput(f"t must be >= 0, got {t}")
    if t == 0:
        return 0.0
    density = bath.density

    def f(w):
        return density.over_omega(w) * t * np.sinc(w * t / np.pi)

    res = integrate_semi_infinite(f, quad, density.decay_scale(quad),
                                  breakpoints=density.breakpoints)
    if not res.converged:
        raise NonConvergence(f"sine_kernel(t={t})", res)
    return float(res.value)


def sine_kernel(bath, t, quad=DEFAULT_QUAD):
    """``S(t)``: ``s arctan(wc t)`` for Ohmic baths, quadrature otherwise."""
    if bath.is_ohmic:
        t = np.asarray(t, dtype=float)
        if np.any(t < 0):
            raise InvalidInput("t must be >= 0")
        out = bath.density.s * np.arctan(bath.density.omega_c * t)
        return out[()] if out.ndim == 0 else out
    if np.ndim(t):
        return np.array([sine_kernel_quad(bath, float(x), quad) for x in t])
    return sine_kernel_quad(bath, t, quad)


def energy_shift(bath, quad=DEFAULT_QUAD):
    """Polaron shift ``int h(w) / w dw`` (``s * omega_c`` for Ohmic)."""
    if bath.is_ohmic:
        return bath.density.s * bath.density.omega_c
    res = integrate_semi_infinite(bath.density.over_omega, quad,
                                  bath.density.decay_scale(quad),
                                  breakpoints=bath.density.breakpoints)
    if not res.converged:
        raise NonConvergence("energy_shift", res)
    return float(res.value)


@dataclass(frozen=True, eq=False)
class KernelCache:
    """Bath kernels tabulated on a uniform time grid.

    ``psi1 = exp(-xi - i sine_kernel)`` is the one-time lineshape kernel.
    """

    grid: np.ndarray
    dt: float
    xi: np.ndarray
    sine_kernel: np.ndarray
    psi1: np.ndarray

    def support(self, xi_max=60.0):
        """Number of leading samples with ``xi <= xi_max``.

        Past that point ``|psi1| < exp(-xi_max)`` everywhere, so the kernel
        can be treated as zero.
        """
        idx = np.nonzero(self.xi <= xi_max)[0]
        return int(idx[-1]) + 1 if idx.size else 1


def _vector_quad(f, bath, quad, name):
    upper = quad.cutoff_multiplier * bath.density.decay_scale(quad)
    points = bath.density.breakpoints
    if points is not None:
        points = points[(points > 0) & (points < upper)]
    res = integrate.quad_vec(f, 0.0, upper, epsabs=quad.abs_tol,
                             epsrel=quad.rel_tol, norm="max", full_output=True,
                             limit=quad.max_subdivisions
                             + (0 if points is None else points.size),
                             points=points)
    value, err, info = res
    if not info.success:
        raise NonConvergence(name)
    return value


def build_kernel_cache(bath, grid, quad=DEFAULT_QUAD, method="auto"):
    """Tabulate xi, the sine kernel and psi1 on ``grid``.

    ``method="auto"`` uses the closed forms for Ohmic baths and vectorized
    adaptive quadrature otherwise; ``method="quadrature"`` forces the latter.
    """
    grid, dt = check_grid(grid)
    if method not in ("auto", "quadrature"):
        raise InvalidInput(f"unknown method {method!r}")
    if bath.is_ohmic and method == "auto":
        xi_vals = np.asarray(xi_ohmic(bath, grid), dtype=float)
        s_vals = np.asarray(sine_kernel(bath, grid), dtype=float)
    else:
        t = grid[1:]
        xi_vals = np.zeros_like(grid)
        s_vals = np.zeros_like(grid)
        if t.size:
            xi_vals[1:] = _vector_quad(_xi_integrand(bath, t), bath, quad, "xi")
            density = bath.density
            s_vals[1:] = _vector_quad(
                lambda w: density.over_omega(w) * t * np.sinc(w * t / np.pi),
                bath, quad, "sine_kernel")
        xi_vals = np.maximum(xi_vals, 0.0)
    xi_vals[0] = 0.0
    s_vals[0] = 0.0
    psi1 = np.exp(-xi_vals - 1j * s_vals)
    return KernelCache(grid=grid, dt=dt, xi=xi_vals, sine_kernel=s_vals,
                       psi1=psi1)
