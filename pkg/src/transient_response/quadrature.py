"""One-dimensional integration utilities.

Two kinds of integrals appear in the response calculation:

* frequency integrals over (0, inf) of smooth, exponentially damped and
  possibly oscillatory integrands.  These go through an adaptive
  Gauss-Kronrod rule (QUADPACK via :func:`scipy.integrate.quad`), which never
  evaluates the endpoints, on the truncated domain (0, c * decay_scale].
* time integrals over a uniform grid, evaluated with a composite
  Simpson rule so that values on the output grid can be reused directly.
"""
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .errors import InvalidDomain, InvalidInput, InvalidInterval


@dataclass(frozen=True)
class QuadSpec:
    """Tolerances and truncation for semi-infinite frequency integrals.

    Parameters
    ----------
    rel_tol, abs_tol : float
        Requested relative and absolute accuracy.
    max_subdivisions : int
        Budget of adaptive bisections.
    cutoff_multiplier : float
        The domain (0, inf) is truncated at ``cutoff_multiplier * decay_scale``.
        With an ``exp(-w / decay_scale)`` envelope the default of 40 leaves a
        tail below 1e-17.
    """

    rel_tol: float = 1e-9
    abs_tol: float = 1e-12
    max_subdivisions: int = 2000
    cutoff_multiplier: float = 40.0

    def __post_init__(self):
        if not self.rel_tol > 0 or not self.abs_tol > 0:
            raise InvalidInput("rel_tol and abs_tol must be positive")
        if self.max_subdivisions < 1:
            raise InvalidInput("max_subdivisions must be >= 1")
        if not self.cutoff_multiplier >= 10:
            raise InvalidInput("cutoff_multiplier must be >= 10")


DEFAULT_QUAD = QuadSpec()


@dataclass(frozen=True)
class QuadResult:
    value: complex
    error_estimate: float
    subdivisions_used: int
    converged: bool


def _interior(points, upper):
    if points is None:
        return None
    points = np.asarray(points, dtype=float)
    points = points[(points > 0) & (points < upper)]
    return points if points.size else None


def integrate_semi_infinite(f, spec=DEFAULT_QUAD, decay_scale=1.0,
                            complex_valued=False, breakpoints=None):
    """Integrate ``f`` over (0, spec.cutoff_multiplier * decay_scale].

    ``f`` must be finite on the open interval; a removable singularity at
    zero is fine because the rule never samples the endpoint.  A result that
    misses the tolerance is still returned, with ``converged=False``.

    ``breakpoints`` marks known kinks (e.g. nodes of an interpolation
    table); the subdivision budget is extended by their number.
    """
    if not decay_scale > 0:
        raise InvalidDomain(f"decay_scale must be positive, got {decay_scale}")
    upper = spec.cutoff_multiplier * decay_scale
    points = _interior(breakpoints, upper)
    limit = spec.max_subdivisions + (0 if points is None else points.size)
    with warnings.catch_warnings():
        # ier is inspected below; the warning text would only duplicate it
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        out = integrate.quad(f, 0.0, upper, epsabs=spec.abs_tol,
                             epsrel=spec.rel_tol, limit=limit, points=points,
                             full_output=1, complex_func=complex_valued)
    if complex_valued:
        value, error, info = out
        # per-part tuples carry a trailing message only on failure
        ier = 0 if all(len(i) == 1 for i in info.values()) else 1
        last = max(i[0]["last"] for i in info.values())
        error = abs(error)
    else:
        value, error, info = out[:3]
        ier = 0 if len(out) == 3 else 1
        last = info["last"]
    converged = ier == 0 and error <= max(spec.abs_tol,
                                          spec.rel_tol * abs(value))
    return QuadResult(value=value, error_estimate=float(error),
                      subdivisions_used=int(last), converged=bool(converged))


def composite_weights(n_panels):
    """Weights (in units of the panel width) of the composite rule on
    ``n_panels + 1`` equispaced nodes.

    Even panel counts use Simpson's rule.  Odd counts >= 3 apply the
    3/8 rule on the first three panels and Simpson on the rest, so the
    rule stays fourth order.  A single panel falls back to the trapezoid.
    """
    n = int(n_panels)
    if n < 0:
        raise InvalidInput("n_panels must be >= 0")
    w = np.zeros(n + 1)
    if n == 0:
        return w
    if n == 1:
        w[:] = 0.5
        return w
    start = 0
    if n % 2:
        w[:4] += np.array([3.0, 9.0, 9.0, 3.0]) / 8.0
        start = 3
    m = n - start
    if m:
        s = np.full(m + 1, 2.0 / 3.0)
        s[1::2] = 4.0 / 3.0
        s[0] = s[-1] = 1.0 / 3.0
        w[start:] += s
    return w


def integrate_finite(f, a, b, n_panels):
    """Composite-rule integral of ``f`` over [a, b] with ``n_panels`` panels.

    ``f`` is called once with the array of nodes and must return an array of
    the same length.
    """
    if a > b:
        raise InvalidInterval(f"a={a} > b={b}")
    if n_panels < 1:
        raise InvalidInput("n_panels must be >= 1")
    x = np.linspace(a, b, int(n_panels) + 1)
    h = (b - a) / n_panels
    y = np.asarray(f(x))
    return complex(h * np.dot(composite_weights(n_panels), y))
