"""Transient linear response of a two-level system in a bosonic bath.

Compares the induced dipole moment for an initially equilibrated
system+bath (case 1) against a factorized system x bath start (case 2).
"""
__version__ = "0.1.0"

from .bath import (BathSpec, KernelCache, Ohmic, Tabulated, bose_occupation,  # noqa: E402
                   build_kernel_cache, energy_shift, sine_kernel, xi,
                   xi_high_temperature, xi_ohmic)
from .lineshape import TwoTimePhase, psi1, psi2, two_time_phase  # noqa: E402
from .quadrature import (QuadResult, QuadSpec, integrate_finite,  # noqa: E402
                         integrate_semi_infinite)
from .response import (ComparisonReport, ResponseTrace, SystemParams,  # noqa: E402
                       amplitude_case1, amplitude_case2, assemble_trace,
                       compare, response_case1, response_case2, simulate)
