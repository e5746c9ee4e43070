"""Exception types shared across the package."""


class TransientResponseError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInput(TransientResponseError, ValueError):
    pass


class InvalidDomain(InvalidInput):
    pass


class InvalidInterval(InvalidInput):
    pass


class InvalidGrid(InvalidInput):
    pass


class GridMismatch(InvalidInput):
    """Arrays or caches were built on incompatible time grids."""


class IndexOutOfRange(TransientResponseError, IndexError):
    pass


class NonConvergence(TransientResponseError, ArithmeticError):
    """An adaptive integral ran out of subdivisions before meeting tolerance.

    ``name`` identifies the offending integral so callers (the CLI in
    particular) can report it.
    """

    def __init__(self, name, result=None):
        self.name = name
        self.result = result
        msg = f"integral '{name}' did not converge"
        if result is not None:
            msg += (f" (value={result.value!r}, error estimate="
                    f"{result.error_estimate:.3g}, subdivisions="
                    f"{result.subdivisions_used})")
        super().__init__(msg)
