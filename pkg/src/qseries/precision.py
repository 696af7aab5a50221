"""Precision context and arbitrary-precision real helpers.

All scalar arithmetic is done with mpmath ``mpf`` values; a
:class:`PrecisionCtx` decides the working precision (requested digits plus
guard digits to absorb cancellation), the truncation-error target and the
hard cap on summed or multiplied terms.
"""

from __future__ import annotations

from dataclasses import dataclass

from mpmath import mp, mpf

from .errors import QDomainError

__all__ = ["PrecisionCtx", "DEFAULT_CTX", "to_real", "real_str"]


@dataclass(frozen=True)
class PrecisionCtx:
    """Evaluation context governing every series/product evaluation.

    digits        decimal working precision of reported values
    max_terms     hard cap on summed/multiplied terms per evaluation
    tail_rel_tol  target relative truncation error (None -> 10**-digits)
    guard_digits  extra internal digits to absorb cancellation
    """

    digits: int = 40
    max_terms: int = 500_000
    tail_rel_tol: float | None = None
    guard_digits: int = 10

    def __post_init__(self):
        if self.digits < 10:
            raise QDomainError("digits must be >= 10")
        if self.max_terms < 1:
            raise QDomainError("max_terms must be >= 1")
        if self.guard_digits < 0:
            raise QDomainError("guard_digits must be >= 0")
        if self.tail_rel_tol is not None and not (0 < self.tail_rel_tol < 1):
            raise QDomainError("tail_rel_tol must lie in (0, 1)")

    @property
    def working_dps(self) -> int:
        return self.digits + self.guard_digits

    def tail_tol(self) -> mpf:
        if self.tail_rel_tol is None:
            return mpf(10) ** (-self.digits)
        return mpf(self.tail_rel_tol)

    def rel_floor(self) -> mpf:
        """Floor used in relative-error denominators: 10**-digits."""
        return mpf(10) ** (-self.digits)

    def working(self):
        """Context manager switching mpmath to the working precision."""
        return mp.workdps(self.working_dps)


DEFAULT_CTX = PrecisionCtx()


def to_real(x) -> mpf:
    """Coerce a scalar to mpf. Strings are parsed decimally (preferred for
    exact decimal inputs); ints/floats/mpf pass through mpmath."""
    if isinstance(x, mpf):
        return x
    if isinstance(x, str):
        return mpf(x.strip())
    return mpf(x)


def real_str(x, digits: int) -> str:
    """Decimal-string form of ``x`` at ``digits`` significant digits.

    Round-trips through :func:`to_real` to the context's digit count.
    """
    return mp.nstr(mpf(x), digits)
