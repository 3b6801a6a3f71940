"""Arbitrary-precision substrate: contexts, reals, exact rationals, constants.

Every numeric operation in the package runs inside a precision context that
carries guard digits beyond the requested precision.  Boundary values are
immutable ``BigReal`` wrappers that serialize to decimal strings and round-trip
exactly at the precision they were produced under.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp, mpf

from .errors import DomainError

ExactRational = Fraction

_ELEM_FNS = ("exp", "ln", "sqrt", "sin", "cos", "sinh", "cosh", "arctan")


@dataclass(frozen=True)
class PrecisionContext:
    """Requested decimal digits plus guard digits of working precision.

    ``working_digits = digits + guard`` is the precision every internal
    computation runs at; ``tail_tol = 10^(-working_digits)`` is the default
    truncation target for series tails.
    """

    digits: int
    guard: int = 15

    def __post_init__(self):
        if not isinstance(self.digits, int) or isinstance(self.digits, bool) or self.digits < 1:
            raise DomainError(f"digits must be a positive integer, got {self.digits!r}")
        # working_digits >= digits + 10 must hold
        if not isinstance(self.guard, int) or isinstance(self.guard, bool) or self.guard < 10:
            raise DomainError(f"guard must be an integer >= 10, got {self.guard!r}")

    @property
    def working_digits(self) -> int:
        return self.digits + self.guard

    @property
    def tail_tol(self) -> "BigReal":
        with mp.workdps(self.working_digits):
            return BigReal(mpf(10) ** (-self.working_digits), self.working_digits)


@dataclass(frozen=True)
class BigReal:
    """An arbitrary-precision real plus the working precision that made it."""

    value: mpf
    precision_digits: int

    def decimal(self) -> str:
        """Decimal-string form carrying enough digits to round-trip exactly."""
        return mp.nstr(self.value, self.precision_digits + 5, strip_zeros=True)

    @classmethod
    def parse(cls, text: str, precision_digits: int) -> "BigReal":
        with mp.workdps(precision_digits):
            try:
                value = mpf(text)
            except ValueError as exc:
                raise DomainError(f"not a decimal string: {text!r}") from exc
        return cls(value, precision_digits)


def wrap(value, ctx: PrecisionContext) -> BigReal:
    """Tag an mpf computed under ctx's working precision as a BigReal."""
    return BigReal(value, ctx.working_digits)


def to_mpf(x) -> mpf:
    """Coerce a boundary value to mpf at the currently active precision.

    Accepts BigReal, ExactRational, int, str (decimal), float, and mpf.
    Decimal strings and rationals are rounded at the active working precision,
    which keeps results deterministic for a fixed context.
    """
    if isinstance(x, BigReal):
        return x.value
    if isinstance(x, Fraction):
        return mpf(x.numerator) / x.denominator
    try:
        return mpf(x)
    except (TypeError, ValueError) as exc:
        raise DomainError(f"cannot interpret {x!r} as a real number") from exc


def const_pi(ctx: PrecisionContext) -> BigReal:
    with mp.workdps(ctx.working_digits):
        return wrap(+mp.pi, ctx)


def elem(fn_id: str, x, ctx: PrecisionContext) -> BigReal:
    """Elementary function at working precision (backend: mpmath, few-ulp)."""
    if fn_id not in _ELEM_FNS:
        raise DomainError(f"unknown elementary function {fn_id!r}")
    with mp.workdps(ctx.working_digits):
        v = to_mpf(x)
        if fn_id == "ln" and v <= 0:
            raise DomainError(f"ln requires x > 0, got x = {mp.nstr(v, 12)}")
        if fn_id == "sqrt" and v < 0:
            raise DomainError(f"sqrt requires x >= 0, got x = {mp.nstr(v, 12)}")
        fn = {"exp": mp.exp, "ln": mp.ln, "sqrt": mp.sqrt, "sin": mp.sin,
              "cos": mp.cos, "sinh": mp.sinh, "cosh": mp.cosh, "arctan": mp.atan}[fn_id]
        return wrap(fn(v), ctx)


def rational(numerator: int, denominator: int = 1) -> ExactRational:
    """Exact rational in lowest terms with positive denominator."""
    try:
        return Fraction(numerator, denominator)
    except ZeroDivisionError as exc:
        raise DomainError("rational denominator must be nonzero") from exc


def rational_add(a: ExactRational, b: ExactRational) -> ExactRational:
    return a + b


def rational_mul(a: ExactRational, b: ExactRational) -> ExactRational:
    return a * b


def rational_reduce(numerator: int, denominator: int) -> ExactRational:
    return rational(numerator, denominator)


@dataclass(frozen=True)
class ExactTarget:
    """Exact limit value: q when has_pi is false, q*pi when true."""

    q: ExactRational
    has_pi: bool

    def to_real(self, ctx: PrecisionContext) -> BigReal:
        with mp.workdps(ctx.working_digits):
            v = to_mpf(self.q)
            if self.has_pi:
                v = v * mp.pi
            return wrap(v, ctx)

    def rational_text(self) -> str:
        return f"{self.q.numerator}/{self.q.denominator}"
