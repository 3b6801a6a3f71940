"""Famous almost-identities as high-precision fixtures with exact oracles.

Each entry pairs a computed value with the nearby "nice" quantity (an integer,
a surd, or a closed form) and reports the tiny gap between them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

from mpmath import mp, mpf

from .errors import ConvergenceError, DomainError
from .precision import BigReal, PrecisionContext, wrap

_RAMANUJAN_D = (37, 58, 163)
_BORWEIN_DIGIT_CAP = 2000
_HICKERSON_MAX = 17


@dataclass(frozen=True)
class GalleryEntry:
    id: str
    description: str
    value: BigReal
    reference: Union[BigReal, int]
    delta: BigReal
    digits: int


def ramanujan_constant(d: int, ctx: PrecisionContext) -> GalleryEntry:
    """exp(pi*sqrt(d)) against its nearest integer for d in {37, 58, 163}.

    The 163 gap is ~1e-12 on a 17-digit integer, so fewer than ~31 digits
    cannot even see it; the operation requires digits >= 40 for headroom.
    """
    if d not in _RAMANUJAN_D:
        raise DomainError(f"supported discriminants are {_RAMANUJAN_D}, got {d!r}")
    if ctx.digits < 40:
        raise DomainError(f"ramanujan entries need digits >= 40, got {ctx.digits}")
    with mp.workdps(ctx.working_digits):
        value = mp.exp(mp.pi * mp.sqrt(mpf(d)))
        reference = int(mp.nint(value))
        return GalleryEntry(
            id=f"ramanujan{d}",
            description=f"exp(pi*sqrt({d})) vs nearest integer",
            value=wrap(value, ctx),
            reference=reference,
            delta=wrap(value - reference, ctx),
            digits=ctx.digits,
        )


def misc_constant(id: str, ctx: PrecisionContext) -> GalleryEntry:
    """triangle_l: (1/30)(2 + 4 sqrt2 + (4+sqrt2) ln(1+sqrt2)) vs sqrt2 - 1;
    e_pi_minus_pi: e^pi - pi vs 20.

    ln(1+sqrt2) is arcsinh(1), written with ln to stay on the core backend.
    """
    with mp.workdps(ctx.working_digits):
        if id == "triangle_l":
            rt2 = mp.sqrt(mpf(2))
            value = (2 + 4 * rt2 + (4 + rt2) * mp.ln(1 + rt2)) / 30
            reference = rt2 - 1
            description = "mean chord length constant vs sqrt(2)-1"
        elif id == "e_pi_minus_pi":
            value = mp.exp(mp.pi) - mp.pi
            reference = mpf(20)
            description = "e^pi - pi vs 20"
        else:
            raise DomainError(f"unknown constant id {id!r}")
        return GalleryEntry(
            id=id,
            description=description,
            value=wrap(value, ctx),
            reference=wrap(reference, ctx),
            delta=wrap(value - reference, ctx),
            digits=ctx.digits,
        )


def borwein_sum(ctx: PrecisionContext) -> GalleryEntry:
    """1 + 2 sum_{k>=1} 10^{-(k/100)^2} against 100 sqrt(pi/ln 10).

    Agreement actually extends to thousands of digits; requested digits are
    capped at 2000 to keep this a desk-scale computation.  Truncation stops
    once (k/100)^2 exceeds working_digits + 1, where every further term is
    below 10^{-(working_digits+1)}.  q^{k^2} advances by two multiplications
    per term via q^{k^2} = q^{(k-1)^2} * q^{2k-1}.
    """
    if ctx.digits > _BORWEIN_DIGIT_CAP:
        raise DomainError(
            f"borwein sum capped at {_BORWEIN_DIGIT_CAP} digits, got {ctx.digits}"
        )
    with mp.workdps(ctx.working_digits):
        q = mpf(10) ** (-mpf(1) / 10_000)  # 10^{-(1/100)^2}
        q2 = q * q
        power = mpf(1)  # q^{k^2}
        step = q  # q^{2k-1}
        total = mpf(1)
        k = 0
        cutoff = ctx.working_digits + 1
        while True:
            k += 1
            power *= step
            step *= q2
            total += 2 * power
            if (mpf(k) / 100) ** 2 > cutoff:
                break
        reference = 100 * mp.sqrt(mp.pi / mp.ln(mpf(10)))
        delta = total - reference
        if not abs(delta) < mpf(10) ** (-ctx.digits):
            raise ConvergenceError(
                f"borwein agreement contract violated at {ctx.digits} digits"
            )
        return GalleryEntry(
            id="borwein",
            description="sum of 10^(-(k/100)^2) vs 100 sqrt(pi/ln 10)",
            value=wrap(total, ctx),
            reference=wrap(reference, ctx),
            delta=wrap(delta, ctx),
            digits=ctx.digits,
        )


def ordered_bell(n: int) -> int:
    """Exact ordered Bell (Fubini) number by the binomial recurrence.

    a(0) = 1, a(n) = sum_{k=1}^{n} C(n,k) a(n-k): pure integer arithmetic,
    independent of any floating evaluation.
    """
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise DomainError(f"ordered_bell needs an integer n >= 0, got {n!r}")
    a = [1]
    for m in range(1, n + 1):
        a.append(sum(math.comb(m, k) * a[m - k] for k in range(1, m + 1)))
    return a[n]


def hickerson(n: int, ctx: PrecisionContext) -> GalleryEntry:
    """n!/(2 ln(2)^{n+1}) against the exact ordered Bell number a(n).

    The quotient is the dominant term of the exact pole expansion of a(n), so
    it hugs the integer, but the neglected conjugate-pole pair grows to
    magnitude ~0.54 at n = 17, where round(value) lands one BELOW a(17).
    The advertised range 1..17 is kept as the accepted input domain; the
    documented round(value) = a(n) postcondition genuinely fails at n = 17,
    and this function raises ConvergenceError there rather than pretend.
    """
    if not isinstance(n, int) or isinstance(n, bool) or not 1 <= n <= _HICKERSON_MAX:
        raise DomainError(f"hickerson supports 1 <= n <= {_HICKERSON_MAX}, got {n!r}")
    with mp.workdps(ctx.working_digits):
        value = mpf(math.factorial(n)) / (2 * mp.ln(mpf(2)) ** (n + 1))
        reference = ordered_bell(n)
        delta = value - reference
        if int(mp.nint(value)) != reference:
            raise ConvergenceError(
                f"rounding identity fails at n={n}: value - a(n) = {mp.nstr(delta, 10)}, "
                f"round(value) = {int(mp.nint(value))} but a({n}) = {reference}"
            )
        return GalleryEntry(
            id=f"hickerson{n}",
            description=f"{n}!/(2 ln(2)^{n + 1}) vs ordered Bell a({n})",
            value=wrap(value, ctx),
            reference=reference,
            delta=wrap(delta, ctx),
            digits=ctx.digits,
        )
