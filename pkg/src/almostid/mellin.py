"""Mellin-transform verification: quadrature vs closed forms, dual expansions.

Routes verified against each other:
  * mellin_numeric  - direct integration of f(x) x^{s-1} after x = e^t
  * mellin_closed   - the trigonometric closed forms on the real axis
  * harmonic_factor_check - the dilate-sum transform against closed/(2^s - 1)
  * g_direct vs g_expansion - dilate sums against their residue expansions
  * lemma_check     - the antiderivative identity via finite differences

All integrands become analytic and exponentially decaying in both directions
after the substitution, where the trapezoid rule converges geometrically; the
refinement loop halves the step until successive estimates agree.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from mpmath import mp, mpf

from .errors import ConvergenceError, DomainError
from .precision import BigReal, PrecisionContext, to_mpf, wrap

FUNCTION_GRID = ("g1", "g2", "fn3", "fn4", "fn5", "fn6", "fn7")

_FN_RE = re.compile(r"^fn(\d+)$")


@dataclass(frozen=True)
class MellinCheck:
    function_id: str
    s: BigReal
    numeric: BigReal
    closed: BigReal
    abs_err: BigReal
    passed: bool


@dataclass(frozen=True)
class DualCheck:
    n: int
    x: BigReal
    direct: BigReal
    expansion: BigReal
    abs_err: BigReal
    passed: bool


def parse_function_id(function_id: str):
    """Split 'g1' | 'g2' | 'fn<n>' into (kind, n); n present only for fn."""
    if function_id in ("g1", "g2"):
        return function_id, None
    m = _FN_RE.match(function_id or "")
    if m:
        n = int(m.group(1))
        if n >= 3:
            return "fn", n
        raise DomainError(f"fn index must be >= 3 (n=1,2 are g1,g2), got {function_id!r}")
    raise DomainError(f"unknown function id {function_id!r}")


def _strip_bounds(kind, n):
    # fundamental strip of convergence per function
    if kind == "g2":
        return mpf(0), mpf(1)
    if kind == "g1":
        return mpf(0), mpf(1) / 2
    return mpf(0), min(mpf(1) / 2, mpf(n - 2) / 2)


def _check_strip(kind, n, s, function_id):
    # per-function strips: g2 extends to (0,1), so s=1/2 is interior there
    # even though the family-wide common strip is (0,1/2)
    lo, hi = _strip_bounds(kind, n)
    if not (lo < s < hi):
        raise DomainError(
            f"s = {mp.nstr(s, 12)} outside the strip ({mp.nstr(lo, 6)}, {mp.nstr(hi, 6)}) of {function_id}"
        )


def _g1(x):
    # 2*atan(1/sqrt(x)), branch chosen to avoid cancellation at either extreme
    if x <= 1:
        return mp.pi - 2 * mp.atan(mp.sqrt(x))
    return 2 * mp.atan(1 / mp.sqrt(x))


def _g2(x):
    return 1 / (1 + x)


def _fn(n, x):
    return (mp.sqrt(x) / (1 + x)) ** (n - 2) * ((1 - x) / (1 + x))


def _direct_fn(kind, n):
    if kind == "g1":
        return _g1
    if kind == "g2":
        return _g2
    return lambda x: _fn(n, x)


def _decay_rates(kind, n, s):
    # integrand f(e^t) e^{st}: exponential decay rate to the left / right of 0
    if kind == "fn":
        return s + mpf(n - 2) / 2, mpf(n - 2) / 2 - s
    if kind == "g1":
        return s, mpf(1) / 2 - s
    return s, 1 - s


def _refine_trapezoid(f, t_left, t_right, tol, max_levels=14):
    """Trapezoid sums with step halving until successive estimates agree.

    Previously evaluated nodes are reused; only midpoints are added per level.
    Geometric convergence holds for integrands analytic in a strip around the
    real line, which every substituted integrand here is.
    """
    span = t_right - t_left
    n = max(8, int(mp.ceil(span / mpf("0.5"))))
    h = span / n
    acc = (f(t_left) + f(t_right)) / 2
    for i in range(1, n):
        acc += f(t_left + i * h)
    estimate = acc * h
    for _ in range(max_levels):
        mid = mpf(0)
        for i in range(n):
            mid += f(t_left + (i + mpf(1) / 2) * h)
        acc += mid
        n *= 2
        h /= 2
        new = acc * h
        if abs(new - estimate) < tol:
            return new
        estimate = new
    raise ConvergenceError("trapezoid refinement did not stabilize before the level cap")


def _quad_exp_axis(integrand, rate_l, rate_r, ctx):
    # cutoffs sized so the dropped tails sit far below the agreement target;
    # the +25 absorbs constant and slowly-varying (logarithmic) prefactors
    target_exp = (ctx.digits + 10) * mp.ln(10)
    t_left = -((target_exp + 25) / rate_l + 5)
    t_right = (target_exp + 25) / rate_r + 5
    tol = mpf(10) ** (-(ctx.digits + 5))
    return _refine_trapezoid(integrand, t_left, t_right, tol)


def mellin_numeric(function_id: str, s, ctx: PrecisionContext) -> BigReal:
    """Quadrature of the transform integral along x = e^t."""
    kind, n = parse_function_id(function_id)
    with mp.workdps(ctx.working_digits):
        sv = to_mpf(s)
        _check_strip(kind, n, sv, function_id)
        f = _direct_fn(kind, n)
        rate_l, rate_r = _decay_rates(kind, n, sv)

        def integrand(t):
            return f(mp.exp(t)) * mp.exp(sv * t)

        return wrap(_quad_exp_axis(integrand, rate_l, rate_r, ctx), ctx)


def mellin_closed(function_id: str, s, ctx: PrecisionContext) -> BigReal:
    """Real-axis closed forms:

    g1: pi/(s cos(pi s));  g2: pi/sin(pi s)
    fn, n = 2l:   2/(2l-2)! * pi/sin(pi s)      * prod_{j=0}^{l-2} (j^2 - s^2)
    fn, n = 2l+1: 2/(2l-1)! * (-pi s/cos(pi s)) * prod_{j=0}^{l-2} ((j+1/2)^2 - s^2)

    The products are empty at their smallest l.
    """
    kind, n = parse_function_id(function_id)
    with mp.workdps(ctx.working_digits):
        sv = to_mpf(s)
        _check_strip(kind, n, sv, function_id)
        guard = mpf(10) ** (-ctx.working_digits)
        if kind == "g1":
            c = mp.cos(mp.pi * sv)
            if abs(c) < guard or sv == 0:
                raise DomainError(f"g1 closed form at a pole: s = {mp.nstr(sv, 12)}")
            return wrap(mp.pi / (sv * c), ctx)
        if kind == "g2":
            si = mp.sin(mp.pi * sv)
            if abs(si) < guard:
                raise DomainError(f"g2 closed form at a pole: s = {mp.nstr(sv, 12)}")
            return wrap(mp.pi / si, ctx)
        if n % 2 == 0:
            l = n // 2
            si = mp.sin(mp.pi * sv)
            if abs(si) < guard:
                raise DomainError(f"fn closed form at a pole: s = {mp.nstr(sv, 12)}")
            prod = mpf(1)
            for j in range(l - 1):
                prod *= mpf(j) ** 2 - sv**2
            return wrap(2 * mp.pi * prod / (math.factorial(2 * l - 2) * si), ctx)
        l = (n - 1) // 2
        c = mp.cos(mp.pi * sv)
        if abs(c) < guard:
            raise DomainError(f"fn closed form at a pole: s = {mp.nstr(sv, 12)}")
        prod = mpf(1)
        for j in range(l - 1):
            prod *= (j + mpf(1) / 2) ** 2 - sv**2
        return wrap(2 * (-mp.pi * sv / c) * prod / math.factorial(2 * l - 1), ctx)


def pass_threshold(ctx: PrecisionContext):
    with mp.workdps(ctx.working_digits):
        return mpf(10) ** (-(ctx.digits - 5))


def mellin_check(function_id: str, s, ctx: PrecisionContext) -> MellinCheck:
    numeric = mellin_numeric(function_id, s, ctx)
    closed = mellin_closed(function_id, s, ctx)
    with mp.workdps(ctx.working_digits):
        err = abs(numeric.value - closed.value)
        return MellinCheck(
            function_id=function_id,
            s=wrap(to_mpf(s), ctx),
            numeric=numeric,
            closed=closed,
            abs_err=wrap(err, ctx),
            passed=bool(err < pass_threshold(ctx)),
        )


# ---------------------------------------------------------------------------
# dilate sums F(x) = sum_{k>=1} g(2^k x)

_SMALL = mpf(1) / 8
_BIG = mpf(8)


def _dilate_sum(kind, x, eps):
    """Sum of g(2^k x) over k >= 1 with absolute truncation error < 3*eps.

    Three blocks, each with an alternating/geometric remainder bound:
      args < 1/8   - Taylor coefficients times closed-form geometric power sums
      args in [1/8, 8) - direct evaluation (at most seven terms)
      args >= 8    - asymptotic series in 1/arg, again with geometric k-sums

    Equal to term-by-term summation; exists because the harmonic-factor
    quadrature evaluates this at thousands of nodes.
    """
    total = mpf(0)
    K0 = 0
    if 2 * x < _SMALL:
        K0 = int(mp.floor(mp.log(_SMALL / x, 2)))
        while mp.ldexp(x, K0) >= _SMALL:
            K0 -= 1
        while mp.ldexp(x, K0 + 1) < _SMALL:
            K0 += 1
        z0 = mp.ldexp(x, K0)  # largest small-block argument, in [1/16, 1/8)
        w = mp.ldexp(mpf(1), -K0)
        if kind == "g2":
            # sum 1/(1+v) = K0 + sum_i (-1)^i P_i,  P_i = sum_k v_k^i
            zp = mpf(1)
            wp = mpf(1)
            tp = mpf(1)
            sgn = -1
            while True:
                zp *= z0
                wp *= w
                tp /= 2
                total += sgn * zp * (1 - wp) / (1 - tp)
                if 2 * zp * z0 < eps:
                    break
                sgn = -sgn
            total += K0
        else:
            # sum (pi - 2 atan(sqrt(v))) = K0*pi - 2 sum_i (-1)^i Q_i/(2i+1)
            rt_z0 = mp.sqrt(z0)
            rt_w = mp.sqrt(w)
            rt2 = mp.sqrt(mpf(2))
            zp = mpf(1)
            wp = mpf(1)
            tp = mpf(1)
            i = 0
            sgn = -1  # carries the leading -2 sign folded with (-1)^i
            while True:
                q = rt_z0 * zp * (1 - rt_w * wp) / (1 - tp / rt2)
                total += sgn * 2 * q / (2 * i + 1)
                if 7 * rt_z0 * zp * z0 < eps:
                    break
                i += 1
                zp *= z0
                wp *= w
                tp /= 2
                sgn = -sgn
            total += K0 * mp.pi

    g = _g1 if kind == "g1" else _g2
    y = mp.ldexp(x, K0 + 1)
    while y < _BIG:
        total += g(y)
        y *= 2

    # tail block: arguments y*2^j, j >= 0, all >= 8 (or huge if x itself is)
    iv = 1 / y
    if kind == "g2":
        # 1/(1+v) = sum_{i>=1} (-1)^{i+1} v^{-i}
        ivp = mpf(1)
        tp = mpf(1)
        sgn = 1
        while True:
            ivp *= iv
            tp /= 2
            total += sgn * ivp / (1 - tp)
            if 2 * ivp * iv < eps:
                break
            sgn = -sgn
    else:
        # 2 atan(v^{-1/2}) = 2 sum_{i>=0} (-1)^i v^{-(i+1/2)}/(2i+1)
        rt_iv = mp.sqrt(iv)
        rt2 = mp.sqrt(mpf(2))
        ivp = mpf(1)
        tp = mpf(1)
        i = 0
        sgn = 1
        while True:
            total += sgn * 2 * rt_iv * ivp / ((2 * i + 1) * (1 - tp / rt2))
            if 7 * rt_iv * ivp * iv < eps:
                break
            i += 1
            ivp *= iv
            tp /= 2
            sgn = -sgn
    return total


def harmonic_factor_check(function_id: str, s, ctx: PrecisionContext) -> BigReal:
    """|quadrature of the dilate sum  -  closed form/(2^s - 1)|.

    Only g1 and g2 have closed transforms available here; the fn family's
    dilate-sum expansion coefficients are deliberately out of scope.
    """
    kind, _ = parse_function_id(function_id)
    if kind == "fn":
        raise DomainError("harmonic factor check supports g1 and g2 only")
    with mp.workdps(ctx.working_digits):
        sv = to_mpf(s)
        _check_strip(kind, None, sv, function_id)
        rate_l, rate_r = _decay_rates(kind, None, sv)
        eps = mpf(10) ** (-ctx.working_digits)

        def integrand(t):
            return _dilate_sum(kind, mp.exp(t), eps) * mp.exp(sv * t)

        quad = _quad_exp_axis(integrand, rate_l, rate_r, ctx)
        closed = mellin_closed(function_id, s, ctx).value / (mpf(2) ** sv - 1)
        return wrap(abs(quad - closed), ctx)


def g_direct(n: int, x, ctx: PrecisionContext) -> BigReal:
    """Direct dilate sum, n = 1 or 2; terms fall off like (2^k x)^{-1/2} or ^{-1}."""
    if n not in (1, 2):
        raise DomainError(f"g_direct supports n = 1 or 2, got {n!r}")
    with mp.workdps(ctx.working_digits):
        xv = to_mpf(x)
        if xv <= 0:
            raise DomainError(f"g_direct requires x > 0, got {mp.nstr(xv, 12)}")
        tol = mpf(10) ** (-ctx.working_digits)
        g = _g1 if n == 1 else _g2
        total = mpf(0)
        y = xv
        k = 0
        while True:
            k += 1
            y *= 2
            total += g(y)
            # remaining tail: sum_{j>k} 2 (2^j x)^{-1/2}  or  (2^j x)^{-1}
            if n == 1:
                tail = 2 / mp.sqrt(2 * y) / (1 - 1 / mp.sqrt(mpf(2)))
            else:
                tail = 1 / y
            if tail < tol:
                return wrap(total, ctx)
            if k > 100_000:
                raise ConvergenceError("g_direct failed to reach its tail bound")


def g_expansion(n: int, x, ctx: PrecisionContext) -> BigReal:
    """Residue expansion of the dilate sum: log terms + power series + oscillation.

    n=1: -pi/2 - pi log2(x) + sqrt(x) S1(x) - sum_k sin(2 k pi log2 x)/(k cosh(2 k pi^2/ln 2))
         with S1 coefficients (-2)^{k+2}/((1+2k)(2^{k+1} - sqrt(2)))
    n=2: -1/2 - log2(x) - sum_k (-2)^k x^k/(2^k - 1)
         - (2 pi/ln 2) sum_k sin(2 k pi log2 x)/sinh(2 k pi^2/ln 2)

    Restricted to 0 < x < 1/2 so both power series keep a geometric tail bound
    (term ratio approaches 2x for n=2).
    """
    if n not in (1, 2):
        raise DomainError(f"g_expansion supports n = 1 or 2, got {n!r}")
    with mp.workdps(ctx.working_digits):
        xv = to_mpf(x)
        if xv <= 0:
            raise DomainError(f"g_expansion requires x > 0, got {mp.nstr(xv, 12)}")
        if xv >= mpf(1) / 2:
            raise DomainError(
                f"g_expansion restricted to x < 1/2 (geometric tail bound), got {mp.nstr(xv, 12)}"
            )
        tol = mpf(10) ** (-ctx.working_digits)
        ln2 = mp.ln(mpf(2))
        log2x = mp.ln(xv) / ln2
        beta = 2 * mp.pi**2 / ln2

        if n == 1:
            rt2 = mp.sqrt(mpf(2))
            series = mpf(0)
            k = 0
            num = mpf(4)  # (-2)^{k+2}
            pw = mpf(1)  # x^k
            two = mpf(2)  # 2^{k+1}
            while True:
                t = num / ((1 + 2 * k) * (two - rt2)) * pw
                series += t
                # ratio of consecutive terms is below x; geometric remainder
                if abs(t) * xv / (1 - xv) < tol:
                    break
                k += 1
                num *= -2
                pw *= xv
                two *= 2
            value = -mp.pi / 2 - mp.pi * log2x + mp.sqrt(xv) * series
            k = 0
            while True:
                k += 1
                damp = mp.cosh(k * beta)
                value -= mp.sin(2 * k * mp.pi * log2x) / (k * damp)
                if 2 / ((k + 1) * mp.cosh((k + 1) * beta)) < tol:
                    break
            return wrap(value, ctx)

        series = mpf(0)
        k = 0
        num = mpf(1)  # (-2)^k
        pw = mpf(1)  # x^k
        two = mpf(1)  # 2^k
        while True:
            k += 1
            num *= -2
            pw *= xv
            two *= 2
            t = num * pw / (two - 1)
            series += t
            if abs(t) * xv / (1 - xv) < tol:
                break
        value = -mpf(1) / 2 - log2x - series
        osc = mpf(0)
        k = 0
        while True:
            k += 1
            osc += mp.sin(2 * k * mp.pi * log2x) / mp.sinh(k * beta)
            if 3 / mp.sinh((k + 1) * beta) < tol:
                break
        value -= (2 * mp.pi / ln2) * osc
        return wrap(value, ctx)


def dual_check(n: int, x, ctx: PrecisionContext) -> DualCheck:
    direct = g_direct(n, x, ctx)
    expansion = g_expansion(n, x, ctx)
    with mp.workdps(ctx.working_digits):
        err = abs(direct.value - expansion.value)
        return DualCheck(
            n=n,
            x=wrap(to_mpf(x), ctx),
            direct=direct,
            expansion=expansion,
            abs_err=wrap(err, ctx),
            passed=bool(err < pass_threshold(ctx)),
        )


def lemma_check(n: int, k: int, u, ctx: PrecisionContext, h=None) -> BigReal:
    """Residual of the antiderivative identity behind the recurrence.

    With phi_n(u) = (2^{-(k-u)/2} + 2^{(k-u)/2})^{-n} and
    R(u) = (1/(2 ln2 (n-1))) (2^{(k-u)/2}/(1+2^{k-u}))^{n-2} (1-2^{k-u})/(1+2^{k-u}),
    returns |phi_n(u) - (n-2)/(4(n-1)) phi_{n-2}(u) - dR/du| with dR/du a
    central difference of step h (default 10^{-digits/3}); the exact identity
    makes the residual pure finite-difference error, O(h^2).

    ``h`` is overridable so the h^2 scaling itself can be observed.
    """
    if not isinstance(n, int) or isinstance(n, bool) or n < 3:
        raise DomainError(f"lemma check requires integer n >= 3, got {n!r}")
    if not isinstance(k, int) or isinstance(k, bool):
        raise DomainError(f"k must be an integer, got {k!r}")
    with mp.workdps(ctx.working_digits):
        uv = to_mpf(u)
        hv = mpf(10) ** (-mpf(ctx.digits) / 3) if h is None else to_mpf(h)
        if hv <= 0:
            raise DomainError("finite-difference step must be positive")
        ln2 = mp.ln(mpf(2))

        def phi(order, uu):
            d = mpf(k) - uu
            return (mpf(2) ** (-d / 2) + mpf(2) ** (d / 2)) ** (-order)

        def big_r(uu):
            d = mpf(k) - uu
            p = mpf(2) ** d
            return (
                (mpf(2) ** (d / 2) / (1 + p)) ** (n - 2)
                * ((1 - p) / (1 + p))
                / (2 * ln2 * (n - 1))
            )

        drdu = (big_r(uv + hv) - big_r(uv - hv)) / (2 * hv)
        a = mpf(n - 2) / (4 * (n - 1))
        return wrap(abs(phi(n, uv) - a * phi(n - 2, uv) - drdu), ctx)
