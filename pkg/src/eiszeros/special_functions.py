"""Complex special functions: Gamma, zeta, completed zeta, xi, K-Bessel, divisor sums.

Everything here is self-contained double-precision numerics:

* Gamma via a 9-coefficient Lanczos approximation (g = 7) plus reflection,
  evaluated in log space so the functional-equation factors never overflow.
* zeta via Euler-Maclaurin with an explicit remainder bound for Re(s) >= 1/2
  and the functional equation below.
* The completed zeta  zeta*(s) = pi^(-s/2) Gamma(s/2) zeta(s)  reflected onto
  Re(s) >= 1/2 before evaluation, and  xi(s) = s(s-1) zeta*(s) / 2  with a
  Taylor patch near the removable points s = 0, 1.
* K_nu(y) of complex order nu by trapezoidal quadrature of
  integral_0^inf exp(-y cosh u) cosh(nu u) du, whose integrand already decays
  doubly exponentially; step halving continues until two levels agree.

All functions with complex output satisfy f(conj(s)) == conj(f(s)) exactly:
arguments in the lower half-plane are evaluated at the conjugate point and
conjugated back.  That keeps downstream combinations that are mathematically
real on the critical line real to the last bit.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction

import numpy as np

from .options import DEFAULT_OPTIONS, AccuracyError, EvalOptions, PoleError
from ._numdiff import fornberg_weights

_LOG_PI = math.log(math.pi)
_HALF_LOG_TWO_PI = 0.5 * math.log(2.0 * math.pi)

# Lanczos g = 7, 9 coefficients; relative error ~1e-13 on the right half-plane.
_LANCZOS_C = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)

# Even-index Bernoulli numbers B_2 .. B_32 (exact).
_BERNOULLI_EVEN = (
    Fraction(1, 6),
    Fraction(-1, 30),
    Fraction(1, 42),
    Fraction(-1, 30),
    Fraction(5, 66),
    Fraction(-691, 2730),
    Fraction(7, 6),
    Fraction(-3617, 510),
    Fraction(43867, 798),
    Fraction(-174611, 330),
    Fraction(854513, 138),
    Fraction(-236364091, 2730),
    Fraction(8553103, 6),
    Fraction(-23749461029, 870),
    Fraction(8615841276005, 14322),
    Fraction(-7709321041217, 510),
)

# B_{2k} / (2k)! as floats, k = 1..16.
_BERN_OVER_FACT = tuple(
    float(b) / math.factorial(2 * (k + 1)) for k, b in enumerate(_BERNOULLI_EVEN)
)


def _ensure_finite(value: complex, what: str) -> complex:
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise AccuracyError(f"{what} produced a non-finite value")
    return value


def _log_sin(w: complex) -> complex:
    """A logarithm of sin(w), stable for large |Im w| (branch irrelevant:
    only ever consumed through exp)."""
    if abs(w.imag) <= 20.0:
        return cmath.log(cmath.sin(w))
    if w.imag > 0.0:
        # sin w = -e^{-iw} (1 - e^{2iw}) / (2i)
        return -1j * w + cmath.log((1.0 - cmath.exp(2j * w)) / (-2j))
    return 1j * w + cmath.log((1.0 - cmath.exp(-2j * w)) / (2j))


def _log_gamma_right(z: complex) -> complex:
    """log Gamma for Re(z) >= 0.5 (Lanczos)."""
    acc = _LANCZOS_C[0]
    for k in range(1, 9):
        acc += _LANCZOS_C[k] / (z + (k - 1))
    t = z + 6.5
    return _HALF_LOG_TWO_PI + (z - 0.5) * cmath.log(t) - t + cmath.log(acc)


def _log_gamma(z: complex) -> complex:
    """A logarithm of Gamma(z); branch only meaningful through exp."""
    if z.real >= 0.5:
        return _log_gamma_right(z)
    # reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z)
    return _LOG_PI - _log_sin(math.pi * z) - _log_gamma_right(1.0 - z)


def _check_gamma_pole(s: complex):
    nearest = round(s.real)
    if nearest <= 0 and abs(s - nearest) < 1e-14:
        raise PoleError(f"Gamma pole at {nearest}; got s = {s}")


def gamma_complex(s: complex, opts: EvalOptions = DEFAULT_OPTIONS) -> complex:
    """Gamma(s) on the principal branch; reflection formula for Re(s) < 1/2.

    Raises PoleError within 1e-14 of a non-positive integer.
    """
    s = complex(s)
    _check_gamma_pole(s)
    if s.imag < 0.0:
        return gamma_complex(s.conjugate(), opts).conjugate()
    return _ensure_finite(cmath.exp(_log_gamma(s)), "gamma")


def _zeta_euler_maclaurin(s: complex, opts: EvalOptions) -> complex:
    """zeta(s) for Re(s) >= 0.5 with a certified Euler-Maclaurin tail."""
    n_start = max(20, int(abs(s.imag)) + 1)
    attempts = 0
    big_n = n_start
    while True:
        if big_n > opts.max_terms:
            raise AccuracyError(
                f"Euler-Maclaurin needs {big_n} terms at s = {s}, budget {opts.max_terms}"
            )
        ns = np.arange(1.0, big_n)
        head = np.exp(-s * np.log(ns)).sum()
        log_n = math.log(big_n)
        n_minus_s = cmath.exp(-s * log_n)
        acc = head + 0.5 * n_minus_s + n_minus_s * big_n / (s - 1.0)
        # correction terms: B_{2k}/(2k)! * s(s+1)...(s+2k-2) * N^{1-s-2k}
        poch = s
        npow = n_minus_s / big_n  # N^{-s-1}
        inv_n2 = 1.0 / (big_n * big_n)
        used_k = 0
        for k in range(1, 14):
            term = _BERN_OVER_FACT[k - 1] * poch * npow
            acc += term
            used_k = k
            if abs(term) < 0.25 * opts.rel_tol * abs(acc):
                break
            poch = poch * (s + (2 * k - 1)) * (s + 2 * k)
            npow *= inv_n2
        # remainder bound: |next term| * |(s + 2K+1)/(sigma + 2K+1)|
        poch_next = poch * (s + (2 * used_k - 1)) * (s + 2 * used_k)
        bound = (
            abs(_BERN_OVER_FACT[used_k] * poch_next * npow * inv_n2)
            * abs(s + (2 * used_k + 1))
            / (s.real + (2 * used_k + 1))
        )
        if bound <= 10.0 * opts.rel_tol * max(abs(acc), 1e-300):
            return complex(acc)
        attempts += 1
        big_n *= 2
        if attempts > 6 or big_n > opts.max_terms:
            raise AccuracyError(
                f"Euler-Maclaurin tail bound {bound:.3e} not below tolerance at s = {s}"
            )


def riemann_zeta(s: complex, opts: EvalOptions = DEFAULT_OPTIONS) -> complex:
    """zeta(s); Euler-Maclaurin for Re(s) >= 1/2, functional equation otherwise.

    Raises PoleError within 1e-14 of s = 1.
    """
    s = complex(s)
    if abs(s - 1.0) < 1e-14:
        raise PoleError(f"zeta pole at s = 1; got s = {s}")
    if abs(s) < 1e-10:
        # sin(pi s/2) * zeta(1-s) -> -pi/2 in the functional equation
        return complex(-0.5) - 0.5 * math.log(2.0 * math.pi) * s
    if s.imag < 0.0:
        return riemann_zeta(s.conjugate(), opts).conjugate()
    if s.real >= 0.5:
        return _ensure_finite(_zeta_euler_maclaurin(s, opts), "zeta")
    # zeta(s) = chi(s) zeta(1-s),  chi = 2^s pi^(s-1) sin(pi s / 2) Gamma(1-s)
    log_chi = (
        s * math.log(2.0)
        + (s - 1.0) * _LOG_PI
        + _log_sin(0.5 * math.pi * s)
        + _log_gamma(1.0 - s)
    )
    return _ensure_finite(
        cmath.exp(log_chi) * _zeta_euler_maclaurin(1.0 - s, opts), "zeta"
    )


def completed_zeta(s: complex, opts: EvalOptions = DEFAULT_OPTIONS) -> complex:
    """zeta*(s) = pi^(-s/2) Gamma(s/2) zeta(s), with zeta*(s) = zeta*(1-s).

    Internally evaluates at max(Re(s), 1-Re(s)) and reflects, staying clear
    of the Gamma/zeta cancellation region.  PoleError within 1e-12 of {0, 1}.
    """
    s = complex(s)
    if abs(s) < 1e-12 or abs(s - 1.0) < 1e-12:
        raise PoleError(f"zeta* pole at s in {{0, 1}}; got s = {s}")
    if s.imag < 0.0:
        return completed_zeta(s.conjugate(), opts).conjugate()
    if s.real < 0.5:
        s = 1.0 - s
    value = (
        cmath.exp(-0.5 * s * _LOG_PI)
        * gamma_complex(0.5 * s, opts)
        * riemann_zeta(s, opts)
    )
    return _ensure_finite(value, "zeta*")


_XI_TAYLOR_RADIUS = 1e-3
_xi_taylor_coeffs: tuple = ()


def _xi_direct(s: complex, opts: EvalOptions) -> complex:
    return 0.5 * s * (s - 1.0) * completed_zeta(s, opts)


def _xi_taylor() -> tuple:
    """Taylor coefficients of xi about 0, [c0..c4]; c0 = 1/2 exact, the rest
    from 9-point stencils at radius 1e-2 (computed once, then cached)."""
    global _xi_taylor_coeffs
    if _xi_taylor_coeffs:
        return _xi_taylor_coeffs
    opts = EvalOptions(rel_tol=1e-13)
    h = 1e-2
    offs = np.arange(-4, 5) * h
    samples = [0.5 if k == 0 else _xi_direct(complex(x), opts).real
               for k, x in zip(range(-4, 5), offs)]
    coeffs = [0.5]
    for order in (1, 2, 3, 4):
        w = fornberg_weights(order, offs)
        deriv = float(np.dot(w, samples))
        coeffs.append(deriv / math.factorial(order))
    _xi_taylor_coeffs = tuple(coeffs)
    return _xi_taylor_coeffs


def xi(s: complex, opts: EvalOptions = DEFAULT_OPTIONS) -> complex:
    """xi(s) = s(s-1) zeta*(s) / 2: entire, xi(s) = xi(1-s), xi(0) = 1/2.

    Within 1e-3 of s = 0 or s = 1 the value comes from a cached Taylor
    expansion, avoiding the 0 * infinity cancellation.
    """
    s = complex(s)
    if s.imag < 0.0:
        return xi(s.conjugate(), opts).conjugate()
    w = None
    if abs(s) < _XI_TAYLOR_RADIUS:
        w = s
    elif abs(s - 1.0) < _XI_TAYLOR_RADIUS:
        w = 1.0 - s
    if w is not None:
        c = _xi_taylor()
        return complex(c[0] + w * (c[1] + w * (c[2] + w * (c[3] + w * c[4]))))
    return _ensure_finite(_xi_direct(s, opts), "xi")


def xi_logderiv_at_zero() -> float:
    """xi'(0)/xi(0), about -0.0230957, from the cached Taylor seed."""
    c = _xi_taylor()
    return c[1] / c[0]


def k_bessel(order: complex, y: float, opts: EvalOptions = DEFAULT_OPTIONS) -> complex:
    """K_order(y) for y > 0 by step-halving trapezoidal quadrature of
    integral_0^inf exp(-y cosh u) cosh(order * u) du.

    The integrand's double-exponential decay makes the trapezoid rule
    spectrally accurate; levels are halved until two agree to rel_tol.
    Raises AccuracyError when the node budget runs out first.
    """
    order = complex(order)
    if not y > 0.0:
        raise ValueError(f"k_bessel requires y > 0, got {y}")
    # cutoff where exp(-y cosh u + |Re order| u) is below 1e-320
    a = abs(order.real)
    u_max = math.acosh(max(760.0 / y, 2.0))
    for _ in range(3):
        u_max = math.acosh(max((760.0 + a * u_max) / y, 2.0))

    def level_sum(u: np.ndarray):
        e = -y * np.cosh(u)
        if order.imag == 0.0 and order.real == 0.0:
            g = np.exp(e)
        else:
            ou = order * u
            g = 0.5 * (np.exp(e + ou) + np.exp(e - ou))
        return complex(g.sum()), float(np.abs(g).sum())

    h = 0.5
    ks = np.arange(1.0, math.floor(u_max / h) + 1.0)
    head, gross = level_sum(h * ks)
    total = h * (0.5 * math.exp(-y) + head)
    gross = h * (0.5 * math.exp(-y) + gross)
    evals = len(ks)
    while True:
        h *= 0.5
        odd = h * np.arange(1.0, u_max / h + 1.0, 2.0)
        prev = total
        head, head_gross = level_sum(odd)
        total = 0.5 * total + h * head
        gross = max(gross, 0.5 * gross + h * head_gross)
        evals += len(odd)
        # for oscillatory orders the result sits below the magnitude sum; the
        # achievable accuracy floor is roundoff on that gross accumulation
        floor = 1e-15 * gross
        if abs(total - prev) <= max(opts.rel_tol * abs(total), floor, 1e-300):
            return _ensure_finite(complex(total), "k_bessel")
        if evals > opts.max_terms or h < 1.0 / 512.0:
            raise AccuracyError(
                f"K-Bessel quadrature not converged for order {order}, y = {y}"
            )


def _factorize(n: int) -> list:
    """(prime, exponent) pairs by trial division; n <= 10**12."""
    out = []
    for p in (2, 3):
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
    f = 5
    while f * f <= n:
        for p in (f, f + 2):
            if n % p == 0:
                e = 0
                while n % p == 0:
                    n //= p
                    e += 1
                out.append((p, e))
        f += 6
    if n > 1:
        out.append((n, 1))
    return out


def divisors(n: int) -> list:
    """All positive divisors of n, ascending."""
    ds = [1]
    for p, e in _factorize(n):
        ds = [d * p**j for d in ds for j in range(e + 1)]
    return sorted(ds)


def sigma_divisor(w: complex, n: int) -> complex:
    """sigma_w(n) = sum over divisors d of n of d^w (exact enumeration).

    Integer n >= 1; beyond 10**12 the trial division budget is exceeded and
    OverflowError is raised.  Real integer exponents |w| <= 64 are summed in
    exact integer arithmetic.
    """
    if n < 1:
        raise ValueError(f"sigma_divisor requires n >= 1, got {n}")
    if n > 10**12:
        raise OverflowError(f"sigma_divisor supports n <= 10**12, got {n}")
    w = complex(w)
    ds = divisors(n)
    if w.imag == 0.0 and w.real == round(w.real) and abs(w.real) <= 64:
        k = int(round(w.real))
        if k >= 0:
            return complex(sum(d**k for d in ds))
        return complex(sum(Fraction(1, d**-k) for d in ds))
    return complex(sum(cmath.exp(w * math.log(d)) for d in ds))
