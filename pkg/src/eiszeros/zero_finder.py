"""Critical-line zero location, argument-principle counting, and real zeros.

The phase machinery follows the representation
    H(T, 1/2 + it) = -(2i/sqrt(T)) R(2t) sin(theta(2t) + t log T)
with xi(1 + iu) = R(u) exp(i theta(u)) and theta unwrapped continuously from
theta(0) = 0.  Critical-line zeros of the truncation family are the solutions
of theta(2t) + t log T = k pi; the constant-term family is the same with the
zeta* phase theta(u) - arctan(u) - pi/2 and target pi/2 mod pi, which folds
into  theta(2t) - arctan(2t) + t log y = k pi.

Continuous arguments live only here: the special-function layer always
returns principal-branch values.
"""

from __future__ import annotations

import cmath
import math
import threading
from dataclasses import dataclass

import numpy as np

from .options import (
    DEFAULT_OPTIONS,
    AccuracyError,
    BoundaryZeroError,
    EvalOptions,
    SelfCheckError,
)
from .special_functions import completed_zeta, xi, xi_logderiv_at_zero
from .eisenstein import (
    EULER_GAMMA,
    FamilyParam,
    a_n,
    h_constant_term,
    h_truncation,
)
from ._numdiff import central_derivative

XI_PHASE = "XiPhase"
ZETA_STAR_PHASE = "ZetaStarPhase"

_MAX_RAW_STEP = 1.4  # < pi/2, construction invariant for the unwrapped phase
_T_START = 1e-3  # scan floor excluding the manufactured zero at s = 1/2


@dataclass(frozen=True)
class ZeroRecord:
    """One located zero: ordinate t (zero at s = 1/2 + it) or real abscissa."""

    family: FamilyParam
    index: int
    ordinate: float
    residual: float
    scale: float = 1.0
    multiplicity_hint: int = 1


@dataclass(frozen=True)
class RectangleCount:
    re_lo: float
    re_hi: float
    im_lo: float
    im_hi: float
    winding: int


class PhaseTrace:
    """Monotone u-grid with the continuously unwrapped argument theta(u).

    base XiPhase: theta(u) = arg xi(1 + iu), theta(0) = 0.
    base ZetaStarPhase: theta(u) = arg zeta*(1 + iu)
                      = arg xi(1 + iu) - arctan(u) - pi/2.
    The xi values on the grid are kept for anchored off-grid evaluation.
    """

    def __init__(self, base, t_grid, theta_xi, xi_values, opts):
        self.base = base
        self.t_grid = t_grid
        self._theta_xi = theta_xi
        self._xi_values = xi_values
        self._opts = opts
        if base == XI_PHASE:
            self.theta = theta_xi
        else:
            self.theta = theta_xi - np.arctan(t_grid) - 0.5 * math.pi

    @property
    def t_max(self) -> float:
        return float(self.t_grid[-1])

    def _theta_xi_at(self, u: float) -> float:
        grid = self.t_grid
        if not 0.0 <= u <= grid[-1] + 1e-12:
            raise ValueError(f"u = {u} outside trace range [0, {grid[-1]}]")
        i = int(np.searchsorted(grid, u))
        if i < len(grid) and grid[i] == u:
            return float(self._theta_xi[i])
        anchor = max(i - 1, 0)
        u0 = float(grid[anchor])
        th = float(self._theta_xi[anchor])
        w0 = complex(self._xi_values[anchor])
        w1 = xi(complex(1.0, u), self._opts)
        delta = cmath.phase(w1 / w0)
        if abs(delta) < _MAX_RAW_STEP:
            return th + delta
        # rare: walk in halved sub-steps from the anchor
        n_sub = 2
        while n_sub <= 4096:
            ok = True
            th_acc, w_prev = th, w0
            for j in range(1, n_sub + 1):
                uj = u0 + (u - u0) * j / n_sub
                wj = xi(complex(1.0, uj), self._opts)
                d = cmath.phase(wj / w_prev)
                if abs(d) >= _MAX_RAW_STEP:
                    ok = False
                    break
                th_acc += d
                w_prev = wj
            if ok:
                return th_acc
            n_sub *= 2
        raise AccuracyError(f"phase refinement failed near u = {u}")

    def theta_at(self, u: float) -> float:
        th = self._theta_xi_at(u)
        if self.base == XI_PHASE:
            return th
        return th - math.atan(u) - 0.5 * math.pi

    def sliced(self, t_max: float) -> "PhaseTrace":
        n = int(np.searchsorted(self.t_grid, t_max, side="right"))
        if n < len(self.t_grid):
            n += 1  # keep one point past the cut so theta_at(t_max) stays in range
        return PhaseTrace(
            self.base,
            self.t_grid[:n],
            self._theta_xi[:n],
            self._xi_values[:n],
            self._opts,
        )


_trace_lock = threading.Lock()
_trace_cache: dict = {}


def _build_xi_trace(t_max: float, opts: EvalOptions) -> PhaseTrace:
    us = [0.0]
    thetas = [0.0]
    vals = [complex(0.5, 0.0)]
    cur_u, cur_th, cur_w = 0.0, 0.0, complex(0.5, 0.0)
    base_step = 0.05
    while cur_u < t_max:
        step = min(base_step, t_max - cur_u)
        while True:
            nxt = cur_u + step
            w = xi(complex(1.0, nxt), opts)
            if abs(w) < 1e-13 * abs(cur_w):
                raise AccuracyError(f"phase undefined near u = {nxt}: |xi| collapsed")
            delta = cmath.phase(w / cur_w)
            if abs(delta) < _MAX_RAW_STEP or step < 1e-9:
                break
            step *= 0.5
        cur_u, cur_th, cur_w = nxt, cur_th + delta, w
        us.append(cur_u)
        thetas.append(cur_th)
        vals.append(cur_w)
    return PhaseTrace(
        XI_PHASE, np.array(us), np.array(thetas), np.array(vals), opts
    )


def phase_trace(base: str, t_max: float, opts: EvalOptions = DEFAULT_OPTIONS) -> PhaseTrace:
    """Unwrapped phase on [0, t_max] (t_max <= 200) with per-step jumps < pi/2.

    Traces are cached and reused across families; a longer cached trace
    serves any shorter request.
    """
    if base not in (XI_PHASE, ZETA_STAR_PHASE):
        raise ValueError(f"unknown phase base {base!r}")
    if not 0.0 < t_max <= 200.0:
        raise ValueError(f"t_max must be in (0, 200], got {t_max}")
    with _trace_lock:
        cached = _trace_cache.get(opts.rel_tol)
        if cached is None or cached.t_max < t_max:
            cached = _build_xi_trace(t_max, opts)
            _trace_cache[opts.rel_tol] = cached
    out = cached if cached.t_max == t_max else cached.sliced(t_max)
    if base == ZETA_STAR_PHASE:
        out = PhaseTrace(ZETA_STAR_PHASE, out.t_grid, out._theta_xi, out._xi_values, opts)
    return out


def a0_on_line(y: float, t: float, opts: EvalOptions = DEFAULT_OPTIONS) -> float:
    """a0(y, 1/2 + it) = 2 Re( zeta*(1+2it) y^(1/2+it) ): exactly real."""
    zs = completed_zeta(complex(1.0, 2.0 * t), opts)
    return 2.0 * (zs * cmath.exp(complex(0.5, t) * math.log(y))).real


def entire_normalization(family: FamilyParam, s: complex, opts: EvalOptions = DEFAULT_OPTIONS) -> complex:
    """The entire function whose zeros the family's counts refer to."""
    if family.kind == "truncation":
        return h_truncation(family.T, s, opts)
    if family.kind == "constant_term":
        return h_constant_term(family.y, s, opts)
    if family.kind == "fourier":
        return a_n(family.n, family.y, s, opts)
    if family.kind == "weng_rank2":
        return h_truncation(1.0, s, opts)
    return xi(2.0 * s, opts)


def _phase_drift(family: FamilyParam) -> float:
    """log-parameter in  theta-like(u) + (u/2) * drift."""
    if family.kind in ("truncation", "weng_rank2"):
        return math.log(family.T) if family.kind == "truncation" else 0.0
    return math.log(family.y)


def _line_restriction(family: FamilyParam, opts: EvalOptions):
    """Real-valued restriction along s = 1/2 + it whose sign changes at zeros."""
    if family.kind in ("truncation", "weng_rank2"):
        T = family.T if family.kind == "truncation" else 1.0

        def v(t: float) -> float:
            return h_truncation(T, complex(0.5, t), opts).imag

    elif family.kind == "constant_term":

        def v(t: float) -> float:
            return a0_on_line(family.y, t, opts)

    else:

        def v(t: float) -> float:
            return a_n(family.n, family.y, complex(0.5, t), opts).real

    return v


def _refine_bracket(g, lo: float, hi: float, g_lo: float, g_hi: float) -> float:
    """Bisection to width 1e-6, then up to 3 secant steps (tolerance 1e-9)."""
    while hi - lo > 1e-6:
        mid = 0.5 * (lo + hi)
        g_mid = g(mid)
        if g_mid == 0.0:
            return mid
        if (g_lo < 0.0) != (g_mid < 0.0):
            hi, g_hi = mid, g_mid
        else:
            lo, g_lo = mid, g_mid
    a, b, ga, gb = lo, hi, g_lo, g_hi
    for _ in range(3):
        if gb == ga:
            break
        c = b - gb * (b - a) / (gb - ga)
        if not lo <= c <= hi:
            c = 0.5 * (a + b)
        gc = g(c)
        a, ga, b, gb = b, gb, c, gc
        if abs(b - a) < 1e-12:
            break
    return b


def _phase_family_zeros(family: FamilyParam, t_max: float, opts: EvalOptions) -> list:
    drift = _phase_drift(family)
    use_zeta_star = family.kind == "constant_term"
    trace = phase_trace(XI_PHASE, 2.0 * t_max, opts)

    grid_u = trace.t_grid
    phi = np.asarray(trace._theta_xi) + 0.5 * drift * grid_u
    if use_zeta_star:
        phi = phi - np.arctan(grid_u)

    def phi_at(t: float) -> float:
        val = trace._theta_xi_at(2.0 * t) + drift * t
        if use_zeta_star:
            val -= math.atan(2.0 * t)
        return val

    zeros = []
    u_start = 2.0 * _T_START
    for i in range(len(grid_u) - 1):
        u0, u1 = float(grid_u[i]), float(grid_u[i + 1])
        if u1 <= u_start:
            continue
        f0, f1 = float(phi[i]), float(phi[i + 1])
        t0 = max(u0, u_start) / 2.0
        if u0 < u_start:
            f0 = phi_at(t0)
        t1 = u1 / 2.0
        k_min = math.ceil(min(f0, f1) / math.pi - 1e-12)
        k_max = math.floor(max(f0, f1) / math.pi + 1e-12)
        for k in range(k_min, k_max + 1):
            level = k * math.pi
            if (f0 - level) * (f1 - level) < 0.0:
                g = lambda t, L=level: phi_at(t) - L
                zeros.append(float(_refine_bracket(g, t0, t1, f0 - level, f1 - level)))
    zeros = sorted(z for z in zeros if z <= t_max + 1e-12)

    v = _line_restriction(family, opts)
    records = []
    for idx, t_hat in enumerate(zeros, start=1):
        residual = abs(entire_normalization(family, complex(0.5, t_hat), opts))
        if family.kind == "constant_term":
            scale = 2.0 * math.sqrt(family.y) * abs(
                completed_zeta(complex(1.0, 2.0 * t_hat), opts)
            )
        else:
            T = family.T if family.kind == "truncation" else 1.0
            scale = (2.0 / math.sqrt(T)) * abs(xi(complex(1.0, 2.0 * t_hat), opts))
        deriv = (v(t_hat + 1e-4) - v(t_hat - 1e-4)) / 2e-4
        mult = 1 if abs(deriv) > 1e-6 * scale else 2
        if mult != 1 and (
            family.kind == "weng_rank2"
            or (family.kind == "truncation" and family.T >= 1.0)
        ):
            # simple zeros are guaranteed for T >= 1; a flat derivative is a bug
            raise SelfCheckError(
                f"zero at t = {t_hat} of {family.label()} failed the simple-zero test"
            )
        records.append(
            ZeroRecord(
                family=family,
                index=idx,
                ordinate=t_hat,
                residual=residual,
                scale=scale,
                multiplicity_hint=mult,
            )
        )
    return records


def _fourier_family_zeros(family: FamilyParam, t_max: float, opts: EvalOptions) -> list:
    # no phase formula: uniform grid below the minimal observed zero gap
    v = _line_restriction(family, opts)
    dt = 0.02
    ts = np.append(np.arange(_T_START, t_max, dt), t_max)
    vals = [v(float(t)) for t in ts]
    records = []
    idx = 0
    for i in range(len(ts) - 1):
        if vals[i] == 0.0 or (vals[i] < 0.0) == (vals[i + 1] < 0.0):
            continue
        t_hat = float(
            _refine_bracket(v, float(ts[i]), float(ts[i + 1]), vals[i], vals[i + 1])
        )
        scale = max(abs(vals[i]), abs(vals[i + 1]))
        deriv = (v(t_hat + 1e-4) - v(t_hat - 1e-4)) / 2e-4
        idx += 1
        records.append(
            ZeroRecord(
                family=family,
                index=idx,
                ordinate=t_hat,
                residual=abs(v(t_hat)),
                scale=scale,
                multiplicity_hint=1 if abs(deriv) > 1e-6 * scale else 2,
            )
        )
    return records


def critical_line_zeros(
    family: FamilyParam, t_max: float, opts: EvalOptions = DEFAULT_OPTIONS
) -> list:
    """All zeros with ordinate in (0, t_max] on the critical line, ascending.

    Truncation/Weng families solve theta(2t) + t log T = k pi; the
    constant-term family uses the zeta* phase with target pi/2 mod pi; the
    Fourier family falls back to a sign-change scan of the real-valued
    restriction.  The manufactured zero of the H-normalizations at s = 1/2
    is never reported.
    """
    if not t_max > 0.0:
        raise ValueError(f"t_max must be positive, got {t_max}")
    if t_max > 100.0:
        raise ValueError(f"t_max exceeds the accuracy envelope (100), got {t_max}")
    if family.kind == "fourier":
        return _fourier_family_zeros(family, t_max, opts)
    if family.kind == "xi_of_2s":
        raise ValueError("xi_of_2s is only a counting family; scan zeta zeros instead")
    return _phase_family_zeros(family, t_max, opts)


def count_zeros_rectangle(
    family: FamilyParam,
    re_lo: float,
    re_hi: float,
    im_lo: float,
    im_hi: float,
    opts: EvalOptions = DEFAULT_OPTIONS,
) -> RectangleCount:
    """Winding number of the family's entire normalization around the rectangle.

    Exact zero count inside (boundary assumed zero-free; tiny boundary values
    trigger an outward nudge of 1e-4, three attempts, then BoundaryZeroError).
    Note the H-normalizations carry a manufactured zero at s = 1/2.
    """
    if not (re_lo < re_hi and im_lo < im_hi):
        raise ValueError("rectangle bounds must satisfy re_lo < re_hi, im_lo < im_hi")

    def attempt(rl, rh, il, ih):
        corners = [
            complex(rl, il),
            complex(rh, il),
            complex(rh, ih),
            complex(rl, ih),
            complex(rl, il),
        ]
        samples = []
        for a, b in zip(corners[:-1], corners[1:]):
            n = max(8, int(abs(b - a) / 0.25))
            for j in range(n):
                samples.append(a + (b - a) * j / n)
        samples.append(corners[0])
        values = [entire_normalization(family, s, opts) for s in samples]
        # |H| legitimately spans many orders of magnitude along an edge, so a
        # boundary zero is flagged by collapse relative to the NEIGHBOURING
        # sample, never against a global scale.
        total = 0.0
        evals = 0
        prev_s, prev_w = samples[0], values[0]
        for s_next, w_next in zip(samples[1:], values[1:]):
            stack = [(prev_s, prev_w, s_next, w_next)]
            while stack:
                sa, wa, sb, wb = stack.pop()
                lo, hi = sorted((abs(wa), abs(wb)))
                if hi == 0.0 or lo < 1e-13 * hi:
                    return None  # collapse onto a boundary zero
                delta = cmath.phase(wb / wa)
                if abs(delta) < _MAX_RAW_STEP:
                    total += delta
                    continue
                if abs(sb - sa) < 1e-9:
                    return None  # phase jump pinned near a boundary zero
                mid = 0.5 * (sa + sb)
                wm = entire_normalization(family, mid, opts)
                evals += 1
                if evals > opts.max_terms:
                    raise AccuracyError("rectangle boundary refinement budget exceeded")
                stack.append((mid, wm, sb, wb))
                stack.append((sa, wa, mid, wm))
            prev_s, prev_w = s_next, w_next
        winding = total / (2.0 * math.pi)
        if abs(winding - round(winding)) > 0.25:
            raise AccuracyError(f"non-integer winding {winding:.4f}")
        return int(round(winding))

    rl, rh, il, ih = re_lo, re_hi, im_lo, im_hi
    for k in range(4):
        result = attempt(rl, rh, il, ih)
        if result is not None:
            return RectangleCount(rl, rh, il, ih, result)
        nudge = 1e-4 * (k + 1)
        rl, rh, il, ih = re_lo - nudge, re_hi + nudge, im_lo - nudge, im_hi + nudge
    raise BoundaryZeroError(
        f"boundary passes near a zero for rectangle [{re_lo},{re_hi}]x[{im_lo},{im_hi}]"
    )


def predicted_count(T: float, U: float) -> float:
    """Main-term zero-count prediction for I(T, s) with |Im s| <= U:
    (2/pi) [ U log U - (log pi + 1) U + (log T) U ]  (no error term)."""
    if not (T >= 1.0 and U >= 5.0):
        raise ValueError("predicted_count requires T >= 1 and U >= 5")
    return (2.0 / math.pi) * (
        U * math.log(U) - (math.log(math.pi) + 1.0) * U + math.log(T) * U
    )


def f_ratio(sigma: float, opts: EvalOptions = DEFAULT_OPTIONS) -> float:
    """f(sigma) = (1-sigma)/sigma * xi(2 sigma)/xi(2 sigma - 1), positive on (0,1)."""
    return (
        (1.0 - sigma)
        / sigma
        * (xi(complex(2.0 * sigma), opts).real / xi(complex(2.0 * sigma - 1.0), opts).real)
    )


def f_logderiv(sigma: float, opts: EvalOptions = DEFAULT_OPTIONS) -> float:
    """-f'(sigma)/f(sigma) by central differencing of log f at step 1e-6."""
    if not 0.5 <= sigma < 1.0 - 1e-6:
        raise ValueError(f"f_logderiv requires 1/2 <= sigma < 1, got {sigma}")
    h = 1e-6
    return -(
        math.log(f_ratio(sigma + h, opts)) - math.log(f_ratio(sigma - h, opts))
    ) / (2.0 * h)


def y_star() -> float:
    """The real-zero crossover 4 pi exp(-gamma) = 7.055507+, cross-validated
    against exp(2 (1 + xi'(0)/xi(0))); SelfCheckError on disagreement."""
    closed = 4.0 * math.pi * math.exp(-EULER_GAMMA)
    via_xi = math.exp(2.0 * (1.0 + xi_logderiv_at_zero()))
    if abs(closed - via_xi) > 1e-10 * max(1.0, closed):
        raise SelfCheckError(
            f"y* closed form {closed!r} disagrees with xi-route {via_xi!r}"
        )
    return closed


def big_f(y: float, sigma: float, opts: EvalOptions = DEFAULT_OPTIONS) -> float:
    """F(y, sigma) = y^(2 sigma - 1) f(sigma); F(y, 1/2) = 1."""
    return math.exp((2.0 * sigma - 1.0) * math.log(y)) * f_ratio(sigma, opts)


def big_f_prime(y: float, sigma: float, opts: EvalOptions = DEFAULT_OPTIONS) -> float:
    """d/dsigma F(y, sigma) by a 9-point stencil at radius 1e-2."""
    return central_derivative(lambda x: big_f(y, x, opts), sigma, 1, 1e-2, 9)


def y_star_via_fprime(opts: EvalOptions = DEFAULT_OPTIONS) -> float:
    """Root of F'(y, 1/2) = 0 in y, by bisection on [6, 8] (Lemma-style route)."""
    lo, hi = 6.0, 8.0
    g_lo = big_f_prime(lo, 0.5, opts)
    g_hi = big_f_prime(hi, 0.5, opts)
    if not (g_lo < 0.0 < g_hi):
        raise SelfCheckError("F'(y, 1/2) does not bracket a sign change on [6, 8]")
    while hi - lo > 1e-10:
        mid = 0.5 * (lo + hi)
        if big_f_prime(mid, 0.5, opts) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def real_zeros(y: float, opts: EvalOptions = DEFAULT_OPTIONS) -> list:
    """Real zeros of a0(y, .) in (1/2, 1): empty for y <= y*, exactly one
    sigma_y above the crossover (the mirror 1 - sigma_y is implied)."""
    if not y >= 1.0:
        raise ValueError(f"real_zeros requires y >= 1, got {y}")
    if y <= y_star():
        return []
    ln_y = math.log(y)

    def g(sigma: float) -> float:
        return (2.0 * sigma - 1.0) * ln_y + math.log(f_ratio(sigma, opts))

    # G is concave with G(1/2) = 0, G > 0 on (1/2, sigma_y), G -> -inf at 1.
    hi = 0.9999
    while g(hi) >= 0.0 and 1.0 - hi > 1e-12:
        hi = 1.0 - (1.0 - hi) / 100.0
    g_hi = g(hi)
    if g_hi >= 0.0:
        raise AccuracyError(f"no sign change of log F found below sigma = 1 for y = {y}")
    lo, g_lo = None, None
    gap = (hi - 0.5) / 2.0
    while gap > 1e-13:
        probe = 0.5 + gap
        g_probe = g(probe)
        if g_probe > 0.0:
            lo, g_lo = probe, g_probe
            break
        hi, g_hi = probe, g_probe
        gap *= 0.5
    if lo is None:
        # root merged with 1/2 below double-precision resolution
        sigma_hat = 0.5 + gap * 2.0
    else:
        while hi - lo > 1e-13:
            mid = 0.5 * (lo + hi)
            if g(mid) > 0.0:
                lo = mid
            else:
                hi = mid
        sigma_hat = 0.5 * (lo + hi)
    residual = abs(h_constant_term(y, complex(sigma_hat), opts))
    scale = abs(
        central_derivative(
            lambda x: h_constant_term(y, complex(x), opts).real, sigma_hat, 1, 1e-3, 5
        )
    )
    return [
        ZeroRecord(
            family=FamilyParam.constant_term(y),
            index=1,
            ordinate=sigma_hat,
            residual=residual,
            scale=max(scale, 1e-300),
            multiplicity_hint=1,
        )
    ]


def zero_trajectory(
    T_values, index: int, opts: EvalOptions = DEFAULT_OPTIONS
) -> list:
    """Ordinate of the index-th critical-line zero of I(T, .) for each T
    (ascending T's; ordinates come out strictly decreasing)."""
    T_values = [float(T) for T in T_values]
    if any(b <= a for a, b in zip(T_values, T_values[1:])):
        raise ValueError("T_values must be strictly ascending")
    if index < 1:
        raise ValueError("index must be >= 1")
    out = []
    t_cap = None
    for T in T_values:
        if t_cap is None:
            t_max = 12.0
            while True:
                records = critical_line_zeros(FamilyParam.truncation(T), t_max, opts)
                if len(records) >= index:
                    break
                t_max *= 2.0
                if t_max > 100.0:
                    raise AccuracyError(f"zero #{index} above the t envelope for T = {T}")
        else:
            records = critical_line_zeros(FamilyParam.truncation(T), t_cap, opts)
            if len(records) < index:
                raise AccuracyError(f"zero #{index} not found below t = {t_cap}")
        ordinate = records[index - 1].ordinate
        t_cap = ordinate + 1.0
        out.append((T, ordinate))
    return out
