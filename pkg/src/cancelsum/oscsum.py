"""Alternating sums over quadratic-constrained integer indices, the
cancellation bound machinery, and empirical exponent fits.

The central object is

    S(x) = sum over integers n with q(n) < x of (-1)^n kernel(x - q(n)) h(n)

where q(n) = a n^2 + b n + d with a > 0 and h(n) = (alpha_h n + beta_h)^{t_h}.
The coefficients of q are kept as exact Fractions so the strict index
constraint q(n) < x is decided by rational arithmetic, never by a
rounded float: sums like the pentagonal checksum live exactly on such
boundaries (q(-8) = 100 at x = 100) and one wrongly included index
destroys the cancellation being measured.

The predicted ceiling for real exponential kernels is
sqrt(x) e^{w c sqrt(x)} where w = min(1, max_r Delta(r)) and

    Delta(r) = sqrt(sqrt(a) r (sqrt(a r^2 + 4) + r sqrt(a)) / 2) - pi r / c,

and for the complex-exponent family e^{(alpha + i beta) sqrt(x - l^2/T)}
it is sqrt(T/(|beta|+1)) e^{alpha (sqrt(2/(2+pi^2)) + delta) sqrt(x)} + sqrt(T).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Optional, Union

import numpy as np
from mpmath import mp, mpc, mpf

from . import partition
from .errors import DegenerateFitError, DomainError, EmptyRangeError, PrecisionError
from .numerics import (PrecisionContext, complex_sqrt_principal, nstr_for_bits,
                       to_fraction_exact as _to_fraction, to_mpf_exact)

Rational = Union[int, Fraction]


@dataclass(frozen=True)
class QuadraticForm:
    """q(n) = a n^2 + b n + d with exact rational coefficients, a > 0."""

    a: Fraction
    b: Fraction = Fraction(0)
    d: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "a", _to_fraction(self.a))
        object.__setattr__(self, "b", _to_fraction(self.b))
        object.__setattr__(self, "d", _to_fraction(self.d))
        if self.a <= 0:
            raise DomainError("QuadraticForm needs a > 0")

    def evaluate(self, n: int) -> Fraction:
        return self.a * n * n + self.b * n + self.d

    def evaluate_complex(self, z: mpc) -> mpc:
        return to_mpf_exact(self.a) * z * z + to_mpf_exact(self.b) * z + to_mpf_exact(self.d)

    def roots_at(self, x) -> tuple[mpf, mpf]:
        """Real solutions of q(t) = x (branch points of sqrt(x - q));
        requires x above the parabola minimum."""
        xf = _to_fraction(x)
        disc = self.b * self.b - 4 * self.a * (self.d - xf)
        if disc <= 0:
            raise EmptyRangeError("q(t) = x has no two real roots for x = %s" % (x,))
        s = mp.sqrt(to_mpf_exact(disc))
        return (
            (-to_mpf_exact(self.b) - s) / (2 * to_mpf_exact(self.a)),
            (-to_mpf_exact(self.b) + s) / (2 * to_mpf_exact(self.a)),
        )

    def index_range(self, x) -> tuple[int, int]:
        """Integer interval [n_lo, n_hi] where q(n) < x strictly;
        boundary integers with q(n) = x exactly are excluded."""
        xf = _to_fraction(x)
        disc = self.b * self.b - 4 * self.a * (self.d - xf)
        if disc <= 0:
            raise EmptyRangeError("no integer n satisfies q(n) < %s" % (x,))
        sqrt_disc = float(disc) ** 0.5
        lo = int((float(-self.b) - sqrt_disc) / (2 * float(self.a)))
        hi = int((float(-self.b) + sqrt_disc) / (2 * float(self.a)))
        while self.evaluate(lo - 1) < xf:
            lo -= 1
        while self.evaluate(lo) >= xf:
            lo += 1
            if lo > hi + 2:
                raise EmptyRangeError("no integer n satisfies q(n) < %s" % (x,))
        while self.evaluate(hi + 1) < xf:
            hi += 1
        while self.evaluate(hi) >= xf:
            hi -= 1
        if lo > hi:
            raise EmptyRangeError("no integer n satisfies q(n) < %s" % (x,))
        return lo, hi


def pentagonal_form() -> QuadraticForm:
    """q(n) = n(3n-1)/2, the pentagonal-number constraint."""
    return QuadraticForm(Fraction(3, 2), Fraction(-1, 2), Fraction(0))


def square_form(T: Rational = 1) -> QuadraticForm:
    """q(l) = l^2 / T, the scaled-square constraint."""
    return QuadraticForm(Fraction(1, 1) / Fraction(T), Fraction(0), Fraction(0))


_RADEMACHER = {
    "p1": (partition.p1, partition.GROWTH_P1),
    "p2": (partition.p2, partition.GROWTH_P2),
    "p3": (partition.p3, partition.GROWTH_P3),
    "p4": (partition.p4, partition.GROWTH_P4),
}


@dataclass(frozen=True)
class KernelSpec:
    """A named kernel family plus the monomial weight h(n) = (alpha_h n + beta_h)^{t_h}.

    `growth` is the constant c in kernel(y) ~ e^{c sqrt(y)}, consumed by
    the precision policy; None means "estimate numerically at the sum's
    argument".  `real_eval`/`complex_eval` evaluate the kernel at a
    nonnegative rational y, respectively at a complex point w = x - q(z)
    during contour checks (None when the family has no complex
    continuation wired up).
    """

    family: str
    real_eval: Callable[[object, PrecisionContext], object]
    complex_eval: Optional[Callable[[mpc, PrecisionContext], mpc]] = None
    growth: Optional[float] = None
    weight: tuple[Rational, Rational, int] = (1, 0, 0)
    label: str = ""

    def evaluate(self, y, ctx: PrecisionContext):
        return self.real_eval(y, ctx)

    def evaluate_complex(self, w: mpc, ctx: PrecisionContext) -> mpc:
        if self.complex_eval is None:
            raise DomainError("kernel family %r has no complex continuation" % (self.family,))
        return self.complex_eval(w, ctx)

    def evaluate_weight(self, n) -> mpf:
        ah, bh, th = self.weight
        if th == 0:
            return mpf(1)
        if int(th) != th:
            raise DomainError("weight exponent t_h must be an integer")
        if isinstance(n, mpc):
            base = to_mpf_exact(ah) * n + to_mpf_exact(bh)
        else:
            base = to_mpf_exact(ah) * to_mpf_exact(n) + to_mpf_exact(bh)
        return base ** int(th)

    def describe(self) -> str:
        return self.label or self.family


def exp_sqrt_kernel(c, weight=(1, 0, 0)) -> KernelSpec:
    """kernel(y) = e^{c sqrt(y)}; c may be a number, decimal string, or a
    zero-argument callable producing an mpf at working precision."""
    c_value = _growth_value(c)
    if c_value <= 0:
        raise DomainError("exp_sqrt needs c > 0")

    def real_eval(y, ctx):
        with ctx.workprec():
            return mp.exp(_resolve(c) * mp.sqrt(to_mpf_exact(y)))

    def complex_eval(w, ctx):
        with ctx.workprec():
            return mp.exp(_resolve(c) * complex_sqrt_principal(w))

    return KernelSpec("exp_sqrt", real_eval, complex_eval, growth=c_value, weight=weight,
                      label="exp_sqrt(c=%s)" % (c_value,))


def rademacher_kernel(name: str, weight=(1, 0, 0)) -> KernelSpec:
    """Truncated Hardy-Ramanujan-Rademacher kernels p1, p2, p3, p4 and
    the square-root variant sqrt_p1."""
    if name == "sqrt_p1":
        def real_eval(y, ctx):
            with ctx.workprec():
                return mp.sqrt(partition.p1(y, ctx))
        return KernelSpec("rademacher", real_eval, growth=partition.GROWTH_SQRT_P1,
                          weight=weight, label="sqrt_p1")
    if name not in _RADEMACHER:
        raise DomainError("unknown rademacher kernel %r" % (name,))
    func, growth = _RADEMACHER[name]

    def real_eval(y, ctx):
        return func(y, ctx)

    return KernelSpec("rademacher", real_eval, growth=growth, weight=weight, label=name)


def bessel_kernel(alpha: int, c, weight=(1, 0, 0)) -> KernelSpec:
    """kernel(y) = I_alpha(c sqrt(y))."""
    from .numerics import bessel_i

    c_value = _growth_value(c)
    if c_value <= 0:
        raise DomainError("bessel kernel needs c > 0")

    def real_eval(y, ctx):
        with ctx.workprec():
            return bessel_i(alpha, _resolve(c) * mp.sqrt(to_mpf_exact(y)), ctx)

    return KernelSpec("bessel", real_eval, growth=c_value, weight=weight,
                      label="bessel(alpha=%d, c=%s)" % (alpha, c_value))


def meinardus_spec(params, weight=(1, 0, 0)) -> KernelSpec:
    """Generic (g^q e^{k^theta} (1 - h^{-r})) kernel; growth estimated
    numerically at the sum argument."""
    kernel = partition.meinardus_kernel(params)

    def real_eval(y, ctx):
        return kernel(y, ctx)

    return KernelSpec("meinardus", real_eval, growth=None, weight=weight, label="meinardus")


def power_kernel(k_half, weight=(1, 0, 0)) -> KernelSpec:
    """kernel(y) = y^{k/2}; polynomially bounded (growth constant 0)."""
    exponent = Fraction(k_half)

    def real_eval(y, ctx):
        with ctx.workprec():
            yy = to_mpf_exact(y)
            if yy == 0:
                return mpf(0) if exponent > 0 else mpf(1)
            return yy ** to_mpf_exact(exponent)

    def complex_eval(w, ctx):
        with ctx.workprec():
            return mpc(w) ** to_mpf_exact(exponent)

    return KernelSpec("power", real_eval, complex_eval, growth=0.0, weight=weight,
                      label="power(k/2=%s)" % (exponent,))


def complex_exp_kernel(alpha, beta, T, weight=(1, 0, 0)) -> KernelSpec:
    """kernel(y) = e^{(alpha + i beta) sqrt(y)} with 0 <= alpha <= 2 and
    beta^2 <= T (the regime of the complex-exponent bound)."""
    alpha_f = _to_fraction(alpha)
    beta_f = _to_fraction(beta)
    T_f = _to_fraction(T)
    if not (0 <= alpha_f <= 2):
        raise DomainError("complex_exp needs 0 <= alpha <= 2 (theorem regime is alpha <= ~1)")
    if T_f <= 0:
        raise DomainError("complex_exp needs T > 0")
    if beta_f * beta_f > T_f:
        raise DomainError("complex_exp needs |beta| <= sqrt(T)")

    def real_eval(y, ctx):
        with ctx.workprec():
            root = mp.sqrt(to_mpf_exact(y))
            return mp.exp(mpc(to_mpf_exact(alpha_f), to_mpf_exact(beta_f)) * root)

    def complex_eval(w, ctx):
        with ctx.workprec():
            root = complex_sqrt_principal(w)
            return mp.exp(mpc(to_mpf_exact(alpha_f), to_mpf_exact(beta_f)) * root)

    return KernelSpec("complex_exp", real_eval, complex_eval, growth=float(alpha_f),
                      weight=weight, label="complex_exp(alpha=%s, beta=%s, T=%s)" % (alpha, beta, T))


def _resolve(c) -> mpf:
    if callable(c):
        return c()
    return to_mpf_exact(c)


def _growth_value(c) -> float:
    with mp.workprec(64):
        return float(_resolve(c))


@dataclass
class SumReport:
    """One evaluated oscillating sum with its optional predicted bound."""

    x: object
    value: mpc
    abs_value: mpf
    term_count: int
    precision_bits: int
    predicted_bound: Optional[mpf] = None
    ratio: Optional[mpf] = None

    def to_json_dict(self) -> dict:
        bits = self.precision_bits
        return {
            "x": str(self.x),
            "re": nstr_for_bits(self.value.real, bits),
            "im": nstr_for_bits(self.value.imag, bits),
            "abs": nstr_for_bits(self.abs_value, bits),
            "terms": self.term_count,
            "bound": None if self.predicted_bound is None else nstr_for_bits(self.predicted_bound, bits),
            "ratio": None if self.ratio is None else nstr_for_bits(self.ratio, bits),
            "bits": bits,
        }


def _interleaved(lo: int, hi: int):
    """0, 1, -1, 2, -2, ... clipped to [lo, hi] (increasing |n|)."""
    start = min(max(0, lo), hi)
    yield start
    step = 1
    while True:
        up, down = start + step, start - step
        emitted = False
        if up <= hi:
            yield up
            emitted = True
        if down >= lo:
            yield down
            emitted = True
        if not emitted:
            return
        step += 1


def alternating_sum(kernel: KernelSpec, q: QuadraticForm, x, ctx: PrecisionContext,
                    predicted_bound=None, order: str = "abs") -> SumReport:
    """Evaluate S(x) = sum_{q(n) < x} (-1)^n kernel(x - q(n)) h(n).

    Terms are accumulated at bits + guard_bits, by default in order of
    increasing |n| (order="ascending" walks n_lo..n_hi instead; the two
    agree to accumulation tolerance).  Raises PrecisionError when the
    precision policy for the kernel's growth constant exceeds ctx.bits,
    and EmptyRangeError when no index satisfies the constraint.
    """
    from .numerics import required_bits

    growth = kernel.growth
    if growth is None:
        growth = _estimate_growth(kernel, x)
    need = required_bits(x, growth)
    if need > ctx.bits:
        raise PrecisionError(
            "sum at x=%s with growth c=%.6g needs %d bits, context has %d"
            % (x, growth, need, ctx.bits))
    lo, hi = q.index_range(x)
    x_frac = _to_fraction(x)
    indices = _interleaved(lo, hi) if order == "abs" else range(lo, hi + 1)
    with ctx.workprec():
        total = mpc(0)
        for n in indices:
            y = x_frac - q.evaluate(n)
            term = mpc(kernel.evaluate(y, ctx)) * kernel.evaluate_weight(n)
            total = total + term if n % 2 == 0 else total - term
        abs_value = abs(total)
        bound_v = None
        ratio = None
        if predicted_bound is not None:
            bound_v = to_mpf_exact(predicted_bound)
            if bound_v > 0:
                ratio = abs_value / bound_v
    return SumReport(x=x, value=total, abs_value=abs_value, term_count=hi - lo + 1,
                     precision_bits=ctx.bits, predicted_bound=bound_v, ratio=ratio)


def _estimate_growth(kernel: KernelSpec, x) -> float:
    """log kernel(x) / sqrt(x) at modest precision, for families without
    a declared growth constant."""
    probe = PrecisionContext(bits=192)
    with probe.workprec():
        val = kernel.evaluate(_to_fraction(x), probe)
        if val <= 0:
            return 0.0
        return float(mp.log(val) / mp.sqrt(to_mpf_exact(_to_fraction(x))))


def delta(r, a, c) -> mpf:
    """Delta(r) = sqrt(sqrt(a) r (sqrt(a r^2 + 4) + r sqrt(a)) / 2) - pi r / c."""
    if r < 0:
        raise DomainError("delta needs r >= 0")
    if a <= 0 or c <= 0:
        raise DomainError("delta needs a, c > 0")
    with mp.workprec(192):
        rr, aa, cc = to_mpf_exact(_num(r)), to_mpf_exact(_num(a)), to_mpf_exact(_num(c))
        sa = mp.sqrt(aa)
        inner = sa * rr * (mp.sqrt(aa * rr * rr + 4) + rr * sa) / 2
        return mp.sqrt(inner) - mp.pi * rr / cc


def _delta_prime(r, a, c) -> mpf:
    """Analytic d/dr of delta (for the maximizer refinement)."""
    with mp.workprec(192):
        rr, aa, cc = to_mpf_exact(_num(r)), to_mpf_exact(_num(a)), to_mpf_exact(_num(c))
        sa = mp.sqrt(aa)
        disc = mp.sqrt(aa * rr * rr + 4)
        g = sa * rr * (disc + rr * sa) / 2
        if g == 0:
            return mpf("inf")
        gp = sa * (disc + rr * sa) / 2 + sa * rr * (aa * rr / disc + sa) / 2
        return gp / (2 * mp.sqrt(g)) - mp.pi / cc


def _num(v):
    """Resolve a callable/string constant to a numeric value."""
    if callable(v):
        return v()
    if isinstance(v, str):
        return mpf(v)
    return v


@lru_cache(maxsize=256)
def _maximize_delta_cached(a_key, c_key):
    a = Fraction(a_key)
    with mp.workprec(192):
        c = mpf(c_key)
        r_max = 4 * c / mp.pi * (1 + 1 / mp.sqrt(to_mpf_exact(a))) + 4
        if _delta_prime(r_max, a, c) >= 0:
            # Delta still increasing at the search boundary (c > pi/sqrt(a)):
            # the supremum is the endpoint and w caps at 1.
            return r_max, min(mpf(1), delta(r_max, a, c))
        inv_phi = (mp.sqrt(5) - 1) / 2
        lo, hi = mpf(0), r_max
        f = lambda t: delta(t, a, c)
        x1 = hi - inv_phi * (hi - lo)
        x2 = lo + inv_phi * (hi - lo)
        f1, f2 = f(x1), f(x2)
        for _ in range(400):
            if f1 < f2:
                lo, x1, f1 = x1, x2, f2
                x2 = lo + inv_phi * (hi - lo)
                f2 = f(x2)
            else:
                hi, x2, f2 = x2, x1, f1
                x1 = hi - inv_phi * (hi - lo)
                f1 = f(x1)
            if hi - lo < mpf(2) ** -160:
                break
        alpha_star = (lo + hi) / 2
        if abs(_delta_prime(alpha_star, a, c)) > mpf("1e-12"):
            # steep-curvature regimes (tiny c puts the max near 0 where
            # Delta'' blows up) need a derivative polish on top of the
            # bracketing search
            try:
                root = mp.findroot(lambda t: _delta_prime(t, a, c),
                                   alpha_star, solver="secant")
                if 0 < root < r_max and delta(root, a, c) >= delta(alpha_star, a, c):
                    alpha_star = mpf(root.real) if isinstance(root, mpc) else mpf(root)
            except (ValueError, ZeroDivisionError):
                pass
        if abs(_delta_prime(alpha_star, a, c)) > mpf("1e-12"):
            raise DomainError("golden section failed to localize the Delta maximizer")
        val = f(alpha_star)
        if val <= 0:
            return mpf(0), mpf(0)
        return alpha_star, min(mpf(1), val)


def maximize_delta(a, c) -> tuple[mpf, mpf]:
    """Maximizer alpha_star of Delta over [0, R_max] and w = min(1, Delta(alpha_star)).

    R_max = 4c/pi (1 + 1/sqrt(a)) + 4, beyond which Delta is dominated
    by its linear term whenever c < pi/sqrt(a); if Delta is still
    increasing at R_max the bound degenerates and w = 1.
    """
    a_frac = _to_fraction(a)
    with mp.workprec(192):
        c_key = mp.nstr(to_mpf_exact(_num(c)), 50)
    return _maximize_delta_cached(str(a_frac), c_key)


def bound_main1(a, c, x, ctx: PrecisionContext) -> mpf:
    """Predicted ceiling sqrt(x) e^{w c sqrt(x)} for the real-kernel sum."""
    _, w = maximize_delta(a, c)
    with ctx.workprec():
        sx = mp.sqrt(to_mpf_exact(_to_fraction(x)))
        return sx * mp.exp(w * to_mpf_exact(_num(c)) * sx)


def complex_alternating_sum(alpha, beta, T, x, ctx: PrecisionContext,
                            predicted_bound=None) -> SumReport:
    """sum over l^2 < T x of (-1)^l e^{(alpha + i beta) sqrt(x - l^2/T)}."""
    kernel = complex_exp_kernel(alpha, beta, T)
    q = square_form(T)
    return alternating_sum(kernel, q, x, ctx, predicted_bound=predicted_bound)


def bound_main2(alpha, beta, T, x, delta_slack) -> mpf:
    """sqrt(T/(|beta|+1)) e^{alpha (sqrt(2/(2+pi^2)) + delta) sqrt(x)} + sqrt(T)."""
    with mp.workprec(192):
        slack = to_mpf_exact(_num(delta_slack))
        if slack <= 0:
            raise DomainError("bound_main2 needs delta_slack > 0")
        Tf = to_mpf_exact(_to_fraction(T))
        af = to_mpf_exact(_num(alpha))
        bf = abs(to_mpf_exact(_num(beta)))
        base = mp.sqrt(2 / (2 + mp.pi ** 2)) + slack
        sx = mp.sqrt(to_mpf_exact(_to_fraction(x)))
        return mp.sqrt(Tf / (bf + 1)) * mp.exp(af * base * sx) + mp.sqrt(Tf)


def empirical_exponent(samples) -> tuple[float, float, float]:
    """Least-squares fit log|S| = w_hat sqrt(x) + intercept over (x, |S|)
    samples; returns (w_hat, intercept, RMS residual)."""
    pts = list(samples)
    if len(pts) < 3:
        raise DomainError("empirical_exponent needs at least 3 samples")
    roots = []
    logs = []
    with mp.workprec(128):
        for x, abs_value in pts:
            av = to_mpf_exact(_num(abs_value)) if not isinstance(abs_value, mpf) else abs_value
            if av <= 0:
                raise DomainError("empirical_exponent needs abs_value > 0")
            roots.append(float(mp.sqrt(to_mpf_exact(_to_fraction(x)))))
            logs.append(float(mp.log(av)))
    if max(roots) - min(roots) < 1e-12:
        raise DegenerateFitError("all sqrt(x) values coincide; slope is undetermined")
    A = np.column_stack([np.array(roots), np.ones(len(roots))])
    y = np.array(logs)
    coeffs, *_ = np.linalg.lstsq(A, y, rcond=None)
    pred = A @ coeffs
    residual = float(np.sqrt(np.mean((pred - y) ** 2)))
    return float(coeffs[0]), float(coeffs[1]), residual
