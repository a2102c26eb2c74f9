"""Rectangular-contour quadrature for residue identities.

The checked identity: for a kernel K with a complex continuation and a
positive-definite quadratic q,

    integral over the rectangle of  pi K(x - q(z)) h(z) / sin(pi z) dz
        = 2 pi i  sum_{q(n) < x} (-1)^n K(x - q(n)) h(n),

counterclockwise, with the rectangle enclosing exactly the integers n
with q(n) < x and staying strictly inside the branch points of
sqrt(x - q(z)).  The residue of csc at an integer n is (-1)^n / pi,
hence the pi factor in the integrand.

Vertical legs sit at half-integer abscissae when the gap between the
outermost enclosed pole and the branch point allows it, else at the
gap midpoint.  Quadrature is per-leg adaptive composite Gauss-Legendre
with 32-point panels; the panel error estimate embeds the 16-point
rule, and a leg converges when two successive refinement sweeps agree
to the requested relative tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

from mpmath import mp, mpc, mpf

from .errors import DomainError, QuadratureError
from .numerics import PrecisionContext, nstr_for_bits, to_mpf_exact
from .oscsum import KernelSpec, QuadraticForm, SumReport, alternating_sum

MIN_SIN_CLEARANCE = mpf("1e-3")
MAX_REFINEMENT_LEVELS = 20

_node_cache: dict[tuple[int, int], tuple] = {}


def gauss_legendre_nodes(npts: int) -> tuple:
    """Nodes and weights on [-1, 1] at the current working precision,
    by Newton iteration on the Legendre recurrence.  Cached per
    (npts, precision)."""
    key = (npts, mp.prec)
    cached = _node_cache.get(key)
    if cached is not None:
        return cached
    with mp.workprec(mp.prec + 32):
        tol = mpf(2) ** (-mp.prec + 16)
        pairs = []
        for i in range(1, npts // 2 + 1):
            x = mp.cos(mp.pi * (i - mpf(1) / 4) / (npts + mpf(1) / 2))
            dp = mpf(1)
            for _ in range(200):
                p0, p1 = mpf(1), x
                for j in range(2, npts + 1):
                    p0, p1 = p1, ((2 * j - 1) * x * p1 - (j - 1) * p0) / j
                dp = npts * (x * p1 - p0) / (x * x - 1)
                dx = p1 / dp
                x -= dx
                if abs(dx) < tol:
                    break
            w = 2 / ((1 - x * x) * dp * dp)
            pairs.append((x, w))
            pairs.append((-x, w))
        if npts % 2 == 1:
            x = mpf(0)
            p0, p1 = mpf(1), x
            for j in range(2, npts + 1):
                p0, p1 = p1, ((2 * j - 1) * x * p1 - (j - 1) * p0) / j
            dp = npts * (x * p1 - p0) / (x * x - 1)
            pairs.append((x, 2 / ((1 - x * x) * dp * dp)))
    result = tuple((+n, +w) for n, w in pairs)
    _node_cache[key] = result
    return result


@dataclass(frozen=True)
class RectContour:
    """Rectangle with vertical legs at shift +- x_half_width and
    horizontal legs at +- height_u (vertical half-extent, u*sqrt(x) in
    the residue checks).  Horizontal legs keep distance >= 0.25 from
    the pole line; vertical legs may cross it transversally between
    poles."""

    x_half_width: mpf
    height_u: mpf
    shift: mpf = mpf(0)

    def __post_init__(self):
        if self.x_half_width <= 0:
            raise DomainError("x_half_width must be positive")
        if self.height_u < mpf("0.25"):
            raise DomainError("height_u below the 0.25 pole-clearance floor")

    @property
    def x_left(self) -> mpf:
        return self.shift - self.x_half_width

    @property
    def x_right(self) -> mpf:
        return self.shift + self.x_half_width

    def legs(self) -> tuple:
        """Counterclockwise: bottom, right, top, left."""
        xl, xr, h = self.x_left, self.x_right, self.height_u
        return (
            (mpc(xl, -h), mpc(xr, -h)),
            (mpc(xr, -h), mpc(xr, h)),
            (mpc(xr, h), mpc(xl, h)),
            (mpc(xl, h), mpc(xl, -h)),
        )


def build_contour(q: QuadraticForm, x, u, ctx: PrecisionContext) -> RectContour:
    """Place the rectangle for sqrt(x - q(z)): vertical legs in the gap
    between the outermost enclosed pole and the branch point, at the
    half-integer inside the gap when there is one, else the gap
    midpoint; horizontal legs at +- u sqrt(x)."""
    with ctx.workprec():
        uv = to_mpf_exact(u)
        if uv <= 0:
            raise DomainError("contour height factor u must be positive")
        xv = to_mpf_exact(x)
        r_lo, r_hi = q.roots_at(x)
        lo, hi = q.index_range(x)
        cand = mpf(lo) - mpf(1) / 2
        xl = cand if cand > r_lo else (r_lo + lo) / 2
        cand = mpf(hi) + mpf(1) / 2
        xr = cand if cand < r_hi else (r_hi + hi) / 2
        height = uv * mp.sqrt(xv)
        return RectContour(x_half_width=(xr - xl) / 2, height_u=height,
                           shift=(xr + xl) / 2)


@dataclass(frozen=True)
class IntegrandDescriptor:
    """func evaluates the integrand at a complex point; cut_func, when
    set, returns the radicand x - q(z) so panel nodes can verify the
    leg stays off the branch cut (negative real axis)."""

    func: Callable[[mpc], mpc]
    cut_func: Optional[Callable[[mpc], mpc]] = None
    label: str = ""


@dataclass(frozen=True)
class QuadratureResult:
    value: mpc
    leg_values: tuple
    evaluations: int
    levels: tuple

    @property
    def leg_mags(self) -> tuple:
        return tuple(abs(v) for v in self.leg_values)


def _check_cut(cut_func, z: mpc) -> None:
    w = cut_func(z)
    if w.imag == 0 and w.real <= 0:
        raise QuadratureError("leg touches the branch cut at z = %s (x - q(z) = %s)"
                              % (mp.nstr(z, 12), mp.nstr(w, 12)))


def _panel(H: IntegrandDescriptor, za: mpc, zb: mpc) -> tuple:
    """One 32-point panel value plus the |dz|-scaled error estimate
    against the embedded 16-point rule."""
    mid = (za + zb) / 2
    half = (zb - za) / 2
    s32 = mpc(0)
    for t, w in gauss_legendre_nodes(32):
        z = mid + half * t
        if H.cut_func is not None:
            _check_cut(H.cut_func, z)
        s32 += w * H.func(z)
    s16 = mpc(0)
    for t, w in gauss_legendre_nodes(16):
        z = mid + half * t
        if H.cut_func is not None:
            _check_cut(H.cut_func, z)
        s16 += w * H.func(z)
    return half * s32, abs(half) * abs(s32 - s16)


def _leg_integral(H: IntegrandDescriptor, z0: mpc, z1: mpc, tol: mpf,
                  scale_hint: mpf) -> tuple:
    """Adaptive refinement sweeps; converged when two successive sweep
    totals agree to tol relative."""
    length = abs(z1 - z0)
    n0 = max(2, int(mp.ceil(length / 2)))
    step = (z1 - z0) / n0
    panels = []
    for i in range(n0):
        za, zb = z0 + step * i, z0 + step * (i + 1)
        val, err = _panel(H, za, zb)
        panels.append([za, zb, val, err])
    evals = 48 * n0
    floor = scale_hint * mpf(2) ** (16 - mp.prec)
    s_prev = None
    for level in range(MAX_REFINEMENT_LEVELS + 1):
        s = mpc(0)
        for p in panels:
            s += p[2]
        if s_prev is not None and abs(s - s_prev) <= tol * max(abs(s), abs(s_prev), floor):
            return s, evals, level
        s_prev = s
        if level == MAX_REFINEMENT_LEVELS:
            break
        threshold = tol * max(abs(s), floor) / (8 * len(panels))
        split = [i for i, p in enumerate(panels) if p[3] > threshold]
        if not split:
            split = list(range(len(panels)))
        refined = []
        for i, p in enumerate(panels):
            if i in set(split):
                zm = (p[0] + p[1]) / 2
                for za, zb in ((p[0], zm), (zm, p[1])):
                    val, err = _panel(H, za, zb)
                    refined.append([za, zb, val, err])
                    evals += 48
            else:
                refined.append(p)
        panels = refined
    raise QuadratureError("leg quadrature did not converge after %d refinement levels"
                          % MAX_REFINEMENT_LEVELS)


def integrate_rectangle(H: IntegrandDescriptor, contour: RectContour,
                        ctx: PrecisionContext, tol, orientation: int = 1) -> QuadratureResult:
    """Oriented sum of the four leg integrals (counterclockwise for
    orientation +1); pole clearance is prechecked in closed form:
    |sin(pi z)| on a vertical leg at abscissa X is >= |sin(pi X)|, on a
    horizontal leg at height Y is >= sinh(pi |Y|)."""
    if orientation not in (1, -1):
        raise DomainError("orientation must be +1 or -1")
    with ctx.workprec():
        tol_v = to_mpf_exact(tol)
        if tol_v <= 0:
            raise DomainError("tol must be positive")
        for X in (contour.x_left, contour.x_right):
            if abs(mp.sin(mp.pi * X)) < MIN_SIN_CLEARANCE:
                raise QuadratureError(
                    "vertical leg at %s passes within the pole clearance"
                    % mp.nstr(X, 12))
        if mp.sinh(mp.pi * contour.height_u) < MIN_SIN_CLEARANCE:
            raise QuadratureError("horizontal legs too close to the pole line")
        leg_values = []
        levels = []
        evals = 0
        hint = mpf(0)
        for z0, z1 in contour.legs():
            value, n, level = _leg_integral(H, z0, z1, tol_v, hint)
            leg_values.append(value)
            levels.append(level)
            evals += n
            hint = max(hint, abs(value))
        total = mpc(0)
        for v in leg_values:
            total += v
        if orientation == -1:
            total = -total
        return QuadratureResult(value=total, leg_values=tuple(leg_values),
                                evaluations=evals, levels=tuple(levels))


@dataclass(frozen=True)
class ResidueReport:
    x: float
    quad: mpc
    discrete: mpc
    rel_err: mpf
    leg_mags: tuple
    contour: RectContour
    term_count: int
    precision_bits: int

    def to_json_dict(self) -> dict:
        bits = self.precision_bits
        return {
            "x": self.x,
            "quad_re": nstr_for_bits(self.quad.real, bits),
            "quad_im": nstr_for_bits(self.quad.imag, bits),
            "discrete_re": nstr_for_bits(self.discrete.real, bits),
            "discrete_im": nstr_for_bits(self.discrete.imag, bits),
            "rel_err": float(self.rel_err),
            "leg_mags": [nstr_for_bits(m, bits) for m in self.leg_mags],
        }


def kernel_integrand(kernel: KernelSpec, q: QuadraticForm, x,
                     ctx: PrecisionContext) -> IntegrandDescriptor:
    """pi K(x - q(z)) h(z) / sin(pi z) with the radicand exposed for
    branch-cut node checks."""
    with ctx.workprec():
        xv = to_mpf_exact(x)

    def radicand(z: mpc) -> mpc:
        return xv - q.evaluate_complex(z)

    def func(z: mpc) -> mpc:
        w = radicand(z)
        value = kernel.evaluate_complex(w, ctx) * kernel.evaluate_weight(z)
        return mp.pi * value / mp.sin(mp.pi * z)

    return IntegrandDescriptor(func=func, cut_func=radicand,
                               label="pi %s / sin(pi z)" % kernel.describe())


def residue_identity_check(kernel: KernelSpec, q: QuadraticForm, x, u,
                           ctx: PrecisionContext, tol="1e-14") -> ResidueReport:
    """Quadrature around the enclosing rectangle vs 2 pi i times the
    alternating sum over the enclosed integers; rel_err is their
    relative gap.  The identity is exact, so rel_err measures only the
    quadrature."""
    contour = build_contour(q, x, u, ctx)
    H = kernel_integrand(kernel, q, x, ctx)
    quad = integrate_rectangle(H, contour, ctx, tol)
    report: SumReport = alternating_sum(kernel, q, x, ctx)
    with ctx.workprec():
        discrete = 2j * mp.pi * report.value
        denom = abs(discrete)
        if denom == 0:
            raise DomainError("discrete side is zero; relative error undefined")
        rel_err = abs(quad.value - discrete) / denom
    return ResidueReport(x=float(to_mpf_exact(x)), quad=quad.value,
                         discrete=discrete, rel_err=rel_err,
                         leg_mags=quad.leg_mags, contour=contour,
                         term_count=report.term_count,
                         precision_bits=ctx.bits)
