"""Exact-integer Prouhet-Tarry-Escott machinery.

construct_pair builds the approximate-solution family

    xs[i] = N^{2m+1} - (2i-2)^2,   ys[i] = N^{2m+1} - (2i-1)^2

with N = floor((2n)^{2m/(2m+1)}), whose power-sum differences
sum xs^r - sum ys^r stay far below max(xs)^r for small r.  Everything
here is exact big-integer or rational arithmetic; the only floats are
the reported ratios against the N^{r(2m+1/2)} reference bound.

f_r_exact and detect_degree cover the companion polynomial fact: the
alternating sum f_r(M) = sum_{|l|<2M} (-1)^l (4M^2 - l^2)^r collapses
to a polynomial in M of degree r-1 for even r (r for odd r), found by
exact forward differences and certified by integer interpolation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp, mpf

from .errors import DegreeMismatchError, DomainError
from .numerics import PrecisionContext, nstr_for_bits, to_fraction_exact, to_mpf_exact
from .oscsum import square_form


def integer_root(k: int, value: int) -> int:
    """Largest r >= 0 with r^k <= value (exact)."""
    if value < 0 or k < 1:
        raise DomainError("integer_root needs value >= 0 and k >= 1")
    if value == 0:
        return 0
    r = int(round(value ** (1.0 / k)))
    while r > 0 and r ** k > value:
        r -= 1
    while (r + 1) ** k <= value:
        r += 1
    return r


@dataclass(frozen=True)
class PTEPair:
    """Two disjoint strictly-decreasing integer sequences with equal
    length and construction parameters (n, m, N)."""

    n: int
    m: int
    N: int
    xs: tuple[int, ...]
    ys: tuple[int, ...]
    adjusted: bool


def construct_pair(n: int, m: int, adjust: bool = True) -> PTEPair:
    """Build the pair; N is bumped by one (flagged) when the bare floor
    violates positivity, which a single increment always repairs since
    (N+1)^{2m+1} > (2n)^{2m} >= (2n-1)^2."""
    if n < 2 or m < 1:
        raise DomainError("construct_pair needs n >= 2 and m >= 1")
    N = integer_root(2 * m + 1, (2 * n) ** (2 * m))
    power = N ** (2 * m + 1)
    adjusted = False
    if power <= (2 * n - 1) ** 2:
        if not adjust:
            raise DomainError(
                "invalid parameters: N^(2m+1)=%d <= (2n-1)^2=%d and adjustment is off"
                % (power, (2 * n - 1) ** 2))
        N += 1
        power = N ** (2 * m + 1)
        adjusted = True
    if power <= (2 * n - 1) ** 2:
        raise DomainError("positivity unreachable for n=%d, m=%d" % (n, m))
    xs = tuple(power - (2 * i - 2) ** 2 for i in range(1, n + 1))
    ys = tuple(power - (2 * i - 1) ** 2 for i in range(1, n + 1))
    return PTEPair(n=n, m=m, N=N, xs=xs, ys=ys, adjusted=adjusted)


def power_sum_diff(pair: PTEPair, r: int) -> int:
    """Exact sum(xs^r) - sum(ys^r); r = 0 is the degenerate 0."""
    if r < 0:
        raise DomainError("power_sum_diff needs r >= 0")
    return sum(x ** r for x in pair.xs) - sum(y ** r for y in pair.ys)


def k_regime(n: int, m: int) -> int:
    """floor(n^(1 - 1/(2m+1)) / log n), the r-range the construction targets."""
    if n < 3:
        raise DomainError("k_regime needs n >= 3")
    return int(n ** (1.0 - 1.0 / (2 * m + 1)) / math.log(n))


@dataclass(frozen=True)
class PTERow:
    r: int
    diff: int
    bound: mpf
    ratio: mpf
    within_regime: bool

    def to_json_dict(self) -> dict:
        return {
            "r": self.r,
            "diff": str(self.diff),
            "bound": nstr_for_bits(self.bound, 128),
            "ratio": float(self.ratio),
            "within_regime": self.within_regime,
        }


def verify_pte_bound(pair: PTEPair, r_max: int) -> list[PTERow]:
    """For each 1 <= r <= r_max: the exact difference, the reference
    bound N^{r(2m+1/2)}, and their ratio.  Rows beyond the k regime are
    flagged; the max ratio over in-regime rows is the empirical constant."""
    if r_max < 1:
        raise DomainError("verify_pte_bound needs r_max >= 1")
    k = k_regime(pair.n, pair.m)
    rows = []
    bits = max(128, int(r_max * (2 * pair.m + 1) * math.log2(max(pair.N, 2))) + 64)
    with mp.workprec(bits):
        for r in range(1, r_max + 1):
            diff = power_sum_diff(pair, r)
            bound = mpf(pair.N) ** (mpf(r) * (2 * pair.m + mpf(1) / 2))
            ratio = abs(mpf(diff)) / bound
            rows.append(PTERow(r=r, diff=diff, bound=bound, ratio=ratio,
                               within_regime=r <= k))
    return rows


def empirical_constant(rows: list[PTERow]) -> mpf:
    """Max ratio over the rows inside the k regime."""
    inside = [row.ratio for row in rows if row.within_regime]
    if not inside:
        raise DomainError("no rows inside the k regime")
    return max(inside)


def f_r_exact(M: int, r: int) -> int:
    """sum_{|l| < 2M} (-1)^l (4M^2 - l^2)^r, exact."""
    if M < 1:
        raise DomainError("f_r_exact needs M >= 1")
    if r < 0:
        raise DomainError("f_r_exact needs r >= 0")
    sq = 4 * M * M
    total = sq ** r
    for l in range(1, 2 * M):
        term = (sq - l * l) ** r
        total += 2 * term if l % 2 == 0 else -2 * term
    return total


@dataclass(frozen=True)
class IntegerPolynomial:
    """coeffs[j] is the coefficient of M^j; all integers."""

    coeffs: tuple[int, ...]

    @property
    def degree(self) -> int:
        for j in range(len(self.coeffs) - 1, -1, -1):
            if self.coeffs[j]:
                return j
        return -1

    def evaluate(self, M: int) -> int:
        total = 0
        for c in reversed(self.coeffs):
            total = total * M + c
        return total

    def __str__(self) -> str:
        if self.degree < 0:
            return "0"
        parts = []
        for j in range(self.degree, -1, -1):
            c = self.coeffs[j]
            if not c:
                continue
            term = "%d" % c if j == 0 else ("M" if j == 1 else "M^%d" % j)
            if j > 0 and abs(c) != 1:
                term = "%d%s" % (c, term)
            elif j > 0 and c == -1:
                term = "-%s" % term
            parts.append(term)
        out = " + ".join(parts).replace("+ -", "- ")
        return out


def detect_degree(r: int, M_lo: int = 1, count: int | None = None) -> tuple[int, IntegerPolynomial]:
    """Exact degree of M -> f_r(M) from forward differences of consecutive
    samples, plus the integer Newton interpolant.

    Needs count >= r + 3 samples so the stabilization row (an all-zero
    difference row) is visible; raises DegreeMismatchError if the
    differences never stabilize or the detected degree violates the
    parity law (r-1 for even r, r for odd r).
    """
    if M_lo < 1:
        raise DomainError("detect_degree needs M_lo >= 1")
    if count is None:
        count = r + 4
    if count < r + 3:
        raise DomainError("detect_degree needs count >= r + 3")
    samples = [f_r_exact(M_lo + i, r) for i in range(count)]
    diff_rows = [samples]
    while diff_rows[-1] and any(diff_rows[-1]):
        row = diff_rows[-1]
        if len(row) == 1:
            raise DegreeMismatchError(
                "differences of f_%d did not stabilize within %d samples" % (r, count))
        diff_rows.append([row[i + 1] - row[i] for i in range(len(row) - 1)])
    degree = len(diff_rows) - 2  # last row is all zeros

    # Newton forward interpolant in t = M - M_lo, then shift to M.
    t_coeffs = [Fraction(0)] * (degree + 1)
    basis = [Fraction(1)]  # coefficients of prod_{i<j} (t - i) / j!
    for j in range(degree + 1):
        lead = Fraction(diff_rows[j][0], math.factorial(j))
        for idx, c in enumerate(basis):
            t_coeffs[idx] += lead * c
        next_basis = [Fraction(0)] * (len(basis) + 1)
        for idx, c in enumerate(basis):
            next_basis[idx + 1] += c
            next_basis[idx] -= c * j
        basis = next_basis
    # substitute t = M - M_lo
    m_coeffs = [Fraction(0)] * (degree + 1)
    shift = -M_lo
    for j, c in enumerate(t_coeffs):
        if c == 0:
            continue
        for i in range(j + 1):
            m_coeffs[i] += c * math.comb(j, i) * Fraction(shift) ** (j - i)
    ints = []
    for c in m_coeffs:
        if c.denominator != 1:
            raise DegreeMismatchError("interpolant of f_%d has non-integer coefficient %s" % (r, c))
        ints.append(int(c))
    poly = IntegerPolynomial(tuple(ints))
    for i, s in enumerate(samples):
        if poly.evaluate(M_lo + i) != s:
            raise DegreeMismatchError("interpolant of f_%d fails to reproduce its samples" % (r,))
    expected = r - 1 if r % 2 == 0 else r
    if degree != expected:
        raise DegreeMismatchError(
            "f_%d degree %d violates the parity law (expected %d)" % (r, degree, expected))
    return degree, poly


def coefficient_bound_check(r: int, poly: IntegerPolynomial, constant: int = 100) -> bool:
    """max |coefficient| <= (2r)! * constant."""
    if not poly.coeffs:
        return True
    return max(abs(c) for c in poly.coeffs) <= math.factorial(2 * r) * constant


def pigeonhole_c(n: int, k: int) -> Fraction:
    """max(0, 1 - 2n/(k(k+1))), the pigeonhole baseline exponent."""
    if n < 1 or k < 1:
        raise DomainError("pigeonhole_c needs n, k >= 1")
    value = 1 - Fraction(2 * n, k * (k + 1))
    return value if value > 0 else Fraction(0)


def lemma_sum(x, T, k: int, ctx: PrecisionContext | None = None):
    """sum_{l^2 < xT} (-1)^l (x - l^2/T)^{k/2}: exact Fraction for even k
    and rational x, T; high-precision mpf for odd k (ctx required)."""
    if k < 0:
        raise DomainError("lemma_sum needs k >= 0")
    xf = to_fraction_exact(x)
    Tf = to_fraction_exact(T)
    if xf * Tf < 1:
        raise DomainError("lemma_sum needs x*T >= 1")
    _, L = square_form(Tf).index_range(xf)
    if k % 2 == 0:
        half = k // 2
        total = Fraction(0)
        for l in range(-L, L + 1):
            term = (xf - Fraction(l * l) / Tf) ** half
            total += term if l % 2 == 0 else -term
        return total
    if ctx is None:
        raise DomainError("odd k needs a PrecisionContext")
    with ctx.workprec():
        total = mpf(0)
        for l in range(-L, L + 1):
            term = to_mpf_exact(xf - Fraction(l * l) / Tf) ** (mpf(k) / 2)
            total = total + term if l % 2 == 0 else total - term
        return total


def lemma_bound(x, T, k: int, u, ctx: PrecisionContext) -> mpf:
    """Reference ceiling sqrt(xT) (e^{k log(x)/2 - pi u sqrt(x)}
    + ((u^4 + 4 u^2 T) x^2)^{1/4} / sqrt(T)) with free height u."""
    with ctx.workprec():
        xv = to_mpf_exact(to_fraction_exact(x))
        Tv = to_mpf_exact(to_fraction_exact(T))
        uv = to_mpf_exact(u)
        first = mp.exp(k * mp.log(xv) / 2 - mp.pi * uv * mp.sqrt(xv))
        second = ((uv ** 4 + 4 * uv ** 2 * Tv) * xv ** 2) ** mpf("0.25") / mp.sqrt(Tv)
        return mp.sqrt(xv * Tv) * (first + second)
