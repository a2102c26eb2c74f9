"""Von Mangoldt sieve, Chebyshev psi, and the alternating psi sums over
scaled-square indices.

The sieve stores prime powers structurally as (prime_power, prime)
pairs so Lambda(n) = log(prime) can be taken lazily at any working
precision: one sieve serves every precision context.

The two headline evaluators share one comparison predicate.  With
thr[j] = x - j^2/T (a single correctly-rounded mpf per j) and
lg2[n] = (log n)^2, a prime power n lies inside the j-th cutoff iff
lg2[n] <= thr[j].  psi_weak_pentagonal aggregates per prime power
(bucket method: each n contributes Lambda(n) * (-1)^{L(n)} where L(n)
is the largest j whose cutoff still admits n) or per index l (direct
method, one prefix count per l).  Both produce an exact integer
coefficient per prime, so their results agree bit for bit, which is
what the oracle-equivalence gate checks.
"""

from __future__ import annotations

import struct
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from mpmath import mp, mpc, mpf

from .errors import DomainError, ResourceError
from .numerics import PrecisionContext, nstr_for_bits, to_fraction_exact, to_mpf_exact
from .oscsum import SumReport

MAX_SIEVE_LIMIT = 100_000_000  # one byte per integer during construction


class LambdaSieve:
    """Immutable index of prime powers up to `limit`.

    entries: ascending list of (prime_power, prime).  Lambda(prime_power)
    = log(prime); Lambda is zero off this list.
    """

    def __init__(self, limit: int, entries: list[tuple[int, int]]):
        self.limit = limit
        self.entries = entries
        self._pp = [pp for pp, _ in entries]
        self._cache: dict[int, tuple[list, list]] = {}  # prec -> (lg2 list, prefix log sums)

    def lambda_at(self, n: int):
        """(prime, exponent) when n is a prime power <= limit, else None."""
        i = bisect_right(self._pp, n) - 1
        if i < 0 or self._pp[i] != n:
            return None
        p = self.entries[i][1]
        k = 0
        m = n
        while m > 1:
            m //= p
            k += 1
        return (p, k)

    def prime_count(self) -> int:
        return sum(1 for pp, p in self.entries if pp == p)

    def arrays_at(self, prec: int) -> tuple[list, list]:
        """((log n)^2 per entry, prefix sums of log p) at binary precision
        `prec`; both ascending-aligned with entries."""
        cached = self._cache.get(prec)
        if cached is not None:
            return cached
        with mp.workprec(prec):
            lg2 = []
            prefix = [mpf(0)]
            running = mpf(0)
            for pp, p in self.entries:
                ln = mp.log(pp)
                lg2.append(ln * ln)
                running += mp.log(p)
                prefix.append(running)
        self._cache[prec] = (lg2, prefix)
        return lg2, prefix


def build_sieve(limit: int) -> LambdaSieve:
    """Sieve of Eratosthenes plus the prime-power index, O(limit) bytes."""
    if limit < 2:
        raise DomainError("build_sieve needs limit >= 2")
    if limit > MAX_SIEVE_LIMIT:
        raise ResourceError("sieve limit %d exceeds budget %d" % (limit, MAX_SIEVE_LIMIT))
    flags = bytearray([1]) * (limit + 1)
    flags[0] = flags[1] = 0
    for p in range(2, isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = bytearray(len(range(p * p, limit + 1, p)))
    entries = []
    for p in range(2, limit + 1):
        if flags[p]:
            pp = p
            while pp <= limit:
                entries.append((pp, p))
                pp *= p
    entries.sort()
    return LambdaSieve(limit, entries)


def psi(y, sieve: LambdaSieve, ctx: PrecisionContext) -> mpf:
    """Chebyshev psi(y) = sum of Lambda(n) over n <= y."""
    if y > sieve.limit:
        raise DomainError("psi argument %s exceeds sieve limit %d" % (y, sieve.limit))
    yf = to_fraction_exact(y)
    if yf < 2:
        return mpf(0)
    cutoff = yf.numerator // yf.denominator
    _, prefix = sieve.arrays_at(ctx.bits + ctx.guard_bits)
    count = bisect_right(sieve._pp, cutoff)
    with ctx.workprec():
        return +prefix[count]


def _ell_max(x, T) -> int:
    """Largest L with L^2 < x*T (exact rational comparison)."""
    xt = to_fraction_exact(x) * to_fraction_exact(T)
    if xt < 1:
        raise DomainError("need x*T >= 1 so the index range is nonempty")
    L = isqrt(int(xt))
    while Fraction(L * L) >= xt:
        L -= 1
    while Fraction((L + 1) * (L + 1)) < xt:
        L += 1
    return L


def _thresholds(x, T, L: int, prec: int) -> list:
    """thr[j] = x - j^2/T for j = 0..L, each as one correctly-rounded mpf."""
    xf = to_fraction_exact(x)
    Tf = to_fraction_exact(T)
    with mp.workprec(prec):
        return [to_mpf_exact(xf - Fraction(j * j) / Tf) for j in range(L + 1)]


def _check_range(x, sieve: LambdaSieve) -> None:
    with mp.workprec(64):
        reach = mp.exp(mp.sqrt(to_mpf_exact(to_fraction_exact(x))))
    if reach > sieve.limit:
        raise DomainError(
            "psi sums at x=%s reach e^sqrt(x)=%s beyond the sieve limit %d"
            % (x, mp.nstr(reach, 8), sieve.limit))


def lambda_coefficients(x, T, sieve: LambdaSieve, ctx: PrecisionContext,
                        method: str = "bucket") -> dict[int, int]:
    """Exact integer coefficient per prime p in
    sum_{l^2 < xT} (-1)^l Psi(e^{sqrt(x - l^2/T)}) = sum_p coeff[p] log p.

    method="bucket" walks prime powers once; method="direct" walks the
    index l and counts a prefix per l.  Identical predicate, independent
    aggregation.
    """
    _check_range(x, sieve)
    prec = ctx.bits + ctx.guard_bits
    L = _ell_max(x, T)
    thr = _thresholds(x, T, L, prec)
    lg2, _ = sieve.arrays_at(prec)
    n_inside = bisect_right(lg2, thr[0])
    coeff: dict[int, int] = {}
    if method == "bucket":
        for i in range(n_inside):
            v = lg2[i]
            # largest j in [0, L] with thr[j] >= v (thr is decreasing)
            lo, hi = 0, L
            while lo < hi:
                mid = (lo + hi + 1) // 2
                if thr[mid] >= v:
                    lo = mid
                else:
                    hi = mid - 1
            p = sieve.entries[i][1]
            coeff[p] = coeff.get(p, 0) + (1 if lo % 2 == 0 else -1)
    elif method == "direct":
        # per-l prefix counts, spread onto prime powers by a difference array
        span = [0] * (n_inside + 1)
        for j in range(L + 1):
            cnt = bisect_right(lg2, thr[j], 0, n_inside)
            s = (1 if j % 2 == 0 else -1) * (1 if j == 0 else 2)
            if cnt > 0:
                span[0] += s
                span[cnt] -= s
        running = 0
        for i in range(n_inside):
            running += span[i]
            if running:
                p = sieve.entries[i][1]
                coeff[p] = coeff.get(p, 0) + running
    else:
        raise DomainError("unknown method %r" % (method,))
    return {p: c for p, c in coeff.items() if c != 0}


def coefficients_value(coeff: dict[int, int], ctx: PrecisionContext) -> mpf:
    """sum coeff[p] log p, accumulated in ascending prime order."""
    with ctx.workprec():
        total = mpf(0)
        for p in sorted(coeff):
            total += coeff[p] * mp.log(p)
        return total


def psi_weak_pentagonal(x, T, sieve: LambdaSieve, ctx: PrecisionContext,
                        method: str = "bucket") -> SumReport:
    """sum over integers l with l^2 < xT of (-1)^l Psi(e^{sqrt(x - l^2/T)})."""
    coeff = lambda_coefficients(x, T, sieve, ctx, method=method)
    value = coefficients_value(coeff, ctx)
    L = _ell_max(x, T)
    with ctx.workprec():
        # conversion rounds at working precision; at ambient precision it
        # would silently truncate the high-precision total
        value_c = mpc(value)
        abs_value = abs(value)
    return SumReport(x=x, value=value_c, abs_value=abs_value,
                     term_count=2 * L + 1, precision_bits=ctx.bits)


@dataclass
class IntervalHalfReport:
    """Interval-union psi sum versus half of psi(e^sqrt(x))."""

    lhs: mpf
    rhs: mpf
    rel_err: mpf
    boundary: mpf      # psi at the last odd cutoff when L is odd, else 0
    ell_max: int
    psi_full: mpf      # psi(e^sqrt(x))
    precision_bits: int

    def to_json_dict(self) -> dict:
        bits = self.precision_bits
        return {
            "lhs": nstr_for_bits(self.lhs, bits),
            "rhs": nstr_for_bits(self.rhs, bits),
            "rel_err": nstr_for_bits(self.rel_err, bits),
            "boundary": nstr_for_bits(self.boundary, bits),
            "ell_max": self.ell_max,
            "psi_full": nstr_for_bits(self.psi_full, bits),
            "bits": bits,
        }


def threshold_psi(x, T, j: int, sieve: LambdaSieve, ctx: PrecisionContext) -> mpf:
    """psi(e^{sqrt(x - j^2/T)}) through the shared cutoff predicate."""
    _check_range(x, sieve)
    prec = ctx.bits + ctx.guard_bits
    L = _ell_max(x, T)
    if not 0 <= j <= L:
        raise DomainError("threshold index %d outside 0..%d" % (j, L))
    thr = _thresholds(x, T, L, prec)
    lg2, prefix = sieve.arrays_at(prec)
    with ctx.workprec():
        return +prefix[bisect_right(lg2, thr[j])]


def psi_interval_half(x, T, sieve: LambdaSieve, ctx: PrecisionContext) -> IntervalHalfReport:
    """lhs = sum_{l=1}^{floor(L/2)} [psi at cutoff 2l-1 minus psi at cutoff 2l],
    i.e. psi over the union of intervals (e^{sqrt(x-(2l)^2/T)}, e^{sqrt(x-(2l-1)^2/T)}];
    rhs = psi(e^{sqrt(x)})/2.

    The l = 0 interval of the displayed identity is degenerate (reversed
    endpoints) and contributes nothing; the first nondegenerate interval
    is the 2l = 2 one.  The algebraic bridge to the alternating sum S is
      lhs - rhs = -S/2 - boundary,
    with boundary = psi at cutoff L when L is odd, else 0.
    """
    _check_range(x, sieve)
    prec = ctx.bits + ctx.guard_bits
    L = _ell_max(x, T)
    thr = _thresholds(x, T, L, prec)
    lg2, prefix = sieve.arrays_at(prec)

    def cutoff_psi(j: int) -> mpf:
        return prefix[bisect_right(lg2, thr[j])]

    with ctx.workprec():
        lhs = mpf(0)
        for l in range(1, L // 2 + 1):
            lhs += cutoff_psi(2 * l - 1) - cutoff_psi(2 * l)
        full = cutoff_psi(0)
        rhs = full / 2
        boundary = cutoff_psi(L) if L % 2 == 1 else mpf(0)
        rel_err = abs(lhs - rhs) / full if full > 0 else mpf(0)
    return IntervalHalfReport(lhs=lhs, rhs=rhs, rel_err=rel_err, boundary=boundary,
                              ell_max=L, psi_full=full, precision_bits=ctx.bits)


def interval_union_measure(x, T, ctx: PrecisionContext) -> mpf:
    """Lebesgue measure of the interval union, normalized by e^{sqrt(x)}."""
    prec = ctx.bits + ctx.guard_bits
    L = _ell_max(x, T)
    thr = _thresholds(x, T, L, prec)
    with ctx.workprec():
        total = mpf(0)
        for l in range(1, L // 2 + 1):
            total += mp.exp(mp.sqrt(thr[2 * l - 1])) - mp.exp(mp.sqrt(thr[2 * l]))
        return total / mp.exp(mp.sqrt(thr[0]))


LSIV_MAGIC = b"LSIV"
LSIV_VERSION = 1


def save_sieve(sieve: LambdaSieve, path: str) -> None:
    """Cache file: header {magic "LSIV", version u32, limit u64} then the
    ascending (prime_power u64, prime u64) pairs."""
    with open(path, "wb") as fh:
        fh.write(LSIV_MAGIC)
        fh.write(struct.pack("<IQ", LSIV_VERSION, sieve.limit))
        for pp, p in sieve.entries:
            fh.write(struct.pack("<QQ", pp, p))


def load_sieve(path: str) -> LambdaSieve:
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != LSIV_MAGIC:
            raise DomainError("not an LSIV file: %r" % (path,))
        version, limit = struct.unpack("<IQ", fh.read(12))
        if version != LSIV_VERSION:
            raise DomainError("unsupported LSIV version %d" % version)
        blob = fh.read()
    if len(blob) % 16:
        raise DomainError("truncated LSIV file: %r" % (path,))
    entries = [struct.unpack_from("<QQ", blob, off) for off in range(0, len(blob), 16)]
    return LambdaSieve(limit, entries)
