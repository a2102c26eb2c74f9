"""
Chebyshev psi over alternating threshold intervals
==================================================

psi counts prime powers with log-prime weight.  Sampling it at the
thresholds e^{sqrt(x - l^2/T)} and summing with alternating signs
cancels almost everything; the matching union of intervals then covers
close to half of psi's full mass.
"""

from cancelsum import (PrecisionContext, build_sieve, interval_union_measure,
                       psi, psi_interval_half, psi_weak_pentagonal)

ctx = PrecisionContext(bits=192)
x, T = 40, 3000
sieve = build_sieve(600)  # e^sqrt(40) ~ 557.6

full = psi(sieve.limit, sieve, ctx)
print("psi(%d) = %.6f over %d prime powers" % (sieve.limit, float(full),
                                               len(sieve.entries)))

weak = psi_weak_pentagonal(x, T, sieve, ctx)
print("alternating psi sum at (x=%d, T=%d): %.6f over %d terms"
      % (x, T, float(weak.abs_value), weak.term_count))
print("  each term is up to psi(e^sqrt(40)) = %.1f; the sum is ~%.0f%% of it"
      % (float(full), 100 * float(weak.abs_value) / float(full)))

half = psi_interval_half(x, T, sieve, ctx)
print()
print("interval-union half identity:")
print("  lhs (psi mass over the union)  = %.6f" % float(half.lhs))
print("  psi_full / 2                   = %.6f" % (float(half.psi_full) / 2))
print("  relative gap                   = %.4f" % float(half.rel_err))
print("  cutoffs used: l = 1..%d, boundary term %.4f"
      % (half.ell_max, float(half.boundary)))

measure = interval_union_measure(x, T, ctx)
print("  union has Lebesgue measure %.4f * e^sqrt(x)" % float(measure))
