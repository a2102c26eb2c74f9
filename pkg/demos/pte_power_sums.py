"""
Equal power sums from squares
=============================

Two disjoint sets of integers built from interleaved squares have
power sums that agree far beyond what their size suggests: the r-th
power-sum difference stays polynomially small while the entries
themselves are huge.
"""

from cancelsum import (construct_pair, detect_degree, empirical_constant,
                       f_r_exact, k_regime, pigeonhole_c, power_sum_diff,
                       verify_pte_bound)

pair = construct_pair(100, 1)
print("n=100, m=1 -> N=%d%s" % (pair.N, " (adjusted)" if pair.adjusted else ""))
print("xs starts", pair.xs[:3], "... ys starts", pair.ys[:3], "...")
print("largest entry:", pair.xs[0], " smallest:", pair.ys[-1])

k = k_regime(100, 1)
print("\npower-sum differences for r = 1..%d (bound N^{5r/2}):" % k)
print("%4s %22s %16s %10s" % ("r", "sum(x^r) - sum(y^r)", "bound", "ratio"))
for row in verify_pte_bound(pair, k):
    print("%4d %22d %16.6g %10.4f"
          % (row.r, row.diff, float(row.bound), float(row.ratio)))
print("empirical constant C =", float(empirical_constant(verify_pte_bound(pair, k))))
print("r=1 difference equals 2n^2 - n =", power_sum_diff(pair, 1))

# the companion kernel sums f_r(M) collapse to low-degree polynomials
print("\nf_r(M) = sum_{|l|<2M} (-1)^l (4M^2 - l^2)^r as a polynomial in M:")
for r in range(1, 7):
    degree, poly = detect_degree(r)
    print("  r=%d: degree %d, %s" % (r, degree, poly))
print("degree law: r-1 for even r, r for odd r")
print("check f_3(5) =", f_r_exact(5, 3), "= 16*125 - 6*5 =", 16 * 125 - 6 * 5)

print("\npigeonhole density constant c(n, k):")
for n, k in ((100, 20), (1000, 40)):
    print("  c(%d, %d) = %s" % (n, k, pigeonhole_c(n, k)))
