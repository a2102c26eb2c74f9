"""
Exact pentagonal checksum
=========================

Euler's recurrence says the alternating sum of p(x - g) over all
generalized pentagonal numbers g <= x vanishes exactly.  This script
grows an exact table, checks the identity on a range, and shows that a
single corrupted entry is caught.
"""

from cancelsum import ExactPartitionTable, pnt_checksum
from cancelsum.partition import pentagonal

table = ExactPartitionTable()
table.grow(500)

print("the first pentagonal numbers:",
      [pentagonal(n) for k in range(1, 6) for n in (k, -k)])
print("p(100) =", table.partition(100))
print("p(500) =", table.partition(500))

failures = [x for x in range(1, 501) if pnt_checksum(x, table) != 0]
print("checksum failures on 1..500:", failures or "none")

# corrupt one entry and watch the checksum light up
values = [table.partition(i) for i in range(501)]
values[250] += 1
broken = ExactPartitionTable(values)
bad = [x for x in range(1, 501) if pnt_checksum(x, broken) != 0]
print("after corrupting p(250): first failing x =", bad[0],
      "(%d checksums fail)" % len(bad))
