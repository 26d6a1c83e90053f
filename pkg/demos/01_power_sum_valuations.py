"""How divisible is 1^n + 2^n + ... + m^n by a prime p?

For m in the classes 0, -1 and (p-1)/2 mod p the answer is governed by the
number of equal trailing base-p digits of m.  This walks through a few cases
and then sweeps a block of them.
"""

from erdosmoser import V_p, power_sum, valuation_report
from erdosmoser.arith import base_p_digits
from erdosmoser.power_sums import carlitz_von_staudt_residue, power_sum_mod, restricted_power_sum
from erdosmoser.verify import valuation_sweep

# 53 is 1222 in base 3 (least significant digit first: 2, 2, 1, 2)
print("53 in base 3, low digit first:", base_p_digits(53, 3), " V_3(53) =", V_p(53, 3))
for m, n, p in [(53, 2, 3), (9, 2, 3), (9, 1, 3), (7, 2, 5), (26, 4, 3)]:
    r = valuation_report(m, n, p)
    print(f"S_{n}({m}) = {power_sum(m, n)}: v_{p} = {r.actual_order}, "
          f"{r.prediction.name.lower()} {r.predicted_value} -> {r.status.value}")

# leaving out the multiples of p
print("\nS_2(9) without multiples of 3:", restricted_power_sum(9, 2, 3))
print("S_-1(4) without multiples of 5:", restricted_power_sum(4, -1, 5))

# a closed-form residue for every m and n
m, n = 100, 7
M, r = carlitz_von_staudt_residue(m, n)
print(f"\nS_{n}({m}) mod {M}: predicted {r}, computed {power_sum_mod(m, n, M)}")

s = valuation_sweep(300, 12, 13)
print(f"\nsweep: {s.checked} cases, {len(s.violations)} violations, "
      f"{len(s.unproven_failures)} odd-n cases where the 'at least' bound does not hold")
