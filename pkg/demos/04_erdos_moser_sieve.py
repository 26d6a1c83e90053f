"""Necessary conditions on a solution of 1^n + ... + m^n = (m+1)^n.

Nobody knows an n for which the equation has a solution with m > 2, so the
n-dependent checks run against a profile: n is only known to be a multiple
of 2^8 3^5.
"""

from erdosmoser import em_residue_constraints, rabbit_certificate, sieve_range
from erdosmoser.em_sieve import DEFAULT_PROFILE, Status, direct_equation_check, em_prime_constraints

print("1 + 2 = 3:", direct_equation_check(2, 1))
print("any small solution:", any(direct_equation_check(m, n) for m in range(2, 200) for n in range(2, 12)))

print("\ncertificates for m = 10, n = 6:")
for c in em_residue_constraints(10, n=6) + [em_prime_constraints(10, 6, 11)] + rabbit_certificate(10, 6):
    print("  ", c)

# under the profile, 3 | m-1 forces 3^7 | m-1
for m in (28, 3**7 + 1):
    iv = [c for c in rabbit_certificate(m, DEFAULT_PROFILE) if c.constraint_id == "rabbit-iv[p=3]"][0]
    print(f"m = {m}: {iv.status.value} ({iv.witness})")

# the m-only conditions leave a thin set of candidates
s = sieve_range(1, 10**5, jobs=2)
print(f"\nm <= 10^5, m-only conditions: {s.survivor_count} survive, first few {s.survivors[:8]}")
assert all(c.status is not Status.FAIL for c in em_residue_constraints(s.survivors[0]))

# the prime conditions are much stronger: every odd p | m needs p^2 | m+p,
# every p | 2m+1 needs m == -p - 1/2 (mod p^2), whatever n is
s = sieve_range(1, 10**5, DEFAULT_PROFILE, jobs=2)
print(f"with n a multiple of {DEFAULT_PROFILE.divisor}: {s.survivor_count} survive")
for cid, count in sorted(s.histogram.items(), key=lambda kv: -kv[1]):
    print(f"  {cid:28s} {count}")
