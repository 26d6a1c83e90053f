"""Solving 1/p1 + ... + 1/pk + d/n == 0 (mod 1), and the numbers where d is +-1.

d(n) = -sum n/p is always a solution.  Giuga numbers have d == -1 (mod n),
primary pseudoperfect numbers have d == 1 - n, and a few rules build bigger
ones from smaller ones.
"""

from erdosmoser import Flag, classify, d_of, generate, search
from erdosmoser.egyptian import Rule, Target, solve
from erdosmoser.errors import HypothesisError

for n in (30, 42, 455, 1722):
    sol = solve(n)
    print(f"n = {n:5d}  d = {sol.d_raw:6d}  sum = {sol.unit_fraction_sum()}  flags = {classify(n)}")

print("\nGiuga numbers below 10^5:", search(1, 10**5, Target.GIUGA).hits)
print("primary pseudoperfect below 10^5:", search(1, 10**5, Target.PPP).hits)

# adjoining one prime; the chain stops at 1806 because 1807 = 13 * 139
n = 6
while True:
    try:
        n = generate(n, Rule.PPP_UP)
    except HypothesisError as exc:
        print("ppp-up stops:", exc)
        break
    print("ppp-up ->", n, Flag.PRIMARY_PSEUDOPERFECT in classify(n))
print("giuga-down(47058) =", generate(47058, Rule.GIUGA_DOWN))

# adjoining two primes, with F*G = n^2 + 1
n6 = 2214502422
n8 = generate(n6, Rule.PPP_SPLIT, 2839805, 1726886521097)
print("\nppp-split(n_6) =", n8, f"({len(str(n8))} digits), d(n8) = 1 - n8:", d_of(n8) == 1 - n8)
