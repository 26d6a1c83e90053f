"""Exact Bernoulli numbers and what they say about power sums."""

from erdosmoser import bernoulli, faulhaber, moser_polynomial
from erdosmoser.bernoulli import (
    agoh_check,
    agoh_phi_check,
    bernoulli_diff,
    prime_supercongruence_check,
    pseudo_check,
    staudt_denominator,
)

print("B_k for k <= 14:", [str(bernoulli(k)) for k in range(15)])
print("denominator of B_60:", bernoulli(60).denominator, "=", staudt_denominator(60))

P4 = faulhaber(4)
print("\nP_4 coefficients:", [str(c) for c in P4.coeffs], " P_4(10) =", P4(10))

print("\nB_24 - B_2 as (denominator, numerator, congruence holds):", bernoulli_diff(1, 12))

# Agoh's criterion with exponent n-1 singles out primes, except at Giuga numbers
for n in (29, 30, 31):
    print(f"n = {n}: exponent n-1 {agoh_check(n, strict=False)}, exponent phi(n) {agoh_phi_check(n)}")

r = pseudo_check(30)
print("\nS_phi(30)(30) mod 30 =", r.d, " matches 30 B_8 mod 30:", r.congruence_ii)
print("supercongruence mod p^3 for p = 5..43:", all(prime_supercongruence_check(p) for p in (5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43)))

mp = moser_polynomial(6)
print(f"\nQ_6 = L_6 P_6 with L_6 = {mp.L}:", [int(c) for c in mp.Q.coeffs])
