"""Exact number theory around power sums, Bernoulli numbers and the Erdős–Moser equation."""

from .arith import INFINITY, V_p, factorize, is_prime, v_p
from .bernoulli import agoh_check, bernoulli, faulhaber, moser_polynomial, pseudo_check
from .egyptian import Flag, classify, d_of, generate, search
from .em_sieve import em_prime_constraints, em_residue_constraints, rabbit_certificate, sieve_range
from .power_sums import power_sum, power_sum_mod, valuation_report

__version__ = "0.1.0"
