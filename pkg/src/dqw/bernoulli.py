"""Bernoulli numbers and polynomials, in the standard and sign-modified conventions.

Standard numbers follow the convention B_1 = -1/2, defined through the
binomial recurrence sum_{k=0}^{n} C(n+1, k) B_k = 0 for n >= 1 with B_0 = 1.
The modified sequence flips the sign of the odd entries: Bhat_k = (-1)^k B_k,
so Bhat_1 = +1/2 and everything else agrees (odd k > 1 vanish).

Polynomials: B_m(x) = sum_k C(m, k) B_{m-k} x^k, and the same shape with
Bhat coefficients for the modified variant.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb

from .poly import Polynomial

__all__ = ["bernoulli_number", "bernoulli_polynomial"]

_VARIANTS = ("standard", "modified")


@lru_cache(maxsize=None)
def _standard_upto(n: int) -> tuple[Fraction, ...]:
    values: list[Fraction] = [Fraction(1)]
    for m in range(1, n + 1):
        # sum_{k=0}^{m} C(m+1, k) B_k = 0  =>  solve for B_m
        acc = Fraction(0)
        for k in range(m):
            acc += comb(m + 1, k) * values[k]
        values.append(-acc / (m + 1))
    return tuple(values)


def bernoulli_number(k: int, variant: str = "standard") -> Fraction:
    if k < 0:
        raise ValueError("index must be >= 0")
    if variant not in _VARIANTS:
        raise ValueError(f"variant must be one of {_VARIANTS}")
    value = _standard_upto(k)[k]
    if variant == "modified" and k % 2 == 1:
        value = -value
    return value


def bernoulli_polynomial(m: int, variant: str = "standard") -> Polynomial:
    """Degree-m Bernoulli polynomial in one variable (x1)."""
    if m < 0:
        raise ValueError("degree must be >= 0")
    terms = {}
    for k in range(m + 1):
        coeff = comb(m, k) * bernoulli_number(m - k, variant)
        if coeff:
            terms[(k,)] = coeff
    return Polynomial(1, terms)
