"""Adams operations, symmetric powers and Kapranov zeta functions on both avatars."""
from __future__ import annotations

from fractions import Fraction
from typing import Mapping

from .epoly import EPoly
from .series import MotSeries
from .varieties import CountAvatar, hd_measure


def adams(f: EPoly, k: int) -> EPoly:
    if k == 0:
        raise ValueError("Adams operation psi_0 is not defined")
    return f.adams(k)


def sympow_all(a: EPoly, n: int) -> list[EPoly]:
    """[sigma^0(a), ..., sigma^n(a)] via n sigma^n = sum_k psi_k(a) sigma^(n-k)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    sig = [EPoly.const(1)]
    psis = [None] + [a.adams(k) for k in range(1, n + 1)]
    for m in range(1, n + 1):
        acc = EPoly()
        for k in range(1, m + 1):
            acc = acc + psis[k] * sig[m - k]
        sig.append(acc / m)
    for s in sig:
        if not s.is_integral():
            raise ArithmeticError("symmetric power with non-integral coefficients")
    return sig


def sympow(a: EPoly, n: int) -> EPoly:
    return sympow_all(a, n)[n]


def kapranov_zeta(X, prec: int, q: int | None = None, var: str = "t") -> MotSeries:
    """sum_{n <= prec} [S^n X] t^n in the E-avatar (EPoly / descriptor) or counting avatar."""
    if prec < 0:
        raise ValueError("prec must be non-negative")
    if isinstance(X, CountAvatar) or (isinstance(X, Mapping) and q is not None):
        av = X if isinstance(X, CountAvatar) else CountAvatar(X, q)
        return counting_zeta(av.counts(prec) if prec else [], prec, var)
    a = hd_measure(X) if isinstance(X, Mapping) else X
    return MotSeries.univariate(sympow_all(a, prec), prec, var, one=EPoly.const(1))


def counting_zeta(counts: list[int], prec: int, var: str = "t") -> MotSeries:
    """exp(sum_m N_m t^m / m), checked integral."""
    g = MotSeries.univariate([0] + [Fraction(N, m) for m, N in enumerate(counts[:prec], start=1)],
                             prec, var, one=1)
    z = g.exp()
    for e, c in z.coeffs.items():
        if Fraction(c).denominator != 1:
            raise ArithmeticError(f"non-integral zeta coefficient at {e}")
    return z.map_coefficients(lambda c: int(c))


def weil_rational_zeta(weil: list[int], q: int, prec: int, var: str = "t") -> MotSeries:
    """P(t) / ((1 - t)(1 - q t)) for a curve with Weil numerator P."""
    num = MotSeries.univariate(list(weil), prec, var)
    den = MotSeries.univariate([1, -(q + 1), q], prec, var)
    return (num * den.inverse()).map_coefficients(lambda c: int(c))


def sympow_count_by_census(census: list[int], n: int) -> int:
    """Number of effective zero-cycles of degree n given closed-point counts a_d.

    Computed by a knapsack over degrees, independent of the exponential
    identity: multisets of size j from a_d points number C(a_d + j - 1, j).
    """
    from math import comb

    ways = [1] + [0] * n
    for d in range(1, n + 1):
        a = census[d] if d < len(census) else 0
        if not a:
            continue
        new = [0] * (n + 1)
        for tot in range(n + 1):
            if not ways[tot]:
                continue
            j = 0
            while tot + j * d <= n:
                new[tot + j * d] += ways[tot] * comb(a + j - 1, j)
                j += 1
        ways = new
    return ways[n]
