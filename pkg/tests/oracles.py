"""Independent reference computations.

Nothing here imports the package.  Each oracle is either a frozen value
worked out by hand or a small brute-force routine written from scratch
with stdlib and sympy only.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations, product
from functools import lru_cache
from math import comb

import sympy

t = sympy.Symbol("t")


# -- frozen values ------------------------------------------------------------

# E-polynomials (u, v exponents -> coefficient)
E_ELLIPTIC = {(0, 0): 1, (1, 0): -1, (0, 1): -1, (1, 1): 1}

# vanishing cycles and convolution of the quadratic examples, alpha -> {(p, q): c}
PHI_X2 = {Fraction(-1, 2): {(0, 0): -1}}
PHI_X2_PLUS_Y2 = {Fraction(0): {(1, 1): 1}}
TWISTED_SQUARE = {Fraction(0): {(1, 1): 1}}
PSI_FERMAT_ETILDE = {Fraction(0): {(1, 1): 1, (0, 0): 1}, Fraction(-1, 2): {(0, 0): 2}}

# an elliptic curve over F_5 with Weil numerator 1 + t + 5 t^2 has 7 rational points
ELLIPTIC_Q, ELLIPTIC_A = 5, 1
ELLIPTIC_N1 = 7

# number of points of F_2(t) of height d (d = 0..8), written out by hand from
# the coprime-pair description: q points of height 0, (q^2 - 1) q^(2d-1) for d >= 1
SCHANUEL_F2 = [2, 6, 24, 96, 384, 1536, 6144, 24576, 98304]

# trivial-character local factor at a good place, q = 2: 1 + (1 - 1/q) q T / (1 - q T)
LOCAL_FACTOR_F2 = [1, 1, 2, 4, 8, 16, 32]

# coefficient-growth polynomials in m
GROWTH_P1 = [1]          # top part of [S^n P^1] L^-n is 1
GROWTH_DOUBLE = [1, 1]   # 1/(1 - L T)^2 gives n + 1

ANNULUS_M1_D1 = lambda q: Fraction(-1, q * q)  # noqa: E731


# -- series helpers -----------------------------------------------------------

def taylor(expr, n: int) -> list:
    s = sympy.series(expr, t, 0, n + 1).removeO()
    poly = sympy.Poly(s, t)
    return [sympy.Rational(poly.coeff_monomial(t ** i)) for i in range(n + 1)]


def rational_curve_zeta(weil: list[int], q: int, n: int) -> list[int]:
    P = sum(c * t ** i for i, c in enumerate(weil))
    return [int(c) for c in taylor(P / ((1 - t) * (1 - q * t)), n)]


def zeta_closed_form(kind: str, q: int):
    """Hasse-Weil zeta of the base as a sympy expression in t."""
    if kind == "affine":
        return 1 / (1 - q * t)
    if kind == "projective":
        return 1 / ((1 - t) * (1 - q * t))
    if kind == "gm":
        return (1 - t) / (1 - q * t)
    raise ValueError(kind)


def euler_product_closed_form(kind: str, factor: str, q: int, n: int) -> list[int]:
    """Classical Euler products over the closed points of a base, in closed form.

    geometric: prod (1 - t^deg)^-1 = Z(t)
    linear:    prod (1 + t^deg)    = Z(t) / Z(t^2)
    quadratic: prod (1 + q^deg t^(2 deg)) = Z(q t^2) / Z(q^2 t^4)
    inverse:   prod (1 - t^deg)    = 1 / Z(t)
    """
    Z = zeta_closed_form(kind, q)
    if factor == "geometric":
        expr = Z
    elif factor == "linear":
        expr = Z / Z.subs(t, t ** 2)
    elif factor == "quadratic":
        expr = Z.subs(t, q * t ** 2) / Z.subs(t, q ** 2 * t ** 4)
    elif factor == "inverse":
        expr = 1 / Z
    else:
        raise ValueError(factor)
    return [int(c) for c in taylor(sympy.simplify(expr), n)]


def multiset_series(census: list[int], n: int) -> list[int]:
    """prod_d (1 - t^d)^(-a_d) expanded with sympy."""
    expr = sympy.Integer(1)
    for d in range(1, n + 1):
        a = census[d]
        if a:
            expr *= (1 - t ** d) ** (-a)
    return [int(c) for c in taylor(expr, n)]


def mobius(n: int) -> int:
    return int(sympy.mobius(n))


def census_from_counts(counts: list[int]) -> list[int]:
    """Closed points of each degree from N_1..N_k (index 0 unused)."""
    out = [0]
    for d in range(1, len(counts) + 1):
        s = sum(mobius(d // e) * counts[e - 1] for e in sympy.divisors(d))
        assert s % d == 0
        out.append(s // d)
    return out


# -- a tiny finite-field implementation --------------------------------------

class SmallField:
    """GF(p^k) as F_p[x]/(f), elements are tuples of k residues."""

    def __init__(self, p: int, k: int):
        self.p, self.k, self.Q = p, k, p ** k
        self.f = self._find_irreducible() if k > 1 else (0, 1)

    def _find_irreducible(self):
        x = sympy.Symbol("x")
        for tail in product(range(self.p), repeat=self.k):
            coeffs = list(tail) + [1]
            poly = sympy.Poly(list(reversed(coeffs)), x, modulus=self.p)
            if poly.is_irreducible:
                return tuple(coeffs)
        raise RuntimeError("no irreducible polynomial")

    def elements(self):
        return product(range(self.p), repeat=self.k)

    def const(self, c: int):
        return (c % self.p,) + (0,) * (self.k - 1)

    def add(self, a, b):
        return tuple((x + y) % self.p for x, y in zip(a, b))

    def mul(self, a, b):
        k, p = self.k, self.p
        prod_ = [0] * (2 * k - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod_[i + j] += x * y
        for deg in range(2 * k - 2, k - 1, -1):
            c = prod_[deg] % p
            if c:
                for i in range(k):
                    prod_[deg - k + i] -= c * self.f[i]
            prod_[deg] = 0
        return tuple(c % p for c in prod_[:k])

    def pow(self, a, e: int):
        r = self.const(1)
        while e:
            if e & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            e >>= 1
        return r

    def is_zero(self, a) -> bool:
        return not any(a)

    def is_square(self, a) -> bool:
        return self.is_zero(a) or self.pow(a, (self.Q - 1) // 2) == self.const(1)


def weierstrass_count(A: int, B: int, p: int, k: int) -> int:
    """#E(F_{p^k}) for y^2 = x^3 + A x + B, odd p, by enumeration."""
    F = SmallField(p, k)
    cA, cB = F.const(A), F.const(B)
    n = 1
    for x in F.elements():
        v = F.add(F.add(F.mul(F.mul(x, x), x), F.mul(cA, x)), cB)
        if F.is_zero(v):
            n += 1
        elif F.is_square(v):
            n += 2
    return n


def find_weierstrass(p: int, target: int) -> tuple[int, int]:
    for A in range(p):
        for B in range(p):
            if (4 * A ** 3 + 27 * B ** 2) % p == 0:
                continue
            if weierstrass_count(A, B, p, 1) == target:
                return A, B
    raise RuntimeError("no curve")


@lru_cache(maxsize=None)
def sympow_counts_elliptic(p: int, a: int, n: int) -> list[int]:
    """#S^k E(F_p) for k <= n from brute-force point counts over F_{p^m}."""
    A, B = find_weierstrass(p, p + 1 + a)
    counts = [weierstrass_count(A, B, p, m) for m in range(1, n + 1)]
    return multiset_series(census_from_counts(counts), n)


# -- combinatorics -------------------------------------------------------------

def howe_sum(nus) -> int:
    """sum over tuples (mu_1..mu_n) of ordered partitions with zeroes of common length L,
    contracting to nu_i and with no all-zero column, of (-1)^L."""
    lens = [len(nu) for nu in nus]
    total = 0
    for L in range(max(lens), sum(lens) + 1):
        cnt = 0
        for pick in product(*(combinations(range(L), k) for k in lens)):
            covered = set().union(*map(set, pick))
            if len(covered) == L:
                cnt += 1
        total += (-1) ** L * cnt
    return total


def coprime_pairs_height(p: int, d: int) -> int:
    """#{x in F_p(t) of height d}: pairs (a, b) coprime, b monic, max(deg a, deg b) = d."""
    x = sympy.Symbol("x")

    def polys(maxdeg, monic_deg=None):
        if monic_deg is not None:
            for tail in product(range(p), repeat=monic_deg):
                yield list(tail) + [1]
            return
        for coeffs in product(range(p), repeat=maxdeg + 1):
            yield list(coeffs)

    def deg(c):
        for i in range(len(c) - 1, -1, -1):
            if c[i] % p:
                return i
        return -1

    n = 0
    for db in range(d + 1):
        for b in polys(None, db):
            B = sympy.Poly(list(reversed(b)), x, modulus=p)
            for a in polys(d):
                da = deg(a)
                if max(da, db) != d:
                    continue
                if da < 0:
                    # a = 0 is coprime to b only for b = 1
                    n += db == 0
                    continue
                Apoly = sympy.Poly(list(reversed(a[:da + 1])), x, modulus=p)
                if sympy.gcd(Apoly, B).degree() == 0:
                    n += 1
    return n


def binom_poly_value(coeffs, m):
    return sum(c * m ** k for k, c in enumerate(coeffs))


def sympow_epoly_p1(n: int) -> dict:
    """[S^n P^1] = 1 + L + ... + L^n."""
    return {(i, i): 1 for i in range(n + 1)}


def double_pole_coeff(n: int) -> int:
    return comb(n + 1, 1)
