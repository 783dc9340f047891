"""Finite fields GF(p^k) and polynomials over them.

Elements are encoded as integers 0..q-1 whose base-p digits are the
coefficients of a polynomial in the generator (low digit first).  For
prime q the encoding is the usual residue.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import product
from typing import Sequence

import numpy as np

TABLE_LIMIT = 1024


def factor_int(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def prime_power(q: int) -> tuple[int, int]:
    """Return (p, k) with q = p^k, or raise ValueError."""
    if not isinstance(q, (int, np.integer)) or q < 2:
        raise ValueError(f"{q!r} is not a prime power")
    f = factor_int(int(q))
    if len(f) != 1:
        raise ValueError(f"{q} is not a prime power")
    ((p, k),) = f.items()
    return p, k


def is_prime_power(q: int) -> bool:
    try:
        prime_power(q)
    except ValueError:
        return False
    return True


def mobius(n: int) -> int:
    f = factor_int(n)
    if any(e > 1 for e in f.values()):
        return 0
    return -1 if len(f) % 2 else 1


def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


# -- polynomials over F_p, coefficient lists low -> high -------------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    a = [x % p for x in a]
    _trim(a)
    inv = pow(m[-1], -1, p)
    while len(a) >= len(m):
        c = a[-1] * inv % p
        shift = len(a) - len(m)
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
        _trim(a)
    return a


def _is_irreducible_prime(m: Sequence[int], p: int) -> bool:
    # brute force: no monic factor of degree <= deg/2
    k = len(m) - 1
    for d in range(1, k // 2 + 1):
        for tail in product(range(p), repeat=d):
            if not _pmod(m, list(tail) + [1], p):
                return False
    return True


@lru_cache(maxsize=None)
def conway_like_modulus(p: int, k: int) -> tuple[int, ...]:
    """First monic irreducible of degree k over F_p (lexicographic) whose root is primitive."""
    if k == 1:
        return (0, 1)
    q = p ** k
    for tail in product(range(p), repeat=k):
        m = list(reversed(tail)) + [1]
        if m[0] == 0 or not _is_irreducible_prime(m, p):
            continue
        # order of x modulo m must be q-1
        order_ok = True
        for r in factor_int(q - 1):
            e = (q - 1) // r
            if _ppow_x(e, m, p) == [1]:
                order_ok = False
                break
        if order_ok:
            return tuple(m)
    raise RuntimeError("no primitive modulus found")


def _pmul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return [x % p for x in out]


def _ppow_x(e: int, m: Sequence[int], p: int) -> list[int]:
    result = [1]
    base = [0, 1]
    while e:
        if e & 1:
            result = _pmod(_pmul(result, base, p), m, p)
        base = _pmod(_pmul(base, base, p), m, p)
        e >>= 1
    return result


class GF:
    """The field with q elements, with log/antilog tables.

    Full addition and multiplication tables are built for q <= TABLE_LIMIT;
    larger fields fall back to Zech logarithms.
    """

    def __init__(self, q: int):
        p, k = prime_power(q)
        self.q, self.p, self.k = q, p, k
        self.modulus = conway_like_modulus(p, k)
        self.digits = np.array(
            [[(e // p ** i) % p for i in range(k)] for e in range(q)], dtype=np.int64
        ).reshape(q, k)
        self._pw = np.array([p ** i for i in range(k)], dtype=np.int64)
        # antilog: powers of the generator x (primitive by construction)
        exp = np.zeros(q - 1, dtype=np.int64)
        cur = [1]
        for i in range(q - 1):
            cur_full = cur + [0] * (k - len(cur))
            exp[i] = sum(c * p ** j for j, c in enumerate(cur_full))
            if k == 1:
                cur = [(cur[0] * self._prim_root()) % p]
            else:
                cur = _pmod(_pmul(cur, [0, 1], p), self.modulus, p) or [0]
        self.exp = exp
        log = np.full(q, -1, dtype=np.int64)
        log[exp] = np.arange(q - 1)
        self.log = log
        self.add_table = self.mul_table = None
        self.neg = self.from_digits((-self.digits) % p)
        # zech[n] = log(1 + g^n) or -1 if 1 + g^n == 0
        one_plus = self.from_digits((self.digits[exp] + self.digits[1]) % p)
        self.zech = log[one_plus]
        self.inv = np.zeros(q, dtype=np.int64)
        self.inv[exp] = exp[(-np.arange(q - 1)) % (q - 1)]
        # absolute trace to F_p: sum of Frobenius conjugates, read off digit 0
        tr = np.zeros(q, dtype=np.int64)
        x = np.arange(q, dtype=np.int64)
        cur = x.copy()
        acc = np.zeros(q, dtype=np.int64)
        for _ in range(k):
            acc = self.add(acc, cur)
            cur = self.pow(cur, p)
        tr[:] = acc  # lies in the prime field
        self.trace = tr
        if q <= TABLE_LIMIT:
            a = np.arange(q)
            self.add_table = self.add(a[:, None], a[None, :])
            self.mul_table = self.mul(a[:, None], a[None, :])

    def _prim_root(self) -> int:
        p = self.p
        for g in range(1, p):
            if all(pow(g, (p - 1) // r, p) != 1 for r in factor_int(p - 1)) or p == 2:
                return g
        raise RuntimeError

    # vectorised arithmetic on encoded arrays
    def from_digits(self, d: np.ndarray) -> np.ndarray:
        return (np.asarray(d) % self.p) @ self._pw

    def add(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.k == 1:
            return (a + b) % self.p
        if self.add_table is not None:
            return self.add_table[a, b]
        return self.from_digits(self.digits[a] + self.digits[b])

    def sub(self, a, b):
        return self.add(a, self.neg[np.asarray(b, dtype=np.int64)])

    def mul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.k == 1:
            return (a * b) % self.p
        if self.mul_table is not None:
            return self.mul_table[a, b]
        la, lb = self.log[a], self.log[b]
        out = self.exp[(la + lb) % (self.q - 1)]
        return np.where((a == 0) | (b == 0), 0, out)

    def pow(self, a, e: int):
        a = np.asarray(a, dtype=np.int64)
        if e == 0:
            return np.ones_like(a)
        la = self.log[a]
        out = self.exp[(la * e) % (self.q - 1)]
        return np.where(a == 0, 0, out)

    def embed_int(self, c: int) -> int:
        """Image of an integer in the prime field."""
        return int(c) % self.p

    # scalar helpers
    def s_add(self, a: int, b: int) -> int:
        return int(self.add(a, b))

    def s_mul(self, a: int, b: int) -> int:
        return int(self.mul(a, b))

    def s_inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in GF(q)")
        return int(self.inv[a])

    def s_neg(self, a: int) -> int:
        return int(self.neg[a])

    def is_square(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if self.p == 2:
            return np.ones(a.shape, dtype=bool)
        return (a == 0) | (self.log[a] % 2 == 0)

    def subfield_elements(self, d: int) -> np.ndarray:
        """Elements of the subfield with p^d elements."""
        if self.k % d:
            raise ValueError("not a subfield")
        x = np.arange(self.q)
        return x[self.pow(x, self.p ** d) == x]

    def __repr__(self) -> str:
        return f"GF({self.q})"


@lru_cache(maxsize=None)
def gf(q: int) -> GF:
    return GF(q)


class Embedding:
    """The inclusion GF(q) -> GF(q^e) for a prime power q."""

    def __init__(self, q: int, e: int):
        self.small, self.big = gf(q), gf(q ** e)
        k = self.small.k
        if k == 1 or e == 1:
            self.image = np.arange(q, dtype=np.int64)
        else:
            # map small generator to an element of the big field with the same
            # minimal polynomial
            m = self.small.modulus
            cands = self.big.subfield_elements(k)
            root = None
            for z in cands:
                acc = 0
                for c in reversed(m):
                    acc = self.big.s_add(self.big.s_mul(acc, int(z)), c)
                if acc == 0:
                    root = int(z)
                    break
            img = np.zeros(q, dtype=np.int64)
            for a in range(q):
                acc = 0
                for c in reversed(self.small.digits[a].tolist()):
                    acc = self.big.s_add(self.big.s_mul(acc, root), c)
                img[a] = acc
            self.image = img

    def __call__(self, a):
        return self.image[np.asarray(a, dtype=np.int64)]


@lru_cache(maxsize=None)
def embedding(q: int, e: int) -> Embedding:
    return Embedding(q, e)


# -- polynomials over GF(q) as tuples of encoded coefficients -------------

class PolyOps:
    """Dense univariate polynomial arithmetic over a GF, tuples low -> high."""

    def __init__(self, F: GF):
        self.F = F

    @staticmethod
    def trim(a) -> tuple[int, ...]:
        a = list(a)
        while a and a[-1] == 0:
            a.pop()
        return tuple(a)

    def add(self, a, b):
        n = max(len(a), len(b))
        a = list(a) + [0] * (n - len(a))
        b = list(b) + [0] * (n - len(b))
        return self.trim(self.F.add(a, b).tolist()) if n else ()

    def neg(self, a):
        return self.trim(self.F.neg[list(a)].tolist()) if a else ()

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def scale(self, a, c: int):
        if not a:
            return ()
        return self.trim(self.F.mul(list(a), c).tolist())

    def mul(self, a, b):
        if not a or not b:
            return ()
        F = self.F
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                row = F.mul(x, list(b)).tolist()
                for j, y in enumerate(row):
                    if y:
                        out[i + j] = F.s_add(out[i + j], y)
        return self.trim(out)

    def divmod(self, a, b):
        if not b:
            raise ZeroDivisionError("polynomial division by zero")
        F = self.F
        a = list(a)
        inv = F.s_inv(b[-1])
        quo = [0] * max(len(a) - len(b) + 1, 0)
        while len(a) >= len(b) and a:
            c = F.s_mul(a[-1], inv)
            shift = len(a) - len(b)
            quo[shift] = c
            for i, bi in enumerate(b):
                a[shift + i] = F.s_add(a[shift + i], F.s_neg(F.s_mul(c, bi)))
            a = list(self.trim(a))
        return self.trim(quo), self.trim(a)

    def gcd(self, a, b):
        a, b = self.trim(a), self.trim(b)
        while b:
            a, b = b, self.divmod(a, b)[1]
        if not a:
            return ()
        return self.scale(a, self.F.s_inv(a[-1]))

    def pow(self, a, e: int):
        out = (1,)
        for _ in range(e):
            out = self.mul(out, a)
        return out

    def evaluate(self, a, x: int) -> int:
        acc = 0
        for c in reversed(a):
            acc = self.F.s_add(self.F.s_mul(acc, x), c)
        return acc

    def monic_of_degree(self, d: int):
        q = self.F.q
        for tail in product(range(q), repeat=d):
            yield tuple(reversed(tail)) + (1,)

    def is_irreducible(self, f) -> bool:
        d = len(f) - 1
        if d <= 0:
            return False
        for e in range(1, d // 2 + 1):
            for g in self.monic_of_degree(e):
                if not self.divmod(f, g)[1]:
                    return False
        return True


@lru_cache(maxsize=None)
def monic_irreducibles(q: int, d: int) -> tuple[tuple[int, ...], ...]:
    """All monic irreducible polynomials of degree d over GF(q)."""
    ops = PolyOps(gf(q))
    return tuple(f for f in ops.monic_of_degree(d) if ops.is_irreducible(f))


def count_irreducibles(q: int, d: int) -> int:
    return sum(mobius(e) * q ** (d // e) for e in divisors(d)) // d


def find_root(q: int, f: Sequence[int], e: int) -> int:
    """A root of f (coefficients in GF(q)) inside GF(q^e)."""
    emb = embedding(q, e)
    big = emb.big
    coeffs = emb(list(f)).tolist()
    ops = PolyOps(big)
    xs = np.arange(big.q)
    acc = np.zeros(big.q, dtype=np.int64)
    for c in reversed(coeffs):
        acc = big.add(big.mul(acc, xs), c)
    roots = xs[acc == 0]
    if not len(roots):
        raise ValueError("polynomial has no root in the extension")
    del ops
    return int(roots.min())
