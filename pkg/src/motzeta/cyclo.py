"""Exact elements of Q(zeta_p), stored in the basis 1, zeta, ..., zeta^(p-2)."""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

Number = int | Fraction


def _norm(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return int(c.numerator)
    return c


class CycloValue:
    __slots__ = ("p", "coords")

    def __init__(self, p: int, coords: Sequence[Number] = ()):
        self.p = p
        c = [_norm(x) for x in coords]
        n = max(p - 1, 1)
        if len(c) < n:
            c += [0] * (n - len(c))
        elif len(c) > n:
            c = CycloValue.from_powers(p, c).coords
        self.coords = tuple(c)

    @classmethod
    def from_powers(cls, p: int, powers: Iterable[Number]) -> "CycloValue":
        """Element sum_k powers[k] * zeta^k, any length (exponents mod p)."""
        acc = [0] * p
        for k, c in enumerate(powers):
            acc[k % p] += c
        # zeta^(p-1) = -(1 + zeta + ... + zeta^(p-2))
        top = acc[p - 1] if p > 1 else 0
        if p == 2:
            # zeta = -1
            return cls(2, [acc[0] - acc[1]])
        return cls(p, [acc[k] - top for k in range(p - 1)])

    @classmethod
    def rational(cls, p: int, r: Number) -> "CycloValue":
        return cls(p, [r])

    @classmethod
    def zeta(cls, p: int, k: int = 1) -> "CycloValue":
        powers = [0] * p
        powers[k % p] = 1
        return cls.from_powers(p, powers)

    def powers(self) -> list[Number]:
        """Coordinates as a length-p vector of zeta-power coefficients."""
        if self.p == 2:
            return [self.coords[0], 0]
        return list(self.coords) + [0]

    def _coerce(self, other) -> "CycloValue | None":
        if isinstance(other, CycloValue):
            if other.p != self.p:
                raise ValueError("mismatched cyclotomic fields")
            return other
        if isinstance(other, (int, Rational)):
            return CycloValue(self.p, [other])
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return CycloValue(self.p, [a + b for a, b in zip(self.coords, o.coords)])

    __radd__ = __add__

    def __neg__(self):
        return CycloValue(self.p, [-a for a in self.coords])

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        if isinstance(other, (int, Rational)) and not isinstance(other, bool):
            return CycloValue(self.p, [a * other for a in self.coords])
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        p = self.p
        a, b = self.powers(), o.powers()
        acc = [0] * p
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        acc[(i + j) % p] += x * y
        return CycloValue.from_powers(p, acc)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Rational)):
            return CycloValue(self.p, [Fraction(a) / other for a in self.coords])
        if isinstance(other, CycloValue):
            return self * other.inverse()
        return NotImplemented

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** -n
        out, base = CycloValue.rational(self.p, 1), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def galois(self, k: int) -> "CycloValue":
        """Image under zeta -> zeta^k, k prime to p."""
        a = self.powers()
        p = self.p
        out = [0] * p
        for j, c in enumerate(a):
            out[(j * k) % p] += c
        return CycloValue.from_powers(p, out)

    def inverse(self) -> "CycloValue":
        # a^-1 = (product of the other conjugates) / norm
        if self.is_zero():
            raise ZeroDivisionError("zero has no inverse")
        rest = CycloValue.rational(self.p, 1)
        for k in range(2, self.p):
            rest = rest * self.galois(k)
        return rest / (self * rest).to_rational()

    def conj(self) -> "CycloValue":
        a = self.powers()
        p = self.p
        return CycloValue.from_powers(p, [a[(-k) % p] for k in range(p)])

    def abs2(self) -> "CycloValue":
        return self * self.conj()

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coords[1:])

    def to_rational(self) -> Number:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coords[0]

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def __eq__(self, other):
        o = self._coerce(other) if not isinstance(other, CycloValue) or other.p == self.p else None
        if o is None:
            return NotImplemented if not isinstance(other, CycloValue) else False
        return self.coords == o.coords

    def __hash__(self):
        return hash((self.p, self.coords))

    def to_json(self) -> list:
        return [str(c) for c in self.coords]

    def __repr__(self) -> str:
        terms = []
        for k, c in enumerate(self.coords):
            if c:
                terms.append(f"{c}" if k == 0 else f"{c}*z^{k}")
        return f"CycloValue(p={self.p}: " + (" + ".join(terms) or "0") + ")"

    def __str__(self) -> str:
        if self.is_rational():
            return str(self.coords[0])
        return repr(self)
