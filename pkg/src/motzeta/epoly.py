"""Laurent polynomials in u, v: the Hodge-Deligne avatar of a class."""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping

Coef = int | Fraction


def _norm(c: Coef) -> Coef:
    if isinstance(c, Fraction) and c.denominator == 1:
        return int(c.numerator)
    return c


class EPoly:
    """Finite map (p, q) -> coefficient, representing sum c * u^p v^q.

    Negative exponents only appear through powers of L^-1 = (uv)^-1, i.e.
    a monomial u^p v^q with min(p, q) < 0 must have p - q attainable by
    multiplying an honest monomial by (uv)^-k.  That holds automatically for
    everything built from the ring operations below.
    """

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs: Mapping[tuple[int, int], Coef] | None = None):
        c: dict[tuple[int, int], Coef] = {}
        if coeffs:
            for k, v in coeffs.items():
                if v:
                    c[(int(k[0]), int(k[1]))] = _norm(v)
        self._c = c
        self._hash = None

    # constructors
    @classmethod
    def const(cls, c: Coef) -> "EPoly":
        return cls({(0, 0): c})

    @classmethod
    def mono(cls, p: int, q: int, c: Coef = 1) -> "EPoly":
        return cls({(p, q): c})

    @classmethod
    def L(cls, k: int = 1) -> "EPoly":
        return cls({(k, k): 1})

    @classmethod
    def from_list(cls, triples: Iterable) -> "EPoly":
        out: dict[tuple[int, int], Coef] = {}
        for p, q, c in triples:
            c = Fraction(c) if isinstance(c, str) else c
            out[(p, q)] = out.get((p, q), 0) + c
        return cls(out)

    def to_list(self) -> list[list]:
        return [[p, q, c if isinstance(c, int) else str(c)] for (p, q), c in sorted(self._c.items())]

    # access
    def items(self):
        return self._c.items()

    def coeff(self, p: int, q: int) -> Coef:
        return self._c.get((p, q), 0)

    def is_zero(self) -> bool:
        return not self._c

    def __bool__(self) -> bool:
        return bool(self._c)

    def is_integral(self) -> bool:
        return all(isinstance(c, int) for c in self._c.values())

    # arithmetic
    @staticmethod
    def _coerce(x) -> "EPoly | None":
        if isinstance(x, EPoly):
            return x
        if isinstance(x, (int, Rational)) and not isinstance(x, bool):
            return EPoly.const(x)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        c = dict(self._c)
        for k, v in o._c.items():
            c[k] = c.get(k, 0) + v
        return EPoly(c)

    __radd__ = __add__

    def __neg__(self):
        return EPoly({k: -v for k, v in self._c.items()})

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
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        c: dict[tuple[int, int], Coef] = {}
        for (p1, q1), a in self._c.items():
            for (p2, q2), b in o._c.items():
                k = (p1 + p2, q1 + q2)
                c[k] = c.get(k, 0) + a * b
        return EPoly(c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Rational)):
            return EPoly({k: Fraction(v) / other for k, v in self._c.items()})
        o = self._coerce(other)
        if o is not None and len(o._c) == 1:
            ((p, q), c), = o._c.items()
            if p == q:
                return self * EPoly.mono(-p, -q, Fraction(1) / c)
        return NotImplemented

    def __pow__(self, n: int):
        if n < 0:
            if len(self._c) == 1:
                ((p, q), c), = self._c.items()
                if p == q and c in (1, -1):
                    return EPoly.mono(p * n, q * n, c if n % 2 else 1)
            raise ValueError("only powers of L may be inverted")
        out = EPoly.const(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._c == o._c

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._c.items()))
        return self._hash

    # structure
    def adams(self, k: int) -> "EPoly":
        if k <= 0:
            raise ValueError("Adams operation needs k >= 1")
        return EPoly({(k * p, k * q): c for (p, q), c in self._c.items()})

    def swap(self) -> "EPoly":
        return EPoly({(q, p): c for (p, q), c in self._c.items()})

    def total_degrees(self) -> list[int]:
        return sorted({p + q for p, q in self._c})

    def degree(self) -> float | int:
        """Largest p+q, or -inf for zero."""
        if not self._c:
            return float("-inf")
        return max(p + q for p, q in self._c)

    def evaluate(self, u: Coef, v: Coef) -> Coef:
        u, v = Fraction(u), Fraction(v)
        return _norm(sum((c * u ** p * v ** q for (p, q), c in self._c.items()), Fraction(0)))

    def at_uv(self, x: Coef) -> Coef:
        """Evaluate a polynomial in uv alone at uv = x (counting shadow)."""
        if any(p != q for p, q in self._c):
            raise ValueError("not a polynomial in uv")
        x = Fraction(x)
        return _norm(sum((c * x ** p for (p, _), c in self._c.items()), Fraction(0)))

    def uv_coefficients(self) -> dict[int, Coef]:
        """Coefficients as a polynomial in L when every monomial is (k,k)."""
        if any(p != q for p, q in self._c):
            raise ValueError("not a polynomial in uv")
        return {p: c for (p, _), c in self._c.items()}

    def __repr__(self) -> str:
        if not self._c:
            return "0"
        parts = []
        for (p, q), c in sorted(self._c.items(), key=lambda kv: (kv[0][0] + kv[0][1], kv[0])):
            m = ""
            if p:
                m += "u" if p == 1 else f"u^{p}"
            if q:
                m += "v" if q == 1 else f"v^{q}"
            if not m:
                parts.append(str(c))
            elif c == 1:
                parts.append(m)
            elif c == -1:
                parts.append("-" + m)
            else:
                parts.append(f"{c}*{m}")
        return " + ".join(parts).replace("+ -", "- ")


ONE = EPoly.const(1)
ZERO = EPoly()
L = EPoly.L(1)
