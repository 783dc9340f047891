"""Truncated multivariate power series with coefficients in an avatar ring."""
from __future__ import annotations

from fractions import Fraction
from itertools import product
from typing import Any, Callable, Iterable, Mapping, Sequence

Exp = tuple[int, ...]


def _is_zero(c) -> bool:
    if isinstance(c, (int, Fraction)):
        return c == 0
    z = getattr(c, "is_zero", None)
    return z() if z is not None else not c


class TruncationError(ValueError):
    pass


class MotSeries:
    """sum_n c_n T^n over a box 0 <= n_i <= bounds[i].

    ``one`` is the unit of the coefficient ring; it fixes the ring used for
    constants produced by inversion, exp and log.
    """

    __slots__ = ("vars", "bounds", "coeffs", "one")

    def __init__(self, variables: Sequence[str], bounds: Sequence[int],
                 coeffs: Mapping[Exp, Any] | None = None, one: Any = 1):
        if len(variables) != len(bounds):
            raise ValueError("one bound per variable")
        self.vars = tuple(variables)
        self.bounds = tuple(int(b) for b in bounds)
        self.one = one
        c: dict[Exp, Any] = {}
        for e, v in (coeffs or {}).items():
            e = tuple(int(x) for x in e)
            if len(e) != len(self.vars):
                raise ValueError("exponent arity mismatch")
            if self._inside(e) and not _is_zero(v):
                c[e] = v
        self.coeffs = c

    # helpers
    def _inside(self, e: Exp) -> bool:
        return all(0 <= x <= b for x, b in zip(e, self.bounds))

    def _like(self, coeffs: Mapping[Exp, Any]) -> "MotSeries":
        return MotSeries(self.vars, self.bounds, coeffs, self.one)

    def _zero(self):
        return self.one * 0

    def box(self) -> list[Exp]:
        """All exponents in the truncation box, by increasing total degree."""
        pts = list(product(*(range(b + 1) for b in self.bounds)))
        pts.sort(key=lambda e: (sum(e), e))
        return pts

    @classmethod
    def univariate(cls, coeffs: Sequence[Any], prec: int, var: str = "t", one: Any = 1) -> "MotSeries":
        return cls((var,), (prec,), {(i,): c for i, c in enumerate(coeffs) if i <= prec}, one)

    @classmethod
    def constant(cls, variables, bounds, c, one=None) -> "MotSeries":
        one = c * 0 + 1 if one is None else one
        return cls(variables, bounds, {tuple(0 for _ in variables): c}, one)

    @classmethod
    def monomial(cls, variables, bounds, e: Exp, c: Any = None, one: Any = 1) -> "MotSeries":
        return cls(variables, bounds, {tuple(e): one if c is None else c}, one)

    def coefficient(self, e) -> Any:
        if isinstance(e, int):
            e = (e,)
        e = tuple(e)
        if not self._inside(e):
            raise TruncationError(f"exponent {e} beyond truncation {self.bounds}")
        return self.coeffs.get(e, self._zero())

    def __getitem__(self, e):
        return self.coefficient(e)

    def coefficient_list(self) -> list[Any]:
        if len(self.vars) != 1:
            raise ValueError("coefficient_list needs a single variable")
        return [self.coefficient(i) for i in range(self.bounds[0] + 1)]

    def _check(self, other: "MotSeries") -> None:
        if self.vars != other.vars:
            raise ValueError(f"variable mismatch {self.vars} vs {other.vars}")

    def _meet(self, other: "MotSeries") -> tuple[int, ...]:
        self._check(other)
        return tuple(min(a, b) for a, b in zip(self.bounds, other.bounds))

    def truncate(self, bounds: Sequence[int]) -> "MotSeries":
        return MotSeries(self.vars, bounds, self.coeffs, self.one)

    # ring structure
    def _coerce(self, other) -> "MotSeries | None":
        if isinstance(other, MotSeries):
            return other
        try:
            return MotSeries.constant(self.vars, self.bounds, self.one * other, self.one)
        except TypeError:
            return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        b = self._meet(o)
        c = {e: v for e, v in self.coeffs.items()}
        for e, v in o.coeffs.items():
            c[e] = c[e] + v if e in c else v
        return MotSeries(self.vars, b, c, self.one)

    __radd__ = __add__

    def __neg__(self):
        return self._like({e: -v for e, v in self.coeffs.items()})

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
        if not isinstance(other, MotSeries):
            try:
                return self._like({e: v * other for e, v in self.coeffs.items()})
            except TypeError:
                return NotImplemented
        b = self._meet(other)
        c: dict[Exp, Any] = {}
        for e1, v1 in self.coeffs.items():
            for e2, v2 in other.coeffs.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                if all(x <= bb for x, bb in zip(e, b)):
                    t = v1 * v2
                    c[e] = c[e] + t if e in c else t
        return MotSeries(self.vars, b, c, self.one)

    def __rmul__(self, other):
        try:
            return self._like({e: other * v for e, v in self.coeffs.items()})
        except TypeError:
            return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, MotSeries):
            o = self._coerce(other)
            if o is None:
                return NotImplemented
            other = o
        if self.vars != other.vars:
            return False
        b = self._meet(other)
        a1 = self.truncate(b).coeffs
        a2 = other.truncate(b).coeffs
        keys = set(a1) | set(a2)
        return all(_is_zero(a1.get(k, 0) - a2.get(k, 0)) for k in keys)

    __hash__ = None

    def constant_term(self):
        return self.coeffs.get(tuple(0 for _ in self.vars), self._zero())

    def inverse(self) -> "MotSeries":
        c0 = self.constant_term()
        inv0 = _invert_scalar(c0, self.one)
        out: dict[Exp, Any] = {}
        nz = [(e, v) for e, v in self.coeffs.items() if any(e)]
        for n in self.box():
            if not any(n):
                out[n] = inv0
                continue
            acc = None
            for e, v in nz:
                m = tuple(a - b for a, b in zip(n, e))
                if min(m) < 0 or m not in out:
                    continue
                t = v * out[m]
                acc = t if acc is None else acc + t
            if acc is not None and not _is_zero(acc):
                out[n] = -(inv0 * acc)
        return self._like(out)

    def __truediv__(self, other):
        if isinstance(other, MotSeries):
            return self * other.inverse()
        return self * Fraction(1, 1) * _invert_scalar(other, self.one)

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = MotSeries.constant(self.vars, self.bounds, self.one, self.one)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def log(self) -> "MotSeries":
        """Logarithm of a series with constant term 1."""
        if not _is_zero(self.constant_term() - self.one):
            raise ValueError("log needs constant term 1")
        out: dict[Exp, Any] = {}
        for n in self.box():
            d = sum(n)
            if d == 0:
                continue
            acc = self.coeffs.get(n, self._zero()) * d
            for m, lm in out.items():
                r = tuple(a - b for a, b in zip(n, m))
                if min(r) < 0 or not any(r):
                    continue
                fr = self.coeffs.get(r)
                if fr is not None:
                    acc = acc - lm * fr * sum(m)
            val = acc * Fraction(1, d)
            if not _is_zero(val):
                out[n] = val
        return self._like(out)

    def exp(self) -> "MotSeries":
        """Exponential of a series with zero constant term."""
        if not _is_zero(self.constant_term()):
            raise ValueError("exp needs zero constant term")
        out: dict[Exp, Any] = {tuple(0 for _ in self.vars): self.one}
        g = [(e, v * sum(e)) for e, v in self.coeffs.items()]
        for n in self.box():
            d = sum(n)
            if d == 0:
                continue
            acc = None
            for e, ge in g:
                r = tuple(a - b for a, b in zip(n, e))
                if min(r) < 0 or r not in out:
                    continue
                t = ge * out[r]
                acc = t if acc is None else acc + t
            if acc is not None:
                val = acc * Fraction(1, d)
                if not _is_zero(val):
                    out[n] = val
        return self._like(out)

    def map_coefficients(self, f: Callable[[Any], Any], one: Any = None) -> "MotSeries":
        return MotSeries(self.vars, self.bounds, {e: f(v) for e, v in self.coeffs.items()},
                         self.one if one is None else one)

    def adams(self, k: int) -> "MotSeries":
        """psi_k on coefficients and T_i -> T_i^k."""
        c = {}
        for e, v in self.coeffs.items():
            ee = tuple(k * x for x in e)
            if self._inside(ee):
                c[ee] = v.adams(k) if hasattr(v, "adams") else v
        return self._like(c)

    def substitute(self, images: Sequence[tuple[Any, Exp]], variables: Sequence[str],
                   bounds: Sequence[int]) -> "MotSeries":
        """Replace T_i by images[i] = (coefficient, exponent vector in the new variables)."""
        out: dict[Exp, Any] = {}
        nv = len(variables)
        for e, v in self.coeffs.items():
            coef = v
            ne = [0] * nv
            for i, k in enumerate(e):
                if k:
                    c, ex = images[i]
                    for j in range(nv):
                        ne[j] += k * ex[j]
                    if c is not None:
                        coef = coef * (c ** k)
            ne_t = tuple(ne)
            if all(x <= b for x, b in zip(ne_t, bounds)):
                out[ne_t] = out[ne_t] + coef if ne_t in out else coef
        return MotSeries(variables, bounds, out, self.one)

    def items(self):
        return sorted(self.coeffs.items())

    def __repr__(self) -> str:
        body = ", ".join(f"{e}: {v}" for e, v in self.items())
        return f"MotSeries({'/'.join(self.vars)} <= {self.bounds}; {body})"


def _invert_scalar(c, one):
    if isinstance(c, (int, Fraction)):
        if c == 0:
            raise ZeroDivisionError("constant term not invertible")
        return one * Fraction(1) / c if not isinstance(one, (int, Fraction)) else Fraction(1) / c
    inv = getattr(c, "inverse", None)
    if inv is not None:
        return inv()
    try:
        return c ** -1
    except (ValueError, TypeError) as exc:
        raise ZeroDivisionError(f"constant term {c!r} not invertible") from exc


def geometric(variables: Sequence[str], bounds: Sequence[int], c: Any, e: Exp, one: Any = 1) -> MotSeries:
    """1 / (1 - c T^e)."""
    s = MotSeries.constant(variables, bounds, one, one) - MotSeries.monomial(variables, bounds, e, c, one)
    return s.inverse()


def series_from_terms(terms: Iterable[tuple[Exp, Any]], variables, bounds, one=1) -> MotSeries:
    c: dict[Exp, Any] = {}
    for e, v in terms:
        e = tuple(e)
        c[e] = c[e] + v if e in c else v
    return MotSeries(variables, bounds, c, one)
