"""Monodromy-graded classes, the twisted product, Fermat convolution and
Denef-Loeser style zeta functions from resolution data."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Any, Iterable, Mapping

import numpy as np

from .epoly import EPoly
from .fields import gf, prime_power
from .series import MotSeries
from .varieties import UnsupportedVariety, hd_measure


def reduce_alpha(a) -> Fraction:
    """Representative of a mod 1 in (-1, 0]."""
    a = Fraction(a)
    r = a - (a.numerator // a.denominator)
    return r - 1 if r else Fraction(0)


class MonClass:
    """Finite map alpha in (-1, 0] -> EPoly."""

    __slots__ = ("_g",)

    def __init__(self, graded: Mapping[Any, EPoly | int] | None = None):
        g: dict[Fraction, EPoly] = {}
        for a, e in (graded or {}).items():
            a = reduce_alpha(a)
            e = e if isinstance(e, EPoly) else EPoly.const(e)
            g[a] = g[a] + e if a in g else e
        self._g = {a: e for a, e in g.items() if not e.is_zero()}

    @classmethod
    def trivial(cls, e: EPoly | int) -> "MonClass":
        return cls({0: e})

    @classmethod
    def from_list(cls, rows: Iterable) -> "MonClass":
        return cls({Fraction(n, d): EPoly.from_list(e) for n, d, e in rows})

    def to_list(self) -> list:
        return [[a.numerator, a.denominator, e.to_list()] for a, e in sorted(self._g.items())]

    def items(self):
        return sorted(self._g.items())

    def component(self, a) -> EPoly:
        return self._g.get(reduce_alpha(a), EPoly())

    def is_zero(self) -> bool:
        return not self._g

    def forget(self) -> EPoly:
        return sum(self._g.values(), EPoly())

    @staticmethod
    def _coerce(x) -> "MonClass | None":
        if isinstance(x, MonClass):
            return x
        if isinstance(x, EPoly):
            return MonClass({0: x})
        if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
            return MonClass({0: EPoly.const(x)})
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        g = dict(self._g)
        for a, e in o._g.items():
            g[a] = g[a] + e if a in g else e
        return MonClass(g)

    __radd__ = __add__

    def __neg__(self):
        return MonClass({a: -e for a, e in self._g.items()})

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
        """Ordinary product: eigenvalues add, no weight shift."""
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        g: dict[Fraction, EPoly] = {}
        for a, e in self._g.items():
            for b, f in o._g.items():
                c = reduce_alpha(a + b)
                g[c] = g[c] + e * f if c in g else e * f
        return MonClass(g)

    __rmul__ = __mul__

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._g == o._g

    def __hash__(self):
        return hash(frozenset(self._g.items()))

    def __pow__(self, n: int):
        if n < 0:
            if set(self._g) == {Fraction(0)}:
                return MonClass({0: self._g[Fraction(0)] ** n})
            raise ValueError("only trivial-monodromy powers of L are invertible")
        out = MonClass.trivial(1)
        for _ in range(n):
            out = out * self
        return out

    def inverse(self) -> "MonClass":
        return self ** -1

    def __repr__(self) -> str:
        if not self._g:
            return "MonClass(0)"
        return "MonClass{" + ", ".join(f"{a}: {e}" for a, e in self.items()) + "}"


ONE = MonClass.trivial(1)


def twisted_product(a: MonClass, b: MonClass) -> MonClass:
    """The convolution product on line elements (see module docs of the weight rule)."""
    out: dict[Fraction, dict[tuple[int, int], Any]] = {}
    for al, e in a.items():
        for be, f in b.items():
            s = al + be
            for (p, q), c1 in e.items():
                for (r, t), c2 in f.items():
                    w = p + q + r + t
                    if al == 0 or be == 0:
                        key, gamma = (p + r, q + t), reduce_alpha(s)
                    elif s == -1:
                        w += 2
                        key, gamma = (p + r + 1, w - (p + r + 1)), Fraction(0)
                    elif s > -1:
                        w += 1
                        key, gamma = (p + r, w - (p + r)), s
                    else:
                        w += 1
                        key, gamma = (p + r + 1, w - (p + r + 1)), reduce_alpha(s)
                    slot = out.setdefault(gamma, {})
                    slot[key] = slot.get(key, 0) + c1 * c2
    return MonClass({g: EPoly(c) for g, c in out.items()})


# -- mu_n-equivariant catalog items ---------------------------------------

def _mu_item_isotypic(item: Mapping, n: int) -> dict[int, EPoly]:
    """E-polynomial of each isotypic part (character a mod n) of a mu_n-variety."""
    kind = item.get("kind")
    if kind == "trivial":
        return {0: hd_measure(item["variety"])}
    if kind in ("point",):
        return {0: EPoly.const(1)}
    if n == 2 and kind == "etilde":
        return {0: EPoly.const(1), 1: EPoly.const(1)}
    if n == 2 and kind == "gm_sign":
        # x -> -x on G_m is homotopic to the identity on cohomology
        return {0: EPoly.L() - 1}
    if kind == "gm":
        return {0: EPoly.L() - 1}
    raise UnsupportedVariety(f"no mu_{n}-equivariant data for {kind!r}")


def _mu_item_twisted_count(item: Mapping, n: int, q: int, g: int) -> int:
    """#{z : Frob(z) = zeta^g z} for the action of the element g of mu_n (q = 1 mod n assumed)."""
    kind = item.get("kind")
    from .varieties import count_points

    if kind == "trivial":
        return count_points(item["variety"], q, 1)
    if kind == "point":
        return 1
    if kind == "gm":
        return q - 1
    if n == 2 and kind == "etilde":
        return 2 if g == 0 else 0
    if n == 2 and kind == "gm_sign":
        return q - 1
    raise UnsupportedVariety(f"no twisted counts for {kind!r}")


def mu_realization(item: Mapping, n: int = 2) -> MonClass:
    """Monodromy-graded class of a mu_n-variety: character a sits at alpha = -a/n."""
    return MonClass({Fraction(-a, n): e for a, e in _mu_item_isotypic(item, n).items()})


def _fermat_isotypic(n: int, c: int) -> dict[tuple[int, int], EPoly]:
    L = EPoly.L()
    if n == 1:
        return {(0, 0): L - 1 if c == 0 else L - 2}
    if n == 2:
        if c == 0:
            # x^2 + y^2 = 0 in G_m^2: two copies of G_m, swapped by neither factor alone
            return {(0, 0): L - 1, (1, 1): L - 1}
        # quotient X + Y = 1 is G_m minus a point; the rest is spread evenly
        return {(0, 0): L - 2, (1, 1): EPoly.const(-1), (1, 0): EPoly.const(-1),
                (0, 1): EPoly.const(-1)}
    raise UnsupportedVariety("Fermat convolution only for n in {1, 2}")


def _pieces(Z) -> list[tuple[Mapping, Mapping]]:
    if isinstance(Z, Mapping):
        if "union" in Z:
            return [tuple(p) for p in Z["union"]]
        if "pair" in Z:
            return [tuple(Z["pair"])]
    return [tuple(p) for p in Z]


def psi_fermat(Z, n: int = 2) -> MonClass:
    """Realization of Psi(Z) = [Z x^{mu x mu} F_0^n] - [Z x^{mu x mu} F_1^n].

    Z is a union of products Z1 x Z2 of mu_n-items, given as a list of pairs.
    """
    if n not in (1, 2):
        raise UnsupportedVariety("n must be 1 or 2")
    F0, F1 = _fermat_isotypic(n, 0), _fermat_isotypic(n, 1)
    out = MonClass()
    for z1, z2 in _pieces(Z):
        i1, i2 = _mu_item_isotypic(z1, n), _mu_item_isotypic(z2, n)
        for (a, ea), (b, eb) in product(i1.items(), i2.items()):
            k = (a % n, b % n)
            diff = F0.get(k, EPoly()) - F1.get(k, EPoly())
            if diff.is_zero():
                continue
            out = out + MonClass({Fraction(-(a + b), n): ea * eb * diff})
    return out


def _fermat_twisted_count(n: int, c: int, q: int, g: tuple[int, int]) -> int:
    """#{(x, y) in G_m^2(F_qbar) : x^n + y^n = c, Frob(x) = z^g1 x, Frob(y) = z^g2 y}."""
    F = gf(q ** n) if n > 1 else gf(q)
    Q = F.q
    xs = np.arange(1, Q)
    # zeta: a primitive n-th root of unity in F_q
    if n == 1:
        sols = [xs, xs]
    else:
        zeta = int(F.exp[(Q - 1) // n]) if (q - 1) % n == 0 else None
        if zeta is None:
            raise UnsupportedVariety("twisted counts need mu_n inside F_q")
        frob = F.pow(xs, q)
        sols = []
        for gi in g:
            target = F.mul(F.pow(zeta, gi), xs)
            sols.append(xs[frob == target])
    xn = F.pow(sols[0], n)
    yn = F.pow(sols[1], n)
    hist = np.bincount(yn, minlength=Q)
    cc = c % F.p
    return int(sum(int(hist[F.s_add(cc, F.s_neg(int(a)))]) for a in xn))


def psi_fermat_count(Z, q: int, n: int = 2) -> dict[Fraction, Fraction]:
    """Counting shadow of psi_fermat, valid for every odd q.

    Each isotypic part is replaced by the trace of Frobenius on it, computed
    from twisted point counts by character orthogonality.  For q = 1 mod 4
    this is the specialization uv -> q of psi_fermat; otherwise it is the
    brute-force fallback.
    """
    p, _ = prime_power(q)
    if n == 2 and p == 2:
        raise UnsupportedVariety("mu_2 convolution needs odd characteristic")
    G = list(product(range(n), repeat=2))

    def traces(count_fn) -> dict[tuple[int, int], Fraction]:
        Ng = {g: count_fn(g) for g in G}
        out = {}
        for chi in G:
            s = Fraction(0)
            for g in G:
                sign = (-1) ** ((chi[0] * g[0] + chi[1] * g[1]) % 2) if n == 2 else 1
                s += sign * Ng[g]
            out[chi] = s / len(G)
        return out

    T0 = traces(lambda g: _fermat_twisted_count(n, 0, q, g))
    T1 = traces(lambda g: _fermat_twisted_count(n, 1, q, g))
    result: dict[Fraction, Fraction] = {}
    for z1, z2 in _pieces(Z):
        TZ = traces(lambda g: _mu_item_twisted_count(z1, n, q, g[0]) * _mu_item_twisted_count(z2, n, q, g[1]))
        for chi in G:
            v = TZ[chi] * (T0[chi] - T1[chi])
            if v:
                a = reduce_alpha(Fraction(-(chi[0] + chi[1]), n))
                result[a] = result.get(a, 0) + v
    return {a: v for a, v in result.items() if v}


# -- resolution data --------------------------------------------------------

@dataclass(frozen=True)
class Stratum:
    J: tuple[int, ...]
    cls: MonClass
    a: tuple[int, ...]
    nu: tuple[int, ...]

    def __post_init__(self):
        if not self.J:
            raise ValueError("stratum needs a non-empty index set")
        if len(self.a) != len(self.J) or len(self.nu) != len(self.J):
            raise ValueError("one multiplicity and one jacobian order per index")
        if min(self.a) < 1 or min(self.nu) < 1:
            raise ValueError("multiplicities and jacobian orders must be >= 1")


@dataclass(frozen=True)
class ResolutionData:
    strata: tuple[Stratum, ...]
    zero_fibre: MonClass = field(default_factory=MonClass)

    @classmethod
    def from_json(cls, d: Mapping) -> "ResolutionData":
        def as_class(x):
            if isinstance(x, Mapping) and "kind" in x:
                return mu_realization(x, x.get("n", 2)) if x["kind"] in ("etilde", "gm_sign") \
                    else MonClass.trivial(hd_measure(x))
            return MonClass.from_list(x)

        strata = tuple(Stratum(tuple(s["J"]), as_class(s["class"]), tuple(s["a"]), tuple(s["nu"]))
                       for s in d.get("strata", ()))
        return cls(strata, as_class(d["zero_fibre"]) if "zero_fibre" in d else MonClass())


@dataclass(frozen=True)
class RationalForm:
    """sum_k c_k prod_i p_{nu_i, a_i}, with p_{nu,a} = L^-nu T^a / (1 - L^-nu T^a)."""

    terms: tuple[tuple[MonClass, tuple[tuple[int, int], ...]], ...]

    def expand(self, prec: int, var: str = "T") -> MotSeries:
        total = MotSeries((var,), (prec,), {}, ONE)
        for c, syms in self.terms:
            s = MotSeries.constant((var,), (prec,), c, ONE)
            for nu, a in syms:
                x = MonClass.trivial(EPoly.L(-nu))
                geo = MotSeries((var,), (prec,), {(a * k,): x ** k for k in range(1, prec // a + 1)}, ONE)
                s = s * geo
            total = total + s
        return total

    def limit(self) -> MonClass:
        return limit_T_infinity(self)


def limit_T_infinity(form: RationalForm | Iterable) -> MonClass:
    """Substitute -1 for every symbol p_{e,i}."""
    terms = form.terms if isinstance(form, RationalForm) else form
    out = MonClass()
    for c, syms in terms:
        out = out + (c if len(syms) % 2 == 0 else -c)
    return out


def dl_form(res: ResolutionData) -> RationalForm:
    L1 = MonClass.trivial(EPoly.L() - 1)
    terms = []
    for s in res.strata:
        c = s.cls * (L1 ** (len(s.J) - 1))
        terms.append((c, tuple(zip(s.nu, s.a))))
    return RationalForm(tuple(terms))


def dl_zeta(res: ResolutionData, prec: int, var: str = "T") -> MotSeries:
    if prec < 1:
        raise ValueError("prec must be >= 1")
    return dl_form(res).expand(prec, var)


def nearby_vanishing(res: ResolutionData) -> tuple[MonClass, MonClass]:
    one_minus_L = MonClass.trivial(1 - EPoly.L())
    psi = MonClass()
    for s in res.strata:
        psi = psi + s.cls * (one_minus_L ** (len(s.J) - 1))
    return psi, res.zero_fibre - psi


def thom_sebastiani_check(res_f: ResolutionData, res_g: ResolutionData,
                          res_fg: ResolutionData) -> bool:
    _, phi_f = nearby_vanishing(res_f)
    _, phi_g = nearby_vanishing(res_g)
    _, phi_fg = nearby_vanishing(res_fg)
    return twisted_product(phi_f, phi_g) == phi_fg


# worked examples -----------------------------------------------------------

ETILDE = mu_realization({"kind": "etilde"})


def example_square() -> ResolutionData:
    """f = x^2 on A^1."""
    return ResolutionData((Stratum((1,), ETILDE, (2,), (1,)),), MonClass.trivial(1))


def example_sum_of_squares() -> ResolutionData:
    """f = x^2 + y^2 on A^2, i.e. xy after a linear change over a field containing i."""
    L = EPoly.L()
    gm = MonClass.trivial(L - 1)
    return ResolutionData(
        (Stratum((1,), gm, (1,), (1,)), Stratum((2,), gm, (1,), (1,)),
         Stratum((1, 2), MonClass.trivial(1), (1, 1), (1, 1))),
        MonClass.trivial(2 * L - 1))


def example_smooth(cls: EPoly | None = None) -> ResolutionData:
    """A smooth zero fibre X_0 (class defaults to A^1, the fibre of x on A^2)."""
    c = MonClass.trivial(EPoly.L() if cls is None else cls)
    return ResolutionData((Stratum((1,), c, (1,), (1,)),), c)
