"""Height zeta functions of vector-group compactifications over a curve, trivial character.

Only the character-zero part of the Poisson decomposition is assembled: the
local factors at good and bad places, their Euler product over the curve and
the declared pole factor.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Any, Mapping, Sequence

from . import kernels
from .epoly import EPoly
from .euler import class_count, class_epoly, parse_class, plethystic_exp, plethystic_log
from .fields import prime_power
from .lambda_ring import counting_zeta
from .series import MotSeries, TruncationError
from .varieties import CountAvatar, hd_measure


@dataclass
class Stratum:
    """One term of a local factor: boundary subset A, class of Delta(A, beta), twist (e, rho_beta)."""

    A: frozenset
    cls: Any
    e: dict = field(default_factory=dict)
    rho_beta: int = 0

    @classmethod
    def from_json(cls, d: Mapping) -> "Stratum":
        return cls(frozenset(d.get("A", [])), parse_class(d["class"]),
                   {k: int(v) for k, v in d.get("e", {}).items()}, int(d.get("rho_beta", 0)))


@dataclass
class CompactificationData:
    n: int
    rho: dict                         # alpha -> rho_alpha >= 2
    A_D: frozenset = frozenset()
    good: list = field(default_factory=list)      # Strata at places of C_0
    bad: dict = field(default_factory=dict)       # rational label -> {"strata": [...], "d": d_v}
    curve: Mapping = field(default_factory=lambda: {"kind": "projective", "n": 1})

    def __post_init__(self):
        for a, r in self.rho.items():
            if int(r) < 2:
                raise ValueError(f"rho[{a}] = {r} must be >= 2")
        if not set(self.A_D) <= set(self.rho):
            raise ValueError("A_D must be a subset of A")
        for s in self.good:
            if s.A & self.A_D:
                raise ValueError("good-place strata only involve components outside A_D")

    @property
    def labels(self) -> list:
        return sorted(self.rho, key=str)

    def rho_prime(self, a) -> int:
        return self.rho[a] - 1 if a in self.A_D else self.rho[a]

    @classmethod
    def from_json(cls, d: Mapping) -> "CompactificationData":
        bad = {}
        for lab, rec in d.get("bad", {}).items():
            lab = "inf" if lab == "inf" else int(lab)
            bad[lab] = {"strata": [Stratum.from_json(s) for s in rec.get("strata", [])],
                        "d": int(rec["d"])}
        return cls(int(d["n"]), {str(k): int(v) for k, v in d["rho"].items()},
                   frozenset(str(a) for a in d.get("A_D", [])),
                   [Stratum.from_json(s) for s in d.get("good", [])], bad,
                   d.get("curve", {"kind": "projective", "n": 1}))

    @classmethod
    def demo(cls, curve: Mapping | None = None) -> "CompactificationData":
        """G_a inside P^1: one boundary point of anticanonical multiplicity 2."""
        return cls(1, {"inf": 2}, frozenset(),
                   [Stratum(frozenset(), EPoly.L()), Stratum(frozenset({"inf"}), 1)],
                   {}, curve or {"kind": "projective", "n": 1})


def pole_order(data: CompactificationData) -> int:
    return len(set(data.rho) - set(data.A_D)) + sum(rec["d"] for rec in data.bad.values())


def _value(c, q: int | None, e: int):
    return class_epoly(c) if q is None else class_count(c, q, e)


def local_factor_trivial(data: CompactificationData, prec: int, q: int | None = None, e: int = 1,
                         strata: Sequence[Stratum] | None = None) -> MotSeries:
    """Z_v(T, 0) in the variables T_alpha, over a residue field of size q^e (E-avatar if q is None)."""
    labels = data.labels
    vs = tuple(f"T_{a}" for a in labels)
    bounds = (prec,) * len(labels)
    one = EPoly.const(1) if q is None else 1
    Lv = EPoly.L() if q is None else q ** e

    def Lpow(k: int):
        return Lv ** k if q is None or k >= 0 else Fraction(1, Lv ** -k)

    total = MotSeries(vs, bounds, {}, one)
    for s in (data.good if strata is None else strata):
        if any(x < 0 for x in s.e.values()):
            raise ValueError("negative T-exponents do not fit a power series")
        term = MotSeries.constant(vs, bounds, one * _value(s.cls, q, e), one)
        term = term * Lpow(s.rho_beta) * Lpow(-data.n + len(s.A)) * (1 - Lpow(-1)) ** len(s.A)
        shift = tuple(s.e.get(a, 0) for a in labels)
        if any(shift):
            term = term * MotSeries.monomial(vs, bounds, shift, one, one)
        for a in s.A:
            i = labels.index(a)
            c = Lpow(data.rho[a] - 1)
            ex = tuple(1 if j == i else 0 for j in range(len(labels)))
            g = (MotSeries.constant(vs, bounds, one, one) - MotSeries.monomial(vs, bounds, ex, one * c, one)).inverse()
            term = term * MotSeries.monomial(vs, bounds, ex, one * c, one) * g
        total = total + term
    return total


def specialize(data: CompactificationData, F: MotSeries, prec: int, var: str = "T") -> MotSeries:
    """T_alpha -> T^{rho'_alpha}."""
    return F.substitute([(None, (data.rho_prime(a),)) for a in data.labels], (var,), (prec,))


@dataclass
class GlobalZeta:
    zeta: MotSeries               # Z(T, 0) truncated
    a: int
    r: int
    numerator: MotSeries          # zeta * (1 - (L T)^a)^r

    def to_json(self) -> dict:
        enc = (lambda c: c.to_list()) if isinstance(self.zeta.one, EPoly) else str
        return {"a": self.a, "r": self.r,
                "zeta": [enc(c) for c in self.zeta.coefficient_list()],
                "numerator": [enc(c) for c in self.numerator.coefficient_list()]}


def _degree_factor(data, prec, q, e):
    loc = local_factor_trivial(data, prec, q, e)
    sp = specialize(data, loc, prec)
    # T -> T^e
    return sp.substitute([(None, (e,))], ("T",), (prec,))


def global_zeta_trivial(data: CompactificationData, prec: int, q: int | None = None,
                        census: Sequence[int] | None = None) -> GlobalZeta:
    """Euler product of the trivial-character local factors over the curve."""
    if prec < 0:
        raise ValueError("prec must be non-negative")
    one = EPoly.const(1) if q is None else 1
    if q is not None:
        if census is None:
            census = CountAvatar(data.curve, q).census(prec)
        if len(census) < prec + 1:
            raise TruncationError("census shorter than the precision")
        cen = list(census)
        cen[1] -= len(data.bad)
        if cen[1] < 0:
            raise ValueError("more bad places than rational points")
        out = MotSeries.constant(("T",), (prec,), 1, 1)
        for e in range(1, prec + 1):
            if not cen[e]:
                continue
            fac = _degree_factor(data, prec, q, e)
            c0 = fac.constant_term()
            if c0 == 0:
                raise ValueError("local factor with zero constant term")
            if c0 != 1:
                out = out * Fraction(c0) ** cen[e]
                fac = fac * Fraction(1, c0)
            out = out * (fac.log() * cen[e]).exp()
        Lq = q
    else:
        fac = specialize(data, local_factor_trivial(data, prec), prec)
        if fac.constant_term() != one:
            raise ValueError("E-avatar product needs local factors with constant term 1")
        X = hd_measure(data.curve) - len(data.bad)
        out = plethystic_exp(plethystic_log(fac) * X)
        Lq = EPoly.L()
    for lab, rec in data.bad.items():
        bf = local_factor_trivial(data, prec, q, 1, rec["strata"])
        out = out * specialize(data, bf, prec)
    r = pole_order(data)
    rp = [data.rho_prime(x) for x in data.labels]
    a = lcm(*rp) if rp else 1
    pole = MotSeries.constant(("T",), (prec,), one, one) - MotSeries.monomial(("T",), (prec,), (a,), one * Lq ** a, one)
    num = out * pole ** r
    if q is not None:
        out = out.map_coefficients(_int_if_possible)
        num = num.map_coefficients(_int_if_possible)
    return GlobalZeta(out, a, r, num)


def rational_part_check(data: CompactificationData, prec: int, q: int) -> bool:
    """Counting avatar: Z(T,0) = G(T) * prod_alpha Z_{C_0}(q^{rho-1} T^rho), with G the regular part.

    G is assembled independently as the Euler product of
    Z_v * prod_alpha (1 - q_v^{rho-1} T^{rho deg v}) and Z_C comes from the
    point counts of the curve, so the identity ties the local formula to the
    zeta function of the base.
    """
    census = CountAvatar(data.curve, q).census(prec)
    counts = CountAvatar(data.curve, q).counts(prec)
    ZC = counting_zeta(counts, prec, "T")
    cen = list(census)
    cen[1] -= len(data.bad)
    pole_labels = [x for x in data.labels if x not in data.A_D]
    G = MotSeries.constant(("T",), (prec,), 1, 1)
    for e in range(1, prec + 1):
        if not cen[e]:
            continue
        fac = _degree_factor(data, prec, q, e)
        for x in pole_labels:
            rho = data.rho[x]
            fac = fac * (1 - MotSeries.monomial(("T",), (prec,), (rho * e,), q ** (e * (rho - 1)), 1))
        G = G * fac ** cen[e]
    for lab, rec in data.bad.items():
        G = G * specialize(data, local_factor_trivial(data, prec, q, 1, rec["strata"]), prec)
    rhs = G
    for x in pole_labels:
        rho = data.rho[x]
        zc = ZC.substitute([(Fraction(q ** (rho - 1)), (rho,))], ("T",), (prec,))
        # remove the bad rational places from Z_C
        for _ in data.bad:
            zc = zc * (1 - MotSeries.monomial(("T",), (prec,), (rho,), q ** (rho - 1), 1))
        rhs = rhs * zc
    return rhs == global_zeta_trivial(data, prec, q).zeta


def _int_if_possible(c):
    c = Fraction(c)
    return int(c) if c.denominator == 1 else c


def schanuel_oracle(q: int, d: int) -> int:
    """#{x in F_q(t) : max(deg num, deg den) = d} by coprime-pair enumeration (prime q)."""
    p, k = prime_power(q)
    if k != 1:
        raise ValueError("the direct enumeration supports prime q only")
    if d < 0:
        raise ValueError("d must be non-negative")
    return int(kernels.coprime_height_counts(p, d)[d])


def schanuel_table(q: int, dmax: int) -> list[int]:
    p, k = prime_power(q)
    if k != 1:
        raise ValueError("the direct enumeration supports prime q only")
    return [int(x) for x in kernels.coprime_height_counts(p, dmax)]


def schanuel_ratios(q: int, dmax: int) -> list[Fraction]:
    """Consecutive ratios of N(d) q^{-2d}, for d = 1..dmax."""
    N = schanuel_table(q, dmax)
    norm = [Fraction(N[d], q ** (2 * d)) for d in range(dmax + 1)]
    return [norm[d] / norm[d - 1] for d in range(1, dmax + 1)]
