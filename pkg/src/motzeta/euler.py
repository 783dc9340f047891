"""Euler products of constant families over a base, in both avatars.

Counting avatar: a literal product over closed points, each factor read over
the residue field.  E-avatar: the power structure Exp([X] Log F) built from
Adams operations.  ``config_oracle`` recomputes a coefficient by enumerating
effective zero-cycles one closed point at a time.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Any, Mapping, Sequence

from .epoly import EPoly
from .fields import find_root, gf, mobius, monic_irreducibles
from .lambda_ring import sympow
from .partitions import compositions
from .series import MotSeries
from .varieties import BoundsError, CountAvatar, UnsupportedVariety, hd_measure

ORACLE_CAP = 10 ** 7
Exp = tuple[int, ...]


# -- coefficient classes ----------------------------------------------------

def class_count(c, q: int, e: int = 1):
    """Counting value of a class over F_{q^e}."""
    if isinstance(c, (int, Fraction)):
        return c
    if isinstance(c, EPoly):
        return c.at_uv(q ** e)
    if isinstance(c, Mapping):
        return CountAvatar(c, q).count(e)
    raise TypeError(f"cannot count class {c!r}")


def class_epoly(c) -> EPoly:
    if isinstance(c, EPoly):
        return c
    if isinstance(c, (int, Fraction)):
        return EPoly.const(c)
    if isinstance(c, Mapping):
        return hd_measure(c)
    raise TypeError(f"no E-polynomial for {c!r}")


def _class_json(c):
    if isinstance(c, EPoly):
        return {"epoly": c.to_list()}
    if isinstance(c, Fraction):
        return str(c)
    return c


def parse_class(x):
    if isinstance(x, Mapping) and "epoly" in x:
        return EPoly.from_list(x["epoly"])
    if isinstance(x, Mapping) and "L" in x:
        # shorthand {"L": k, "c": coeff}
        return EPoly.L(int(x["L"])) * x.get("c", 1)
    if isinstance(x, str):
        return Fraction(x)
    return x


# -- families ---------------------------------------------------------------

@dataclass
class LocalFactorFamily:
    """Constant family 1 + sum_i X_i t^i over ``base``, with marked-point overrides.

    ``overrides`` maps a rational-point label to a full factor (exponent ->
    class, the zero exponent being the constant term X_0 at that point).
    """

    base: Mapping
    coeffs: dict[Exp, Any]
    nvars: int = 1
    overrides: dict[Any, dict[Exp, Any]] = field(default_factory=dict)

    def __post_init__(self):
        self.coeffs = {tuple(e) if not isinstance(e, int) else (e,): c for e, c in self.coeffs.items()}
        zero = (0,) * self.nvars
        if zero in self.coeffs:
            raise ValueError("generic factor has constant term 1; use overrides for X_0")
        for e in self.coeffs:
            if len(e) != self.nvars:
                raise ValueError("coefficient arity mismatch")
        ov = {}
        for lab, fac in self.overrides.items():
            fac = {tuple(e) if not isinstance(e, int) else (e,): c for e, c in fac.items()}
            fac.setdefault(zero, 1)
            ov[lab] = fac
        self.overrides = ov

    @property
    def variables(self) -> tuple[str, ...]:
        return ("t",) if self.nvars == 1 else tuple(f"t{i + 1}" for i in range(self.nvars))

    def with_base(self, base: Mapping, keep_overrides: bool = True) -> "LocalFactorFamily":
        return LocalFactorFamily(base, dict(self.coeffs), self.nvars,
                                 dict(self.overrides) if keep_overrides else {})

    def times(self, other: "LocalFactorFamily", bounds: Sequence[int]) -> "LocalFactorFamily":
        """Pointwise product of local factors, read in the E-avatar coefficient ring."""
        a = factor_series_E(self.coeffs, self.variables, bounds)
        b = factor_series_E(other.coeffs, self.variables, bounds)
        c = a * b
        zero = (0,) * self.nvars
        return LocalFactorFamily(self.base, {e: v for e, v in c.coeffs.items() if e != zero},
                                 self.nvars)

    def to_json(self) -> dict:
        return {"base": self.base, "nvars": self.nvars,
                "coeffs": [[list(e), _class_json(c)] for e, c in sorted(self.coeffs.items())]}

    @classmethod
    def from_json(cls, d: Mapping) -> "LocalFactorFamily":
        nv = int(d.get("nvars", 1))
        coeffs = {tuple(e) if isinstance(e, list) else (e,): parse_class(c) for e, c in d["coeffs"]}
        ov = {}
        for lab, fac in d.get("overrides", {}).items():
            lab = "inf" if lab == "inf" else int(lab)
            ov[lab] = {tuple(e) if isinstance(e, list) else (e,): parse_class(c) for e, c in fac}
        return cls(d["base"], coeffs, nv, ov)


def geometric_family(base: Mapping, prec: int) -> LocalFactorFamily:
    """(1 - t)^-1 at every point."""
    return LocalFactorFamily(base, {(i,): 1 for i in range(1, prec + 1)})


def linear_family(base: Mapping, c=1, deg: int = 1) -> LocalFactorFamily:
    """1 + c t^deg."""
    return LocalFactorFamily(base, {(deg,): c})


def _bounds(prec, nvars: int) -> tuple[int, ...]:
    if isinstance(prec, int):
        return (prec,) * nvars
    return tuple(prec)


def factor_series_E(coeffs: Mapping[Exp, Any], variables, bounds, const=1) -> MotSeries:
    one = EPoly.const(1)
    c = {e: class_epoly(v) for e, v in coeffs.items()}
    zero = (0,) * len(variables)
    c[zero] = class_epoly(c.get(zero, const)) if zero in c else class_epoly(const)
    return MotSeries(variables, bounds, c, one)


def factor_series_count(coeffs: Mapping[Exp, Any], variables, bounds, q: int, e: int,
                        const=1) -> MotSeries:
    """F over F_{q^e} with t_i -> t_i^e."""
    c: dict[Exp, Any] = {}
    zero = (0,) * len(variables)
    for ex, v in coeffs.items():
        ee = tuple(e * x for x in ex)
        if all(x <= b for x, b in zip(ee, bounds)):
            c[ee] = class_count(v, q, e)
    if zero not in c:
        c[zero] = class_count(const, q, e)
    return MotSeries(variables, bounds, c, 1)


# -- closed points ----------------------------------------------------------

def closed_points(base: Mapping, q: int, dmax: int) -> list[tuple[Any, int]]:
    """Explicit closed points (label, degree) of degree <= dmax for the line-like bases."""
    kind = base.get("kind")
    pts: list[tuple[Any, int]] = []
    if kind in ("affine", "projective", "gm") and (kind == "gm" or base.get("n", 1) == 1):
        for d in range(1, dmax + 1):
            for f in monic_irreducibles(q, d):
                if kind == "gm" and f == (0, 1):
                    continue
                lab = _rational_label(q, f) if d == 1 else f
                pts.append((lab, d))
        if kind == "projective":
            pts.insert(0, ("inf", 1))
        return pts
    if kind == "point":
        return [("pt", 1)]
    if kind == "points":
        return [(f"pt{i}", 1) for i in range(int(base["n"]))]
    raise UnsupportedVariety(f"no closed-point enumeration for base {kind!r}")


def _rational_label(q: int, f) -> int:
    # t - c = (-c, 1): the label is c
    return int(gf(q).neg[f[0]])


def base_class(base: Mapping) -> EPoly:
    return hd_measure(base)


# -- Euler products ------------------------------------------------------------

def euler_product_count(F: LocalFactorFamily, q: int, prec) -> MotSeries:
    bounds = _bounds(prec, F.nvars)
    dmax = max(bounds)
    census = CountAvatar(F.base, q).census(dmax)
    n_marked = len(F.overrides)
    if n_marked and census[1] < n_marked:
        raise ValueError("more marked points than rational points")
    census[1] -= n_marked
    vs = F.variables
    out = MotSeries.constant(vs, bounds, 1, 1)
    for e in range(1, dmax + 1):
        if census[e]:
            loc = factor_series_count(F.coeffs, vs, bounds, q, e)
            out = out * (loc ** census[e])
    for fac in F.overrides.values():
        out = out * factor_series_count(fac, vs, bounds, q, 1)
    return out


def plethystic_log(f: MotSeries) -> MotSeries:
    lg = f.log()
    top = sum(f.bounds)
    out = f * 0
    for k in range(1, top + 1):
        mu = mobius(k)
        if mu:
            out = out + lg.adams(k) * Fraction(mu, k)
    return out


def plethystic_exp(g: MotSeries) -> MotSeries:
    top = sum(g.bounds)
    s = g * 0
    for k in range(1, top + 1):
        s = s + g.adams(k) * Fraction(1, k)
    return s.exp()


def euler_product_E(F: LocalFactorFamily, prec) -> MotSeries:
    bounds = _bounds(prec, F.nvars)
    vs = F.variables
    X = base_class(F.base) - len(F.overrides)
    loc = factor_series_E(F.coeffs, vs, bounds)
    out = plethystic_exp(plethystic_log(loc) * X)
    for fac in F.overrides.values():
        out = out * factor_series_E(fac, vs, bounds)
    return out


def euler_product(F: LocalFactorFamily, prec, q: int | None = None) -> MotSeries:
    """Counting avatar when q is given, E-avatar otherwise."""
    return euler_product_count(F, q, prec) if q is not None else euler_product_E(F, prec)


def config_oracle(F: LocalFactorFamily, q: int, n: Sequence[int] | int):
    """Coefficient of t^n by enumerating effective zero-cycles on the base over F_q."""
    n = (n,) if isinstance(n, int) else tuple(n)
    if len(n) != F.nvars:
        raise ValueError("exponent arity mismatch")
    dmax = max(sum(n), 1)
    pts = closed_points(F.base, q, dmax)
    for lab in F.overrides:
        if not any(lab == p for p, _ in pts):
            raise ValueError(f"marked point {lab!r} not on the base")
    zero = (0,) * F.nvars

    def local(lab, deg):
        fac = F.overrides.get(lab)
        coeffs = fac if fac is not None else F.coeffs
        const = class_count(coeffs.get(zero, 1), q, deg)
        opts = []
        for ex, c in coeffs.items():
            if ex == zero:
                continue
            ee = tuple(deg * x for x in ex)
            if all(a <= b for a, b in zip(ee, n)):
                v = class_count(c, q, deg)
                if v:
                    opts.append((ee, v))
        return const, opts

    locs = [local(lab, d) for lab, d in pts]
    # product of constant terms from index j on (used once the budget is spent)
    suffix = [1] * (len(locs) + 1)
    for j in range(len(locs) - 1, -1, -1):
        suffix[j] = suffix[j + 1] * locs[j][0]
    visited = 0

    def rec(j, rem):
        nonlocal visited
        visited += 1
        if visited > ORACLE_CAP:
            raise BoundsError("configuration enumeration exceeds the cap")
        if not any(rem):
            return suffix[j]
        if j == len(locs):
            return 0
        const, opts = locs[j]
        total = const * rec(j + 1, rem) if const else 0
        for ee, v in opts:
            r2 = tuple(a - b for a, b in zip(rem, ee))
            if min(r2) >= 0:
                total += v * rec(j + 1, r2)
        return total

    return rec(0, n)


# -- identity checkers ------------------------------------------------------

def cut_and_paste_check(F: LocalFactorFamily, U: Mapping, Y: Mapping | None, prec,
                        q: int | None = None) -> bool:
    whole = euler_product(F.with_base(F.base, keep_overrides=False), prec, q)
    left = euler_product(F.with_base(U, keep_overrides=False), prec, q)
    if Y is None:
        return whole == left
    right = euler_product(F.with_base(Y, keep_overrides=False), prec, q)
    return whole == left * right


def totaro_check(F: LocalFactorFamily, m: Sequence[int], prec, q: int | None = None) -> bool:
    """Z(L^m t) = Euler product of the family X_i L^{<m, i>}."""
    bounds = _bounds(prec, F.nvars)
    m = tuple(m)
    lhs = euler_product(F, bounds, q)
    if q is None:
        images = [(EPoly.L(mi), tuple(1 if j == i else 0 for j in range(F.nvars)))
                  for i, mi in enumerate(m)]
    else:
        images = [(q ** mi, tuple(1 if j == i else 0 for j in range(F.nvars)))
                  for i, mi in enumerate(m)]
    lhs = lhs.substitute(images, F.variables, bounds)

    def twist(c, e):
        k = sum(a * b for a, b in zip(m, e))
        return class_epoly(c) * EPoly.L(k)

    G = LocalFactorFamily(F.base, {e: twist(c, e) for e, c in F.coeffs.items()}, F.nvars,
                          {lab: {e: twist(c, e) for e, c in fac.items()}
                           for lab, fac in F.overrides.items()})
    return lhs == euler_product(G, bounds, q)


def sym_minus_check(Y: EPoly, m: int) -> bool:
    lhs = sympow(-Y, m)
    rhs = EPoly.const(1) if m == 0 else EPoly()
    for mu in compositions(m):
        term = EPoly.const((-1) ** len(mu))
        for part in mu:
            term = term * sympow(Y, part)
        rhs = rhs + term
    return lhs == rhs


def mult_check(F: LocalFactorFamily, G: LocalFactorFamily, prec, q: int | None = None) -> bool:
    bounds = _bounds(prec, F.nvars)
    FG = F.times(G, bounds)
    return euler_product(FG, bounds, q) == euler_product(F, bounds, q) * euler_product(G, bounds, q)


def mult_check_oracle(F: LocalFactorFamily, G: LocalFactorFamily, q: int, prec: int) -> bool:
    """Both sides of mult_check evaluated through config_oracle (one variable)."""
    bounds = _bounds(prec, F.nvars)
    FG = F.times(G, bounds)
    a = [config_oracle(FG, q, (n,)) for n in range(prec + 1)]
    f = MotSeries.univariate([config_oracle(F, q, (n,)) for n in range(prec + 1)], prec)
    g = MotSeries.univariate([config_oracle(G, q, (n,)) for n in range(prec + 1)], prec)
    return MotSeries.univariate(a, prec) == f * g


def double_product_check(tower: Mapping, F: LocalFactorFamily, prec: int, q: int) -> bool:
    """Product over R of fibrewise products equals the product over X (counting avatar)."""
    bounds = _bounds(prec, F.nvars)
    vs = F.variables
    kind = tower.get("kind")
    R = tower["base"] if "base" in tower else {"kind": "gm"}
    lhs = MotSeries.constant(vs, bounds, 1, 1)
    if kind == "trivial_cover":
        k = int(tower["sheets"])
        for lab, d in closed_points(R, q, max(bounds)):
            lhs = lhs * factor_series_count(F.coeffs, vs, bounds, q, d) ** k
        X = {"kind": "union", "parts": [R] * k}
    elif kind == "squaring_cover":
        if q % 2 == 0:
            raise UnsupportedVariety("squaring cover needs odd q")
        for lab, d in closed_points(R, q, max(bounds)):
            poly = (int(gf(q).neg[lab]), 1) if d == 1 else lab
            theta = find_root(q, poly, d)
            if gf(q ** d).is_square(theta):
                lhs = lhs * factor_series_count(F.coeffs, vs, bounds, q, d) ** 2
            else:
                lhs = lhs * factor_series_count(F.coeffs, vs, bounds, q, 2 * d)
        X = {"kind": "gm"}
    elif kind == "identity":
        for lab, d in closed_points(R, q, max(bounds)):
            lhs = lhs * factor_series_count(F.coeffs, vs, bounds, q, d)
        X = R
    else:
        raise UnsupportedVariety(f"unknown cover {kind!r}")
    rhs = euler_product_count(F.with_base(X, keep_overrides=False), q, bounds)
    return lhs == rhs


def const_term_product(F: LocalFactorFamily, prec, q: int | None = None) -> MotSeries:
    """Euler product with constant terms X_0 at marked points, via the E-indexed sum.

    Coefficient of t^pi = sum over E within the marked set of the product over
    unmarked points, the non-constant parts at points of E, and X_0 at the
    remaining marked points.
    """
    bounds = _bounds(prec, F.nvars)
    vs = F.variables
    zero = (0,) * F.nvars
    plain = F.with_base(F.base, keep_overrides=False)
    plain.overrides = {lab: {zero: 1} for lab in F.overrides}
    # the unmarked part: base minus marked points (their factor set to 1)
    rest = euler_product(plain, bounds, q)

    def ser(coeffs):
        if q is None:
            return factor_series_E(coeffs, vs, bounds)
        return factor_series_count(coeffs, vs, bounds, q, 1)

    def const(c):
        return class_epoly(c) if q is None else class_count(c, q, 1)

    marked = list(F.overrides.items())
    total = rest * 0
    for choice in product((False, True), repeat=len(marked)):
        term = rest
        for inE, (lab, fac) in zip(choice, marked):
            if inE:
                nonconst = {e: c for e, c in fac.items() if e != zero}
                term = term * (ser({**nonconst, zero: 0}))
            else:
                term = term * const(fac.get(zero, 1))
        total = total + term
    return total


def random_family(rng, base: Mapping, prec: int, nvars: int = 1, terms: int = 3) -> LocalFactorFamily:
    """Seeded family with mixed-sign coefficients c L^k, c in [-2, 2], k in {0, 1}."""
    coeffs: dict[Exp, Any] = {}
    for _ in range(terms):
        e = tuple(int(x) for x in rng.integers(0, prec + 1, size=nvars))
        if not any(e):
            continue
        c = int(rng.integers(-2, 3))
        k = int(rng.integers(0, 2))
        if c:
            coeffs[e] = EPoly.L(k) * c
    if not coeffs:
        coeffs[(1,) + (0,) * (nvars - 1)] = EPoly.const(-1)
    return LocalFactorFamily(base, coeffs, nvars)
