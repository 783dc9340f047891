"""Catalog varieties, their two avatars, and brute-force enumerators.

A variety is described by a small tree of descriptors:

    {"kind": "affine", "n": 2}
    {"kind": "projective", "n": 1}
    {"kind": "gm"} / {"kind": "point"} / {"kind": "points", "n": 3}
    {"kind": "elliptic", "q": 5, "a": 1}          # Weil numerator 1 + a t + q t^2
    {"kind": "curve", "genus": g, "q": q, "weil": [1, c1, ..., q^g]}
    {"kind": "fermat", "n": 2, "c": 0}            # x^n + y^n = c, c in {0, 1}, inside G_m^2
    {"kind": "etilde"}                             # two points swapped by mu_2
    {"kind": "product", "factors": [...]} / {"kind": "union", "parts": [...]}
    {"kind": "affine_spec", "vars": ["x", "y"], "equations": [...], "nonzero": [...]}
"""
from __future__ import annotations

from typing import Mapping, Sequence

import numpy as np
import sympy

from . import kernels
from .cyclo import CycloValue
from .epoly import EPoly
from .fields import divisors, gf, mobius, prime_power


class UnsupportedVariety(ValueError):
    pass


class BoundsError(ValueError):
    pass


# -- affine specifications ------------------------------------------------

class AffineSpec:
    """Closed subscheme of an open subset of A^n cut out by integer polynomials."""

    def __init__(self, variables: Sequence[str], equations: Sequence[str] = (),
                 nonzero: Sequence[str] = ()):
        self.vars = tuple(variables)
        self._syms = sympy.symbols(self.vars) if self.vars else ()
        self.equations = [self._parse(e) for e in equations]
        self.nonzero = [self._parse(e) for e in nonzero]

    def _parse(self, expr):
        if isinstance(expr, Mapping):
            return {tuple(k): int(v) for k, v in expr.items()}
        try:
            poly = sympy.Poly(sympy.sympify(expr), *self._syms)
        except (sympy.SympifyError, sympy.PolynomialError, TypeError) as exc:
            raise ValueError(f"cannot parse polynomial {expr!r}") from exc
        out = {}
        for k, c in poly.as_dict().items():
            if not c.is_integer:
                raise ValueError(f"non-integer coefficient in {expr!r}")
            out[tuple(int(x) for x in k)] = int(c)
        return out

    def parse_function(self, expr) -> dict:
        return self._parse(expr)

    @classmethod
    def from_json(cls, d: Mapping) -> "AffineSpec":
        return cls(d["vars"], d.get("equations", ()), d.get("nonzero", ()))


def _compile(F, polys_kinds, nvars):
    exps, coefs, owner, kinds = [], [], [], []
    for j, (poly, kind) in enumerate(polys_kinds):
        kinds.append(kind)
        for e, c in poly.items():
            ce = c % F.p
            if ce == 0:
                continue
            exps.append(list(e) if nvars else [])
            coefs.append(ce)
            owner.append(j)
    if not exps:
        exps = np.zeros((0, max(nvars, 1)), dtype=np.int64)
    return (np.asarray(exps, dtype=np.int64).reshape(-1, max(nvars, 1)),
            np.asarray(coefs, dtype=np.int64), np.asarray(owner, dtype=np.int64),
            np.asarray(kinds, dtype=np.int64))


MAX_ENUMERATION = 5 * 10 ** 7


def value_histogram(aff: AffineSpec, f: Mapping | None, Q: int) -> np.ndarray:
    """h[c] = #{x in X(F_Q) : f(x) = c}, with elements of F_Q encoded as in GF."""
    F = gf(Q)
    n = len(aff.vars)
    if n == 0:
        ok = all(poly.get((), 0) % F.p == 0 for poly in aff.equations) and all(
            poly.get((), 0) % F.p != 0 for poly in aff.nonzero)
        h = np.zeros(Q, dtype=np.int64)
        if ok:
            h[(f or {}).get((), 0) % F.p] += 1
        return h
    if Q ** n > MAX_ENUMERATION:
        raise BoundsError(f"enumeration of {Q}^{n} points exceeds the bound")
    if F.add_table is None:
        raise BoundsError(f"brute force over F_{Q} needs full tables (Q <= 1024)")
    items = [(p, 0) for p in aff.equations] + [(p, 1) for p in aff.nonzero]
    if f is not None:
        items.append((f, 2))
    exps, coefs, owner, kinds = _compile(F, items, n)
    # pad the exponent matrix when the system carries no monomials at all
    if exps.shape[1] != n:
        exps = np.zeros((0, n), dtype=np.int64)
    return kernels.system_histogram(F.add_table, F.mul_table, Q, n, exps, coefs, owner, kinds)


def brute_count(aff: AffineSpec, Q: int) -> int:
    return int(value_histogram(aff, None, Q).sum())


def exp_sum(aff: AffineSpec, f, q: int) -> CycloValue:
    """sum_{x in X(F_q)} psi(Tr f(x)) with psi(a) = zeta_p^a on F_p."""
    if not isinstance(f, Mapping):
        f = aff.parse_function(f)
    F = gf(q)
    h = value_histogram(aff, f, q)
    powers = [0] * F.p
    for c, cnt in enumerate(h.tolist()):
        if cnt:
            powers[int(F.trace[c])] += cnt
    return CycloValue.from_powers(F.p, powers)


# -- catalog --------------------------------------------------------------

def _weil_roots_power_sums(weil: Sequence[int], m_max: int) -> list[int]:
    """Power sums s_m = sum alpha_i^m of the reciprocal roots of P(t) = prod(1 - alpha_i t)."""
    # Newton identities with e_k = (-1)^k c_k
    c = list(weil)
    deg = len(c) - 1
    e = [(-1) ** k * c[k] for k in range(deg + 1)]
    s = [deg]
    for m in range(1, m_max + 1):
        acc = (-1) ** (m - 1) * m * e[m] if m <= deg else 0
        for i in range(1, m):
            if i <= deg:
                acc += (-1) ** (i - 1) * e[i] * s[m - i]
        s.append(acc)
    return s


class CountAvatar:
    """Point counts N_m = #X(F_{q^m}) for a catalog descriptor over F_q."""

    def __init__(self, desc: Mapping, q: int | None = None):
        self.desc = dict(desc)
        q = q if q is not None else desc.get("q")
        if q is None:
            raise ValueError("counting avatar needs q")
        prime_power(q)
        if "q" in desc and desc["q"] != q and desc["kind"] in ("elliptic", "curve"):
            raise ValueError(f"descriptor fixed over F_{desc['q']}, asked for q={q}")
        self.q = int(q)
        self._cache: dict[int, int] = {}

    def count(self, m: int) -> int:
        if m < 1:
            raise ValueError("m must be positive")
        if m not in self._cache:
            self._cache[m] = _count(self.desc, self.q, m)
        return self._cache[m]

    def counts(self, m_max: int) -> list[int]:
        return [self.count(m) for m in range(1, m_max + 1)]

    def census(self, d_max: int) -> list[int]:
        """a_d = number of closed points of degree d, for d = 1..d_max (index 0 unused)."""
        out = [0]
        for d in range(1, d_max + 1):
            s = sum(mobius(e) * self.count(d // e) for e in divisors(d))
            if s % d:
                raise ArithmeticError("non-integral closed-point census")
            out.append(s // d)
        return out

    def brute_force(self, m: int) -> int:
        return brute_force_count(self.desc, self.q, m)


def count_points(desc: Mapping | CountAvatar, q: int, m: int = 1) -> int:
    prime_power(q)
    if isinstance(desc, CountAvatar):
        return desc.count(m)
    return _count(desc, q, m)


def _count(d: Mapping, q: int, m: int) -> int:
    kind = d.get("kind")
    Q = q ** m
    if kind == "affine":
        return Q ** d["n"]
    if kind == "projective":
        return sum(Q ** i for i in range(d["n"] + 1))
    if kind == "gm":
        return Q - 1
    if kind == "point":
        return 1
    if kind == "points":
        return int(d["n"])
    if kind == "etilde":
        # two F_q-points; the mu_2 action does not change the count
        return 2
    if kind == "elliptic":
        s = _weil_roots_power_sums([1, d["a"], d["q"]], m)
        return Q + 1 - s[m]
    if kind == "curve":
        s = _weil_roots_power_sums(d["weil"], m)
        return Q + 1 - s[m]
    if kind == "fermat":
        return _fermat_count(d["n"], d.get("c", 0), Q)
    if kind == "product":
        out = 1
        for f in d["factors"]:
            out *= _count(f, q, m)
        return out
    if kind == "union":
        return sum(_count(f, q, m) for f in d["parts"])
    if kind == "affine_spec":
        return brute_count(AffineSpec.from_json(d), Q)
    raise UnsupportedVariety(f"unknown catalog entry {kind!r}")


def _fermat_count(n: int, c: int, Q: int) -> int:
    """#{(x, y) in G_m^2 : x^n + y^n = c} over F_Q, by enumeration of n-th powers."""
    F = gf(Q)
    xs = np.arange(1, Q)
    pw = F.pow(xs, n)
    hist = np.bincount(pw, minlength=Q)
    total = 0
    cc = c % F.p
    for a in range(1, Q):
        if hist[a]:
            b = F.s_add(cc, F.s_neg(a))
            if b:
                total += int(hist[a]) * int(hist[b])
    return total


def brute_force_count(d: Mapping, q: int, m: int) -> int:
    """Independent count from equations (small fields only)."""
    kind = d.get("kind")
    Q = q ** m
    if kind == "elliptic":
        return elliptic_brute(d, Q)
    if kind == "affine":
        return brute_count(AffineSpec([f"x{i}" for i in range(d["n"])]), Q)
    if kind == "gm":
        return brute_count(AffineSpec(["x"], [], ["x"]), Q)
    if kind == "projective":
        # standard cells A^n, A^(n-1), ..., A^0
        return sum(brute_count(AffineSpec([f"x{i}" for i in range(k)]), Q) for k in range(d["n"] + 1))
    if kind == "fermat":
        n, c = d["n"], d.get("c", 0)
        return brute_count(AffineSpec(["x", "y"], [f"x**{n} + y**{n} - {c}"], ["x", "y"]), Q)
    if kind in ("point", "points", "etilde"):
        return _count(d, q, m)
    if kind == "product":
        out = 1
        for f in d["factors"]:
            out *= brute_force_count(f, q, m)
        return out
    if kind == "union":
        return sum(brute_force_count(f, q, m) for f in d["parts"])
    if kind == "affine_spec":
        return brute_count(AffineSpec.from_json(d), Q)
    raise UnsupportedVariety(f"no brute-force enumerator for {kind!r}")


# -- elliptic curves -------------------------------------------------------

def _cubic_values(F, A: int, B: int, xs: np.ndarray) -> np.ndarray:
    x2 = F.mul(xs, xs)
    x3 = F.mul(x2, xs)
    return F.add(F.add(x3, F.mul(A, xs)), B)


def elliptic_model(q: int, a: int) -> tuple[int, int]:
    """Short Weierstrass y^2 = x^3 + A x + B over prime q > 3 with #E(F_q) = q + 1 + a."""
    p, k = prime_power(q)
    if k != 1 or p <= 3:
        raise UnsupportedVariety("explicit elliptic models need a prime q > 3")
    F = gf(q)
    xs = np.arange(q)
    for A in range(q):
        for B in range(q):
            if (4 * A ** 3 + 27 * B ** 2) % q == 0:
                continue
            vals = _cubic_values(F, A, B, xs)
            n = 1 + int(np.sum(np.where(vals == 0, 1, np.where(F.is_square(vals), 2, 0))))
            if n == q + 1 + a:
                return A, B
    raise UnsupportedVariety(f"no elliptic curve over F_{q} with {q + 1 + a} points")


def elliptic_brute(d: Mapping, Q: int) -> int:
    """#E(F_Q) for the model of d, counting y for every x by a square test."""
    q = d["q"]
    A, B = d.get("model") or elliptic_model(q, d["a"])
    F = gf(Q)
    xs = np.arange(Q)
    vals = _cubic_values(F, F.embed_int(A), F.embed_int(B), xs)
    return 1 + int(np.sum(np.where(vals == 0, 1, np.where(F.is_square(vals), 2, 0))))


# -- Hodge-Deligne avatar --------------------------------------------------

def hd_measure(d: Mapping) -> EPoly:
    """Compactly supported E-polynomial of a catalog variety."""
    kind = d.get("kind")
    L = EPoly.L()
    if kind == "affine":
        return L ** d["n"]
    if kind == "projective":
        return sum((L ** i for i in range(d["n"] + 1)), EPoly())
    if kind == "gm":
        return L - 1
    if kind == "point":
        return EPoly.const(1)
    if kind == "points":
        return EPoly.const(int(d["n"]))
    if kind == "etilde":
        return EPoly.const(2)
    if kind in ("elliptic", "curve"):
        g = 1 if kind == "elliptic" else int(d["genus"])
        # (-1)^(p+q) h^{p,q}: the H^1 classes carry sign -1
        return EPoly({(0, 0): 1, (1, 0): -g, (0, 1): -g, (1, 1): 1})
    if kind == "fermat":
        return _fermat_hd(d["n"], d.get("c", 0))
    if kind == "product":
        out = EPoly.const(1)
        for f in d["factors"]:
            out = out * hd_measure(f)
        return out
    if kind == "union":
        return sum((hd_measure(f) for f in d["parts"]), EPoly())
    raise UnsupportedVariety(f"no Hodge-Deligne data for {kind!r}")


def _fermat_hd(n: int, c: int) -> EPoly:
    L = EPoly.L()
    if n == 1:
        # x + y = c in G_m^2
        return L - 1 if c == 0 else L - 2
    if n == 2:
        # c = 0: two lines y = +-ix minus origin; c = 1: conic minus 4 points
        return 2 * (L - 1) if c == 0 else L - 1 - 4
    raise UnsupportedVariety("Fermat curves only for n in {1, 2}")


def dimension(d: Mapping) -> int:
    deg = hd_measure(d).degree()
    return int(deg) // 2
