"""Schwartz-Bruhat functions on local fields of F_q(t), Fourier transforms and Poisson summation.

Conventions
-----------
* Places of P^1 over F_q: finite places are monic irreducible polynomials pi with
  a chosen root theta in the residue field F_Q (Q = q^deg); the uniformizer is
  t - theta inside F_Q((t - theta)).  The infinite place uses s = 1/t.
* The global form is omega = dt, so the conductor is 0 at finite places and 2
  at infinity, and r_v(x) = Tr_{F_Q/F_p} res_v(x dt).
* A function of level (M, N) in n variables is a table over
  (t^M O / t^N O)^n.  Carrier points are ordered lexicographically in the
  coordinates (x_1[M], ..., x_1[N-1], x_2[M], ...), first coordinate slowest,
  each coordinate being an encoded element of F_Q.
* Values live in Q(zeta_p).  Tables hold integer zeta-power coordinates
  (shape (size, p)) and a common rational scale.
"""
from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import ceil
from typing import Mapping, Sequence

import numpy as np

from . import kernels
from .cyclo import CycloValue
from .fields import PolyOps, embedding, find_root, gf, monic_irreducibles, prime_power
from .varieties import BoundsError

MAX_POINTS = 5_000_000
_INT64_SAFE = 1 << 62


# -- places -----------------------------------------------------------------

@dataclass(frozen=True)
class Place:
    q: int
    poly: tuple | None  # monic irreducible over F_q (low -> high); None at infinity

    @classmethod
    def finite(cls, q: int, c: int) -> "Place":
        """The degree-one place t = c."""
        return cls(q, (int(gf(q).neg[c]), 1))

    @classmethod
    def infinity(cls, q: int) -> "Place":
        return cls(q, None)

    @classmethod
    def closed(cls, q: int, poly: Sequence[int]) -> "Place":
        poly = tuple(int(c) for c in poly)
        if poly[-1] != 1 or not PolyOps(gf(q)).is_irreducible(poly):
            raise ValueError(f"{poly} is not monic irreducible over F_{q}")
        return cls(q, poly)

    @property
    def is_infinite(self) -> bool:
        return self.poly is None

    @property
    def degree(self) -> int:
        return 1 if self.poly is None else len(self.poly) - 1

    @property
    def Q(self) -> int:
        return self.q ** self.degree

    @property
    def p(self) -> int:
        return prime_power(self.q)[0]

    @property
    def nu(self) -> int:
        return 2 if self.poly is None else 0

    @property
    def root(self) -> int:
        return _root(self.q, self.poly)

    @property
    def label(self):
        if self.poly is None:
            return "inf"
        if len(self.poly) == 2:
            return int(gf(self.q).neg[self.poly[0]])
        return list(self.poly)

    def sort_key(self):
        return (self.degree, self.poly is None, self.poly or ())

    def __repr__(self) -> str:
        return f"Place(q={self.q}, {self.label})"

    @classmethod
    def from_label(cls, q: int, lab) -> "Place":
        if lab == "inf":
            return cls.infinity(q)
        if isinstance(lab, int):
            return cls.finite(q, lab)
        return cls.closed(q, lab)


@lru_cache(maxsize=None)
def _root(q: int, poly: tuple | None) -> int:
    if poly is None:
        return 0
    return find_root(q, poly, len(poly) - 1)


def places_P1(q: int, dmax: int = 1) -> list[Place]:
    """Closed points of P^1 of degree <= dmax: infinity first, then by degree."""
    out = [Place.infinity(q)]
    for d in range(1, dmax + 1):
        out += [Place(q, f) for f in monic_irreducibles(q, d)]
    return out


# -- Laurent expansions of global functions ----------------------------------

def _poly_taylor_shift(F, coeffs: Sequence[int], theta: int) -> list[int]:
    """Coefficients of f(theta + s) in s."""
    out: list[int] = []
    for c in reversed(coeffs):
        # out = out * (theta + s) + c
        new = [0] * (len(out) + 1)
        for i, a in enumerate(out):
            new[i] = F.s_add(new[i], F.s_mul(a, theta))
            new[i + 1] = F.s_add(new[i + 1], a)
        new[0] = F.s_add(new[0], int(c))
        out = new
    return out


def _series_div(F, a: Sequence[int], b: Sequence[int], prec: int) -> list[int]:
    """a / b mod s^prec with b(0) != 0."""
    inv0 = F.s_inv(b[0])
    out = [0] * prec
    for k in range(prec):
        acc = a[k] if k < len(a) else 0
        for j in range(1, min(k, len(b) - 1) + 1):
            acc = F.s_add(acc, F.s_neg(F.s_mul(b[j], out[k - j])))
        out[k] = F.s_mul(acc, inv0)
    return out


def _strip(a: list[int]) -> tuple[int, list[int]]:
    v = 0
    while v < len(a) and a[v] == 0:
        v += 1
    return v, a[v:]


def expand(num: Sequence[int], den: Sequence[int], place: Place, M: int, N: int) -> list[int] | None:
    """Coordinates (x_M, ..., x_{N-1}) in F_Q of num/den at the place, or None if ord < M."""
    q = place.q
    Fq = gf(q)
    num = PolyOps.trim(num)
    den = PolyOps.trim(den)
    if not den:
        raise ZeroDivisionError("zero denominator")
    if not num:
        return [0] * (N - M)
    if place.is_infinite:
        F = Fq
        a = list(reversed(num))
        b = list(reversed(den))
        v = (len(den) - 1) - (len(num) - 1)
    else:
        emb = embedding(q, place.degree)
        F = emb.big
        th = place.root
        va, a = _strip(_poly_taylor_shift(F, emb(list(num)).tolist(), th))
        vb, b = _strip(_poly_taylor_shift(F, emb(list(den)).tolist(), th))
        v = va - vb
    if v < M:
        return None
    prec = N - v
    coeffs = _series_div(F, a, b, prec) if prec > 0 else []
    out = [0] * (N - M)
    for k, c in enumerate(coeffs):
        out[v + k - M] = c
    return out


# -- local functions ----------------------------------------------------------

@dataclass(frozen=True)
class LocalLevel:
    M: int
    N: int
    n: int = 1

    def __post_init__(self):
        if self.N < self.M:
            raise ValueError("level needs M <= N")
        if self.n < 1:
            raise ValueError("dimension must be >= 1")

    @property
    def width(self) -> int:
        return self.N - self.M

    def slots(self) -> int:
        return self.n * self.width

    def size(self, Q: int) -> int:
        return Q ** self.slots()

    def carrier(self, Q: int) -> np.ndarray:
        """All carrier points as an (size, slots) array of encoded elements."""
        K = self.slots()
        idx = np.arange(Q ** K, dtype=np.int64)
        out = np.zeros((len(idx), K), dtype=np.int64)
        for s in range(K - 1, -1, -1):
            out[:, s] = idx % Q
            idx //= Q
        return out

    def index(self, coords: Sequence[int], Q: int) -> int:
        i = 0
        for c in coords:
            i = i * Q + int(c)
        return i


class SBFunction:
    """A Schwartz-Bruhat function at one place: exact table on the carrier of its level."""

    __slots__ = ("place", "level", "table", "scale")

    def __init__(self, place: Place, level: LocalLevel, table, scale=Fraction(1)):
        self.place, self.level = place, level
        p = place.p
        t = np.asarray(table, dtype=object)
        if t.ndim == 1:
            t = t.reshape(-1, 1)
        if t.shape[1] < p:
            t = np.concatenate([t, np.zeros((t.shape[0], p - t.shape[1]), dtype=object)], axis=1)
        size = level.size(place.Q)
        if t.shape != (size, p):
            raise ValueError(f"table shape {t.shape} does not match carrier ({size}, {p})")
        self.table = t
        self.scale = Fraction(scale)

    # constructors
    @classmethod
    def indicator(cls, place: Place, level: LocalLevel, a: int | None = None) -> "SBFunction":
        """1 on t^a O inside the carrier (a = M gives the whole carrier)."""
        a = level.M if a is None else a
        if not level.M <= a <= level.N:
            raise ValueError("indicator radius outside the level")
        pts = level.carrier(place.Q)
        keep = np.ones(len(pts), dtype=bool)
        for i in range(level.n):
            for k in range(level.M, a):
                keep &= pts[:, i * level.width + (k - level.M)] == 0
        t = np.zeros((len(pts), place.p), dtype=object)
        t[:, 0] = keep.astype(np.int64)
        return cls(place, level, t)

    @classmethod
    def unit(cls, place: Place, n: int = 1) -> "SBFunction":
        """1_O at level (0, 1)."""
        return cls.indicator(place, LocalLevel(0, 1, n))

    @classmethod
    def random(cls, place: Place, level: LocalLevel, rng: np.random.Generator,
               density: float = 0.6, amp: int = 2) -> "SBFunction":
        size = level.size(place.Q)
        vals = rng.integers(-amp, amp + 1, size=(size, place.p))
        mask = rng.random(size) < density
        vals[~mask] = 0
        return cls(place, level, vals.astype(object))

    @classmethod
    def from_json(cls, d: Mapping) -> "SBFunction":
        q = int(d["q"])
        place = Place.from_label(q, d["place"])
        level = LocalLevel(int(d["M"]), int(d["N"]), int(d.get("n", 1)))
        p = place.p
        rows = [[Fraction(x) for x in v] for v in d["values"]]
        vals = [CycloValue(p, r) for r in rows]
        tab = np.zeros((len(vals), p), dtype=object)
        den = 1
        for v in vals:
            for c in v.coords:
                den = den * Fraction(c).denominator // np.gcd(den, Fraction(c).denominator)
        for i, v in enumerate(vals):
            pw = v.powers()
            for k in range(p):
                tab[i, k] = int(Fraction(pw[k]) * den)
        return cls(place, level, tab, Fraction(1, den))

    def to_json(self) -> dict:
        return {"q": self.place.q, "place": self.place.label, "M": self.level.M, "N": self.level.N,
                "n": self.level.n, "values": [self.value(i).to_json() for i in range(len(self.table))]}

    # access
    @property
    def p(self) -> int:
        return self.place.p

    def value(self, index: int) -> CycloValue:
        return CycloValue.from_powers(self.p, list(self.table[index])) * self.scale

    def at(self, coords: Sequence[Sequence[int]] | None) -> CycloValue:
        """Value at a point given by per-variable coordinate lists (None means outside the support)."""
        if coords is None:
            return CycloValue(self.p)
        flat = [c for var in coords for c in var]
        return self.value(self.level.index(flat, self.place.Q))

    def values(self) -> list[CycloValue]:
        return [self.value(i) for i in range(len(self.table))]

    # structure
    def integrate(self) -> CycloValue:
        tot = [sum(self.table[:, k]) for k in range(self.p)]
        Q, lv = self.place.Q, self.level
        return CycloValue.from_powers(self.p, tot) * (self.scale / Fraction(Q) ** (lv.n * lv.N))

    def reindex(self, M: int, N: int) -> "SBFunction":
        """Same function at a coarser-or-finer level (M' <= M, N' >= N): extension by zero and raising."""
        lv = self.level
        if M > lv.M or N < lv.N:
            raise ValueError("reindexing only enlarges the level")
        new = LocalLevel(M, N, lv.n)
        Q = self.place.Q
        pts = new.carrier(Q)
        inside = np.ones(len(pts), dtype=bool)
        old_idx = np.zeros(len(pts), dtype=np.int64)
        for i in range(lv.n):
            base = i * new.width
            for k in range(M, lv.M):
                inside &= pts[:, base + (k - M)] == 0
            for k in range(lv.M, lv.N):
                old_idx = old_idx * Q + pts[:, base + (k - M)]
        t = np.zeros((len(pts), self.p), dtype=object)
        t[inside] = self.table[old_idx[inside]]
        return SBFunction(self.place, new, t, self.scale)

    def translate(self, a: Sequence[Sequence[int]]) -> "SBFunction":
        """phi(. - a) for a in the carrier."""
        F = gf(self.place.Q)
        flat = np.array([c for var in a for c in var], dtype=np.int64)
        pts = self.level.carrier(self.place.Q)
        shifted = F.sub(pts, flat[None, :]) if len(flat) else pts
        Q = self.place.Q
        idx = np.zeros(len(pts), dtype=np.int64)
        for s in range(shifted.shape[1]):
            idx = idx * Q + shifted[:, s]
        return SBFunction(self.place, self.level, self.table[idx], self.scale)

    def negate_argument(self) -> "SBFunction":
        """phi(-x)."""
        lv = self.level
        zero = [[0] * lv.width for _ in range(lv.n)]
        F = gf(self.place.Q)
        pts = lv.carrier(self.place.Q)
        neg = F.neg[pts]
        Q = self.place.Q
        idx = np.zeros(len(pts), dtype=np.int64)
        for s in range(neg.shape[1]):
            idx = idx * Q + neg[:, s]
        del zero
        return SBFunction(self.place, lv, self.table[idx], self.scale)

    def equals(self, other: "SBFunction") -> bool:
        """Equality as functions, after moving both to a common level."""
        if self.place != other.place or self.level.n != other.level.n:
            return False
        M = min(self.level.M, other.level.M)
        N = max(self.level.N, other.level.N)
        a, b = self.reindex(M, N), other.reindex(M, N)
        return all(x == y for x, y in zip(a.values(), b.values()))

    def __repr__(self) -> str:
        return f"SBFunction({self.place}, level=({self.level.M},{self.level.N}), n={self.level.n})"


def _bilinear(place: Place, lx: LocalLevel, ly: LocalLevel) -> np.ndarray:
    """Matrix B with r(xy) = Tr(sum_ab B[a, b] x_a y_b), coefficients encoded in F_Q."""
    F = gf(place.Q)
    B = np.zeros((lx.slots(), ly.slots()), dtype=np.int64)
    target, coef = (1, int(F.neg[1])) if place.is_infinite else (-1, 1)
    for i in range(lx.n):
        for a in range(lx.width):
            b_idx = target - (lx.M + a)
            if ly.M <= b_idx < ly.N:
                B[i * lx.width + a, i * ly.width + (b_idx - ly.M)] = coef
    return B


def fourier(phi: SBFunction) -> SBFunction:
    """F phi(y) = Q^{-nN} sum_x phi(x) psi(r(xy)) at level (nu - N, nu - M)."""
    place, lv = phi.place, phi.level
    if place.poly is not None and len(place.poly) < 2:
        raise ValueError("place without residue rule")
    out_lv = LocalLevel(place.nu - lv.N, place.nu - lv.M, lv.n)
    Q = place.Q
    F = gf(Q)
    if F.add_table is None:
        raise BoundsError("residue field too large for the tabulated Fourier kernel")
    xs, ys = lv.carrier(Q), out_lv.carrier(Q)
    B = _bilinear(place, lv, out_lv)
    table = kernels.fourier_accumulate(phi.table, xs, ys, B, F.add_table, F.mul_table,
                                       F.trace, place.p)
    return SBFunction(place, out_lv, table, phi.scale / Fraction(Q) ** (lv.n * lv.N))


def fourier_direct(phi: SBFunction) -> SBFunction:
    """Same transform evaluated one character value at a time (reference path)."""
    place, lv = phi.place, phi.level
    out_lv = LocalLevel(place.nu - lv.N, place.nu - lv.M, lv.n)
    Q, p = place.Q, place.p
    F = gf(Q)
    xs, ys = lv.carrier(Q), out_lv.carrier(Q)
    B = _bilinear(place, lv, out_lv)
    nz = [(a, b, int(B[a, b])) for a in range(B.shape[0]) for b in range(B.shape[1]) if B[a, b]]
    table = np.zeros((len(ys), p), dtype=object)
    for yi, y in enumerate(ys):
        acc = [0] * p
        for xi, x in enumerate(xs):
            row = phi.table[xi]
            if not any(row):
                continue
            r = 0
            for a, b, c in nz:
                r = F.s_add(r, F.s_mul(c, F.s_mul(int(x[a]), int(y[b]))))
            sh = int(F.trace[r])
            for k in range(p):
                acc[(k + sh) % p] += row[k]
        table[yi] = acc
    return SBFunction(place, out_lv, table, phi.scale / Fraction(Q) ** (lv.n * lv.N))


# -- global summation -------------------------------------------------------------

Product = Mapping[Place, SBFunction]


def complete(Phi: Product) -> dict[Place, SBFunction]:
    """Add the default 1_{O_inf} when infinity is not marked."""
    Phi = dict(Phi)
    if not Phi:
        raise ValueError("empty product")
    qs = {v.q for v in Phi}
    ns = {f.level.n for f in Phi.values()}
    if len(qs) != 1 or len(ns) != 1:
        raise ValueError("all local functions must share q and n")
    for v, f in Phi.items():
        if f.place != v:
            raise ValueError("function attached to the wrong place")
    q, n = qs.pop(), ns.pop()
    inf = Place.infinity(q)
    if inf not in Phi:
        Phi[inf] = SBFunction.unit(inf, n)
    return dict(sorted(Phi.items(), key=lambda kv: kv[0].sort_key()))


def rr_space(D: Mapping[Place, int], q: int) -> list[tuple[tuple, tuple]]:
    """Basis of L(D) = {f : div f >= -D} as (numerator, denominator) pairs."""
    ops = PolyOps(gf(q))
    Qp, Rp = (1,), (1,)
    d_inf = 0
    for v, d in D.items():
        if v.is_infinite:
            d_inf += d
        elif d > 0:
            Qp = ops.mul(Qp, ops.pow(v.poly, d))
        elif d < 0:
            Rp = ops.mul(Rp, ops.pow(v.poly, -d))
    m = (len(Qp) - 1) - (len(Rp) - 1) + d_inf
    return [(ops.mul(Rp, (0,) * j + (1,)), Qp) for j in range(m + 1)]


def divisor_of(Phi: Product) -> dict[Place, int]:
    return {v: -f.level.M for v, f in Phi.items()}


def _fp_basis(q: int, Q_big: int, e: int) -> list[int]:
    """F_p-basis of F_q, embedded in F_Q."""
    p, k = prime_power(q)
    emb = embedding(q, e)
    return [int(emb(p ** b)) for b in range(k)]


def _mul_scalar_vec(F, c: int, vec: Sequence[int]) -> list[int]:
    return [F.s_mul(c, int(x)) for x in vec]


def _cyclic_mul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    out = np.zeros_like(a)
    for i in range(p):
        ai = a[:, i]
        for j in range(p):
            out[:, (i + j) % p] += ai * b[:, j]
    return out


def sum_rational(Phi: Product, max_points: int = MAX_POINTS) -> CycloValue:
    """sum over x in F^n of prod_v phi_v(x)."""
    Phi = complete(Phi)
    places = list(Phi)
    q = places[0].q
    p, k = prime_power(q)
    n = next(iter(Phi.values())).level.n
    basis = rr_space(divisor_of(Phi), q)
    scale = Fraction(1)
    for f in Phi.values():
        scale *= f.scale
    if not basis:
        acc = CycloValue.rational(p, 1)
        for f in Phi.values():
            acc = acc * CycloValue.from_powers(p, list(f.table[0]))
        return acc * scale
    dim = len(basis) * n * k
    if p ** dim > max_points:
        raise BoundsError(f"{p}^{dim} rational points exceed the enumeration bound")
    # generator matrix over F_p: rows = F_p-basis of L(D)^n, columns = digits of all place slots
    cols = []
    col_w = []
    place_cols = []
    expansions = {}
    for v in places:
        lv = Phi[v].level
        expansions[v] = [expand(num, den, v, lv.M, lv.N) for num, den in basis]
        ke = k * v.degree
        start = len(cols)
        w = []
        K = lv.slots()
        for s in range(K):
            for dgt in range(ke):
                cols.append((v, s, dgt))
                w.append(p ** dgt * v.Q ** (K - 1 - s))
        place_cols.append((start, len(cols), np.array(w, dtype=object)))
        col_w += w
    G = np.zeros((dim, len(cols)), dtype=np.int64)
    row = 0
    for i in range(n):
        for j in range(len(basis)):
            for b in range(k):
                for v, (start, stop, _) in zip(places, place_cols):
                    F = gf(v.Q)
                    beta = _fp_basis(q, v.Q, v.degree)[b]
                    coords = _mul_scalar_vec(F, beta, expansions[v][j])
                    lv = Phi[v].level
                    ke = k * v.degree
                    for a, c in enumerate(coords):
                        s = i * lv.width + a
                        digs = F.digits[c]
                        for dgt in range(ke):
                            G[row, start + s * ke + dgt] = digs[dgt]
                row += 1
    tables = [Phi[v].table for v in places]
    bound = 1
    for t in tables:
        bound *= max(1, max(sum(abs(int(x)) for x in r) for r in t))
    use_int = bound * p ** dim < _INT64_SAFE
    tabs = [t.astype(np.int64) if use_int else t for t in tables]
    total = np.zeros(p, dtype=np.int64 if use_int else object)
    npts = p ** dim
    chunk = 1 << 15
    for st in range(0, npts, chunk):
        idx = np.arange(st, min(npts, st + chunk), dtype=np.int64)
        cd = np.zeros((len(idx), dim), dtype=np.int64)
        rem = idx.copy()
        for r in range(dim - 1, -1, -1):
            cd[:, r] = rem % p
            rem //= p
        X = (cd @ G) % p
        acc = None
        for (start, stop, w), t in zip(place_cols, tabs):
            wi = w.astype(np.int64)
            ind = X[:, start:stop] @ wi
            vals = t[ind]
            acc = vals if acc is None else _cyclic_mul(acc, vals, p)
        total = total + acc.sum(axis=0)
    return CycloValue.from_powers(p, [int(x) for x in total]) * scale


def evaluate_global(Phi: Product, f: Sequence[tuple[tuple, tuple]]) -> CycloValue:
    """prod_v phi_v(f) for f in F^n given by (numerator, denominator) per variable."""
    Phi = complete(Phi)
    p = next(iter(Phi)).p
    acc = CycloValue.rational(p, 1)
    for v, phi in Phi.items():
        lv = phi.level
        coords = []
        for num, den in f:
            c = expand(num, den, v, lv.M, lv.N)
            if c is None:
                return CycloValue(p)
            coords.append(c)
        acc = acc * phi.at(coords)
    # unmarked finite places: integrality
    marked = {v.poly for v in Phi}
    for num, den in f:
        if not _integral_away(den, num, marked, next(iter(Phi)).q):
            return CycloValue(p)
    return acc


def _integral_away(den, num, marked, q) -> bool:
    ops = PolyOps(gf(q))
    g = ops.gcd(num, den) if PolyOps.trim(num) else PolyOps.trim(den)
    red = ops.divmod(den, g)[0] if PolyOps.trim(num) else (1,)
    # every irreducible factor of the reduced denominator must be marked
    for m in marked:
        if m is None:
            continue
        while True:
            qq, r = ops.divmod(red, m)
            if PolyOps.trim(r):
                break
            red = qq
    return len(PolyOps.trim(red)) == 1


def fourier_product(Phi: Product) -> dict[Place, SBFunction]:
    return {v: fourier(f) for v, f in complete(Phi).items()}


@dataclass
class PoissonResult:
    lhs: CycloValue
    rhs: CycloValue

    @property
    def equal(self) -> bool:
        return self.lhs == self.rhs


def poisson_check(Phi: Product) -> PoissonResult:
    """lhs = sum_x Phi(x); rhs = q^{(1-g) n} sum_y (F Phi)(y) with g = 0."""
    Phi = complete(Phi)
    q = next(iter(Phi)).q
    n = next(iter(Phi.values())).level.n
    lhs = sum_rational(Phi)
    rhs = sum_rational(fourier_product(Phi)) * (q ** n)
    return PoissonResult(lhs, rhs)


def translate_product(Phi: Product, a: Sequence[tuple[tuple, tuple]]) -> dict[Place, SBFunction]:
    """Phi(. - a) for a global a lying in every local carrier."""
    out = {}
    for v, phi in complete(Phi).items():
        lv = phi.level
        coords = [expand(num, den, v, lv.M, lv.N) for num, den in a]
        if any(c is None for c in coords):
            raise ValueError("translation point outside the support")
        out[v] = phi.translate(coords)
    return out


# -- random corpus -----------------------------------------------------------------

@dataclass
class CorpusCase:
    seed: int
    q: int
    n: int
    levels: list
    lhs: CycloValue
    rhs: CycloValue

    @property
    def equal(self) -> bool:
        return self.lhs == self.rhs

    def csv_row(self) -> list[str]:
        lv = ";".join(f"{lab}:{M}:{N}" for lab, M, N in self.levels)
        return [str(self.seed), str(self.q), lv, str(self.lhs), str(self.rhs), str(self.equal).lower()]


def _cost_ok(q: int, n: int, levels: list[tuple[Place, int, int]], max_points: int) -> bool:
    p, k = prime_power(q)
    deg_D = sum(-M * v.degree for v, M, N in levels)
    deg_F = sum((N - v.nu) * v.degree for v, M, N in levels)
    for v, M, N in levels:
        if v.Q ** (2 * n * (N - M)) > 600_000:
            return False
    return all(q ** (n * (d + 1)) <= max_points for d in (deg_D, deg_F))


def random_product(q: int, n: int, rng: np.random.Generator, max_level: int = 3,
                   max_points: int = 200_000) -> dict[Place, SBFunction]:
    """Random product of local functions on degree-one places and infinity, cost-bounded."""
    finite = [Place.finite(q, c) for c in range(q)]
    while True:
        k = int(rng.integers(0, min(2, len(finite)) + 1))
        chosen = [Place.infinity(q)] + [finite[i] for i in sorted(rng.choice(len(finite), size=k, replace=False))]
        levels = []
        for v in chosen:
            M = int(rng.integers(-max_level, max_level))
            N = int(rng.integers(M + 1, max_level + 1))
            levels.append((v, M, N))
        if _cost_ok(q, n, levels, max_points):
            break
    return {v: SBFunction.random(v, LocalLevel(M, N, n), rng) for v, M, N in levels}


def _corpus_case(args) -> CorpusCase:
    seed, q, n = args
    rng = np.random.default_rng(seed)
    Phi = random_product(q, n, rng)
    res = poisson_check(Phi)
    levels = [(v.label, f.level.M, f.level.N) for v, f in complete(Phi).items()]
    return CorpusCase(seed, q, n, levels, res.lhs, res.rhs)


def poisson_corpus(trials: int, seed: int, qs: Sequence[int] = (2, 3), n_max: int = 2,
                   workers: int = 1) -> list[CorpusCase]:
    """Seeded random Poisson checks; case i uses seed + i and cycles through q and n."""
    jobs = []
    for i in range(trials):
        q = qs[i % len(qs)]
        n = 1 + (i // len(qs)) % n_max
        jobs.append((seed + i, q, n))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            return list(ex.map(_corpus_case, jobs))
    return [_corpus_case(j) for j in jobs]


# -- the annulus integral -------------------------------------------------------------

def _series_mul_mod(a: np.ndarray, b: np.ndarray, L: int, p: int) -> np.ndarray:
    out = np.zeros((a.shape[0], L), dtype=np.int64)
    for i in range(min(L, a.shape[1])):
        ai = a[:, i]
        if not ai.any():
            continue
        hi = min(L - i, b.shape[1])
        out[:, i:i + hi] += ai[:, None] * b[:, :hi]
    return out % p


def _series_inv_mod(a: np.ndarray, L: int, p: int) -> np.ndarray:
    B = a.shape[0]
    out = np.zeros((B, L), dtype=np.int64)
    inv0 = np.array([pow(int(x), -1, p) for x in range(p) if x] , dtype=np.int64)
    inv_tab = np.zeros(p, dtype=np.int64)
    inv_tab[1:] = inv0
    i0 = inv_tab[a[:, 0] % p]
    out[:, 0] = i0
    for k in range(1, L):
        acc = np.zeros(B, dtype=np.int64)
        for j in range(1, min(k, a.shape[1] - 1) + 1):
            acc += a[:, j] * out[:, k - j]
        out[:, k] = (-(acc % p) * i0) % p
    return out


def _poly_in_x(P: Sequence[Sequence[int]], xs: np.ndarray, m: int, L: int, p: int,
               derivative: bool = False) -> np.ndarray:
    """P(x) (or P'(x)) as a power series in t mod t^L, for x = t^m u with u given by rows of xs."""
    B = xs.shape[0]
    terms = list(enumerate(P))
    if derivative:
        terms = [(i - 1, [(c * i) % p for c in Pi]) for i, Pi in terms if i >= 1]
    out = np.zeros((B, L), dtype=np.int64)
    upow = np.zeros((B, L), dtype=np.int64)
    upow[:, 0] = 1
    cur = 0
    for i, Pi in sorted(terms):
        while cur < i:
            upow = _series_mul_mod(upow, xs, L, p)
            cur += 1
        # Pi(t) * t^{m i} * u^i
        shift = m * i
        if shift >= L:
            continue
        coef = np.zeros((1, L), dtype=np.int64)
        for j, c in enumerate(Pi):
            if j + shift < L:
                coef[0, j + shift] = c % p
        out = (out + _series_mul_mod(np.broadcast_to(coef, (B, L)), upow, L, p)) % p
    return out


def annulus_integral(m: int, d: int, P: Sequence[Sequence[int]], q: int, N: int | None = None) -> CycloValue:
    """q^{-N} sum over x in (t^m O minus t^{m+1} O)/t^N O of psi(res(P(x) x^{-d} dt)).

    ``P[i]`` lists the t-coefficients of the coefficient of x^i (entries in F_q,
    prime q).  Default N = md + m + 2.
    """
    N = m * d + m + 2 if N is None else N
    return _annulus_levels(m, d, P, q, [N])[0]


def annulus_integral_checked(m: int, d: int, P, q: int) -> CycloValue:
    """Evaluate at N = md + m + 2 and N + 1 and insist on agreement."""
    N = m * d + m + 2
    a, b = _annulus_levels(m, d, P, q, [N, N + 1])
    if a != b:
        raise ArithmeticError(f"annulus integral not stable: {a} vs {b}")
    return a


def _annulus_levels(m: int, d: int, P, q: int, levels: Sequence[int]) -> list[CycloValue]:
    # Beyond the split index k = m + ceil(md/2) the phase is affine in the tail
    # digits, so each prefix contributes either 0 or a full character value.
    p, kk = prime_power(q)
    if kk != 1:
        raise ValueError("annulus_integral supports prime q")
    if m < 1 or d < 1:
        raise ValueError("m and d must be positive")
    if not P or not P[0] or P[0][0] % p == 0:
        raise ValueError("P(0) must have order 0")
    N0 = m + m * d
    for N in levels:
        if N < N0:
            raise ValueError(f"truncation level must be at least {N0}")
    k = max(m + 1, m + ceil(m * d / 2))
    width = k - m
    npre = (p - 1) * p ** (width - 1)
    if npre > 20_000_000:
        raise BoundsError("annulus prefix enumeration too large")
    L = m * (d + 1) + 1
    totals = [[0] * p for _ in levels]
    chunk = 1 << 16
    for st in range(0, npre, chunk):
        idx = np.arange(st, min(npre, st + chunk), dtype=np.int64)
        B = len(idx)
        us = np.zeros((B, width), dtype=np.int64)
        rem = idx.copy()
        for j in range(width - 1, 0, -1):
            us[:, j] = rem % p
            rem //= p
        us[:, 0] = rem + 1
        inv = _series_inv_mod(us, L, p)
        invd = np.zeros((B, L), dtype=np.int64)
        invd[:, 0] = 1
        for _ in range(d):
            invd = _series_mul_mod(invd, inv, L, p)
        Px = _poly_in_x(P, us, m, L, p)
        g = _series_mul_mod(invd, Px, L, p)             # P(x) x^{-d} = t^{-md} g
        res = g[:, m * d - 1]
        # g'(x0) = t^{-m(d+1)} H with H = t^m u^{-d} P'(x) - d u^{-d-1} P(x)
        dP = _poly_in_x(P, us, m, L, p, derivative=True)
        h1 = _series_mul_mod(invd, dP, L - m, p)
        h1 = np.concatenate([np.zeros((B, m), dtype=np.int64), h1], axis=1)
        h2 = _series_mul_mod(_series_mul_mod(invd, inv, L, p), Px, L, p)
        H = (h1 - d * h2) % p
        hi = m * (d + 1) - 1 - k
        for t_i, N in enumerate(levels):
            live = np.ones(B, dtype=bool)
            for j in range(max(m * (d + 1) - N, 0), hi + 1):
                live &= H[:, j] == 0
            cnt = np.bincount(res[live], minlength=p)
            for r in range(p):
                totals[t_i][r] += int(cnt[r])
    # each live prefix carries q^{N-k} tail points: q^{-N} q^{N-k} = q^{-k}
    return [CycloValue.from_powers(p, t) * Fraction(1, q ** k) for t in totals]


def annulus_brute(m: int, d: int, P: Sequence[Sequence[int]], q: int, N: int) -> CycloValue:
    """Direct enumeration of the truncated annulus (small cases only)."""
    p, kk = prime_power(q)
    if kk != 1:
        raise ValueError("prime q only")
    width = N - m
    if q ** width > 2_000_000:
        raise BoundsError("brute-force annulus too large")
    total = [0] * p
    L = N + m * d + 2
    for digits in product(range(q), repeat=width):
        if digits[0] == 0:
            continue
        # x = t^m u ; compute P(x) x^{-d} as a Laurent series t^{-md} * (u^{-d} P(x))
        u = list(digits) + [0] * (L - width)
        inv = _scalar_series_inv(u, L, p)
        invd = [1] + [0] * (L - 1)
        for _ in range(d):
            invd = _scalar_series_mul(invd, inv, L, p)
        Px = [0] * L
        upow = [1] + [0] * (L - 1)
        for i, Pi in enumerate(P):
            if i:
                upow = _scalar_series_mul(upow, u, L, p)
            term = [0] * L
            for j, c in enumerate(Pi):
                if j + m * i < L:
                    term[j + m * i] = c % p
            term = _scalar_series_mul(term, upow, L, p)
            Px = [(a + b) % p for a, b in zip(Px, term)]
        g = _scalar_series_mul(invd, Px, L, p)
        total[g[m * d - 1] % p] += 1
    return CycloValue.from_powers(p, total) * Fraction(1, q ** N)


def _scalar_series_mul(a, b, L, p):
    out = [0] * L
    for i, x in enumerate(a[:L]):
        if x:
            for j in range(L - i):
                if b[j]:
                    out[i + j] = (out[i + j] + x * b[j]) % p
    return out


def _scalar_series_inv(a, L, p):
    i0 = pow(a[0], -1, p)
    out = [0] * L
    out[0] = i0
    for k in range(1, L):
        acc = 0
        for j in range(1, k + 1):
            acc += a[j] * out[k - j]
        out[k] = (-acc * i0) % p
    return out


def random_annulus_poly(q: int, rng: np.random.Generator, xdeg: int = 2, tdeg: int = 2) -> list[list[int]]:
    P = [[int(c) for c in rng.integers(0, q, size=tdeg + 1)] for _ in range(int(rng.integers(0, xdeg + 1)) + 1)]
    P[0][0] = int(rng.integers(1, q))
    return P


# -- families over symmetric powers -------------------------------------------------------

def effective_divisors(q: int, deg: int) -> list[dict[Place, int]]:
    """All F_q-rational effective divisors of P^1 of the given degree."""
    pts = places_P1(q, deg)
    out: list[dict[Place, int]] = []

    def rec(i, rem, acc):
        if rem == 0:
            out.append(dict(acc))
            return
        if i == len(pts):
            return
        v = pts[i]
        for mult in range(rem // v.degree, -1, -1):
            if mult:
                acc[v] = mult
            elif v in acc:
                del acc[v]
            rec(i + 1, rem - mult * v.degree, acc)
        acc.pop(v, None)

    rec(0, deg, {})
    return out


def _seed_for(seed: int, v: Place, mults: tuple) -> int:
    key = json.dumps([seed, v.label, list(mults)])
    h = 1469598103934665603
    for ch in key.encode():
        h = ((h ^ ch) * 1099511628211) % (1 << 64)
    return h


def family_member(q: int, D: Sequence[Mapping[Place, int]], levels: Sequence[Mapping[int, tuple[int, int]]],
                  base: tuple[int, int] = (0, 1), n: int = 1, kind: str = "random",
                  seed: int = 0) -> dict[Place, SBFunction]:
    """Phi_D: at v of multiplicities (m_1(v), ...) the level is (a - sum M_{m_i}, b + sum N_{m_i})."""
    support = set()
    for Di in D:
        support |= set(Di)
    out = {}
    a, b = base
    for v in sorted(support | {Place.infinity(q)}, key=lambda w: w.sort_key()):
        mults = tuple(Di.get(v, 0) for Di in D)
        M, N = a, b
        for i, mi in enumerate(mults):
            if mi:
                dM, dN = levels[i][mi]
                M, N = M - dM, N + dN
        lv = LocalLevel(M, N, n)
        if kind == "random" and any(mults):
            out[v] = SBFunction.random(v, lv, np.random.default_rng(_seed_for(seed, v, mults)))
        else:
            out[v] = SBFunction.indicator(v, lv)
    return out


@dataclass
class FamilyReport:
    divisors: list
    results: list
    swap_lhs: tuple
    swap_rhs: tuple

    @property
    def all_pass(self) -> bool:
        return all(r.equal for r in self.results) and self.swap_lhs[0] == self.swap_lhs[1] \
            and self.swap_rhs[0] == self.swap_rhs[1]


def _enumerate_space(D: Mapping[Place, int], q: int, n: int):
    basis = rr_space(D, q)
    F = gf(q)
    ops = PolyOps(F)
    if not basis:
        yield tuple(((), (1,)) for _ in range(n))
        return
    den = basis[0][1]
    for cs in product(range(q), repeat=len(basis) * n):
        f = []
        for i in range(n):
            num = ()
            for j, (bn, _) in enumerate(basis):
                c = cs[i * len(basis) + j]
                if c:
                    num = ops.add(num, ops.scale(bn, c))
            f.append((num, den))
        yield tuple(f)


def _swap(members: list[dict[Place, SBFunction]], q: int, n: int) -> tuple[CycloValue, CycloValue]:
    """(sum_D sum_x Phi_D(x), sum_x sum_D Phi_D(x)) with x over a space containing every support."""
    first = sum((sum_rational(Phi) for Phi in members), CycloValue(next(iter(members[0])).p))
    Dmax: dict[Place, int] = {}
    for Phi in members:
        for v, d in divisor_of(complete(Phi)).items():
            Dmax[v] = max(Dmax.get(v, 0), d)
    second = CycloValue(next(iter(members[0])).p)
    for f in _enumerate_space(Dmax, q, n):
        for Phi in members:
            second = second + evaluate_global(Phi, f)
    return first, second


def family_poisson(q: int, m: Sequence[int], levels: Sequence[Mapping[int, tuple[int, int]]],
                   base: tuple[int, int] = (0, 1), n: int = 1, kind: str = "random",
                   seed: int = 0) -> FamilyReport:
    """Per-divisor Poisson checks over S^m P^1(F_q) and the order-of-summation identity."""
    if len(levels) != len(m):
        raise ValueError("one level family per component of m")
    comps = [effective_divisors(q, mi) for mi in m]
    divisors = [tuple(c) for c in product(*comps)]
    members = [family_member(q, D, levels, base, n, kind, seed) for D in divisors]
    results = [poisson_check(Phi) for Phi in members]
    swap_lhs = _swap(members, q, n)
    fmembers = [fourier_product(Phi) for Phi in members]
    a, b = _swap(fmembers, q, n)
    swap_rhs = (a * q ** n, b * q ** n)
    return FamilyReport(divisors, results, swap_lhs, swap_rhs)
