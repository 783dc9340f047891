"""Weights of avatar classes, radius of convergence and coefficient growth."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, inf


from .epoly import EPoly
from .monodromy import MonClass
from .series import MotSeries, TruncationError


def weight(a) -> int | float:
    """Largest p+q over monomials; +1 on components with nontrivial monodromy; -inf on 0."""
    if isinstance(a, MonClass):
        best: int | float = -inf
        for alpha, e in a.items():
            if e.is_zero():
                continue
            w = e.degree() + (0 if alpha == 0 else 1)
            best = max(best, w)
        return best
    if isinstance(a, EPoly):
        return a.degree()
    if isinstance(a, (int, Fraction)):
        return 0 if a else -inf
    raise TypeError(f"no weight for {type(a).__name__}")


@dataclass
class RadiusReport:
    value: Fraction | float
    stabilized: bool
    ratios: list = field(default_factory=list)


def radius(F: MotSeries, window: tuple[int, int]) -> RadiusReport:
    """max of w(X_i) / 2i over i in [start, end], with a stabilization flag."""
    if len(F.vars) != 1:
        raise ValueError("radius needs a single-variable series")
    start, end = window
    if start < 1 or end < start:
        raise ValueError("window must satisfy 1 <= start <= end")
    if end > F.bounds[0]:
        raise TruncationError(f"window end {end} beyond truncation {F.bounds[0]}")
    ratios: list = []
    for i in range(start, end + 1):
        w = weight(F.coefficient(i))
        ratios.append(-inf if w == -inf else Fraction(int(w), 2 * i))
    best = max(ratios)
    hits = sum(1 for r in ratios if r == best)
    nonincreasing = all(ratios[k + 1] <= ratios[k] for k in range(len(ratios) - 1))
    return RadiusReport(best, best != -inf and hits >= 2 and nonincreasing, ratios)


def convergence_check(F: MotSeries, M: int, c: Fraction | int = Fraction(1, 2),
                      mode: str = "curve", *, eps: Fraction | None = None,
                      alpha: Fraction | None = None, beta: Fraction | None = None,
                      wX: int | None = None) -> bool:
    """Coefficient bounds that make the Euler product of F converge past the expected radius.

    mode "curve": w(X_i) <= 2i - 2 for i <= M and w(X_i) <= 2ci - 1 for i > M.
    mode "general": w(X_i) <= (i - 1/2 - eps) wX for i <= M and
    w(X_i) <= (alpha i + beta - 1/2) wX for i > M.
    """
    top = F.bounds[0]
    for i in range(1, top + 1):
        w = weight(F.coefficient(i))
        if w == -inf:
            continue
        if mode == "curve":
            bound = 2 * i - 2 if i <= M else 2 * Fraction(c) * i - 1
        elif mode == "general":
            if None in (eps, alpha, beta, wX):
                raise ValueError("general mode needs eps, alpha, beta and wX")
            bound = (i - Fraction(1, 2) - eps) * wX if i <= M else (alpha * i + beta - Fraction(1, 2)) * wX
        else:
            raise ValueError(f"unknown mode {mode!r}")
        if w > bound:
            return False
    return True


def convergence_delta(M: int, eps: Fraction, alpha: Fraction) -> Fraction:
    """The delta certified by the general bounds: 1 - max(1 - eps/M, alpha)."""
    one_minus = Fraction(alpha) if M == 0 else max(1 - Fraction(eps) / M, Fraction(alpha))
    return 1 - one_minus


# -- coefficient growth -----------------------------------------------------

def _top_part(e: EPoly, w: int) -> EPoly:
    return EPoly({k: c for k, c in e.items() if k[0] + k[1] == w})


def _binom_poly(top: int, k: int) -> list[Fraction]:
    """Coefficients (power basis in m) of C(m + top, k) with top >= k - 1, as a polynomial in m."""
    poly = [Fraction(1)]
    for j in range(k):
        # multiply by (m + top - j)
        shift = top - j
        new = [Fraction(0)] * (len(poly) + 1)
        for i, c in enumerate(poly):
            new[i] += c * shift
            new[i + 1] += c
        poly = new
    fk = 1
    for j in range(2, k + 1):
        fk *= j
    return [c / fk for c in poly]


@dataclass
class ResidueReport:
    residue: int
    case: str
    d0: Fraction | int | None
    degree: int | None
    derivatives: list            # F_p^(i)(1)/i! for i < r (truncated sums)
    leading: list                # top-degree parts of the above
    polynomial: list             # coefficients of the predicted top coefficient, power basis in m

    def predicted(self, m: int) -> EPoly:
        acc = EPoly()
        for k, c in enumerate(self.polynomial):
            acc = acc + c * (m ** k)
        return acc


class InsufficientTruncation(ValueError):
    pass


def coef_growth(F: MotSeries, a: int, r: int, tail: int = 2) -> list[ResidueReport]:
    """Analyse Z(T) = F(T) / (1 - L^a T^a)^r residue class by residue class."""
    if a < 1 or r < 1:
        raise ValueError("a and r must be >= 1")
    N = F.bounds[0]
    ft = [_as_epoly(F.coefficient(j)) * EPoly.L(-j) for j in range(N + 1)]
    reports = []
    for p in range(a):
        idx = list(range(p, N + 1, a))
        if len(idx) < tail + 1:
            raise InsufficientTruncation(f"residue {p}: too few coefficients")
        derivs = []
        for i in range(r):
            acc = EPoly()
            for k, j in enumerate(idx):
                acc = acc + ft[j] * comb(k, i)
            derivs.append(acc)
        ws = [d.degree() for d in derivs]
        wtop = max(ws)
        if wtop == -inf:
            reports.append(ResidueReport(p, "i", None, None, derivs, [], []))
            continue
        # truncation must leave the top part untouched: tail terms have lower weight
        for j in idx[-tail:]:
            if ft[j].degree() >= wtop:
                raise InsufficientTruncation(
                    f"residue {p}: coefficient {j} of weight {ft[j].degree()} does not decay below {wtop}")
        leading = [_top_part(d, int(wtop)) for d in derivs]
        poly: list[EPoly] = [EPoly()] * r
        for i in range(r):
            bp = _binom_poly(r - i - 1, r - i - 1)
            sign = (-1) ** i
            for k, c in enumerate(bp):
                poly[k] = poly[k] + leading[i] * (sign * c)
        while poly and poly[-1].is_zero():
            poly.pop()
        d0 = Fraction(int(wtop), 2)
        d0 = int(d0) if d0.denominator == 1 else d0
        reports.append(ResidueReport(p, "ii", d0, len(poly) - 1, derivs, leading, poly))
    return reports


def observed_top(Z: MotSeries, n: int, w: int) -> EPoly:
    """Degree-w part of [M_n] L^-n for a series Z = sum [M_n] T^n."""
    return _top_part(_as_epoly(Z.coefficient(n)) * EPoly.L(-n), w)


def _as_epoly(c) -> EPoly:
    if isinstance(c, EPoly):
        return c
    if isinstance(c, MonClass):
        return c.forget()
    return EPoly.const(c)
