from __future__ import annotations

from fractions import Fraction
from math import inf

import pytest

import oracles
from motzeta.epoly import EPoly
from motzeta.lambda_ring import kapranov_zeta
from motzeta.monodromy import MonClass
from motzeta.series import MotSeries, TruncationError
from motzeta.varieties import dimension, hd_measure
from motzeta.weights import (InsufficientTruncation, coef_growth, convergence_check, convergence_delta,
                             observed_top, radius, weight)

ONE = EPoly.const(1)


def uni(coeffs, prec):
    return MotSeries.univariate(coeffs, prec, "T", ONE)


def test_weight_values():
    assert weight(EPoly.mono(1, 1)) == 2
    assert weight(MonClass({Fraction(-1, 2): 1})) == 1
    assert weight(MonClass()) == -inf
    assert weight(0) == -inf


def test_radius_projective_plane():
    r = radius(kapranov_zeta({"kind": "projective", "n": 2}, 8), (4, 8))
    assert r.value == 2 and r.stabilized
    with pytest.raises(TruncationError):
        radius(kapranov_zeta({"kind": "projective", "n": 2}, 4), (2, 6))


def test_convergence_bounds():
    L = EPoly.L()
    F = uni([ONE, 0, L - 1, 0, L], 4)   # weight 2 at i = 2 and at i = 4
    assert not convergence_check(uni([ONE, 0, L - 1, 0, L ** 2], 4), 2)
    assert convergence_check(F, 2)
    G = uni([ONE, L], 4)
    assert not convergence_check(G, 1)
    assert convergence_check(G, 1, mode="general", eps=Fraction(1, 4), alpha=Fraction(1, 2),
                             beta=Fraction(1), wX=2) is False
    assert convergence_delta(2, Fraction(1, 2), Fraction(1, 2)) == Fraction(1, 4)


def test_growth_p1():
    F = uni([ONE] * 13, 12)
    (rep,) = coef_growth(F, 1, 1)
    assert rep.case == "ii" and rep.d0 == 0 and rep.degree == 0
    assert [c.at_uv(1) for c in rep.polynomial] == oracles.GROWTH_P1


def test_growth_double_pole():
    F = uni([ONE], 12)
    (rep,) = coef_growth(F, 1, 2)
    assert rep.degree == 1
    assert [c.at_uv(1) for c in rep.polynomial] == oracles.GROWTH_DOUBLE
    L = EPoly.L()
    Z = F * (1 - MotSeries.monomial(("T",), (12,), (1,), L, ONE)).inverse() ** 2
    for n in range(13):
        assert observed_top(Z, n, 0) == rep.predicted(n) == EPoly.const(oracles.double_pole_coeff(n))


def test_growth_case_i_and_residues():
    F = uni([ONE if i % 2 == 0 and i <= 4 else 0 for i in range(13)], 12)
    reps = coef_growth(F, 2, 1)
    assert [r.case for r in reps] == ["ii", "i"]


def test_growth_needs_decaying_tail():
    F = uni([EPoly.L(k) for k in range(9)], 8)   # f_j L^-j has weight 0 throughout
    with pytest.raises(InsufficientTruncation):
        coef_growth(F, 1, 1)


@pytest.mark.parametrize("X", [{"kind": "affine", "n": 2}, {"kind": "projective", "n": 3}, {"kind": "gm"},
                               {"kind": "elliptic", "q": 5, "a": 0}])
def test_weight_twice_dimension(X):
    assert weight(hd_measure(X)) == 2 * dimension(X)
