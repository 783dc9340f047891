from __future__ import annotations

from fractions import Fraction

import pytest

import oracles
from motzeta.epoly import EPoly
from motzeta.heights import (CompactificationData, Stratum, global_zeta_trivial, local_factor_trivial,
                             pole_order, rational_part_check, schanuel_oracle, schanuel_ratios,
                             schanuel_table, specialize)
from motzeta.series import MotSeries
from motzeta.weights import convergence_check


def test_demo_pole_order_and_validation():
    data = CompactificationData.demo()
    assert pole_order(data) == 1
    with pytest.raises(ValueError):
        CompactificationData(1, {"a": 1})
    with pytest.raises(ValueError):
        CompactificationData(1, {"a": 2}, frozenset({"b"}))


def test_pole_order_with_bad_places():
    data = CompactificationData.from_json({
        "n": 2, "rho": {"a": 2, "b": 3}, "A_D": ["b"],
        "good": [{"A": [], "class": {"L": 2}}, {"A": ["a"], "class": {"L": 1}}],
        "bad": {"0": {"strata": [{"A": [], "class": {"L": 2}}], "d": 1}},
    })
    assert pole_order(data) == 1 + 1


@pytest.mark.parametrize("q", [2, 3, 5])
def test_local_factor_closed_form(q):
    data = CompactificationData.demo()
    lf = local_factor_trivial(data, 6, q)
    T = MotSeries.monomial(lf.vars, lf.bounds, (1,), 1, 1)
    closed = 1 + T * (q - 1) * (1 - T * q).inverse()
    assert lf == closed
    if q == 2:
        assert [lf.coefficient(i) for i in range(7)] == oracles.LOCAL_FACTOR_F2


def test_local_factor_e_avatar_specializes():
    data = CompactificationData.demo()
    E = local_factor_trivial(data, 5)
    C = local_factor_trivial(data, 5, 7)
    assert all(E.coefficient(i).at_uv(7) == C.coefficient(i) for i in range(6))


def test_schanuel_frozen_and_bruteforce():
    assert schanuel_table(2, 8) == oracles.SCHANUEL_F2
    for d in range(4):
        assert schanuel_oracle(2, d) == oracles.coprime_pairs_height(2, d)
    for d in range(3):
        assert schanuel_oracle(3, d) == oracles.coprime_pairs_height(3, d)
    with pytest.raises(ValueError):
        schanuel_oracle(4, 1)


def test_schanuel_ratios_settle():
    r = schanuel_ratios(2, 8)
    assert r[0] == Fraction(3, 4)
    assert all(x == 1 for x in r[1:])


@pytest.mark.parametrize("q", [2, 3])
def test_global_zeta_counts_rational_points(q):
    data = CompactificationData.demo()
    Z = global_zeta_trivial(data, 12, q)
    assert [q * Z.zeta.coefficient(2 * d) for d in range(7)] == schanuel_table(q, 6)
    assert Z.a == 2 and Z.r == 1
    # numerator (1 - T^2) after clearing the declared pole
    num = [Z.numerator.coefficient(i) for i in range(13)]
    assert num[:3] == [1, 0, -1] and not any(num[3:])


def test_global_zeta_e_avatar():
    data = CompactificationData.demo()
    Z = global_zeta_trivial(data, 6)
    L = EPoly.L()
    assert Z.zeta.coefficient(0) == EPoly.const(1)
    for d in (1, 2, 3):
        assert Z.zeta.coefficient(2 * d) == L ** (2 * d) - L ** (2 * d - 2)
        assert Z.zeta.coefficient(2 * d - 1) == EPoly()


@pytest.mark.parametrize("q,curve", [(2, None), (3, None), (5, {"kind": "elliptic", "q": 5, "a": 1})])
def test_rational_part(q, curve):
    assert rational_part_check(CompactificationData.demo(curve), 8, q)


def test_regularized_factor_meets_convergence_bounds():
    data = CompactificationData.demo()
    Zv = specialize(data, local_factor_trivial(data, 8), 8)
    L = EPoly.L()
    one = EPoly.const(1)
    reg = Zv * (MotSeries.constant(("T",), (8,), one, one) - MotSeries.monomial(("T",), (8,), (2,), L, one))
    assert convergence_check(reg, 1)
    assert not convergence_check(Zv, 1)


def test_stratum_json():
    s = Stratum.from_json({"A": ["a"], "class": {"L": 1}, "e": {"a": 1}, "rho_beta": 1})
    assert s.A == frozenset({"a"}) and s.e == {"a": 1}
