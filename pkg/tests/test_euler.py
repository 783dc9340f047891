from __future__ import annotations

import numpy as np
import pytest

import oracles
from motzeta.epoly import EPoly
from motzeta.euler import (LocalFactorFamily, config_oracle, const_term_product, cut_and_paste_check,
                           double_product_check, euler_product, geometric_family, linear_family,
                           mult_check, mult_check_oracle, random_family, totaro_check)
from motzeta.lambda_ring import kapranov_zeta
from motzeta.series import MotSeries

BASES = {"affine": {"kind": "affine", "n": 1}, "projective": {"kind": "projective", "n": 1},
         "gm": {"kind": "gm"}}


def family(kind: str, base, prec: int):
    if kind == "geometric":
        return geometric_family(base, prec)
    if kind == "linear":
        return linear_family(base, 1, 1)
    if kind == "quadratic":
        return linear_family(base, EPoly.L(), 2)
    return linear_family(base, -1, 1)


@pytest.mark.parametrize("base", sorted(BASES))
@pytest.mark.parametrize("factor", ["geometric", "linear", "quadratic", "inverse"])
@pytest.mark.parametrize("q", [2, 3])
def test_counting_product_matches_closed_form(base, factor, q):
    F = family(factor, BASES[base], 6)
    P = euler_product(F, 6, q)
    assert [P.coefficient(n) for n in range(7)] == oracles.euler_product_closed_form(base, factor, q, 6)


def test_e_avatar_geometric_is_kapranov():
    for base in BASES.values():
        F = geometric_family(base, 5)
        assert euler_product(F, 5) == kapranov_zeta(base, 5).substitute([(None, (1,))], ("t",), (5,))


def test_e_avatar_specializes_to_counts():
    F = LocalFactorFamily({"kind": "projective", "n": 1}, {(1,): EPoly.L() - 1, (3,): 2})
    E = euler_product(F, 5)
    C = euler_product(F, 5, 3)
    assert all(E.coefficient(n).at_uv(3) == C.coefficient(n) for n in range(6))


def test_cut_and_paste():
    F = linear_family({"kind": "projective", "n": 1}, EPoly.L() - 2, 2)
    assert cut_and_paste_check(F, {"kind": "affine", "n": 1}, {"kind": "point"}, 5)
    assert cut_and_paste_check(F, {"kind": "affine", "n": 1}, {"kind": "point"}, 5, 3)


def test_totaro_twist():
    F = LocalFactorFamily({"kind": "gm"}, {(1,): 1, (2,): -1})
    assert totaro_check(F, [1], 5)
    assert totaro_check(F, [2], 5, 2)


def test_mult_check_with_oracle_sides():
    rng = np.random.default_rng(11)
    F = random_family(rng, {"kind": "affine", "n": 1}, 3)
    G = random_family(rng, {"kind": "affine", "n": 1}, 3)
    assert mult_check_oracle(F, G, 2, 3)


def test_two_variable_product():
    F = LocalFactorFamily({"kind": "affine", "n": 1}, {(1, 0): 1, (0, 1): 1, (1, 1): EPoly.L()}, 2)
    P = euler_product(F, (2, 2), 2)
    for e in P.box():
        assert P.coefficient(e) == config_oracle(F, 2, e)
    assert mult_check(F, F, (2, 2), 2)


def test_marked_points_constant_terms():
    F = LocalFactorFamily({"kind": "affine", "n": 1}, {(1,): 1}, overrides={0: {(0,): 3, (1,): 2}})
    P = const_term_product(F, 4, 2)
    assert [P.coefficient(n) for n in range(5)] == [config_oracle(F, 2, n) for n in range(5)]


@pytest.mark.parametrize("tower", [
    {"kind": "trivial_cover", "sheets": 2, "base": {"kind": "affine", "n": 1}},
    {"kind": "identity", "base": {"kind": "projective", "n": 1}},
    {"kind": "squaring_cover", "base": {"kind": "gm"}},
])
def test_double_product(tower):
    F = LocalFactorFamily(tower["base"], {(1,): 1, (2,): EPoly.L()})
    assert double_product_check(tower, F, 5, 3)


def test_kapranov_inverse_identity():
    for base in BASES.values():
        inv = euler_product(linear_family(base, -1, 1), 6)
        Z = kapranov_zeta(base, 6).substitute([(None, (1,))], ("t",), (6,))
        assert inv * Z == MotSeries.constant(("t",), (6,), EPoly.const(1), EPoly.const(1))


def test_family_json_roundtrip():
    F = LocalFactorFamily({"kind": "gm"}, {(1,): EPoly.L(), (2,): 3})
    G = LocalFactorFamily.from_json(F.to_json())
    assert G.to_json() == F.to_json()
