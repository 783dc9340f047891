from __future__ import annotations

from fractions import Fraction

import pytest

import oracles
from motzeta.epoly import EPoly
from motzeta.monodromy import (ETILDE, MonClass, ResolutionData, dl_form, dl_zeta, example_smooth,
                               example_square, example_sum_of_squares, mu_realization, nearby_vanishing,
                               psi_fermat, psi_fermat_count, thom_sebastiani_check, twisted_product)


def mc(d):
    return MonClass({a: EPoly(e) for a, e in d.items()})


def test_quadratic_vanishing_cycles():
    _, phi = nearby_vanishing(example_square())
    assert phi == mc(oracles.PHI_X2)
    _, phi2 = nearby_vanishing(example_sum_of_squares())
    assert phi2 == mc(oracles.PHI_X2_PLUS_Y2)


def test_square_root_of_L():
    _, phi = nearby_vanishing(example_square())
    assert twisted_product(phi, phi) == mc(oracles.TWISTED_SQUARE)
    assert thom_sebastiani_check(example_square(), example_square(), example_sum_of_squares())


def test_psi_fermat_etilde():
    et = {"kind": "etilde"}
    assert psi_fermat([(et, et)]) == mc(oracles.PSI_FERMAT_ETILDE)


@pytest.mark.parametrize("q", [5, 13])
def test_psi_fermat_counting_shadow(q):
    # q = 1 mod 4: the counting shadow is psi_fermat at uv = q, componentwise
    et = {"kind": "etilde"}
    motivic = {a: e.at_uv(q) for a, e in psi_fermat([(et, et)]).items()}
    shadow = {a: v for a, v in psi_fermat_count([(et, et)], q).items() if v}
    assert motivic == shadow


def test_twisted_product_unit_and_commutativity():
    one = MonClass.trivial(1)
    a = ETILDE
    b = MonClass({Fraction(-1, 2): EPoly.L() - 1, 0: 2})
    assert twisted_product(one, a) == a
    assert twisted_product(a, b) == twisted_product(b, a)


def test_smooth_fibre_has_no_vanishing_cycles():
    psi, phi = nearby_vanishing(example_smooth())
    assert phi.is_zero()
    assert psi == MonClass.trivial(EPoly.L())


def test_dl_zeta_limit_is_minus_psi():
    for res in (example_square(), example_sum_of_squares(), example_smooth()):
        psi, _ = nearby_vanishing(res)
        assert dl_form(res).limit() == -psi


def test_dl_zeta_smooth_expansion():
    # one stratum (nu = a = 1): [X_0] L^-1 T / (1 - L^-1 T)
    Z = dl_zeta(example_smooth(), 4)
    for k in range(1, 5):
        assert Z.coefficient(k) == MonClass.trivial(EPoly.L(1 - k))


def test_resolution_from_json_and_validation():
    res = ResolutionData.from_json({"strata": [{"J": [1], "class": {"kind": "etilde"}, "a": [2], "nu": [1]}],
                                    "zero_fibre": [[0, 1, [[0, 0, 1]]]]})
    assert nearby_vanishing(res)[1] == nearby_vanishing(example_square())[1]
    with pytest.raises(ValueError):
        ResolutionData.from_json({"strata": [{"J": [1], "class": [], "a": [0], "nu": [1]}]})


def test_mu_realization_etilde():
    assert ETILDE == mu_realization({"kind": "etilde"})
    assert ETILDE.forget() == EPoly.const(2)


ITEMS = [{"kind": "etilde"}, {"kind": "gm_sign"}, {"kind": "point"}, {"kind": "gm"}]


@pytest.mark.parametrize("a", ITEMS, ids=lambda d: d["kind"])
@pytest.mark.parametrize("b", ITEMS, ids=lambda d: d["kind"])
def test_fermat_convolution_matches_twisted_product(a, b):
    assert psi_fermat([(a, b)]) == twisted_product(mu_realization(a), mu_realization(b))
