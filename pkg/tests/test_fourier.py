from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

import oracles
from motzeta.cyclo import CycloValue
from motzeta.fourier import (LocalLevel, Place, SBFunction, annulus_brute, annulus_integral,
                             annulus_integral_checked, effective_divisors, expand, family_poisson,
                             fourier, fourier_direct, places_P1, poisson_check, poisson_corpus,
                             random_product, rr_space, sum_rational, translate_product)
from motzeta.varieties import BoundsError


@pytest.mark.parametrize("q", [2, 3])
def test_unit_ball(q):
    v = Place.finite(q, 0)
    one = SBFunction.unit(v)
    assert one.integrate() == 1
    assert fourier(one).equals(one)
    inf = Place.infinity(q)
    # at infinity the conductor is 2, so the unit ball goes to the smaller ball t^2 O
    dual = SBFunction.indicator(inf, LocalLevel(0, 3), 2)
    assert fourier(SBFunction.unit(inf)).equals(dual)


def test_indicator_volume():
    v = Place.finite(3, 1)
    f = SBFunction.indicator(v, LocalLevel(-2, 1))
    assert f.integrate() == 9


@pytest.mark.parametrize("place", [Place.finite(2, 0), Place.finite(3, 2), Place.infinity(3),
                                   Place.closed(2, (1, 1, 1))])
def test_fourier_inversion_and_reference(place):
    rng = np.random.default_rng(5)
    phi = SBFunction.random(place, LocalLevel(-1, 1), rng)
    F1 = fourier(phi)
    assert F1.equals(fourier_direct(phi))
    # the character has conductor nu, so applying the transform twice gives Q^-nu phi(-x)
    neg = phi.negate_argument()
    expected = SBFunction(place, neg.level, neg.table, neg.scale / Fraction(place.Q) ** place.nu)
    assert fourier(F1).equals(expected)


def test_plancherel():
    rng = np.random.default_rng(2)
    v = Place.finite(3, 0)
    phi = SBFunction.random(v, LocalLevel(-1, 2), rng)
    Fphi = fourier(phi)

    def norm2(f):
        tot = CycloValue(f.p)
        for x in f.values():
            tot = tot + x * x.conj()
        Q = f.place.Q
        return tot / Q ** (f.level.n * f.level.N)

    assert norm2(phi) == norm2(Fphi)


def test_expand_and_rr_space():
    q = 3
    v = Place.finite(q, 1)
    # 1/(t - 1) at t = 1: coefficient 1 at index -1
    assert expand((1,), (2, 1), v, -1, 2) == [1, 0, 0]
    assert expand((1,), (2, 1), v, 0, 2) is None
    inf = Place.infinity(q)
    assert len(rr_space({inf: 2}, q)) == 3
    assert len(rr_space({v: 1, inf: 0}, q)) == 2


def test_riemann_roch_sanity():
    for q in (2, 3):
        res = poisson_check({Place.finite(q, 0): SBFunction.unit(Place.finite(q, 0))})
        assert res.equal and res.lhs == q


def test_poisson_small_corpus_and_determinism():
    a = poisson_corpus(12, 40)
    b = poisson_corpus(12, 40)
    assert all(c.equal for c in a)
    assert [c.csv_row() for c in a] == [c.csv_row() for c in b]


def test_poisson_translation_invariance():
    rng = np.random.default_rng(8)
    Phi = random_product(2, 1, rng)
    base = poisson_check(Phi)
    shifted = poisson_check(translate_product(Phi, [((), (1,))]))
    assert shifted.lhs == base.lhs


def test_sum_rational_bound():
    v = Place.finite(3, 0)
    big = {v: SBFunction.indicator(v, LocalLevel(-9, 1))}
    with pytest.raises(BoundsError):
        sum_rational(big, max_points=1000)


def test_effective_divisor_counts():
    assert len(effective_divisors(2, 1)) == 3
    assert len(effective_divisors(2, 2)) == 7
    assert len(effective_divisors(3, 2)) == 13
    assert len(places_P1(2, 2)) == 4


def test_family_poisson_small():
    rep = family_poisson(2, [1], [{1: (1, 1)}], seed=3)
    assert rep.all_pass
    rep2 = family_poisson(2, [1, 1], [{1: (1, 0)}, {1: (0, 1)}], kind="indicator")
    assert rep2.all_pass


@pytest.mark.parametrize("q,m,d", [(2, 1, 1), (3, 1, 1), (3, 1, 2), (3, 2, 1), (5, 1, 2), (2, 1, 3)])
def test_annulus_stationary_phase_matches_bruteforce(q, m, d):
    rng = np.random.default_rng(q * 100 + m * 10 + d)
    P = [[int(rng.integers(1, q))], [int(rng.integers(0, q)), 1]]
    N = m * d + m + 2
    assert annulus_integral(m, d, P, q, N) == annulus_brute(m, d, P, q, N)


@pytest.mark.parametrize("q", [2, 3, 5])
def test_annulus_m1_d1(q):
    assert annulus_integral_checked(1, 1, [[1], [1]], q) == CycloValue.rational(q, oracles.ANNULUS_M1_D1(q))


def test_annulus_char_divides_d_is_nonzero():
    # in characteristic p with p | d the derivative term drops out and the integral survives
    v = annulus_integral_checked(1, 3, [[1], [0, 1]], 3)
    assert not v.is_zero() and not v.is_rational()


def test_sb_json_roundtrip():
    rng = np.random.default_rng(0)
    v = Place.finite(3, 2)
    phi = SBFunction.random(v, LocalLevel(-1, 1), rng)
    psi = SBFunction.from_json(phi.to_json())
    assert psi.equals(phi)
