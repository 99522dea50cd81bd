import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import direct_hurwitz, mp_hurwitz
from zetalab import special_functions as sf
from zetalab.errors import DomainError, PoleError, UnsupportedRegion

CATALAN = float(mpmath.catalan)


def test_zeta_two_against_direct_sum():
    value, tail = direct_hurwitz(2.0, 1.0)
    assert tail < 2e-6
    # Add the leading Euler-Maclaurin correction so the oracle is sharp.
    x = 10**6
    corrected = value.real + 1 / x - 0.5 / x**2
    assert sf.hurwitz_zeta(2, 1) == pytest.approx(corrected, abs=1e-12)
    assert abs(sf.hurwitz_zeta(2, 1) - 1.6449340668482264) < 1e-15


def test_hurwitz_half_is_odd_square_sum():
    k = np.arange(1, 2 * 10**6, 2, dtype=float)
    direct = 4 * float(np.sum((1 / k**2)[::-1]))
    tail = 4 / (2 * (2 * 10**6 - 1))  # integral bound for the odd terms
    assert abs(sf.hurwitz_zeta(2, 0.5) - direct) <= tail
    assert sf.hurwitz_zeta(2, 0.5) == pytest.approx(math.pi**2 / 2, abs=1e-14)


@given(
    st.floats(-1, 8, allow_nan=False),
    st.floats(-60, 60, allow_nan=False),
    st.floats(0.05, 1.0, allow_nan=False),
)
def test_hurwitz_matches_mpmath(sigma, t, alpha):
    s = complex(sigma, t)
    if abs(s - 1) < 1e-3:
        return
    value, bound = sf.hurwitz_zeta_with_error(s, alpha)
    ref = mp_hurwitz(s, alpha)
    assert abs(value - ref) <= max(bound, 1e-13 * abs(ref)) * 4
    assert bound < 1e-10 * max(1.0, abs(ref))


def test_error_bound_honesty(rng):
    s = rng.uniform(0.2, 3, 30) + 1j * rng.uniform(-50, 50, 30)
    a = rng.uniform(0.1, 1, 30)
    for si, ai in zip(s, a):
        v20, b20 = sf.hurwitz_zeta_with_error(si, ai, order=20)
        v40, _ = sf.hurwitz_zeta_with_error(si, ai, order=40)
        assert abs(v20 - v40) <= b20


def test_hurwitz_errors():
    with pytest.raises(PoleError):
        sf.hurwitz_zeta(1, 0.5)
    with pytest.raises(DomainError):
        sf.hurwitz_zeta(2, 0.0)
    with pytest.raises(DomainError):
        sf.hurwitz_zeta(2, 1.5)


def test_alpha_one_is_riemann_on_grid(rng):
    R = sf.riemann()
    s = rng.uniform(0.2, 3, 100) + 1j * rng.uniform(-50, 50, 100)
    assert np.max(np.abs(sf.hurwitz_zeta(s, 1.0) - sf.steuding_eval(R, s))) < 1e-10


def test_mod4_split():
    s = np.array([2.0, 2 + 3j, 2 - 7.5j])
    lhs = sf.hurwitz_zeta(s, 0.25) + sf.hurwitz_zeta(s, 0.75)
    rhs = 4**s * (1 - 2.0 ** (-s)) * sf.hurwitz_zeta(s, 1.0)
    assert np.max(np.abs(lhs - rhs)) < 1e-9


def test_periodic_sequence_validation():
    seq = sf.PeriodicSequence((1, -1))
    assert seq.period == 2 and seq.mean == 0
    assert seq[5] == -1
    with pytest.raises(DomainError):
        sf.PeriodicSequence((1, 1))
    with pytest.raises(DomainError):
        sf.PeriodicSequence((1, 2, 1, 2))
    with pytest.raises(DomainError):
        sf.PeriodicSequence((1, 2), period=3)
    assert sf.PeriodicSequence.from_json(seq.to_json()) == seq


def test_periodic_hurwitz_single_coefficient_is_hurwitz():
    spec = sf.PeriodicHurwitzSpec(sf.PeriodicSequence((1,)), 0.37)
    for s in (2.0, 0.6 + 12j, -1.5 + 2j):
        assert sf.periodic_hurwitz_zeta(spec, s) == pytest.approx(sf.hurwitz_zeta(s, 0.37), abs=1e-13)


def test_periodic_hurwitz_alternating_against_direct_sum():
    spec = sf.PeriodicHurwitzSpec(sf.PeriodicSequence((1, -1)), 0.3)
    m = np.arange(10**6, dtype=float)
    direct = float(np.sum(((-1.0) ** m / (m + 0.3) ** 2)[::-1]))
    # Alternating series: the error is below the first omitted term.
    assert abs(sf.periodic_hurwitz_zeta(spec, 2) - direct) < 1 / (10**6) ** 2


def test_periodic_hurwitz_entire_when_mean_vanishes():
    # The function is entire when b = 0, so s = 1 must evaluate.
    spec = sf.PeriodicHurwitzSpec(sf.PeriodicSequence((1, -1)), 0.3)
    value = sf.periodic_hurwitz_zeta(spec, 1)
    ref = 0.5 * float(mpmath.digamma(1.3 / 2) - mpmath.digamma(0.3 / 2))
    assert value == pytest.approx(ref, abs=1e-12)
    with pytest.raises(PoleError):
        sf.periodic_hurwitz_zeta(sf.PeriodicHurwitzSpec(sf.PeriodicSequence((1, 2)), 0.3), 1)


@given(
    st.lists(st.tuples(st.floats(-2, 2), st.floats(-2, 2)), min_size=1, max_size=6),
    st.floats(0.05, 0.95),
    st.floats(-30, 30),
)
def test_reduction_matches_direct_summation(pairs, alpha, t):
    coeffs = [complex(a, b) for a, b in pairs]
    try:
        seq = sf.PeriodicSequence(coeffs)
    except DomainError:
        return
    spec = sf.PeriodicHurwitzSpec(seq, alpha)
    s = complex(2.5, t)
    direct, tail = direct_hurwitz(s, alpha, coeffs, terms=2 * 10**5)
    assert tail < 1e-7
    value = sf.periodic_hurwitz_zeta(spec, s)
    # The tail is O(x^{-1.5}) but nearly cancels for mean-zero sequences; compare with the bound.
    assert abs(value - direct) <= tail + 1e-12


def test_periodic_zeta_examples():
    assert sf.periodic_zeta(sf.PeriodicSequence((1,)), 3) == pytest.approx(float(mpmath.zeta(3)), abs=1e-14)
    chi4 = sf.PeriodicSequence((0, 1, 0, -1))
    assert abs(sf.periodic_zeta(chi4, 2) - CATALAN) < 1e-14
    # coeffs are indexed by m mod 2, so a_1 = -1 and the series is -(1 - 1/2 + 1/3 - ...).
    assert sf.periodic_zeta(sf.PeriodicSequence((1, -1)), 1) == pytest.approx(-math.log(2), abs=1e-13)


def test_periodic_zeta_against_direct_sum(rng):
    for _ in range(10):
        coeffs = rng.normal(size=5) + 1j * rng.normal(size=5)
        seq = sf.PeriodicSequence(tuple(coeffs))
        s = complex(2.0, rng.uniform(-20, 20))
        m = np.arange(1, 10**6 + 1)
        direct = complex(np.sum((seq.values(m) * np.exp(-s * np.log(m)))[::-1]))
        tail = np.max(np.abs(coeffs)) / 10**6
        assert abs(sf.periodic_zeta(seq, s) - direct) <= tail


def test_riemann_member():
    R = sf.riemann()
    assert sf.steuding_eval(R, 2) == pytest.approx(1.6449340668482264, abs=1e-15)
    with pytest.raises(PoleError):
        sf.steuding_eval(R, 1)
    for x in (2, 10, 1000, 12345):
        assert sf.prime_mean_square(R, x) == 1.0


def test_euler_product_matches_series_at_three():
    for spec in (sf.riemann(), sf.dirichlet_l(4, 1), sf.dirichlet_l(5, 1)):
        ep, ep_tail = sf.euler_product(spec, 3, 10**5)
        ds, ds_tail = sf.dirichlet_series(spec, 3, 10**6)
        assert ep_tail < 1e-10 and ds_tail < 1e-10
        assert abs(ep - ds) <= 1e-10


def test_dirichlet_l_mod4_is_catalan():
    L = sf.dirichlet_l(4, 1)
    assert abs(sf.steuding_eval(L, 2) - CATALAN) < 1e-14
    assert abs(sf.prime_mean_square(L, 10**5) - 1) < 1e-3
    assert sf.prime_mean_square(L, 2) == 0.0


def test_dirichlet_l_matches_mpmath():
    for q in (3, 5, 7, 8):
        chars = sf.dirichlet_characters(q)
        for idx, chi in enumerate(chars):
            if not sf.is_primitive(chi):
                continue
            L = sf.dirichlet_l(q, idx)
            for s in (0.5 + 3j, 2.0, 0.75 - 20j):
                ref = complex(mpmath.dirichlet(mpmath.mpc(s.real, s.imag), [complex(c) for c in chi]))
                assert abs(sf.steuding_eval(L, s) - ref) < 1e-10


def test_character_counts():
    for q, phi in ((3, 2), (5, 4), (8, 4), (12, 4), (15, 8)):
        chars = sf.dirichlet_characters(q)
        assert len(chars) == phi
        # Orthogonality of the character table.
        M = np.array(chars)
        units = [a for a in range(q) if math.gcd(a, q) == 1]
        G = M[:, units] @ M[:, units].conj().T
        assert np.allclose(G, phi * np.eye(phi))


def test_unsupported_region_without_continuation():
    base = sf.riemann()
    generic = sf.SteudingFunctionSpec(
        "generic", base.dirichlet_coeff, base.local_coeff, sigma_phi=1.0, check_euler=True
    )
    with pytest.raises(UnsupportedRegion):
        sf.steuding_eval(generic, 0.9)
    assert sf.steuding_eval(generic, 3) == pytest.approx(float(mpmath.zeta(3)), abs=1e-9)


def test_member_json_round_trip():
    for spec in (sf.riemann(), sf.dirichlet_l(5, 1)):
        again = sf.member_from_json(sf.member_to_json(spec))
        assert again.name == spec.name
        assert sf.steuding_eval(again, 2.5) == sf.steuding_eval(spec, 2.5)


def test_strip_region():
    r = sf.StripRegion(0.5, 1.0)
    assert r.contains(0.75 + 100j)
    assert not r.contains(1.0)
    with pytest.raises(DomainError):
        sf.StripRegion(1.0, 0.5)
