import math
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from jacobi_threshold.core import (
    DomainError,
    OnVarietyError,
    Potential,
    ThetaPolynomial,
    big_q_sequence,
    c_n,
    is_zero,
    jost_coeffs,
    jost_eval,
    jost_eval_via_q,
    phi,
    q_sequence,
    reflect,
    theta_of_z,
    to_exact,
    z_of_theta,
)

from conftest import potentials, rationals

SQ2 = math.sqrt(2)


def q_by_determinant(pot, z):
    """q_k as the determinant of the leading k x k block of J_n - z."""
    out = [2.0]
    for k in range(1, pot.n + 1):
        A = np.zeros((k, k))
        for i in range(k):
            A[i, i] = 2 - z + float(pot.v(i + 1))
            if i + 1 < k:
                A[i, i + 1] = A[i + 1, i] = -SQ2 if i == 0 else -1.0
        out.append(np.linalg.det(A))
    return out


# -- scalars -----------------------------------------------------------------

def test_to_exact_parses_rationals_and_decimals():
    assert to_exact("3/7") == F(3, 7)
    assert to_exact("0.1") == F(1, 10)
    assert to_exact(0.5) == F(1, 2)
    with pytest.raises(ValueError):
        to_exact(float("nan"))


def test_zero_test_modes():
    assert is_zero(F(0)) and not is_zero(F(1, 10**30))
    assert is_zero(1e-13) and not is_zero(1e-11)
    assert is_zero(1e-9, scale=1e4)


# -- dispersion map ----------------------------------------------------------

def test_theta_of_z_thresholds():
    assert theta_of_z(0) == 1
    assert theta_of_z(4) == -1
    assert theta_of_z(0.0) == 1.0


def test_theta_of_z_rational_point():
    # theta = 1/2 sits at z = 2 - 1/2 - 2 = -1/2
    assert theta_of_z(F(-1, 2)) == F(1, 2)
    assert isinstance(theta_of_z(F(-1, 2)), F)


def test_theta_of_z_irrational_root():
    # theta + 1/theta = 9/4 has roots (9 +- sqrt 17)/8
    t = theta_of_z(F(-1, 4))
    assert t == pytest.approx((9 - math.sqrt(17)) / 8, rel=1e-15)
    assert t + 1 / t == pytest.approx(9 / 4, rel=1e-15)


def test_theta_of_z_inside_band_rejected():
    for z in (0.5, 2, F(7, 2)):
        with pytest.raises(DomainError):
            theta_of_z(z)


def test_theta_of_z_complex():
    for z in (1j, 2 + 0.5j, -3 - 1e-3j, 3.9 + 1e-9j):
        t = theta_of_z(z)
        assert abs(t) < 1
        assert t + 1 / t == pytest.approx(2 - z, abs=1e-12)


def test_z_of_theta_examples():
    assert z_of_theta(1) == 0
    assert z_of_theta(-1) == 4
    assert z_of_theta(F(1, 2)) == F(-1, 2)
    with pytest.raises(ZeroDivisionError):
        z_of_theta(0)


@given(rationals(-1, 1, 1000).filter(lambda t: t != 0))
def test_theta_z_roundtrip(t):
    assert theta_of_z(z_of_theta(t)) == pytest.approx(float(t), abs=1e-12)


# -- potentials ----------------------------------------------------------------

def test_potential_v_convention():
    p = Potential.exact(["1/2", "3", "-1"])
    assert [p.v(k) for k in (1, 2, 3, 4)] == [1, 3, -1, 0]
    assert Potential.from_v([F(4), F(1)]).mu == (2, 1)


def test_reflect():
    p = Potential.exact([1, -2])
    assert reflect(p).mu == (-1, 2)
    assert reflect(reflect(p)) == p


# -- recurrences ---------------------------------------------------------------

def test_q_sequence_examples():
    assert q_sequence(Potential.exact([1]), 0) == [2, 4]
    assert q_sequence(Potential.exact([0, 0]), 1) == [2, 1, -1]


def test_q_sequence_matches_determinants():
    pot = Potential.exact(["1/3", "-2", "5/7", "1"])
    for z in (-0.3, 1.7, 5.0):
        assert np.allclose(q_sequence(pot.as_float(), z), q_by_determinant(pot, z), rtol=1e-12)


@given(rationals(), rationals())
def test_q2_closed_form(m1, m2):
    q = q_sequence(Potential([m1, m2]), 0)
    assert q[2] / 2 == 1 + 2 * m1 + m2 + m1 * m2


def test_big_q_sequence_examples():
    assert big_q_sequence(Potential.exact([1, 1])) == (1, 2, 5)
    assert big_q_sequence(Potential.exact([0] * 6)) == (1,) * 7
    assert big_q_sequence(Potential.exact([-2])) == (1, -1)


def test_c_n_examples():
    assert c_n(Potential([F(1, 2)])) == F(1, 2)
    assert c_n(Potential.exact([0] * 5)) == 0
    pot = Potential.exact([0, 0, 0, 1])
    assert c_n(pot) == 1
    q = q_sequence(pot, 0)
    assert (q[-1] - q[-2]) / 2 == 1
    with pytest.raises(ValueError):
        c_n(Potential([]))


def test_phi_examples():
    assert phi(Potential.exact([0] * 4)) == -1
    assert phi(Potential.exact([0])) == -1
    with pytest.raises(OnVarietyError) as exc:
        phi(Potential.exact([-1]))
    assert exc.value.index == 0


def test_phi_float_band():
    with pytest.raises(OnVarietyError):
        phi(Potential([-1.0 + 1e-14]))


# -- Jost polynomial -----------------------------------------------------------

def test_jost_coeffs_free():
    assert jost_coeffs(Potential([])).coeffs == (F(1, 2), 0, F(-1, 2))


def test_jost_coeffs_one_site():
    v1 = F(3, 5)
    assert jost_coeffs(Potential.from_v([v1])).coeffs == (F(1, 2), v1 / 2, F(-1, 2))


def test_jost_coeffs_two_zero_sites():
    p = jost_coeffs(Potential.exact([0, 0]))
    assert p(F(1)) == 0
    assert p(F(0)) == F(1, 2)
    from jacobi_threshold.oracle import jost_via_linear_system

    for t in (0.5, -0.7, 0.1):
        assert jost_via_linear_system(Potential([0.0, 0.0]), t) == pytest.approx(float(p(F(t))), abs=1e-13)


def test_jost_eval_examples():
    mu1 = F(-7, 3)
    assert jost_eval(Potential([mu1]), 1) == mu1
    assert jost_eval(Potential([mu1]), -1) == -mu1
    for pot in (Potential.exact([1, 2, 3]), Potential.exact(["-1/2"] * 7)):
        assert jost_eval(pot, 0) == F(1, 2)


@given(potentials(0, 7), rationals(-1, 1, 200).filter(lambda t: t != 0))
def test_jost_eval_matches_q_representation(pot, t):
    assert jost_eval(pot, t) == jost_eval_via_q(pot, t)


@given(potentials(2, 10))
@settings(max_examples=60)
def test_jost_degree_bound(pot):
    assert jost_coeffs(pot).degree <= 2 * pot.n - 1


@given(rationals())
def test_jost_degree_single_site_is_two(mu1):
    # QQ_0 = 2 leaves the theta^2 term uncancelled when n = 1
    assert jost_coeffs(Potential([mu1])).degree == 2


def test_jost_degree_generic_equality():
    pot = Potential.exact(["1/3", "2/7", "-5/11", "3"])
    assert jost_coeffs(pot).degree == 2 * pot.n - 1


def test_reflection_coefficients_one_site():
    v1 = F(5, 2)
    p = jost_coeffs(Potential.from_v([v1]))
    assert jost_coeffs(reflect(Potential.from_v([v1]))).coeffs == (F(1, 2), -v1 / 2, F(-1, 2))
    assert p.parity_reflect() == jost_coeffs(reflect(Potential.from_v([v1])))


# -- invariants ----------------------------------------------------------------

@given(potentials(0, 10))
def test_q_sequence_at_zero_is_twice_big_q(pot):
    assert q_sequence(pot, 0) == [2 * q for q in big_q_sequence(pot)]


@given(potentials(1, 10))
def test_c_n_is_jost_at_one(pot):
    assert c_n(pot) == jost_eval(pot, 1)


@given(potentials(1, 10))
def test_c_n_shift_identity(pot):
    assert big_q_sequence(pot.shifted_last(-1))[-1] == c_n(pot)


@given(potentials(0, 8), st.lists(rationals(-3, 3, 100), min_size=100, max_size=100))
@settings(max_examples=20)
def test_symmetry_principle(pot, thetas):
    for t in thetas:
        assert jost_eval(reflect(pot), -t) == jost_eval(pot, t)


@given(potentials(2, 9))
def test_ratio_equals_offset_from_phi(pot):
    qs = big_q_sequence(pot)
    for m in range(1, pot.n):
        if qs[m] == 0:
            continue
        prefix = Potential(pot.mu[:m])
        assert qs[m + 1] / qs[m] == pot.mu[m] - phi(prefix)
        assert (qs[m + 1] * qs[m] > 0) == (pot.mu[m] > phi(prefix))


@given(potentials(1, 6), st.lists(rationals(), min_size=1, max_size=4))
def test_zero_in_q_sequence_flips_neighbour(prefix, tail):
    from jacobi_threshold.classifier import on_variety_point

    try:
        base = on_variety_point(prefix, "Q")
    except OnVarietyError:
        return
    qs = big_q_sequence(Potential(base.mu + tuple(tail)))
    m = base.n
    assert qs[m] == 0
    assert qs[m + 1] == -qs[m - 1]
    assert all(not (a == 0 and b == 0) for a, b in zip(qs, qs[1:]))


def test_theta_polynomial_trims():
    p = ThetaPolynomial([1, 2, 0, 0])
    assert p.degree == 1 and p.coeffs == (1, 2)
    assert ThetaPolynomial([0, 0]).degree == -1
