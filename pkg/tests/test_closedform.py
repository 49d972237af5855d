"""Closed-form profiles, the degeneracy ladder, and kernel elements."""

import math

import numpy as np
import pytest

from hardylab.closedform import (
    aubin_talenti,
    harmonic_data,
    harmonic_multiplicity,
    kernel_Z,
    kernel_Zj,
    lambda_j,
    linearized_potential,
    morse_index_critical,
    morse_threshold_critical,
    mu_j,
    u_delta_lambda,
)
from hardylab.errors import ParameterError
from hardylab.numerics import make_grid, sample
from hardylab.params import ProblemParams, c_lambda, critical_exponent
from hardylab.verify import residual_linearized, residual_ode


def _P(N, lam):
    return ProblemParams(N=N, p=critical_exponent(N), lam=lam)


# ------------------------------------------------------ degeneracy ladder

@pytest.mark.parametrize("N", range(3, 11))
def test_lambda_1_is_zero(N):
    assert abs(lambda_j(N, 1)) <= 1e-14


def test_lambda_2_values():
    # (N-2)^2/4 * (1 - mu_2/(N-1)) with mu_2 = 2N
    assert abs(lambda_j(3, 2) + 0.5) <= 1e-12
    assert abs(lambda_j(4, 2) + 5.0 / 3.0) <= 1e-12


@pytest.mark.parametrize("N", [3, 4, 5, 6])
def test_lambda_j_decreasing(N):
    vals = [lambda_j(N, j) for j in range(0, 8)]
    assert all(x > y for x, y in zip(vals, vals[1:]))
    # j = 0 sits at the quadratic-form threshold
    assert abs(vals[0] - (N - 2) ** 2 / 4.0) <= 1e-14


@pytest.mark.parametrize("N", [3, 4, 5, 7])
def test_mu_j_values(N):
    for j in range(0, 6):
        assert mu_j(N, j) == j * (N - 2 + j)


@pytest.mark.parametrize("N", [3, 4, 5, 6, 8])
def test_multiplicities_count_harmonics(N):
    # dimension of degree-j spherical harmonics equals the difference of
    # homogeneous-polynomial counts C(N+j-1, j) - C(N+j-3, j-2)
    for j in range(0, 7):
        expect = math.comb(N + j - 1, j) - (math.comb(N + j - 3, j - 2) if j >= 2 else 0)
        assert harmonic_multiplicity(N, j) == expect
    assert harmonic_multiplicity(N, 0) == 1
    assert harmonic_multiplicity(N, 1) == N


def test_harmonic_data_bundle():
    d = harmonic_data(4, 2)
    assert (d.j, d.mu, d.mult) == (2, 8, 9)


# ----------------------------------------------------------- Morse index

def test_morse_threshold_exact_on_ladder():
    # tau(lambda_j) = j exactly, for the same ladder the threshold inverts
    for N in range(3, 9):
        for j in range(0, 7):
            tau = morse_threshold_critical(N, lambda_j(N, j))
            assert abs(tau - j) <= 1e-10


def test_morse_index_table():
    # for lambda in (lambda_2, lambda_1) only degrees 0 and 1 contribute
    assert morse_index_critical(_P(4, -1.0)) == 1 + 4
    assert morse_index_critical(_P(4, -0.25)) == 1 + 4
    # just below lambda_2 the degree-2 sector (mult 9 for N = 4) joins
    assert morse_index_critical(_P(4, -5.0 / 3.0 - 1e-9)) == 1 + 4 + 9
    assert morse_index_critical(_P(3, -0.5 - 1e-9)) == 1 + 3 + 5


def test_morse_index_grows_without_bound():
    m_prev = 0
    for k in range(0, 5):
        m = morse_index_critical(_P(4, -(10.0**k)))
        assert m >= m_prev
        m_prev = m
    assert m_prev > 50


def test_morse_index_near_zero_lambda():
    # 0 = lambda_1, so just below it the radial mode and the N translations count
    assert morse_index_critical(_P(4, -1e-6)) == 1 + 4
    assert morse_index_critical(_P(3, -1e-6)) == 1 + 3


# ------------------------------------------------------- profile family

@pytest.mark.parametrize("N,lam", [(3, -0.5), (4, -1.0), (4, -2.5), (5, -1.0)])
@pytest.mark.parametrize("delta", [0.5, 1.0, 3.0])
def test_profile_solves_equation(N, lam, delta):
    P = _P(N, lam)
    g = make_grid(1e-4, 1e4, 8193, "log")
    u = sample(u_delta_lambda(delta, P), g)
    assert residual_ode(u, P) <= 1e-4


def test_profile_height_matches_c_lambda():
    # sup of u^(p-1) r^2-ish normalization: at r where the profile peaks the
    # closed-form amplitude is delta^((N-2)/2)-scaled; check the simplest
    # invariant instead: u(1) for delta = 1 equals 2^(-(N-2)/2)
    for N, lam in ((4, -1.0), (3, -2.0)):
        P = _P(N, lam)
        u = u_delta_lambda(1.0, P)
        got = float(u(np.array([1.0]))[0])
        assert abs(got - 2.0 ** (-(N - 2) / 2.0)) <= 1e-14


def test_aubin_talenti_matches_lambda_zero_profile():
    P = _P(4, 0.0)
    r = np.geomspace(1e-3, 1e3, 101)
    assert np.allclose(aubin_talenti(2.0, 4)(r), u_delta_lambda(2.0, P)(r), rtol=1e-14)


def test_c_lambda_normalizes_equation():
    # scaled profile c_lambda^(1/(p-1)) u solves with unit coefficient; the
    # family u_delta solves -u'' - (N-1)/r u' - lam u/r^2 = C u^p with C = c_lambda
    P = _P(4, -1.0)
    g = make_grid(1e-3, 1e3, 4097, "log")
    u = sample(u_delta_lambda(1.0, P), g)
    scaled = sample(
        lambda r: c_lambda(P) ** (1.0 / (P.p - 1.0)) * u_delta_lambda(1.0, P)(r), g
    )
    # the subcritical form substitutes the unit-coefficient right side
    assert residual_ode(scaled, P, form="subcritical") <= 1e-4
    assert residual_ode(u, P, form="subcritical") > 1e-2


# ----------------------------------------------------------- kernel elements

@pytest.mark.parametrize("N,lam", [(4, -1.0), (3, -0.5), (5, -3.0)])
def test_radial_kernel_solves_linearized_equation(N, lam):
    P = _P(N, lam)
    g = make_grid(1e-4, 1e4, 8193, "log")
    z = sample(kernel_Z(P), g)
    assert residual_linearized(z, P, 0) <= 1e-4


def test_radial_kernel_fails_off_family():
    # the same Z against the wrong harmonic sector has an O(1) defect
    P = _P(4, -1.0)
    g = make_grid(1e-3, 1e3, 4097, "log")
    z = sample(kernel_Z(P), g)
    assert residual_linearized(z, P, 2) > 1e-2


def test_kernel_Zj_only_on_ladder():
    # the extra kernel elements exist only at lam = lambda_j
    P = _P(4, lambda_j(4, 2))
    fn = kernel_Zj(P, 2)
    g = make_grid(1e-4, 1e4, 8193, "log")
    assert residual_linearized(sample(fn, g), P, 2) <= 1e-4
    with pytest.raises(ParameterError):
        kernel_Zj(_P(4, -1.0), 2)


@pytest.mark.parametrize("j", [1, 2, 3])
def test_kernel_Zj_at_ladder_points(j):
    N = 4
    P = _P(N, lambda_j(N, j))
    g = make_grid(1e-4, 1e4, 8193, "log")
    psi = sample(kernel_Zj(P, j), g)
    assert residual_linearized(psi, P, j) <= 1e-4


# ------------------------------------------------------ linearized potential

def test_linearized_potential_values():
    # W = N(N+2) nu^2 r^(2(nu-1)) / (1 + r^(2nu))^2
    P0 = _P(4, 0.0)
    W0 = linearized_potential(P0)
    assert abs(float(W0(np.array([1e-14]))[0]) - 4.0 * 6.0) <= 1e-10
    P = _P(4, -1.0)
    W = linearized_potential(P)
    nu = math.sqrt(2.0)
    assert abs(float(W(np.array([1.0]))[0]) - 4.0 * 6.0 * nu * nu / 4.0) <= 1e-12
    assert abs(float(W(np.array([1.0]))[0]) - 12.0) <= 1e-12
