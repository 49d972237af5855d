"""Scaling-based shooting solver against an independent RK4 integration."""

import numpy as np
import pytest

from hardylab.errors import ParameterError
from hardylab.numerics import GridFunction, RadialGrid, make_grid
from hardylab.params import ProblemParams, transform_coeffs
from hardylab.radial_ode import (
    RadialSolution,
    ShootingConfig,
    origin_constant,
    reconstruct_u,
    solve_canonical,
    solve_vlambda,
)

# first zero of the unit-height regular solution of v'' + 2/r v' + v^2 = 0,
# i.e. the classical index-2 polytrope radius
XI1_M3_P2 = 4.352874595946


def _rk4_unit_shot(M, p, dr=2e-4, r0=1e-6, want_r=()):
    """Fixed-step RK4 for v'' = -(M-1)/r v' - v^p from the series start.

    Returns (R1, samples) where samples[i] linearly interpolates v at
    want_r[i].  Entirely independent of the package's integrator.
    """

    def f(r, v, w):
        return w, -(M - 1.0) / r * w - np.sign(v) * abs(v) ** p

    v = 1.0 - r0 * r0 / (2.0 * M)
    w = -r0 / M
    r = r0
    want = sorted(want_r)
    out = {}
    wi = 0
    prev = (r, v, w)
    while v > 0.0 and r < 50.0:
        prev = (r, v, w)
        k1v, k1w = f(r, v, w)
        k2v, k2w = f(r + dr / 2, v + dr / 2 * k1v, w + dr / 2 * k1w)
        k3v, k3w = f(r + dr / 2, v + dr / 2 * k2v, w + dr / 2 * k2w)
        k4v, k4w = f(r + dr, v + dr * k3v, w + dr * k3w)
        v += dr / 6 * (k1v + 2 * k2v + 2 * k3v + k4v)
        w += dr / 6 * (k1w + 2 * k2w + 2 * k3w + k4w)
        r += dr
        while wi < len(want) and prev[0] <= want[wi] <= r:
            t = (want[wi] - prev[0]) / dr
            out[want[wi]] = (1 - t) * prev[1] + t * v
            wi += 1
    # quadratic refinement of the crossing from the last positive state
    r0_, v0_, w0_ = prev
    a = f(r0_, v0_, w0_)[1] / 2.0
    disc = w0_ * w0_ - 4.0 * a * v0_
    delta = (-w0_ - np.sqrt(disc)) / (2.0 * a) if a != 0.0 else -v0_ / w0_
    return r0_ + delta, [out[x] for x in want]


def test_first_zero_matches_oracle_and_reference():
    R1_oracle, _ = _rk4_unit_shot(3.0, 2.0)
    assert abs(R1_oracle - XI1_M3_P2) <= 1e-8
    v = solve_canonical(3.0, 2.0)
    # for p = 2 the central height of the boundary-normalized profile is R1^2
    R1_solver = np.sqrt(v.values[0])
    assert abs(R1_solver - R1_oracle) <= 1e-7


def test_profile_matches_oracle_pointwise():
    M, p = 3.0, 2.0
    probe = (0.1, 0.3, 0.5, 0.7, 0.9)
    R1, _ = _rk4_unit_shot(M, p)
    _, raw = _rk4_unit_shot(M, p, want_r=tuple(R1 * x for x in probe))
    # put the probe radii on the grid so no interpolation enters the compare
    nodes = np.unique(np.concatenate([np.geomspace(1e-6, 1.0, 257), probe]))
    g = RadialGrid(nodes=nodes)
    v = solve_canonical(M, p, out_grid=g)
    alpha = v.values[0]
    for x, vu in zip(probe, raw):
        want = R1 ** (2.0 / (p - 1.0)) * vu
        got = v.values[np.searchsorted(nodes, x)]
        assert abs(got - want) <= 1e-7 * alpha


def test_three_heights_land_on_one_profile():
    g = make_grid(1e-8, 1.0, 2049, "log")
    base = solve_canonical(4.0, 2.5, out_grid=g).values
    for h in (0.25, 4.0):
        other = solve_canonical(4.0, 2.5, ShootingConfig(height=h), out_grid=g).values
        assert np.max(np.abs(other - base)) <= 1e-8 * base[0]


def test_start_radius_and_tolerance_robustness():
    g = make_grid(1e-8, 1.0, 513, "log")
    ref = solve_canonical(3.5, 2.0, ShootingConfig(r0=1e-6, tol=1e-12), out_grid=g).values
    for cfg in (
        ShootingConfig(r0=1e-7, tol=1e-12),
        ShootingConfig(r0=1e-5, tol=1e-12),
        ShootingConfig(r0=1e-6, tol=1e-10),
    ):
        got = solve_canonical(3.5, 2.0, cfg, out_grid=g).values
        assert np.max(np.abs(got - ref)) <= 1e-7 * ref[0]


def test_benchmark_height_regression():
    P = ProblemParams(N=4, p=2.0, lam=-1.0)
    v = solve_vlambda(P)
    sol = reconstruct_u(v, P)
    assert abs(sol.alpha - 77.41828168664156) <= 1e-7 * 77.4


def test_solve_vlambda_is_rescaled_canonical():
    P = ProblemParams(N=4, p=2.0, lam=-1.0)
    C = transform_coeffs(P)
    g = make_grid(1e-8, 1.0, 1025, "log")
    v = solve_vlambda(P, out_grid=g)
    v1 = solve_canonical(C.M, P.p, out_grid=g)
    factor = C.A ** (-1.0 / (P.p - 1.0))
    assert np.allclose(v.values, factor * v1.values, rtol=1e-14, atol=0.0)


def test_reconstructed_u_vanishes_at_origin_with_fitted_power():
    P = ProblemParams(N=4, p=2.0, lam=-1.0)
    sol = reconstruct_u(solve_vlambda(P), P)
    slope, C0 = origin_constant(sol)
    want_slope = (P.N - 2) * (sol.coeffs.nu - 1.0) / 2.0
    assert abs(slope - want_slope) <= 1e-6 * want_slope
    assert abs(C0 - sol.alpha) <= 1e-6 * sol.alpha


def test_lambda_zero_reconstruction_is_identity():
    P = ProblemParams(N=4, p=2.0, lam=0.0)
    v = solve_vlambda(P)
    sol = reconstruct_u(v, P)
    assert np.array_equal(sol.u.values, v.values)
    assert np.array_equal(sol.u.grid.nodes, v.grid.nodes)


def test_solution_validation():
    g = make_grid(1e-6, 1.0, 64, "log")
    P = ProblemParams(N=4, p=2.0, lam=-1.0)
    C = transform_coeffs(P)
    good = GridFunction(grid=g, values=1.0 - g.nodes**2)
    rising = GridFunction(grid=g, values=np.concatenate([1.0 - g.nodes[:-1] ** 2, [0.5]]))
    negative = GridFunction(grid=g, values=np.cos(4.0 * g.nodes) - np.cos(4.0))
    u = GridFunction(grid=g, values=good.values)
    RadialSolution(params=P, coeffs=C, v=good, u=u, alpha=1.0)
    with pytest.raises(ParameterError):
        RadialSolution(params=P, coeffs=C, v=rising, u=u, alpha=1.0)
    with pytest.raises(ParameterError):
        RadialSolution(params=P, coeffs=C, v=negative, u=u, alpha=1.0)


@pytest.mark.parametrize(
    "M,p",
    [(2.0, 1.5), (4.0, 3.0), (4.0, 0.5), (3.0, 5.0)],
)
def test_canonical_rejects_bad_ranges(M, p):
    with pytest.raises(ParameterError):
        solve_canonical(M, p)


def test_canonical_rejects_grid_not_ending_at_one():
    g = make_grid(1e-6, 2.0, 257, "log")
    with pytest.raises(ParameterError):
        solve_canonical(3.0, 2.0, out_grid=g)


def test_config_validation():
    with pytest.raises(ParameterError):
        ShootingConfig(r0=0.1)
    with pytest.raises(ParameterError):
        ShootingConfig(tol=1e-2)
    with pytest.raises(ParameterError):
        ShootingConfig(height=1e4)
