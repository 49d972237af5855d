"""Acceptance battery: one test per shipped guarantee, one verdict line each.

Run with -s to see the lines for passing criteria too; under plain -v the
per-test PASSED/FAILED column carries the same information.
"""

import json
import math

import numpy as np
import pytest

from hardylab.bifurcation import LambdaCache, L_of_lambda, find_lambda_k, lambda_of
from hardylab.cli import main as cli_main
from hardylab.closedform import (
    harmonic_data,
    kernel_Z,
    lambda_j,
    morse_index_critical,
    morse_threshold_critical,
    u_delta_lambda,
    aubin_talenti,
)
from hardylab.numerics import make_grid, sample
from hardylab.params import (
    ProblemParams,
    critical_exponent,
    nu_lambda,
    transform_coeffs,
)
from hardylab.radial_ode import (
    ShootingConfig,
    origin_constant,
    reconstruct_u,
    solve_vlambda,
)
from hardylab.spectral import (
    critical_halfline_eig,
    decay_exponent,
    lambda1,
    rayleigh_quotient,
    verify_decay,
)
from hardylab.transform import energy_identity_check, forward, inverse
from hardylab.verify import (
    hardy_sobolev_ratio,
    pohozaev_check,
    residual_linearized,
    residual_ode,
    sobolev_constant_numeric,
)


def _verdict(num, ok, text):
    print(f"criterion {num:02d} {'pass' if ok else 'FAIL'}: {text}")
    assert ok


def _crit(N, lam):
    return ProblemParams(N=N, p=critical_exponent(N), lam=lam)


@pytest.fixture(scope="module")
def benchmark():
    P = ProblemParams(N=4, p=2.0, lam=-1.0)
    v = solve_vlambda(P)
    return P, v, reconstruct_u(v, P)


@pytest.fixture(scope="module")
def scan(benchmark):
    P, _, _ = benchmark
    cache = LambdaCache()
    points = [find_lambda_k(P.N, P.p, k, cache=cache) for k in (1, 2, 3)]
    return points, cache


def test_c01_effective_dimension_identity():
    worst = 0.0
    for N in range(3, 9):
        for lam in (-7.0, -1.0, -1e-3, 0.0):
            C = transform_coeffs(_crit(N, lam))
            worst = max(worst, abs(C.M - N) / N)
    _verdict(1, worst <= 1e-12, f"M = N at the critical exponent, rel err {worst:.1e}")


def test_c02_degeneracy_ladder_values():
    worst1 = max(abs(lambda_j(N, 1)) for N in range(3, 11))
    err2 = max(abs(lambda_j(3, 2) + 0.5), abs(lambda_j(4, 2) + 5.0 / 3.0))
    ok = worst1 <= 1e-14 and err2 <= 1e-12
    _verdict(2, ok, f"lambda_1 = 0 (err {worst1:.1e}), lambda_2 values (err {err2:.1e})")


def test_c03_transform_round_trip_and_bubble():
    round_err = 0.0
    bubble_err = 0.0
    for N in (3, 4):
        for lam in (-2.0, -0.5):
            P = _crit(N, lam)
            C = transform_coeffs(P)
            g = make_grid(1e-4, 1e4, 2001, "log")
            for delta in (0.5, 1.0, 2.0):
                u = sample(u_delta_lambda(delta, P), g)
                back = inverse(forward(u, C), C)
                scale = float(np.max(np.abs(u.values)))
                round_err = max(
                    round_err, float(np.max(np.abs(back.values - u.values))) / scale
                )
                v = forward(u, C)
                bubble = aubin_talenti(delta, N)(v.grid.nodes)
                bubble_err = max(
                    bubble_err,
                    float(np.max(np.abs(v.values - bubble)) / np.max(np.abs(bubble))),
                )
    ok = round_err <= 1e-10 and bubble_err <= 1e-12
    _verdict(3, ok, f"round trip {round_err:.1e}, profile-to-bubble map {bubble_err:.1e}")


def test_c04_closed_form_residuals_quarter():
    ok = True
    report = []
    for N, lam in ((4, -1.0), (3, -0.5)):
        P = _crit(N, lam)
        ru = [
            residual_ode(sample(u_delta_lambda(1.0, P), make_grid(1e-4, 1e4, n, "log")), P)
            for n in (8192, 16384)
        ]
        rz = [
            residual_linearized(
                sample(kernel_Z(P), make_grid(1e-4, 1e4, n, "log")), P, 0
            )
            for n in (8192, 16384)
        ]
        ok &= ru[0] <= 1e-4 and rz[0] <= 1e-4
        ok &= 3.0 <= ru[0] / ru[1] <= 5.0 and 3.0 <= rz[0] / rz[1] <= 5.0
        report.append(f"N={N}: u {ru[0]:.1e} (x{ru[0]/ru[1]:.2f}), Z {rz[0]:.1e} (x{rz[0]/rz[1]:.2f})")
    _verdict(4, ok, "; ".join(report))


def test_c05_energy_identity():
    g = make_grid(1e-6, 1e4, 20001, "log")
    P = _crit(4, -1.0)
    gap = energy_identity_check(sample(u_delta_lambda(1.0, P), g), P, transform_coeffs(P))[2]
    P0 = _crit(4, 0.0)
    gap0 = energy_identity_check(sample(u_delta_lambda(1.0, P0), g), P0, transform_coeffs(P0))[2]
    ok = gap <= 1e-4 and gap0 <= 1e-12
    _verdict(5, ok, f"weighted energy identity gap {gap:.1e} (lam=-1), {gap0:.1e} (lam=0)")


def test_c06_halfline_eigenvalue():
    ok = True
    report = []
    for N in (3, 4, 5):
        val = critical_halfline_eig(N).value
        rel = abs(val - (1.0 - N)) / (N - 1.0)
        coarse = abs(critical_halfline_eig(N, mesh_n=2000).value - (1.0 - N))
        fine = abs(val - (1.0 - N))
        ok &= rel <= 0.01 and coarse / fine >= 3.0
        report.append(f"N={N}: {val:.6f} (rel {rel:.1e}, conv x{coarse / fine:.1f})")
    _verdict(6, ok, "; ".join(report))


def test_c07_quotient_equality_case():
    ok = True
    report = []
    for N in (3, 4):
        S_num = sobolev_constant_numeric(N)
        for lam in (-0.5, -5.0 / 3.0):
            P = _crit(N, lam)
            want = (1.0 - 4.0 * lam / (N - 2) ** 2) ** ((N - 1.0) / N)
            ratios = []
            for delta in (0.5, 1.0, 2.0):
                g = make_grid(1e-4, 1e4, 16385, "log")
                ratios.append(hardy_sobolev_ratio(sample(u_delta_lambda(delta, P), g), P) / S_num)
            dev = max(abs(x / want - 1.0) for x in ratios)
            spread = (max(ratios) - min(ratios)) / want
            ok &= dev <= 5e-3 and spread <= 1e-3
            report.append(f"N={N} lam={lam:.3g}: dev {dev:.1e}")
    _verdict(7, ok, "quotient matches the scaled sharp constant; " + "; ".join(report))


def test_c08_morse_index_table():
    m_a = morse_index_critical(_crit(3, -0.25))
    m_b = morse_index_critical(_crit(3, -0.6))
    jump = m_b - m_a
    tau_err = max(
        abs(morse_threshold_critical(N, lambda_j(N, j)) - j)
        for N in range(3, 9)
        for j in range(0, 7)
    )
    ok = m_a == 4 and m_b == 9 and jump == 5 and tau_err <= 1e-10
    _verdict(
        8, ok, f"N=3: m(-0.25)={m_a}, m(-0.6)={m_b}, jump {jump}; tau ladder err {tau_err:.1e}"
    )


def test_c09_shooting_benchmark(benchmark):
    from hardylab.verify import transformed_energy_gap

    P, v, sol = benchmark
    end = abs(float(v.values[-1]))
    positive = bool(np.all(v.values[:-1] > 0.0))
    decreasing = bool(np.all(np.diff(v.values) <= 0.0))
    gap = transformed_energy_gap(P)
    slope, _ = origin_constant(sol)
    slope_ok = abs(slope - (math.sqrt(2.0) - 1.0)) <= 0.01 * (math.sqrt(2.0) - 1.0)
    res = residual_ode(sol.u, P, window=(1e-3, 1.0))
    base = v.values
    height_dev = 0.0
    for h in (0.5, 2.0):
        other = solve_vlambda(P, ShootingConfig(height=h)).values
        height_dev = max(height_dev, float(np.max(np.abs(other - base))) / base[0])
    ok = (
        end <= 1e-8
        and positive
        and decreasing
        and gap <= 1e-6
        and slope_ok
        and res <= 1e-4
        and height_dev <= 1e-8
    )
    _verdict(
        9,
        ok,
        f"v(1)={end:.1e}, energy gap {gap:.1e}, slope {slope:.6f}, "
        f"residual {res:.1e}, height invariance {height_dev:.1e}",
    )


def test_c10_weighted_eigenvalue_contract(benchmark):
    P, v, _ = benchmark
    Lam1 = lambda_of(-1.0, P.N, P.p)
    Lam0 = lambda_of(-1e-4, P.N, P.p)
    pair = lambda1(P, v)
    rq = rayleigh_quotient(P, v, pair.psi)
    rq_gap = abs(rq - pair.value) / abs(pair.value)
    interior = pair.psi.values[:-1]
    signed = bool(np.all(interior >= 0.0))
    ok = Lam1 < 0.0 and (1.0 - P.N) < Lam0 < 0.0 and rq_gap <= 1e-3 and signed
    _verdict(
        10,
        ok,
        f"Lambda(-1)={Lam1:.6f}, Lambda(-1e-4)={Lam0:.6f}, "
        f"Rayleigh re-evaluation gap {rq_gap:.1e}, single-signed ground state",
    )


def test_c11_bifurcation_scan(benchmark, scan):
    P, _, _ = benchmark
    points, cache = scan
    lams = [bp.lambda_k for bp in points]
    decreasing = all(x > y for x, y in zip(lams, lams[1:])) and all(x < 0 for x in lams)
    mults_ok = [bp.morse_after - bp.morse_before for bp in points] == [4, 9, 16]
    mults_match = all(
        bp.mult == harmonic_data(P.N, bp.k).mult for bp in points
    )
    signs_ok = True
    ident_ok = True
    for bp in points:
        alpha, beta = bp.bracket
        mu_k = harmonic_data(P.N, bp.k).mu
        L_lo = L_of_lambda(alpha, P.N, P.p, cache=cache)
        L_hi = L_of_lambda(beta, P.N, P.p, cache=cache)
        signs_ok &= L_lo + 16.0 * mu_k < 0.0 < L_hi + 16.0 * mu_k
        mu_next = harmonic_data(P.N, bp.k + 1).mu
        signs_ok &= L_lo + 16.0 * mu_next > 0.0
        for i in range(1, bp.k):
            signs_ok &= L_hi + 16.0 * harmonic_data(P.N, i).mu < 0.0
        for lam in bp.bracket:
            b = transform_coeffs(ProblemParams(N=P.N, p=P.p, lam=lam)).b
            Lam = lambda_of(lam, P.N, P.p, cache=cache)
            L = L_of_lambda(lam, P.N, P.p, cache=cache)
            ident_ok &= abs(L - 16.0 * Lam / (b * b)) <= 1e-10 * abs(L)
    branches_ok = [bp.predicted_branches for bp in points] == [1, 2, 1]
    ok = decreasing and mults_ok and mults_match and signs_ok and ident_ok and branches_ok
    _verdict(
        11,
        ok,
        "lambda_k = " + ", ".join(f"{x:.8f}" for x in lams)
        + "; Morse jumps 4, 9, 16; sign conditions and the L identity hold",
    )


def test_c12_pohozaev_certificate():
    P = _crit(4, -1.0)
    g = make_grid(1e-6, 1e6, 32769, "log")
    good = pohozaev_check(sample(u_delta_lambda(1.0, P), g), P)
    wrong = pohozaev_check(sample(aubin_talenti(1.0, 4), g), P)
    ok = good <= 1e-5 and wrong > 1e-2
    _verdict(12, ok, f"identity gap {good:.1e} for the solution, {wrong:.1e} for wrong lam")


def test_c13_decay_slope():
    ok = True
    report = []
    for N in (3, 4, 5):
        theta = decay_exponent(float(N), float(N - 1))
        slope, gap = verify_decay(critical_halfline_eig(N).psi, theta)
        ok &= theta == 1.0 and gap <= 0.05
        report.append(f"N={N}: slope {slope:.4f}")
    _verdict(13, ok, "origin slope within 0.05 of theta = 1; " + "; ".join(report))


def test_c14_cli_determinism(tmp_path):
    cases = {
        "params": ["params", "--N", "4", "--critical", "--lambda", "-1"],
        "spectrum": ["critical-spectrum", "--N", "4", "--j-max", "4"],
        "radial": ["radial", "--N", "4", "--p", "2", "--lambda", "-1"],
        "bifurcate": [
            "bifurcate", "--N", "4", "--p", "2",
            "--k-range", "1:1", "--scan-n", "40", "--mesh-n", "2000",
        ],
        "verify": ["verify", "--N", "4", "--critical", "--lambda", "-1"],
        "diagram": ["diagram", "--N", "3", "--critical", "--lambda-range=-0.6:-0.1:3"],
    }
    ok = True
    for name, args in cases.items():
        outs = []
        for run in (1, 2):
            out = tmp_path / f"{name}.{run}"
            rc = cli_main(args + ["--output", str(out)])
            ok &= rc == 0
            blob = out.read_bytes()
            side = out.with_name(out.name + ".json")
            if side.exists():
                blob += side.read_bytes()
            outs.append(blob)
        ok &= outs[0] == outs[1]
    _verdict(14, ok, "byte-identical reruns for all six subcommands")
