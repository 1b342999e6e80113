import numpy as np
import pytest
from scipy.optimize import brentq

from isturm import (Polynomial, ProblemL, SigmaPolynomialInX, SigmaStep,
                    SigmaZero, char_delta, find_eigenvalues, integrate_solution,
                    phi_at, weight_numbers, weyl_M)
from isturm._util import sqrt_lambda
from isturm.errors import NonFiniteState
from isturm.forward import _psi_zero_batch

PI = np.pi


def test_trace_cos():
    tr = integrate_solution(SigmaZero(), 1.0, (1.0, 0.0), "ltr", 256)
    np.testing.assert_allclose(tr.y, np.cos(tr.grid), atol=1e-13)
    np.testing.assert_allclose(tr.y_quasi, -np.sin(tr.grid), atol=1e-13)


def test_trace_linear():
    tr = integrate_solution(SigmaZero(), 0.0, (0.0, 1.0), "ltr", 64)
    np.testing.assert_allclose(tr.y, tr.grid, atol=1e-13)
    np.testing.assert_allclose(tr.y_quasi, np.ones_like(tr.grid), atol=1e-13)


def _step_oracle(h, a, lam, x):
    """Closed-form solution for sigma = h * Heaviside(x - a), init (1, 0).

    On each side the equation is -y'' = lam y; at the jump y is continuous and
    y' jumps by +h y(a) (equivalently the quasi-derivative is continuous)."""
    rho = complex(sqrt_lambda(lam))
    x = np.asarray(x, dtype=float)
    ya = np.cos(rho * a)
    dya = -rho * np.sin(rho * a) + h * np.cos(rho * a)  # y' just right of a
    s = x - a
    right_y = ya * np.cos(rho * s) + dya * _sinc_rho(rho, s)
    right_dy = -ya * rho * np.sin(rho * s) + dya * np.cos(rho * s)
    y = np.where(x <= a, np.cos(rho * x), right_y)
    dy = np.where(x <= a, -rho * np.sin(rho * x), right_dy)
    sig = np.where(x > a, h, 0.0)
    return y, dy - sig * y


def _sinc_rho(rho, s):
    if abs(rho) < 1e-12:
        return s
    return np.sin(rho * s) / rho


def test_trace_step_matches_glued_closed_form():
    h, a, lam = 1.0, PI / 2, 4.0
    tr = integrate_solution(SigmaStep(h, a), lam, (1.0, 0.0), "ltr", 257)
    y, yq = _step_oracle(h, a, lam, tr.grid)
    np.testing.assert_allclose(tr.y, y, atol=1e-12)
    np.testing.assert_allclose(tr.y_quasi, yq, atol=1e-12)


def test_trace_right_to_left():
    tr = integrate_solution(SigmaZero(), 4.0, (1.0, 0.0), "rtl", 128)
    # solution with y(pi)=1, y^[1](pi)=0 is cos(2(pi - x))
    np.testing.assert_allclose(tr.y, np.cos(2 * (PI - tr.grid)), atol=1e-12)


def test_trace_initial_data_exact():
    tr = integrate_solution(SigmaStep(0.5, 1.0), 2.3 + 1j, (0.7, -0.2j), "ltr", 65)
    assert tr.y[0] == 0.7 and tr.y_quasi[0] == -0.2j


def test_integration_overflow_raises():
    with pytest.raises(NonFiniteState):
        integrate_solution(SigmaZero(), -4.0e5, (1.0, 0.0), "ltr", 33)


def test_phi_at_cos3():
    y, yq = phi_at(SigmaZero(), 9.0, 512)
    assert abs(y - np.cos(3 * PI)) < 1e-12
    assert abs(yq - (-3) * np.sin(3 * PI)) < 1e-10


def test_phi_at_lambda_zero():
    y, yq = phi_at(SigmaZero(), 0.0, 64)
    assert abs(y - 1) < 1e-13 and abs(yq) < 1e-13


def test_phi_at_self_convergence_sigma_x():
    # q = 1 via sigma = x: compare n_x against an 8x denser reference
    coarse = phi_at(SigmaPolynomialInX([0, 1]), 0.0, 512)
    fine = phi_at(SigmaPolynomialInX([0, 1]), 0.0, 4096)
    assert abs(coarse[0] - fine[0]) < 5e-9
    assert abs(coarse[1] - fine[1]) < 5e-9


def test_char_delta_neumann_eigenvalue():
    prob = ProblemL(SigmaZero(), Polynomial([1]), Polynomial([0]))
    assert abs(char_delta(prob, 4.0, 512)) < 1e-12
    # closed form -rho sin(rho pi) away from the root
    lam = 2.7
    rho = np.sqrt(lam)
    assert abs(char_delta(prob, lam, 512) - (-rho * np.sin(rho * PI))) < 1e-12


def test_char_delta_model_triple_zero():
    prob = ProblemL(SigmaZero(), Polynomial([0, 1]), Polynomial([0]))
    lam = 2.7 + 0.4j
    rho = complex(sqrt_lambda(lam))
    want = -lam * rho * np.sin(rho * PI)
    assert abs(char_delta(prob, lam, 512) - want) < 1e-10 * abs(want)
    # zero of order M1 + 1 = 2 at the origin: Delta ~ -pi lam^2
    for eps in (1e-2, 1e-3):
        val = abs(char_delta(prob, eps, 512))
        assert PI * eps**2 / 2 < val < 2 * PI * eps**2


def test_char_delta_robin_bisection_oracle():
    # oracle: rho tan(rho pi) = 1 solved by bisection on the closed form
    rho_star = brentq(lambda r: r * np.tan(r * PI) - 1.0, 0.05, 0.49, xtol=1e-14)
    prob = ProblemL(SigmaZero(), Polynomial([1]), Polynomial([1]))
    assert abs(char_delta(prob, rho_star**2, 1024)) < 1e-8


def test_find_eigenvalues_model():
    prob = ProblemL(SigmaZero(), Polynomial([0, 1]), Polynomial([0]))
    eigs = find_eigenvalues(prob, 5, 512)
    flat = [r.lam for r in eigs for _ in range(r.multiplicity)]
    np.testing.assert_allclose(flat, [0, 0, 1, 4, 9], atol=1e-8)
    assert eigs[0].multiplicity == 2


def test_find_eigenvalues_neumann():
    prob = ProblemL(SigmaZero(), Polynomial([1]), Polynomial([0]))
    eigs = find_eigenvalues(prob, 4, 512)
    flat = [r.lam for r in eigs for _ in range(r.multiplicity)]
    np.testing.assert_allclose(flat, [0, 1, 4, 9], atol=1e-9)


def test_find_eigenvalues_robin_vs_bisection():
    prob = ProblemL(SigmaZero(), Polynomial([1]), Polynomial([1]))
    eigs = find_eigenvalues(prob, 3, 1024)
    # oracle: cot(rho pi) = rho per window
    f = lambda r: np.cos(r * PI) - r * np.sin(r * PI)
    want = [brentq(f, 1e-9, 0.5 - 1e-9, xtol=1e-14) ** 2,
            brentq(f, 1.0 + 1e-9, 1.5, xtol=1e-14) ** 2,
            brentq(f, 2.0 + 1e-9, 2.5, xtol=1e-14) ** 2]
    np.testing.assert_allclose([r.lam for r in eigs], want, atol=1e-8)


def test_weight_numbers_model_m1():
    prob = ProblemL(SigmaZero(), Polynomial([0, 1]), Polynomial([0]))
    eigs = weight_numbers(prob, find_eigenvalues(prob, 5, 512), 512)
    flat = [a for r in eigs for a in r.alpha_coeffs]
    np.testing.assert_allclose(flat, [1 / PI, 0, 2 / PI, 2 / PI, 2 / PI], atol=1e-9)


def test_weight_numbers_neumann():
    prob = ProblemL(SigmaZero(), Polynomial([1]), Polynomial([0]))
    eigs = weight_numbers(prob, find_eigenvalues(prob, 4, 512), 512)
    flat = [a for r in eigs for a in r.alpha_coeffs]
    np.testing.assert_allclose(flat, [1 / PI, 2 / PI, 2 / PI, 2 / PI], atol=1e-9)


def test_weight_numbers_robin_vs_closed_form_quadrature(robin_sd25):
    # oracle: 64-node circle quadrature of the closed-form Weyl function
    # M(lam) = (cos rp + sin rp / r) / (r sin rp - cos rp)
    _, sd = robin_sd25

    def m_closed(lam):
        r = sqrt_lambda(lam)
        return (np.cos(r * PI) + np.sin(r * PI) / r) / (r * np.sin(r * PI) - np.cos(r * PI))

    th = np.exp(2j * PI * (np.arange(64) + 0.5) / 64)
    for k in [0, 1, 5, 12]:
        rad = 0.25 * min(abs(sd.lam[k] - sd.lam[k - 1]) if k else abs(sd.lam[1] - sd.lam[0]),
                         abs(sd.lam[k + 1] - sd.lam[k]))
        z = sd.lam[k] + rad * th
        want = np.mean(m_closed(z) * (z - sd.lam[k]))
        assert abs(sd.alpha[k] - want) < 1e-6
        assert abs(sd.alpha[k] - 2 / PI) < 0.2  # kappa_n decay


def test_weyl_M_closed_form_value():
    prob = ProblemL(SigmaZero(), Polynomial([1]), Polynomial([0]))
    val = weyl_M(prob, -1.0, 512)
    assert abs(val - (-1.0037418731973213)) < 1e-9  # -coth(pi)


def test_weyl_M_model_power_independent():
    p0 = ProblemL(SigmaZero(), Polynomial([1]), Polynomial([0]))
    p1 = ProblemL(SigmaZero(), Polynomial([0, 1]), Polynomial([0]))
    assert abs(weyl_M(p0, -1.0, 512) - weyl_M(p1, -1.0, 512)) < 1e-10


def test_weyl_M_residue_definition(robin_sd25):
    prob, sd = robin_sd25
    lam_k = sd.lam[2]
    th = np.exp(2j * PI * np.arange(12) / 12)
    z = lam_k + 1e-3 * th
    vals = weyl_M(prob, z, 1024)
    np.testing.assert_allclose((z - lam_k) * vals, sd.alpha[2], atol=1e-4)


# -- invariants --------------------------------------------------------------


def test_wronskian_constancy():
    prob = ProblemL(SigmaStep(0.7, 1.1), Polynomial([1, 1]), Polynomial([2]))
    lam = 3.3 + 0.9j
    n_x = 1025
    phi = integrate_solution(prob.sigma, lam, (1.0, 0.0), "ltr", n_x)
    from isturm.problem import poly_eval
    psi = integrate_solution(prob.sigma, lam,
                             (poly_eval(prob.r1, lam), -poly_eval(prob.r2, lam)),
                             "rtl", n_x)
    w = psi.y * phi.y_quasi - phi.y * psi.y_quasi
    for ix in (0, n_x // 2, n_x - 1):
        assert abs(w[ix] - w[0]) < 1e-6 * abs(w[0])


def test_self_adjoint_real_spectrum(robin_sd25):
    _, sd = robin_sd25
    assert np.max(np.abs(sd.lam.imag)) < 1e-9
    assert np.max(np.abs(sd.alpha.imag)) < 1e-9
    assert np.all(sd.alpha.real > 0)


def test_asymptotics_k40(poly_sd40):
    _, sd = poly_sd40
    n = np.arange(1, 41)
    kappa = sd.rho - (n - 1 - 1)  # M1 = 1
    assert np.max(np.abs(kappa[20:])) < 0.1
    assert np.max(np.abs(kappa[20:30])) >= np.max(np.abs(kappa[30:])) - 1e-12
    assert np.max(np.abs(sd.alpha[20:] - 2 / PI)) < 0.05


def test_grid_convergence_smooth_sigma():
    prob = ProblemL(SigmaPolynomialInX([0, 1]), Polynomial([1]), Polynomial([0]))
    lams = {}
    for n_x in (256, 512, 1024):
        eigs = find_eigenvalues(prob, 6, n_x)
        lams[n_x] = np.array([r.lam for r in eigs])
    e1 = np.max(np.abs(lams[256] - lams[1024]))
    e2 = np.max(np.abs(lams[512] - lams[1024]))
    assert e2 < e1 / 3.0  # at least second order


def test_delta_lower_bound_on_circles(poly_sd40):
    prob, _ = poly_sd40
    m1 = prob.m1
    ratios = []
    for n in range(5, 16):
        rho = (n + 0.5) * np.exp(1j * np.linspace(-PI / 2, PI / 2, 32, endpoint=False))
        lam = rho**2
        d = char_delta(prob, lam, 1024)
        tau = np.abs(rho.imag)
        ratios.append(np.min(np.abs(d) / (np.abs(rho) ** (2 * m1 + 1) * np.exp(PI * tau))))
    assert min(ratios) > 1e-3
