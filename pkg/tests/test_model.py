import numpy as np
import pytest

from isturm import ModelData, kernel_D, kernel_D_derivs, model_phi, model_phi_dx
from isturm._util import sqrt_lambda
from isturm.errors import OrderTooHigh
from isturm.model import EPS_D_BASE, q_coefficients
from isturm.spectral import SpectralData

PI = np.pi
rng = np.random.default_rng(11)


def test_model_data_closed_forms():
    md = ModelData(1)
    assert [md.lambda_tilde(n) for n in range(1, 6)] == [0, 0, 1, 4, 9]
    np.testing.assert_allclose([md.alpha_tilde(n) for n in range(1, 6)],
                               [1 / PI, 0, 2 / PI, 2 / PI, 2 / PI])


def test_model_phi_values():
    assert abs(model_phi(PI, 4.0) - 1.0) < 1e-14          # cos 2 pi
    assert abs(model_phi(PI / 3, 9.0) - (-1.0)) < 1e-14   # cos pi
    assert abs(model_phi(PI, 0.0, j=1) - (-PI**2 / 2)) < 1e-12


def test_model_phi_derivatives_vs_finite_difference():
    # lambda-derivative tower against central differences of cos(sqrt(lam) x)
    x = 1.7
    for lam0 in (3.0, 0.02, -1.5, 2 + 1j):
        h = 1e-5 * max(1, abs(lam0))
        f = lambda lam: np.cos(sqrt_lambda(lam) * x)
        fd1 = (f(lam0 + h) - f(lam0 - h)) / (2 * h)
        assert abs(model_phi(x, lam0, j=1) - fd1) < 1e-6
        fd2 = (f(lam0 + h) - 2 * f(lam0) + f(lam0 - h)) / h**2 / 2
        assert abs(model_phi(x, lam0, j=2) - fd2) < 1e-4


def test_model_phi_dx_vs_finite_difference():
    lam = 2.4 - 0.7j
    for j in range(3):
        g = 1e-6
        fd = (model_phi(1.2 + g, lam, j=j) - model_phi(1.2 - g, lam, j=j)) / (2 * g)
        assert abs(model_phi_dx(1.2, lam, j=j) - fd) < 1e-7


def test_kernel_D_orthogonality():
    assert abs(kernel_D(PI, 1.0, 4.0)) < 1e-13


def test_kernel_D_at_zero_zero():
    assert abs(kernel_D(PI, 0.0, 0.0) - PI) < 1e-13


def test_kernel_D_near_diagonal_vs_quadrature():
    # high-resolution trapezoid oracle for int_0^x cos^2(sqrt(lam) t) dt
    x, lam = 1.3, 2.7
    t = np.linspace(0, x, 100001)
    want = np.trapezoid(np.cos(np.sqrt(lam) * t) ** 2, t)
    for mu in (lam + 1e-9, lam - 1e-9):
        assert abs(kernel_D(x, lam, mu) - want) < 1e-10


def test_kernel_D_symmetry():
    for _ in range(12):
        lam = complex(rng.normal(scale=8), rng.normal())
        mu = complex(rng.normal(scale=8), rng.normal())
        x = rng.uniform(0.1, PI)
        a, b = kernel_D(x, lam, mu), kernel_D(x, mu, lam)
        assert abs(a - b) < 1e-10 * (1 + abs(a))


def test_kernel_D_branch_consistency():
    # far-quotient and near-Taylor branches agree across the switch zone
    x, lam = 2.1, 5.0
    eps = EPS_D_BASE * (1 + abs(lam))
    for d in (0.5 * eps, 2.0 * eps):
        mu = lam + d
        quotient = ((np.sqrt(lam) * np.sin(np.sqrt(lam) * x) * np.cos(np.sqrt(mu) * x)
                     - np.sqrt(mu) * np.cos(np.sqrt(lam) * x) * np.sin(np.sqrt(mu) * x))
                    / (lam - mu))
        assert abs(kernel_D(x, lam, mu) - quotient) < 1e-9


def test_kernel_D_derivs_order_zero_matches():
    x, lam, mu = 1.9, 3.3, 7.7
    assert abs(kernel_D_derivs(x, lam, mu, 0, 0) - kernel_D(x, lam, mu)) < 1e-12


def test_kernel_D_derivs_vs_finite_difference():
    x, lam, mu = PI, 1.0, 1.0
    h = 1e-4
    fd = (kernel_D(x, lam, mu + h) - kernel_D(x, lam, mu - h)) / (2 * h)
    assert abs(kernel_D_derivs(x, lam, mu, 0, 1) - fd) < 1e-6


def test_kernel_D_derivs_empty_interval():
    assert kernel_D_derivs(0.0, 1.0, 2.0, 1, 1) == 0


def test_kernel_D_derivs_order_cap():
    with pytest.raises(OrderTooHigh):
        kernel_D_derivs(1.0, 1.0, 1.0, 4, 0)


def test_q_coefficients_model_all_zero():
    md = ModelData(1)
    sd = md.spectral_data(6)  # data identical to the model
    for n in (1, 3):
        for i in (0, 1):
            for k in (1, 2, 4):
                for j in (0, 1):
                    # hat M = 0 termwise: data and model principal parts cancel
                    q0 = q_coefficients(sd, md, 1.1, n, i, k, 0)
                    q1 = q_coefficients(sd, md, 1.1, n, i, k, 1)
                    assert abs(q0 - q1) < 1e-12


def test_q_coefficients_diagonal_simple():
    md = ModelData(0)
    sd = md.spectral_data(5)
    x = 0.9
    k = 3
    lam_k = sd.lam[k - 1]
    rho = np.sqrt(lam_k.real)
    want = sd.alpha[k - 1] * (x / 2 + np.sin(2 * rho * x) / (4 * rho))
    got = q_coefficients(sd, md, x, k, 0, k, 1)
    assert abs(got - want) < 1e-12


def test_q_coefficients_vs_contour_quadrature():
    # independent oracle: residue of A(x, lam_ni, mu) at mu = lam_kj by circle
    # quadrature, one perturbed record
    md = ModelData(0)
    base = md.spectral_data(8)
    lam = base.lam.copy()
    lam[0] = lam[0] + 0.1
    sd = SpectralData.from_flat(lam, base.alpha)
    x = PI / 2

    def hatM(mu):
        out = np.zeros_like(mu)
        for i in range(sd.K):
            out = out + sd.alpha[i] / (mu - sd.lam[i]) - base.alpha[i] / (mu - base.lam[i])
        return out

    def Dk(lmb, mu):
        rl, rm = sqrt_lambda(lmb), sqrt_lambda(mu)
        return (rl * np.sin(rl * x) * np.cos(rm * x)
                - rm * np.cos(rl * x) * np.sin(rm * x)) / (lmb - mu)

    th = np.exp(2j * PI * (np.arange(256) + 0.5) / 256)
    # the contour can only isolate a family where the data and model poles
    # separate, i.e. at the perturbed record k = 1
    for (n, i, j) in [(2, 0, 0), (3, 1, 0), (2, 0, 1), (4, 0, 1), (1, 0, 0)]:
        lam_ni = sd.lam[n - 1] if i == 0 else base.lam[n - 1]
        lam_kj = sd.lam[0] if j == 0 else base.lam[0]
        z = lam_kj + 0.02 * th
        resid = np.mean(Dk(lam_ni, z) * hatM(z) * (z - lam_kj))
        want = resid if j == 0 else -resid  # family sign of the hatM poles
        got = q_coefficients(sd, md, x, n, i, 1, j)
        assert abs(got - want) < 1e-8
    # at a coincident pole the families cancel inside the full difference
    z = sd.lam[2] + 0.02 * th
    full = np.mean(Dk(sd.lam[1], z) * hatM(z) * (z - sd.lam[2]))
    fam_diff = (q_coefficients(sd, md, x, 2, 0, 3, 0)
                - q_coefficients(sd, md, x, 2, 0, 3, 1))
    assert abs(full - fam_diff) < 1e-8
    assert abs(full) < 1e-10


def test_model_fixed_point_phi():
    md = ModelData(1)
    xs = np.linspace(0, PI, 33)
    for n in (3, 4, 5):
        np.testing.assert_allclose(model_phi(xs, md.lambda_tilde(n)),
                                   np.cos((n - 2) * xs), atol=1e-14)
