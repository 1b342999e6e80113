"""Regular-potential layer: both-ends polynomial conditions, recovery of the
leading p2 coefficient from the Weyl asymptotics on the negative real ray,
and the transfer between the antiderivative form and the classical q form.

The classical problem -y'' + q y = lam y with conditions on y' is equivalent
to the quasi-derivative problem with sigma(x) = int_0^x q, r1 unchanged and
r2 shifted by sigma(pi) r1; the recovery direction undoes the shift and
differentiates sigma.
"""
from __future__ import annotations

import numpy as np

from .errors import FitUnstable
from .maineq import MainEquationContext, PhiTable
from .model import ModelData
from .problem import Polynomial
from .reconstruct import SigmaResult, _bc_constant_sum, reconstruct_sigma
from .spectral import SpectralData

PI = np.pi


def estimate_bN2(m1_fn, N1: int, rho_mags=None) -> complex:
    """Leading coefficient of p2 from the large-|lambda| behavior of the Weyl
    function on the negative real axis.

    With rho = -i t (the branch with arg rho in [-pi/2, pi/2)), the quantity
    i rho (1 + i rho lam^N1 M1(lam)) tends to b_{N2}; a linear fit in 1/t
    removes the first-order remainder.
    """
    if rho_mags is None:
        rho_mags = np.linspace(20.0, 80.0, 13)
    t = np.asarray(rho_mags, dtype=float)
    lam = -(t**2) + 0j
    rho = -1j * t
    m1v = np.asarray(m1_fn(lam), dtype=complex)
    est = (1j * rho) * (1.0 + (1j * rho) * lam**N1 * m1v)
    A = np.stack([np.ones_like(t), 1.0 / t], axis=1)
    coef, *_ = np.linalg.lstsq(A, est, rcond=None)
    resid = np.max(np.abs(A @ coef - est))
    b = complex(coef[0])
    if resid > 0.05 * max(abs(b), 1e-2):
        raise FitUnstable(f"b_N2 extrapolation residual {resid:.3g} against b={b:.6g}")
    return b


def build_p2(zeros, bN2: complex) -> Polynomial:
    """p2(lam) = b_N2 prod_j (lam - z_j); repeated zeros allowed."""
    coeffs = np.array([1.0], dtype=complex)
    for z in zeros:
        coeffs = np.convolve(coeffs, np.array([-complex(z), 1.0], dtype=complex))
    return Polynomial(complex(bN2) * coeffs)


def sigma_to_q(sigma_values: np.ndarray, x_grid: np.ndarray | None = None,
               smooth: float = 0.0):
    """Differentiate a uniform-grid sigma: q = sigma'.

    Five-point central stencils inside, one-sided fourth-order at the edges;
    an optional moving-average pass (window from `smooth`) tames noisy data.
    Returns (q_values, sigma_at_pi).
    """
    sig = np.asarray(sigma_values, dtype=complex)
    n = len(sig)
    if x_grid is None:
        x_grid = np.linspace(0.0, PI, n)
    h = x_grid[1] - x_grid[0]
    if smooth > 0:
        w = max(int(round(smooth / h)) | 1, 1)
        if w > 1:
            kernel = np.ones(w) / w
            pad = np.concatenate([sig[:1].repeat(w // 2), sig, sig[-1:].repeat(w // 2)])
            sig = np.convolve(pad, kernel, mode="valid")
    q = np.empty_like(sig)
    q[2:-2] = (sig[:-4] - 8 * sig[1:-3] + 8 * sig[3:-1] - sig[4:]) / (12 * h)
    fwd = np.array([-25.0, 48.0, -36.0, 16.0, -3.0]) / (12 * h)
    for i in (0, 1):
        q[i] = np.sum(fwd * sig[i:i + 5])
    for i in (n - 2, n - 1):
        q[i] = -np.sum(fwd * sig[i:i - 5:-1])
    return q, complex(np.asarray(sigma_values, dtype=complex)[-1])


def check_r2_shift(r2: Polynomial, r1: Polynomial, sigma_pi: complex) -> Polynomial:
    """Classical-form boundary polynomial: r2_check = r2 - sigma(pi) r1.

    For the normalized class the shift only moves the lower coefficients;
    with r1 = 1 this is the scalar shift of the Robin constant.
    """
    c2 = np.zeros(max(len(r2.coeffs), len(r1.coeffs)), dtype=complex)
    c2[: len(r2.coeffs)] = r2.coeffs
    c2[: len(r1.coeffs)] -= sigma_pi * np.asarray(r1.coeffs)
    return Polynomial(c2)


def robin_constants(table: PhiTable, sd: SpectralData, md: ModelData,
                    K: int | None = None, sigma: SigmaResult | None = None,
                    ctx: MainEquationContext | None = None):
    """(b0, b0_check) for the constant-condition case M1 = 0.

    b0 is the large-|lambda| limit of the r2 expression (minus the boundary
    constant sum); b0_check subtracts the reconstructed sigma(pi)."""
    if md.M1 != 0:
        raise ValueError("robin_constants applies to the M1 = 0 case")
    if ctx is None:
        ctx = MainEquationContext(sd, md, K or table.K)
    if sigma is None:
        sigma = reconstruct_sigma(table, sd, md, ctx=ctx)
    b0 = -_bc_constant_sum(ctx, table)
    return complex(b0), complex(b0 - sigma.sigma_pi)
