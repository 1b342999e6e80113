"""Round-trip harness: forward data generation, inversion, error report.

The uniqueness theory says the spectral data determines (sigma, r1, r2); the
operational check is forward -> invert -> compare at a stated truncation.
"""
from __future__ import annotations

import time

import numpy as np

from .forward import forward_spectral_data, weyl_M1
from .model import ModelData
from .problem import FullProblem, Polynomial
from .reconstruct import invert_spectral_data
from .regular import check_r2_shift, estimate_bN2, robin_constants, sigma_to_q

PI = np.pi


def sigma_l2_error(x_grid, values, sigma_fn) -> float:
    """Trapezoid L2(0, pi) distance between grid samples and a callable."""
    diff = np.abs(np.asarray(values) - np.asarray(sigma_fn(x_grid)))
    return float(np.sqrt(np.trapezoid(diff**2, x_grid)))


def sigma_l2_norm(x_grid, values) -> float:
    return float(np.sqrt(np.trapezoid(np.abs(np.asarray(values)) ** 2, x_grid)))


def coeff_error(p: Polynomial, target) -> float:
    """Max coefficient deviation against ascending target coefficients."""
    t = np.asarray(target, dtype=complex)
    c = np.zeros(max(len(p.coeffs), len(t)), dtype=complex)
    c[: len(p.coeffs)] = p.coeffs
    tt = np.zeros_like(c)
    tt[: len(t)] = t
    return float(np.max(np.abs(c - tt)))


def roundtrip(prob, K: int, n_x_forward: int = 1024, n_x_inverse: int = 512,
              N: int | None = None) -> dict:
    """forward -> invert -> compare; returns a flat report dict."""
    inner = prob.inner if isinstance(prob, FullProblem) else prob
    t0 = time.perf_counter()
    sd = forward_spectral_data(inner, K, n_x_forward)
    t1 = time.perf_counter()
    res = invert_spectral_data(sd, K=K, n_x=n_x_inverse, N=N)
    t2 = time.perf_counter()

    return {
        "K": K,
        "M1_detected": res.m1,
        "N": res.N,
        "t_forward": t1 - t0,
        "t_invert": t2 - t1,
        "sigma_l2_error": sigma_l2_error(res.x_grid, res.sigma, inner.sigma),
        "r1_coeff_error": coeff_error(res.r1, inner.r1.coeffs),
        "r2_coeff_error": coeff_error(res.r2, inner.r2.coeffs),
        "r1": res.r1,
        "r2": res.r2,
        "diagnostics": res.diagnostics,
        "result": res,
    }


def regular_roundtrip(full: FullProblem, K: int, n_x_forward: int = 1024,
                      n_x_inverse: int = 512, passes: int = 1) -> dict:
    """Both-ends polynomial problem: recover b_N2 from the Weyl asymptotics,
    run the inner round trip with defect correction, and transfer back to the
    classical form (q, r2_check)."""
    from .refine import invert_refined, rebuild_sigma_tail, recover_q

    inner = full.inner
    n1 = full.p1.degree()

    def m1_fn(lam):
        return weyl_M1(inner, full.p1, full.p2, lam, n_x=n_x_forward)

    # the b_N2 recovery presumes a nonzero p2
    b_est = None if full.p2.is_zero else estimate_bN2(m1_fn, n1)
    t0 = time.perf_counter()
    sd = forward_spectral_data(inner, K, n_x_forward)
    t1 = time.perf_counter()
    ref = invert_refined(sd, K=K, n_x=n_x_inverse, passes=passes)
    t2 = time.perf_counter()
    q, qdiag = recover_q(ref.sigma, ref.x_grid, K)
    sigma_fixed, sig_pi = rebuild_sigma_tail(ref.sigma, q, ref.x_grid, K)
    report = {
        "K": K,
        "t_forward": t1 - t0,
        "t_invert": t2 - t1,
        "bN2_estimate": b_est,
        "bN2_true": complex(full.p2.coeffs[-1]),
        "sigma_l2_error": sigma_l2_error(ref.x_grid, sigma_fixed, inner.sigma),
        "r1_coeff_error": coeff_error(ref.r1, inner.r1.coeffs),
        "r2_coeff_error": coeff_error(ref.r2, inner.r2.coeffs),
        "q_values": q,
        "sigma_values": sigma_fixed,
        "sigma_pi": sig_pi,
        "r2_check": check_r2_shift(ref.r2, ref.r1, sig_pi),
        "x_grid": ref.x_grid,
        "result": ref,
        "diagnostics": {**ref.diagnostics, **qdiag},
    }
    if ref.base.m1 == 0:
        report["b0"] = complex(ref.r2.coeffs[0])
        report["b0_check"] = complex(ref.r2.coeffs[0] - sig_pi)
    return report
