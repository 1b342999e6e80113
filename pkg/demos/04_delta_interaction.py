"""Recovering a delta interaction.

A point interaction of strength h at x = a is carried by the antiderivative
sigma = h * Heaviside(x - a).  The spectral data of the problem determines the
step, and the truncated reconstruction converges to it in the mean square as
the truncation grows.
"""
import numpy as np

from isturm import (Polynomial, ProblemL, SigmaStep, forward_spectral_data,
                    invert_spectral_data, sigma_l2_error)

prob = ProblemL(SigmaStep(1.0, np.pi / 2), Polynomial([1]), Polynomial([1]))
print("forward data for sigma = Heaviside(x - pi/2), r1 = 1, r2 = 1 ...")
sd = forward_spectral_data(prob, 80, n_x=1024)

print(f"\n  {'K':>4} {'L2 error of sigma^K':>22}")
for K in (20, 40, 60, 80):
    res = invert_spectral_data(sd.truncated(K), K=K, n_x=257)
    err = sigma_l2_error(res.x_grid, res.sigma, prob.sigma)
    print(f"  {K:>4} {err:>22.4f}")

res = invert_spectral_data(sd, K=80, n_x=257)
xs = res.x_grid
print("\nreconstructed sigma across the jump (K = 80):")
for x in (1.2, 1.45, 1.545, 1.60, 1.75, 2.4):
    ix = int(round(x / np.pi * 256))
    print(f"  x = {xs[ix]:.3f}: sigma^K = {res.sigma[ix].real:+.4f} "
          f"(true {prob.sigma(xs[ix]).real:+.1f})")
