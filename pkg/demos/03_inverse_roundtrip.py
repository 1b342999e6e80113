"""Full inverse round trip on a Robin problem.

Forward-computes the spectral data of (sigma = 0, r1 = 1, r2 = 1), feeds the
data to the truncated main-equation machinery, and compares the reconstructed
coefficients against the inputs.  Everything downstream of the spectral data
sees only the numbers {lambda_n, alpha_n}.
"""
import numpy as np

from isturm import (Polynomial, ProblemL, SigmaZero, forward_spectral_data,
                    invert_spectral_data, sigma_l2_norm)

K = 30
prob = ProblemL(SigmaZero(), Polynomial([1]), Polynomial([1]))
print(f"forward: computing {K} eigenvalue/weight pairs ...")
sd = forward_spectral_data(prob, K, n_x=1024)

print("invert: solving the truncated main equation on the grid ...")
res = invert_spectral_data(sd, K=K, n_x=257)

print(f"\n  detected M1            : {res.m1}")
print(f"  contour index N        : {res.N}")
print(f"  |sigma^K|_L2 (true 0)  : {sigma_l2_norm(res.x_grid, res.sigma):.2e}")
print(f"  r1 (true 1)            : {np.round(res.r1.as_array(), 6)}")
print(f"  r2 (true 1)            : {np.round(res.r2.as_array(), 6)}")
print(f"  boundary constant b0   : {res.diagnostics['bc_constant']:.6f}")
print(f"  fit residuals          : r1 {res.diagnostics['r1_fit_residual']:.1e}, "
      f"r2 {res.diagnostics['r2_fit_residual']:.1e}")
print(f"  endpoint defect        : {res.diagnostics['endpoint_defect']:.4f}")
print("\nThe endpoint defect is the series' known measure-zero artifact at")
print("x = pi (it tends to 2 b0); the reported grid is repaired there.")
