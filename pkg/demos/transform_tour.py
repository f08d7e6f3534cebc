"""A short walk through the transform at the default parameters.

Run: python3 demos/transform_tour.py
"""
import numpy as np

from lcjdt import CanonicalMatrix, JacobiParams, LcjdtContext, lc_forward, lc_forward_grid, lc_inverse, lc_kernel
from lcjdt.canonical import relative_l2
from lcjdt.jd_core import jd_kernel
from lcjdt.spectral import PROBES, spatial_energy, spectral_energy

p = JacobiParams(0.5, -0.5)
M = CanonicalMatrix(1.0, 1.0, 1.0, 2.0)
ctx = LcjdtContext(p, M)
print(f"alpha={p.alpha} beta={p.beta} rho={p.rho}  M=(a,b;c,d)={M.as_tuple()}")

# The kernel is a chirp times the Jacobi-Dunkl kernel at eps = -lambda/c,
# so its modulus does not see the chirp.
x = np.array([0.0, 0.5, 1.0, 2.0])
for lam in (0.5, 2.0, 6.0):
    K = lc_kernel(x, lam, ctx)
    k0 = jd_kernel(x, M.eps_of(lam), p)
    print(f"lambda={lam:4}: |Psi| = {np.round(np.abs(K), 6)}  (plain |psi| = {np.round(np.abs(k0), 6)})")

# forward transform of a Gaussian at a few points, by both routes
f = ctx.sample(PROBES["gauss"])
lams = np.array([-3.0, 0.0, 1.0, 4.0])
F1 = lc_forward(f, lams, ctx).values
F2 = lc_forward(f, lams, ctx, path="direct").values
print("\nL f at", lams)
print("  modulation route:", np.round(F1, 8))
print("  direct route    :", np.round(F2, 8))

# on the spectral grid: energy balance and the way back
F = lc_forward_grid(f, ctx)
sg = ctx.spectral_grid()
print(f"\nspatial energy  {spatial_energy(f, p):.15f}")
print(f"spectral energy {spectral_energy(F.values, sg):.15f}")
back = lc_inverse(F, f.grid, ctx)
print(f"round-trip relative L2 error {relative_l2(back, f, p):.2e}")

# a shifted Gaussian is neither even nor odd; it round-trips just the same
g = ctx.sample(PROBES["shifted-gauss"])
print(f"shifted Gaussian round trip  {relative_l2(lc_inverse(lc_forward_grid(g, ctx), g.grid, ctx), g, p):.2e}")
