"""
Different initial decay of S0 and psi_+
=======================================

Cross-correlated relaxation couples <S1zS2z> to the single-spin
polarizations, so Bell states with opposite two-spin order start to decay at
different rates even though the diagonal rate mu12 is shared.
"""

import numpy as np

from bellspin.core import SpinSystem
from bellspin.relax import (
    RateMatrix,
    bell_initial_conditions,
    eigenmodes,
    fit_initial_exponential,
    initial_rate,
    simulate_decay,
)

sys = SpinSystem()
rates = RateMatrix.calibrated(sys)
print("calibrated rates (1/s):", {k: round(v, 6) for k, v in rates.to_dict().items()})
print("eigenvalues (1/s):", np.round(eigenmodes(rates)[0], 6))

for kind in ("S0", "psi_plus"):
    k0 = initial_rate(rates, bell_initial_conditions(kind, sys), sys)
    print(f"{kind:8s} initial rate {k0:.4f} 1/s -> tau {1 / k0:.3f} s")

taus = np.arange(0.0, 16.5, 0.5)
curves = {k: simulate_decay(k, rates, sys, taus) for k in ("S0", "psi_plus")}
print("\n tau     G_a(S0)   G_a(psi+)")
for i in range(0, len(taus), 2):
    print(f"{taus[i]:5.1f}   {curves['S0'].values[i]:.4f}    {curves['psi_plus'].values[i]:.4f}")

for kind, curve in curves.items():
    tau, rms = fit_initial_exponential(curve, 6.0)
    print(f"fit over the first 6 s, {kind}: tau = {tau:.3f} s (rms {rms:.1e})")

# Without cross-correlation both decay with 1/mu12
plain = RateMatrix(rates.mu1, rates.mu2, rates.mu12)
for kind in ("S0", "psi_plus"):
    tau, _ = fit_initial_exponential(simulate_decay(kind, plain, sys, taus), 6.0)
    print(f"delta1 = delta2 = 0, {kind}: tau = {tau:.6f} s, 1/mu12 = {1 / plain.mu12:.6f} s")
