"""
Tomograms and rf imperfections
==============================

Linear-inversion tomography of the prepared states, first with ideal pulses
and then with a Gaussian spread of rf amplitudes across the sample.
"""

import numpy as np

from bellspin.core import SpinSystem
from bellspin.tomo import RfErrorModel, TOMOGRAM_LABELS, simulate_tomography

np.set_printoptions(precision=3, suppress=True)
sys = SpinSystem()

for kind in ("S0", "psi_plus"):
    res = simulate_tomography(kind, sys)
    print(f"{kind}: real part of the normalized density matrix, rows/cols {', '.join(TOMOGRAM_LABELS)}")
    print(res.normalized.real)

print("\nrf amplitude spread vs fidelity (200 members, seed 0)")
for spread in (0.0, 0.02, 0.05, 0.1, 0.2, 0.3):
    err = RfErrorModel(spread, 200 if spread else 1, seed=0)
    row = [simulate_tomography(k, sys, err).fidelity for k in ("S0", "T0", "psi_plus", "psi_minus")]
    print(f"  {spread:4.2f}  " + "  ".join(f"{f:.5f}" for f in row))

# Errors that hit every member alike do not average out
res = simulate_tomography("psi_plus", sys, RfErrorModel(amplitude_step=20.0))
print(f"\nrf amplitudes rounded to a 20 Hz grid: psi_plus fidelity {res.fidelity:.4f}")
