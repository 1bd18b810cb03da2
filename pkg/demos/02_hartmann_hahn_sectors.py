"""
Why the DHH block makes Bell states
===================================

In the x basis the rf Hamiltonian splits into a zero-quantum and a
double-quantum 2x2 block.  Detuning one block to J/2 gives a pi rotation of
that block in time pi*sqrt(2)/J, while the other free parameter is irrelevant.
"""

import numpy as np

from bellspin.core import SpinSystem, bell_state, fidelity, product_state
from bellspin.dynamics import cp_propagator, dhh_amplitudes, dhh_block, dhh_time, h_rf, matrix_exponential, off_sector_magnitude, sector_block

sys = SpinSystem()
J = sys.J

# No matter the amplitudes, the two sectors never talk to each other
rng = np.random.default_rng(0)
worst = max(off_sector_magnitude(matrix_exponential(h_rf(sys, *rng.uniform(-5 * J, 5 * J, 2)), 1 / J)) for _ in range(200))
print(f"largest zero<->double element over 200 random drives: {worst:.1e}")

# Zero-quantum splitting at w1 - w2 = J/2
w1, w2 = dhh_amplitudes("delta", J)
ev = np.linalg.eigvalsh(sector_block(h_rf(sys, w1, w2), "x", "zero"))
print(f"ZQ splitting {ev[1] - ev[0]:.3f} rad/s vs J/sqrt(2) = {J / np.sqrt(2):.3f}")

# The four mappings, and the effect of the free parameter
rows = [("du", "delta", "S0", [2, 5, 10]), ("ud", "delta", "T0", [2, 5, 10]), ("uu", "sigma", "psi_plus", [0, 0.25]), ("dd", "sigma", "psi_minus", [0, 0.25])]
for start, mode, target, frees in rows:
    rho = np.outer(product_state(start, "x"), product_state(start, "x").conj())
    fids = [fidelity(dhh_block(rho, mode, sys, f * J), bell_state(target, "x")) for f in frees]
    print(f"|{start}>_x --{mode}--> {target:9s}: " + ", ".join(f"{f:.12f}" for f in fids))

# Irradiating along +x instead swaps the labels
rho = np.outer(product_state("du", "x"), product_state("du", "x").conj())
print("phase +x, |du>_x -> T0 fidelity", round(fidelity(dhh_block(rho, "delta", sys, phase="x"), bell_state("T0", "x")), 12))

# Timing: the fidelity peaks at exactly pi*sqrt(2)/J
for scale in (0.9, 0.95, 1.0, 1.05, 1.1):
    f = fidelity(dhh_block(rho, "delta", sys, t=scale * dhh_time(J)), bell_state("S0", "x"))
    print(f"t = {scale:.2f} * pi*sqrt(2)/J  fidelity {f:.6f}")

# The CP block: the DQ block turns by 2pi, so it is a pure phase
print("CP double-quantum block:\n", np.round(sector_block(cp_propagator(sys), "x", "double"), 12))
