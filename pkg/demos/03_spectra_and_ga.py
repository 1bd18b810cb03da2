"""
Reading two-spin order from the 1H doublet
==========================================

After a (pi/2)_y pulse on 1H, <S1zS2z> shows up as an antisymmetric doublet.
G_a integrates the difference between the two halves of the spectrum.
"""

import numpy as np

from bellspin.core import SpinSystem, equilibrium_state
from bellspin.seq import builtin_program, execute
from bellspin.spectra import antisymmetric_component, spectrum_of_state

sys = SpinSystem()
rho_eq = equilibrium_state(sys)

states = {"eq": rho_eq}
states.update({k: execute(builtin_program(k), sys, rho_eq).final for k in ("S0", "T0", "psi_plus", "psi_minus")})

for name, rho in states.items():
    spec = spectrum_of_state(rho, sys)
    lo = spec.amplitudes.real[np.argmin(np.abs(spec.offsets + 69))]
    hi = spec.amplitudes.real[np.argmin(np.abs(spec.offsets - 69))]
    print(f"{name:9s}  line at -69 Hz {lo:+.3e}   line at +69 Hz {hi:+.3e}   G_a = {antisymmetric_component(spec):.6e}")

# A crude text plot of the singlet spectrum between -120 and 120 Hz
spec = spectrum_of_state(states["S0"], sys)
sel = (spec.offsets > -120) & (spec.offsets < 120)
f, g = spec.offsets[sel][::12], spec.amplitudes.real[sel][::12]
scale = 30 / np.max(np.abs(g))
for fi, gi in zip(f, g):
    bar = int(round(gi * scale))
    print(f"{fi:+7.1f} Hz " + (" " * (30 + bar) + "*" if bar < 0 else " " * 30 + "|" + "#" * bar))
