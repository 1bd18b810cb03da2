"""
Preparing the four Bell states from thermal equilibrium
=======================================================

Walks through the three-step preparation and prints the two-spin order
after each stage.
"""

import numpy as np

from bellspin.core import S1z, S1zS2z, S2z, SpinSystem, bell_state, deviation_fidelity, equilibrium_state, expectation
from bellspin.seq import builtin_program, execute, format_program

sys = SpinSystem()
print(f"J/2pi = {sys.J_hz:.0f} Hz, eps1 = {sys.eps1:.3e}, eps2 = {sys.eps2:.3e}, ratio {sys.eps1 / sys.eps2:.4f}")

# The singlet program, as text in the pulse-program language
prog = builtin_program("S0")
print(format_program(prog))

# Follow the polarizations through every instruction
trace = execute(prog, sys, equilibrium_state(sys))
for label, rho in trace.states:
    print(f"{label:38s} <S1z>={expectation(rho, S1z):+.3e} <S2z>={expectation(rho, S2z):+.3e} <S1zS2z>={expectation(rho, S1zS2z):+.3e}")

# All four targets reach the ideal state up to the pseudo-pure scale factor
for kind in ("psi_minus", "S0", "T0", "psi_plus"):
    rho = execute(builtin_program(kind), sys, equilibrium_state(sys)).final
    expected = np.sign(expectation(rho, S1zS2z)) * (sys.eps1 + sys.eps2) / 8
    print(f"{kind:10s} fidelity {deviation_fidelity(rho, bell_state(kind)):.12f}  <S1zS2z> = {expectation(rho, S1zS2z):+.4e} (expected {expected:+.4e})")
