"""Built-in Bell-state preparation programs.

Every program has three steps: equalize the 1H/13C polarizations, make the
pseudo-pure state |uu>, and turn it into the target Bell state with a DHH
block.  The step-3 pulses and DHH parameters per target:

==========  ===================  ======================  ======  ==========
target      phi1, phi2           state before DHH        DHH     final
==========  ===================  ======================  ======  ==========
psi_minus   (-90)_H, (-90)_C     |d_x d_x>               sigma   -90y both
S0          (-90)_H, (+90)_C     |d_x u_x>               delta   none
T0          (+90)_H, (-90)_C     |u_x d_x>               delta   -90y both
psi_plus    (+90)_H, (+90)_C     |u_x u_x>               sigma   -90y both
==========  ===================  ======================  ======  ==========

The singlet is isotropic, so it needs no final rotation.
"""

from __future__ import annotations

import math
from importlib import resources

from ..core import BELL_KINDS
from .program import CP, DHH, Gradient, PPSPrepare, Pulse, PulseProgram, Quantity

STEP3 = {
    "psi_minus": (-90.0, -90.0, "sigma"),
    "S0": (-90.0, 90.0, "delta"),
    "T0": (90.0, -90.0, "delta"),
    "psi_plus": (90.0, 90.0, "sigma"),
}

DHH_TIME = Quantity(math.pi * math.sqrt(2), -1)
DEFAULT_FREE = {"delta": Quantity(5.0, 1), "sigma": Quantity(0.0, 0)}


def step1_instructions(gradient: str = "diagonal") -> tuple:
    return (
        Pulse(1, 90.0, "y"),
        Pulse(2, 90.0, "y"),
        CP(Quantity(math.pi, -1)),
        Pulse(1, -90.0, "y"),
        Pulse(2, -90.0, "y"),
        Gradient(gradient),
    )


def step1_program(gradient: str = "diagonal") -> PulseProgram:
    """Polarization equalization: 90y on both, CP(pi/J), -90y on both, gradient."""
    return PulseProgram(step1_instructions(gradient), "step1")


def step3_instructions(kind: str) -> tuple:
    phi1, phi2, mode = STEP3[kind]
    ins = [Pulse(1, phi1, "y"), Pulse(2, phi2, "y"), DHH(mode, DHH_TIME, DEFAULT_FREE[mode])]
    if kind != "S0":
        ins += [Pulse(1, -90.0, "y"), Pulse(2, -90.0, "y")]
    return tuple(ins)


def builtin_program(kind: str, gradient: str = "diagonal") -> PulseProgram:
    """Full three-step preparation program for Bell state ``kind``."""
    if kind not in STEP3:
        raise ValueError(f"unknown Bell state {kind!r}; choose from {', '.join(BELL_KINDS)}")
    return PulseProgram(step1_instructions(gradient) + (PPSPrepare(),) + step3_instructions(kind), f"bell_{kind}")


SHIPPED = {"S0": "bell_s0.seq", "T0": "bell_t0.seq", "psi_plus": "bell_psi_plus.seq", "psi_minus": "bell_psi_minus.seq"}


def shipped_program_text(kind: str) -> str:
    return resources.files("bellspin.seq").joinpath("programs", SHIPPED[kind]).read_text(encoding="utf-8")


def shipped_program_path(kind: str):
    return resources.files("bellspin.seq").joinpath("programs", SHIPPED[kind])
