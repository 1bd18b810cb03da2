"""Instruction set of the pulse-program language.

Durations and rf parameters keep their symbolic dependence on J: a value is
stored as ``coeff * J**j_power`` so that ``pi/J`` and ``pi*sqrt(2)/J`` are
evaluated against the actual coupling only at execution time.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

CHANNELS = {"H": 1, "C": 2}
CHANNEL_NAMES = {v: k for k, v in CHANNELS.items()}
PULSE_AXES = ("x", "y", "-x", "-y")
GRADIENT_MODELS = ("diagonal", "coherence_order")
DHH_MODES = ("delta", "sigma")


@dataclass(frozen=True)
class Quantity:
    """``coeff * J**j_power``; j_power is -1 for times, +1 for frequencies, 0 for plain numbers."""

    coeff: float
    j_power: int = 0

    def value(self, J: float) -> float:
        return self.coeff * J**self.j_power

    def format(self) -> str:
        c = repr(float(self.coeff))
        if self.j_power == 0:
            return c
        if self.j_power == -1:
            return f"{c}/J"
        if self.j_power == 1:
            return f"{c}*J"
        raise ValueError(f"no textual form for J**{self.j_power}")


@dataclass(frozen=True)
class Pulse:
    spin: int
    degrees: float
    axis: str = "y"

    @property
    def angle(self) -> float:
        """Flip angle in radians."""
        return float(np.radians(self.degrees))

    def format(self) -> str:
        return f"pulse {CHANNEL_NAMES[self.spin]} {float(self.degrees)!r} {self.axis}"


@dataclass(frozen=True)
class Delay:
    t: Quantity

    def format(self) -> str:
        return f"delay {self.t.format()}"


@dataclass(frozen=True)
class CP:
    t: Quantity

    def format(self) -> str:
        return f"cp {self.t.format()}"


@dataclass(frozen=True)
class DHH:
    mode: str
    t: Quantity
    free_param: Quantity | None = None

    def format(self) -> str:
        parts = [f"dhh {self.mode} t={self.t.format()}"]
        if self.free_param is not None:
            key = "sigma" if self.mode == "delta" else "delta"
            parts.append(f"{key}={self.free_param.format()}")
        return " ".join(parts)


@dataclass(frozen=True)
class Gradient:
    model: str = "diagonal"

    def format(self) -> str:
        return f"grad {self.model}"


@dataclass(frozen=True)
class PPSPrepare:
    def format(self) -> str:
        return "pps"


@dataclass(frozen=True)
class AcquireFID:
    spin: int
    points: int
    dwell: float

    def format(self) -> str:
        return f"acquire {CHANNEL_NAMES[self.spin]} {self.points} dwell={float(self.dwell)!r}"


Instruction = Union[Pulse, Delay, CP, DHH, Gradient, PPSPrepare, AcquireFID]


@dataclass(frozen=True)
class PulseProgram:
    instructions: tuple[Instruction, ...] = ()
    name: str = ""

    def __len__(self):
        return len(self.instructions)

    def __iter__(self):
        return iter(self.instructions)


def format_program(prog: PulseProgram) -> str:
    """Canonical text of a program; parsing it returns an equal program."""
    lines = []
    if prog.name:
        lines.append(f"program {prog.name}")
    lines.extend(ins.format() for ins in prog.instructions)
    return "\n".join(lines) + "\n"


def label(ins: Instruction) -> str:
    return ins.format()
