"""Execution of pulse programs on a two-spin density matrix."""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field

import numpy as np

from ..core import IDENTITY, S1z, S1zS2z, S2z, SpinSystem, deviation, expectation, product_state, pseudo_pure
from ..dynamics import CP_AMPLITUDE, dhh_amplitudes, h_free, h_rf, hard_pulse, propagate
from ..spectra import FID, synthesize_fid
from .program import CP, DHH, AcquireFID, Delay, Gradient, PPSPrepare, Pulse, PulseProgram

BASIS_LABELS = ("uu", "ud", "du", "dd")

# m1 + m2 for the z product basis uu, ud, du, dd
_TOTAL_M = np.array([1.0, 0.0, 0.0, -1.0])
_COHERENCE_ORDER = _TOTAL_M[:, None] - _TOTAL_M[None, :]


class PPSWarning(UserWarning):
    """Input to the pseudo-pure step is not of the expected equal-polarization form."""


def gradient_crush(rho: np.ndarray, model: str = "diagonal") -> np.ndarray:
    """Dephase z-basis coherences.

    ``coherence_order`` zeroes every element whose coherence order
    ``(m1 + m2) - (m1' + m2')`` is nonzero, so zero-quantum coherences
    survive.  ``diagonal`` zeroes every off-diagonal element.
    """
    if model == "coherence_order":
        return np.where(_COHERENCE_ORDER == 0, rho, 0)
    if model == "diagonal":
        return np.diag(np.diag(rho))
    raise ValueError(f"unknown gradient model {model!r}")


_PPS_UP = product_state("uu")
_PPS_DEV = np.outer(_PPS_UP, _PPS_UP.conj()) - IDENTITY / 4
_EQUAL_POL = S1z + S2z


def pps_amplitude(rho: np.ndarray) -> float:
    """Amplitude c read from either c(S1z + S2z) or c(|uu><uu| - I/4).

    Uses ``c = (<S1z> + <S2z>)/2 + 2 <S1z S2z>``, which returns c for both
    forms, so the pseudo-pure map is idempotent.
    """
    return (expectation(rho, S1z) + expectation(rho, S2z)) / 2 + 2 * expectation(rho, S1zS2z)


def pps_prepare(rho: np.ndarray, tol: float = 1e-6) -> np.ndarray:
    """Idealized pseudo-pure preparation: c(S1z + S2z) -> c(|uu><uu| - I/4).

    Stands in for a spatial-averaging sequence; only its output is modelled.
    Components of the input deviation outside the expected form are
    discarded with a :class:`PPSWarning` when their relative weight exceeds
    ``tol``.
    """
    c = pps_amplitude(rho)
    dev = deviation(rho)
    scale = np.linalg.norm(dev)
    if scale > 0:
        residual = min(np.linalg.norm(dev - c * _EQUAL_POL), np.linalg.norm(dev - c * _PPS_DEV)) / scale
        if residual > tol:
            warnings.warn(
                f"pseudo-pure input deviates from c(S1z+S2z) by {residual:.2e} (relative); extra terms dropped",
                PPSWarning,
                stacklevel=2,
            )
    return pseudo_pure(_PPS_UP, c)


@dataclass
class ExecutionTrace:
    states: list[tuple[str, np.ndarray]] = field(default_factory=list)
    acquisitions: list[FID] = field(default_factory=list)

    @property
    def final(self) -> np.ndarray:
        return self.states[-1][1]

    def to_dict(self) -> dict:
        return {
            "basis": list(BASIS_LABELS),
            "states": [
                {
                    "label": lab,
                    "re": [float(x) for x in np.real(rho).ravel()],
                    "im": [float(x) for x in np.imag(rho).ravel()],
                }
                for lab, rho in self.states
            ],
            "acquisitions": [
                {
                    "spin": fid.spin,
                    "dwell": fid.dwell,
                    "re": [float(x) for x in fid.samples.real],
                    "im": [float(x) for x in fid.samples.imag],
                }
                for fid in self.acquisitions
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1)


def _quantize(w: float, step_hz: float | None) -> float:
    if not step_hz:
        return w
    step = 2 * np.pi * step_hz
    return float(np.round(w / step) * step)


def apply_instruction(
    rho: np.ndarray,
    ins,
    sys: SpinSystem,
    rf_scale: float = 1.0,
    amplitude_step: float | None = None,
    acquisitions: list | None = None,
) -> np.ndarray:
    J = sys.J
    if isinstance(ins, Pulse):
        return hard_pulse(rho, ins.spin, rf_scale * ins.angle, ins.axis)
    if isinstance(ins, Delay):
        return propagate(rho, h_free(sys), ins.t.value(J))
    if isinstance(ins, CP):
        w = _quantize(rf_scale * CP_AMPLITUDE * J, amplitude_step)
        return propagate(rho, h_rf(sys, w, w), ins.t.value(J))
    if isinstance(ins, DHH):
        free = None if ins.free_param is None else ins.free_param.value(J)
        w1, w2 = dhh_amplitudes(ins.mode, J, free)
        w1 = _quantize(rf_scale * w1, amplitude_step)
        w2 = _quantize(rf_scale * w2, amplitude_step)
        # rf phase -x, see bellspin.dynamics
        return propagate(rho, h_rf(sys, -w1, -w2), ins.t.value(J))
    if isinstance(ins, Gradient):
        return gradient_crush(rho, ins.model)
    if isinstance(ins, PPSPrepare):
        return pps_prepare(rho)
    if isinstance(ins, AcquireFID):
        if acquisitions is not None:
            acquisitions.append(synthesize_fid(rho, sys, ins.spin, ins.points, ins.dwell))
        return rho
    raise TypeError(f"not an instruction: {ins!r}")


def execute(
    prog: PulseProgram,
    sys: SpinSystem,
    rho0: np.ndarray,
    rf_scale: float = 1.0,
    amplitude_step: float | None = None,
) -> ExecutionTrace:
    """Run ``prog`` from ``rho0`` and record the state after every instruction.

    ``rf_scale`` multiplies every pulse angle and every CP/DHH rf amplitude;
    ``amplitude_step`` (Hz) rounds CP/DHH amplitudes to a discrete grid.
    Acquisitions read the current state without modifying it.
    """
    rho = np.array(rho0, dtype=complex)
    trace = ExecutionTrace(states=[("initial", rho)])
    for ins in prog:
        rho = apply_instruction(rho, ins, sys, rf_scale, amplitude_step, trace.acquisitions)
        trace.states.append((ins.format(), rho))
    return trace

