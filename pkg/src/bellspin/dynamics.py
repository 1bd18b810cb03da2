"""Hamiltonians and coherent evolution in the double-rotating frame.

All evolution blocks act on 4x4 density matrices and return new arrays.
Hard pulses are ideal rotations ``exp(-i angle S_{spin,axis})``; a positive
angle about +y turns z magnetization into +x magnetization.

Sign convention for the detuned Hartmann-Hahn (DHH) block: with the rf
Hamiltonian ``-w1 S1x - w2 S2x + J S1z S2z`` and J > 0, irradiating along +x
sends |d_x u_x> to T0,x and |u_x u_x> to psi_minus,x.  The reference
assignment (|d_x u_x> -> S0, |u_x d_x> -> T0,x, |u_x u_x> -> psi_plus,x,
|d_x d_x> -> psi_minus,x) is obtained with the rf phase set to -x, which is
therefore the default of :func:`dhh_block`.  Cross-polarization does not
depend on this choice for the polarizations it transfers.
"""

from __future__ import annotations

import numpy as np

from .core import (
    IDENTITY,
    S1x,
    S1zS2z,
    S2x,
    SpinSystem,
    S1z,
    S2z,
    product_state,
    spin_operator,
)

HERMITIAN_ATOL = 1e-9

# Default free parameters of the DHH block, in units of J.
DHH_DEFAULT_SIGMA = 5.0
DHH_DEFAULT_DELTA = 0.0

CP_AMPLITUDE = np.sqrt(15) / 4  # in units of J


def dhh_time(J: float) -> float:
    """Duration pi*sqrt(2)/J of a DHH block."""
    return np.pi * np.sqrt(2) / J


def cp_time(J: float) -> float:
    return np.pi / J


def h_free(sys: SpinSystem) -> np.ndarray:
    """J S1z S2z, the rotating-frame Hamiltonian without rf."""
    return sys.J * S1zS2z


def h_lab(sys: SpinSystem) -> np.ndarray:
    """Secular laboratory-frame Hamiltonian -W1 S1z - W2 S2z + J S1z S2z."""
    return -sys.Omega1 * S1z - sys.Omega2 * S2z + sys.J * S1zS2z


def h_rf(sys: SpinSystem, omega1: float, omega2: float) -> np.ndarray:
    """Double-rotating-frame Hamiltonian with rf along x.

    Returns ``-omega1 S1x - omega2 S2x + J S1z S2z``.  Negative amplitudes
    describe irradiation along -x.
    """
    return -omega1 * S1x - omega2 * S2x + sys.J * S1zS2z


def matrix_exponential(H: np.ndarray, t: float) -> np.ndarray:
    """Unitary exp(-i H t) of a Hermitian matrix via its eigendecomposition."""
    H = np.asarray(H, dtype=complex)
    if np.max(np.abs(H - H.conj().T)) > HERMITIAN_ATOL * max(1.0, np.max(np.abs(H))):
        raise ValueError("matrix_exponential requires a Hermitian matrix")
    w, v = np.linalg.eigh((H + H.conj().T) / 2)
    return (v * np.exp(-1j * w * t)) @ v.conj().T


def propagate(rho: np.ndarray, H: np.ndarray, t: float) -> np.ndarray:
    if t < 0:
        raise ValueError("evolution time must be non-negative")
    U = matrix_exponential(H, t)
    return U @ rho @ U.conj().T


_AXES = {"x": ("x", 1), "y": ("y", 1), "-x": ("x", -1), "-y": ("y", -1)}


def pulse_propagator(spin: int, angle: float, phase_axis: str = "y") -> np.ndarray:
    try:
        axis, sign = _AXES[phase_axis]
    except KeyError:
        raise ValueError(f"unknown pulse axis {phase_axis!r}") from None
    return matrix_exponential(spin_operator(spin, axis), sign * angle)


def hard_pulse(rho: np.ndarray, spin: int, angle: float, phase_axis: str = "y") -> np.ndarray:
    """Ideal rotation of ``spin`` by ``angle`` (rad) about ``phase_axis``."""
    U = pulse_propagator(spin, angle, phase_axis)
    return U @ rho @ U.conj().T


def dhh_amplitudes(mode: str, J: float, free_param: float | None = None) -> tuple[float, float]:
    """rf amplitudes (w1, w2) satisfying the DHH condition.

    ``mode="delta"`` fixes w1 - w2 = J/2 with ``free_param`` = sum (default
    5J); ``mode="sigma"`` fixes w1 + w2 = J/2 with ``free_param`` = difference
    (default 0).
    """
    if mode == "delta":
        total = DHH_DEFAULT_SIGMA * J if free_param is None else free_param
        diff = J / 2
    elif mode == "sigma":
        total = J / 2
        diff = DHH_DEFAULT_DELTA * J if free_param is None else free_param
    else:
        raise ValueError(f"DHH mode must be 'delta' or 'sigma', got {mode!r}")
    w1, w2 = (total + diff) / 2, (total - diff) / 2
    if w1 < 0 or w2 < 0:
        raise ValueError(f"DHH condition needs negative rf amplitude (w1={w1:g}, w2={w2:g})")
    return w1, w2


def dhh_block(
    rho: np.ndarray,
    mode: str,
    sys: SpinSystem,
    free_param: float | None = None,
    t: float | None = None,
    phase: str = "-x",
    rf_scale: float = 1.0,
) -> np.ndarray:
    """Evolve under a detuned Hartmann-Hahn double resonance.

    ``t`` defaults to pi*sqrt(2)/J.  ``rf_scale`` multiplies both rf
    amplitudes (used by the rf-inhomogeneity model).
    """
    w1, w2 = dhh_amplitudes(mode, sys.J, free_param)
    if phase not in ("x", "-x"):
        raise ValueError("DHH phase must be 'x' or '-x'")
    sign = -1.0 if phase == "-x" else 1.0
    H = h_rf(sys, sign * rf_scale * w1, sign * rf_scale * w2)
    return propagate(rho, H, dhh_time(sys.J) if t is None else t)


def cp_propagator(sys: SpinSystem, t: float | None = None, rf_scale: float = 1.0) -> np.ndarray:
    w = rf_scale * CP_AMPLITUDE * sys.J
    return matrix_exponential(h_rf(sys, w, w), cp_time(sys.J) if t is None else t)


def cp_block(rho: np.ndarray, sys: SpinSystem, t: float | None = None, rf_scale: float = 1.0) -> np.ndarray:
    """Resonant Hartmann-Hahn cross-polarization, w1 = w2 = sqrt(15)/4 J.

    For the default duration pi/J the double-quantum block makes a full
    2pi turn and the zero-quantum block a pi/2 turn, which equalizes the two
    x polarizations.
    """
    U = cp_propagator(sys, t, rf_scale)
    return U @ rho @ U.conj().T


def _sector_basis(basis_axis: str, sector: str) -> np.ndarray:
    labels = {"zero": ("ud", "du"), "double": ("uu", "dd")}
    try:
        pair = labels[sector]
    except KeyError:
        raise ValueError(f"sector must be 'zero' or 'double', got {sector!r}") from None
    return np.column_stack([product_state(s, basis_axis) for s in pair])


def sector_projector(basis_axis: str, sector: str) -> np.ndarray:
    B = _sector_basis(basis_axis, sector)
    return B @ B.conj().T


def quantum_order_projector(rho: np.ndarray, basis_axis: str, sector: str) -> np.ndarray:
    """P rho P with P the projector on the zero- or double-quantum pair."""
    P = sector_projector(basis_axis, sector)
    return P @ rho @ P


def change_basis(op: np.ndarray, basis_axis: str) -> np.ndarray:
    """Matrix elements of ``op`` in the product basis quantized along ``basis_axis``.

    Rows/columns ordered uu, ud, du, dd.
    """
    V = np.column_stack([product_state(s, basis_axis) for s in ("uu", "ud", "du", "dd")])
    return V.conj().T @ op @ V


def off_sector_magnitude(U: np.ndarray, basis_axis: str = "x") -> float:
    """Largest |element| of ``U`` connecting the zero and double sectors."""
    M = change_basis(U, basis_axis)
    zero, double = [1, 2], [0, 3]
    return float(max(np.max(np.abs(M[np.ix_(zero, double)])), np.max(np.abs(M[np.ix_(double, zero)]))))


def sector_block(U: np.ndarray, basis_axis: str, sector: str) -> np.ndarray:
    idx = [1, 2] if sector == "zero" else [0, 3]
    return change_basis(U, basis_axis)[np.ix_(idx, idx)]


def is_unitary(U: np.ndarray, atol: float = 1e-10) -> bool:
    return bool(np.max(np.abs(U @ U.conj().T - IDENTITY)) < atol)

