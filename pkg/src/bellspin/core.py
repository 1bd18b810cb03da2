"""Operators, Bell states and thermal/pseudo-pure states of a heteronuclear spin pair.

Conventions used by every module of the package:

* product basis ordering ``|uu>, |ud>, |du>, |dd>`` with spin 1 (1H) as the
  left Kronecker factor; ``u``/``d`` are the +1/2 and -1/2 eigenstates of S_z;
* hbar = 1, angular frequencies in rad/s;
* expectation values are plain traces, ``<A> = Tr(rho A)``.  With the
  trace-one equilibrium state ``I/4 + eps1 S1z + eps2 S2z`` this gives
  ``<S1z>_eq = eps1`` directly, so the conversion constant between the
  density-matrix normalization and the relaxation observables is 1;
* x-quantized single-spin states are the rotated z states
  ``|u_x> = R_y(pi/2)|u>``, ``|d_x> = R_y(pi/2)|d>`` so that a (pi/2)_y pulse
  maps every z-labelled state to its x-labelled counterpart.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

import numpy as np
from scipy import constants

BellKind = Literal["S0", "T0", "psi_plus", "psi_minus"]
BELL_KINDS: tuple[str, ...] = ("S0", "T0", "psi_plus", "psi_minus")

GAMMA_1H = 267.5221900e6  # rad s^-1 T^-1
GAMMA_13C = 67.2828e6  # rad s^-1 T^-1

_SX = np.array([[0, 1], [1, 0]], dtype=complex) / 2
_SY = np.array([[0, -1j], [1j, 0]], dtype=complex) / 2
_SZ = np.array([[1, 0], [0, -1]], dtype=complex) / 2
_I2 = np.eye(2, dtype=complex)
_SINGLE = {"x": _SX, "y": _SY, "z": _SZ}

IDENTITY = np.eye(4, dtype=complex)


def spin_operator(spin: int, axis: str) -> np.ndarray:
    """Return the 4x4 matrix of S_{spin,axis} (eigenvalues +-1/2).

    ``axis`` may also be ``"+"`` or ``"-"`` for the raising/lowering
    operators ``S_x +- i S_y``.
    """
    if axis == "+":
        return spin_operator(spin, "x") + 1j * spin_operator(spin, "y")
    if axis == "-":
        return spin_operator(spin, "x") - 1j * spin_operator(spin, "y")
    if axis not in _SINGLE:
        raise ValueError(f"unknown axis {axis!r}")
    if spin == 1:
        return np.kron(_SINGLE[axis], _I2)
    if spin == 2:
        return np.kron(_I2, _SINGLE[axis])
    raise ValueError(f"spin index must be 1 or 2, got {spin!r}")


S1x, S1y, S1z = (spin_operator(1, a) for a in "xyz")
S2x, S2y, S2z = (spin_operator(2, a) for a in "xyz")
S1zS2z = S1z @ S2z


def _rot_y(angle: float) -> np.ndarray:
    return np.cos(angle / 2) * _I2 - 2j * np.sin(angle / 2) * _SY


_UP = np.array([1, 0], dtype=complex)
_DOWN = np.array([0, 1], dtype=complex)
SINGLE_SPIN_STATES = {
    ("u", "z"): _UP,
    ("d", "z"): _DOWN,
    ("u", "x"): _rot_y(np.pi / 2) @ _UP,
    ("d", "x"): _rot_y(np.pi / 2) @ _DOWN,
}


def product_state(label: str, axis: str = "z") -> np.ndarray:
    """Product ket from a two-letter label such as ``"ud"`` (spin 1 first)."""
    if len(label) != 2 or set(label) - {"u", "d"}:
        raise ValueError(f"label must be two of 'u'/'d', got {label!r}")
    a, b = (SINGLE_SPIN_STATES[(s, axis)] for s in label)
    return np.kron(a, b)


def bell_state(kind: BellKind, axis: str = "z") -> np.ndarray:
    """Normalized Bell ket quantized along ``axis`` ("x" or "z")."""
    uu, ud, du, dd = (product_state(s, axis) for s in ("uu", "ud", "du", "dd"))
    combos = {
        "S0": ud - du,
        "T0": ud + du,
        "psi_plus": uu + dd,
        "psi_minus": uu - dd,
    }
    try:
        return combos[kind] / np.sqrt(2)
    except KeyError:
        raise ValueError(f"unknown Bell state {kind!r}") from None


def bell_operator_form(kind: BellKind) -> np.ndarray:
    """Build |kind_z><kind_z| from its product-operator expansion."""
    p1, m1 = spin_operator(1, "+"), spin_operator(1, "-")
    p2, m2 = spin_operator(2, "+"), spin_operator(2, "-")
    flip_flop = p1 @ m2 + m1 @ p2
    flip_flip = p1 @ p2 + m1 @ m2
    quarter = IDENTITY / 4
    if kind == "S0":
        return quarter - S1zS2z - flip_flop / 2
    if kind == "T0":
        return quarter - S1zS2z + flip_flop / 2
    if kind == "psi_plus":
        return quarter + S1zS2z + flip_flip / 2
    if kind == "psi_minus":
        return quarter + S1zS2z - flip_flip / 2
    raise ValueError(f"unknown Bell state {kind!r}")


@dataclass(frozen=True)
class SpinSystem:
    """Physical parameters of the 1H-13C pair.

    Defaults reproduce the experimental setting: J/2pi = 138 Hz and
    B = 11.7 T (1H Larmor frequency close to 500 MHz).  ``J`` is in rad/s,
    linewidths in Hz.
    """

    gamma1: float = GAMMA_1H
    gamma2: float = GAMMA_13C
    B: float = 11.7
    T: float = 298.15
    J: float = 2 * np.pi * 138.0
    linewidth1: float = 3.0
    linewidth2: float = 3.0

    def __post_init__(self):
        if self.J <= 0:
            raise ValueError("J must be positive")
        if self.T <= 0:
            raise ValueError("temperature must be positive")
        if self.linewidth1 < 0 or self.linewidth2 < 0:
            raise ValueError("linewidths must be non-negative")

    @classmethod
    def from_hz(cls, J_hz: float = 138.0, **kwargs) -> "SpinSystem":
        return cls(J=2 * np.pi * J_hz, **kwargs)

    @property
    def J_hz(self) -> float:
        return self.J / (2 * np.pi)

    @property
    def Omega1(self) -> float:
        return self.gamma1 * self.B

    @property
    def Omega2(self) -> float:
        return self.gamma2 * self.B

    @property
    def eps1(self) -> float:
        return constants.hbar * self.Omega1 / (4 * constants.k * self.T)

    @property
    def eps2(self) -> float:
        return constants.hbar * self.Omega2 / (4 * constants.k * self.T)

    def linewidth(self, spin: int) -> float:
        return self.linewidth1 if spin == 1 else self.linewidth2


def equilibrium_state(sys: SpinSystem) -> np.ndarray:
    """High-temperature thermal state I/4 + eps1 S1z + eps2 S2z."""
    return IDENTITY / 4 + sys.eps1 * S1z + sys.eps2 * S2z


def pseudo_pure(state: np.ndarray, c: float) -> np.ndarray:
    """Return (1 - c) I/4 + c |state><state|.

    ``c`` must lie in [-1/3, 1] for the result to stay positive.
    """
    if not -1 / 3 - 1e-15 <= c <= 1 + 1e-15:
        raise ValueError(f"pseudo-pure amplitude {c} outside [-1/3, 1]")
    psi = np.asarray(state, dtype=complex)
    return (1 - c) * IDENTITY / 4 + c * np.outer(psi, psi.conj())


def expectation(rho: np.ndarray, op: np.ndarray) -> float:
    """Real part of Tr(rho op)."""
    return float(np.real(np.trace(rho @ op)))


def deviation(rho: np.ndarray) -> np.ndarray:
    """Traceless part rho - Tr(rho) I/4."""
    return rho - np.trace(rho) * IDENTITY / 4


def normalized_state(rho: np.ndarray) -> np.ndarray:
    """Rescale the deviation so a pseudo-pure state maps to its pure projector.

    The deviation of ``(1-c) I/4 + c |psi><psi|`` has Frobenius norm
    ``|c| sqrt(3/4)``; dividing by that norm (sign kept positive) recovers
    ``|psi><psi|``.  A zero deviation returns I/4.
    """
    dev = deviation(rho)
    norm = np.sqrt(np.real(np.trace(dev @ dev)))
    if norm < 1e-300:
        return IDENTITY / 4
    return IDENTITY / 4 + dev * np.sqrt(0.75) / norm


def fidelity(rho: np.ndarray, psi: np.ndarray) -> float:
    """<psi|rho|psi> for a trace-one rho."""
    psi = np.asarray(psi, dtype=complex)
    return float(np.real(psi.conj() @ rho @ psi))


def deviation_fidelity(rho: np.ndarray, psi: np.ndarray) -> float:
    """Fidelity of the normalized deviation of ``rho`` with ``psi``.

    Equals ``1/4 + 3/4 * C`` where C is the correlation between the
    deviation of ``rho`` and that of ``|psi><psi|``; 1 for an exact
    pseudo-pure state of any positive amplitude.
    """
    return fidelity(normalized_state(rho), psi)


def partial_trace(rho: np.ndarray, keep: int) -> np.ndarray:
    """Reduced 2x2 state of spin ``keep``."""
    r = rho.reshape(2, 2, 2, 2)
    if keep == 1:
        return np.einsum("ajbj->ab", r)
    if keep == 2:
        return np.einsum("jajb->ab", r)
    raise ValueError("keep must be 1 or 2")


def is_density_matrix(rho: np.ndarray, atol: float = 1e-12) -> bool:
    rho = np.asarray(rho)
    if rho.shape != (4, 4):
        return False
    if np.max(np.abs(rho - rho.conj().T)) > atol:
        return False
    if abs(np.trace(rho) - 1) > atol:
        return False
    return bool(np.min(np.linalg.eigvalsh((rho + rho.conj().T) / 2)) >= -atol)
