"""FID synthesis, Fourier transform and the antisymmetric spectral component.

Frequency axis convention.  The laboratory Hamiltonian carries ``-Omega S_z``,
so a spin precessing at a higher physical frequency has ``<S_+>`` rotating as
``exp(-i Omega t)``.  The complex FID ``<S_x> + i <S_y>`` is therefore
transformed with the kernel ``exp(+2 pi i nu t)``, which places a line from a
``-delta S_z`` term at offset ``+delta / 2pi``.  With this convention the
1H doublet of the spin-1 line is split by the coupling into the component
with spin 2 down (upper line) and spin 2 up (lower line); an S0 or T0,z
pseudo-pure state gives a negative lower line and a positive upper line.

No phase correction is needed: the receiver phase is fixed so that the
thermal-equilibrium spectrum is a positive absorptive doublet.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .core import SpinSystem, spin_operator
from .dynamics import h_free, hard_pulse

DEFAULT_POINTS = 4096
DEFAULT_DWELL = 1e-3
GA_WINDOW = (20.0, 100.0)  # Hz


class NyquistError(ValueError):
    """Dwell time too long to resolve the J doublet."""


class SpectralRangeError(ValueError):
    pass


@dataclass(frozen=True)
class FID:
    samples: np.ndarray
    dwell: float
    spin: int = 1

    def __post_init__(self):
        if len(self.samples) < 2:
            raise ValueError("an FID needs at least two samples")
        if self.dwell <= 0:
            raise ValueError("dwell must be positive")

    @property
    def times(self) -> np.ndarray:
        return self.dwell * np.arange(len(self.samples))


@dataclass(frozen=True)
class Spectrum:
    offsets: np.ndarray  # Hz, increasing
    amplitudes: np.ndarray

    @property
    def spacing(self) -> float:
        return float(self.offsets[1] - self.offsets[0])


def synthesize_fid(
    rho: np.ndarray,
    sys: SpinSystem,
    spin: int = 1,
    points: int = DEFAULT_POINTS,
    dwell: float = DEFAULT_DWELL,
    readout: bool = True,
) -> FID:
    """FID of ``spin`` after a (pi/2)_y readout pulse.

    The signal ``<S_x> + i <S_y>`` evolves under J S1z S2z at zero offset and
    is apodized by ``exp(-pi * linewidth * t)`` so the lines have a FWHM equal
    to the spin's linewidth in Hz.  Set ``readout=False`` to skip the pulse.
    """
    if points < 2:
        raise ValueError("points must be >= 2")
    if dwell <= 0:
        raise ValueError("dwell must be positive")
    max_dwell = 1 / (2 * sys.J_hz)
    if dwell > max_dwell:
        raise NyquistError(f"dwell {dwell:g} s exceeds {max_dwell:g} s needed to resolve J/2pi = {sys.J_hz:g} Hz")
    if readout:
        rho = hard_pulse(rho, spin, np.pi / 2, "y")
    plus = spin_operator(spin, "+")
    # J S1z S2z is diagonal: <S+>(t) = sum_ij rho_ij (S+)_ji exp(i (E_j - E_i) t)
    energies = np.real(np.diag(h_free(sys)))
    gaps = (energies[None, :] - energies[:, None]).ravel()
    terms = (rho * plus.T).ravel()
    t = dwell * np.arange(points)
    signal = np.exp(1j * np.outer(t, gaps)) @ terms
    signal = signal * np.exp(-np.pi * sys.linewidth(spin) * t)
    return FID(samples=np.asarray(signal, dtype=complex), dwell=dwell, spin=spin)


def fft_spectrum(fid: FID) -> Spectrum:
    """Spectrum ``dwell * sum_k s_k exp(+2 pi i nu t_k)`` on the DFT grid."""
    n = len(fid.samples)
    amplitudes = fid.dwell * n * np.fft.ifft(fid.samples)
    offsets = np.fft.fftfreq(n, fid.dwell)
    return Spectrum(offsets=np.fft.fftshift(offsets), amplitudes=np.fft.fftshift(amplitudes))


def window_integral(spec: Spectrum, lo: float, hi: float) -> float:
    """Trapezoidal integral of the real spectrum over [lo, hi] Hz."""
    if spec.offsets[0] > lo or spec.offsets[-1] < hi:
        raise SpectralRangeError(f"spectrum covers [{spec.offsets[0]:g}, {spec.offsets[-1]:g}] Hz, need [{lo:g}, {hi:g}]")
    mask = (spec.offsets >= lo) & (spec.offsets <= hi)
    return float(np.trapezoid(spec.amplitudes.real[mask], spec.offsets[mask]))


def antisymmetric_component(spec: Spectrum, window: tuple[float, float] = GA_WINDOW) -> float:
    """G_a = |integral over [lo, hi] - integral over [-hi, -lo]| of Re g."""
    lo, hi = window
    return abs(window_integral(spec, lo, hi) - window_integral(spec, -hi, -lo))


def spectrum_of_state(
    rho: np.ndarray,
    sys: SpinSystem,
    spin: int = 1,
    points: int = DEFAULT_POINTS,
    dwell: float = DEFAULT_DWELL,
) -> Spectrum:
    return fft_spectrum(synthesize_fid(rho, sys, spin, points, dwell))


def write_spectrum_csv(spec: Spectrum, path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["offset_hz", "re", "im"])
        for f, a in zip(spec.offsets, spec.amplitudes):
            w.writerow([repr(float(f)), repr(float(a.real)), repr(float(a.imag))])


def write_fid_csv(fid: FID, path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t_s", "re", "im"])
        for t, s in zip(fid.times, fid.samples):
            w.writerow([repr(float(t)), repr(float(s.real)), repr(float(s.imag))])


def read_spectrum_csv(path: str | Path) -> Spectrum:
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return Spectrum(offsets=data[:, 0], amplitudes=data[:, 1] + 1j * data[:, 2])
