"""Coupled longitudinal relaxation of <S1z>, <S2z> and <S1z S2z>.

The three observables obey

    d/dt x = -R (x - x_eq),   x = (<S1z>, <S2z>, <S1z S2z>),  x_eq = (eps1, eps2, 0)

with the symmetric rate matrix

    R = [[mu1,     sigma12, delta1],
         [sigma12, mu2,     delta2],
         [delta1,  delta2,  mu12  ]].

``delta1``/``delta2`` are cross-correlation rates; when both vanish the
two-spin order decays with ``mu12`` alone whatever the initial state.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .core import BELL_KINDS, S1z, S1zS2z, S2z, IDENTITY, SpinSystem, expectation
from .spectra import DEFAULT_DWELL, DEFAULT_POINTS, antisymmetric_component, spectrum_of_state

TAU_S0 = 2.4  # s, initial decay time of the S0/T0 pair
TAU_PSI = 3.0  # s, initial decay time of the psi+/psi- pair


class RateMatrixError(ValueError):
    pass


class FitDomainError(ValueError):
    pass


@dataclass(frozen=True)
class RateMatrix:
    mu1: float
    mu2: float
    mu12: float
    sigma12: float = 0.0
    delta1: float = 0.0
    delta2: float = 0.0

    @property
    def matrix(self) -> np.ndarray:
        return np.array(
            [
                [self.mu1, self.sigma12, self.delta1],
                [self.sigma12, self.mu2, self.delta2],
                [self.delta1, self.delta2, self.mu12],
            ]
        )

    def validate(self) -> "RateMatrix":
        """Raise :class:`RateMatrixError` unless R is positive definite."""
        vals = np.linalg.eigvalsh(self.matrix)
        if not np.all(np.isfinite(vals)) or vals[0] <= 0:
            raise RateMatrixError(f"rate matrix is not positive definite (eigenvalues {vals})")
        return self

    @classmethod
    def calibrated(
        cls,
        sys: SpinSystem | None = None,
        tau_s0: float = TAU_S0,
        tau_psi: float = TAU_PSI,
        mu1: float = 0.3,
        mu2: float = 0.3,
        sigma12: float = 0.0,
    ) -> "RateMatrix":
        """Rates reproducing the two measured initial decay times.

        Only ``mu12 = (1/tau_s0 + 1/tau_psi)/2`` and the weighted cross term
        ``(delta1 eps1 + delta2 eps2)/(eps1 + eps2) = (1/tau_s0 - 1/tau_psi)/16``
        are fixed by the data.  The rest is a non-unique choice: delta2 = 0,
        mu1 = mu2 = 0.3 1/s, sigma12 = 0.
        """
        sys = sys or SpinSystem()
        mu12 = 0.5 * (1 / tau_s0 + 1 / tau_psi)
        cross = (1 / tau_s0 - 1 / tau_psi) / 16
        delta1 = cross * (sys.eps1 + sys.eps2) / sys.eps1
        return cls(mu1=mu1, mu2=mu2, mu12=mu12, sigma12=sigma12, delta1=delta1, delta2=0.0)

    def to_dict(self) -> dict:
        return {k: getattr(self, k) for k in ("mu1", "mu2", "mu12", "sigma12", "delta1", "delta2")}


@dataclass(frozen=True)
class DiagObservables:
    s1z: float
    s2z: float
    s1zs2z: float

    def as_array(self) -> np.ndarray:
        return np.array([self.s1z, self.s2z, self.s1zs2z])

    @classmethod
    def from_array(cls, x) -> "DiagObservables":
        return cls(float(x[0]), float(x[1]), float(x[2]))

    @classmethod
    def from_state(cls, rho: np.ndarray) -> "DiagObservables":
        return cls(expectation(rho, S1z), expectation(rho, S2z), expectation(rho, S1zS2z))

    def deviation(self) -> np.ndarray:
        """Traceless diagonal operator carrying exactly these three averages."""
        return self.s1z * S1z + self.s2z * S2z + 4 * self.s1zs2z * S1zS2z

    def to_state(self) -> np.ndarray:
        return IDENTITY / 4 + self.deviation()


@dataclass(frozen=True)
class DecayCurve:
    times: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        if np.any(np.diff(self.times) <= 0):
            raise ValueError("times must be strictly increasing")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("curve values must be finite")


def equilibrium_vector(sys: SpinSystem) -> np.ndarray:
    return np.array([sys.eps1, sys.eps2, 0.0])


def bell_initial_conditions(kind: str, sys: SpinSystem) -> DiagObservables:
    """Diagonal averages right after preparing a pseudo-pure Bell state.

    The pseudo-pure amplitude is (eps1 + eps2)/2, which puts
    <S1z S2z> at -(eps1 + eps2)/8 for S0/T0 and +(eps1 + eps2)/8 for psi+/psi-.
    """
    if kind not in BELL_KINDS:
        raise ValueError(f"unknown Bell state {kind!r}")
    c = (sys.eps1 + sys.eps2) / 8
    return DiagObservables(0.0, 0.0, -c if kind in ("S0", "T0") else c)


def eigenmodes(rates: RateMatrix) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending, 1/s) and orthonormal eigenvectors (columns)."""
    return np.linalg.eigh(rates.matrix)


def relax_evolve(obs0: DiagObservables, rates: RateMatrix, sys: SpinSystem, tau: float) -> DiagObservables:
    """Exact solution of the relaxation equations after time ``tau``."""
    return DiagObservables.from_array(relax_trajectory(obs0, rates, sys, np.atleast_1d(float(tau)))[0])


def relax_trajectory(obs0: DiagObservables, rates: RateMatrix, sys: SpinSystem, taus) -> np.ndarray:
    """Array of shape (len(taus), 3) with the observables at each time."""
    taus = np.asarray(taus, dtype=float)
    if np.any(taus < 0):
        raise ValueError("tau must be non-negative")
    rates.validate()
    vals, vecs = eigenmodes(rates)
    eq = equilibrium_vector(sys)
    coeffs = vecs.T @ (obs0.as_array() - eq)
    return eq + (np.exp(-np.outer(taus, vals)) * coeffs) @ vecs.T


def relaxation_rhs(obs: DiagObservables, rates: RateMatrix, sys: SpinSystem) -> np.ndarray:
    """Right-hand side -R (x - x_eq)."""
    return -rates.matrix @ (obs.as_array() - equilibrium_vector(sys))


def initial_rate(rates: RateMatrix, obs0: DiagObservables, sys: SpinSystem) -> float:
    """Apparent initial decay rate of <S1z S2z>.

    mu12 - delta1 eps1 / <S1zS2z>(0) - delta2 eps2 / <S1zS2z>(0), valid when
    the single-spin polarizations start at zero.
    """
    if obs0.s1zs2z == 0:
        raise ZeroDivisionError("initial rate undefined for zero initial two-spin order")
    return rates.mu12 - rates.delta1 * sys.eps1 / obs0.s1zs2z - rates.delta2 * sys.eps2 / obs0.s1zs2z


def ga_of_observables(
    obs: DiagObservables, sys: SpinSystem, points: int = DEFAULT_POINTS, dwell: float = DEFAULT_DWELL
) -> float:
    # The readout is linear and I/4 gives no signal, so the deviation alone is
    # transformed; adding I/4 first would cost precision on small polarizations.
    return antisymmetric_component(spectrum_of_state(obs.deviation(), sys, 1, points, dwell))


def simulate_decay(
    kind: str,
    rates: RateMatrix,
    sys: SpinSystem,
    taus,
    points: int = DEFAULT_POINTS,
    dwell: float = DEFAULT_DWELL,
    normalize: bool = True,
) -> DecayCurve:
    """G_a(tau) of the 1H spectrum after relaxing a prepared Bell state.

    Each point goes through the full readout chain: diagonal state, (pi/2)_y
    on 1H, FID, spectrum, windowed antisymmetric integral.
    """
    taus = np.asarray(taus, dtype=float)
    traj = relax_trajectory(bell_initial_conditions(kind, sys), rates, sys, taus)
    values = np.array([ga_of_observables(DiagObservables.from_array(x), sys, points, dwell) for x in traj])
    if normalize:
        g0 = ga_of_observables(bell_initial_conditions(kind, sys), sys, points, dwell)
        values = values / g0
    return DecayCurve(taus, values)


def fit_initial_exponential(curve: DecayCurve, window: float = 6.0) -> tuple[float, float]:
    """Fit A exp(-t/tau) to the points with t <= window.

    A weighted linear fit of log(y) (weights y**2, the inverse variance of
    log y for uniform noise) seeds one Gauss-Newton step on the linear-domain
    residuals.  Returns ``(tau, rms_residual)``.
    """
    t = np.asarray(curve.times, float)
    y = np.asarray(curve.values, float)
    mask = (t >= 0) & (t <= window * (1 + 1e-12))
    t, y = t[mask], y[mask]
    if len(t) < 3:
        raise FitDomainError(f"need at least 3 points in [0, {window}] s, got {len(t)}")
    if np.any(y <= 0):
        raise FitDomainError("curve values must be positive inside the fit window")
    w = y  # square root of the weights y**2
    X = np.column_stack([np.ones_like(t), -t])
    logA, k = np.linalg.lstsq(X * w[:, None], np.log(y) * w, rcond=None)[0]
    A = np.exp(logA)
    # Gauss-Newton on r = y - A exp(-k t)
    model = A * np.exp(-k * t)
    Jac = np.column_stack([np.exp(-k * t), -t * model])
    step = np.linalg.lstsq(Jac, y - model, rcond=None)[0]
    A, k = A + step[0], k + step[1]
    if k <= 0:
        raise FitDomainError("fitted decay rate is not positive")
    rms = float(np.sqrt(np.mean((y - A * np.exp(-k * t)) ** 2)))
    return float(1 / k), rms


def fit_multiexponential(times, values, n_modes: int = 3) -> tuple[np.ndarray, np.ndarray]:
    """Decay rates and amplitudes of a noise-free sum of exponentials.

    Matrix-pencil estimate on a uniform time grid; rates returned ascending.
    """
    t = np.asarray(times, float)
    y = np.asarray(values, float)
    dt = np.diff(t)
    if not np.allclose(dt, dt[0], rtol=1e-9, atol=0):
        raise ValueError("matrix-pencil fit needs a uniform time grid")
    n = len(y)
    L = n // 2
    if L <= n_modes:
        raise ValueError("too few samples for the requested number of modes")
    H = np.array([y[i : i + L + 1] for i in range(n - L)])
    U, s, Vh = np.linalg.svd(H, full_matrices=False)
    V = Vh[:n_modes].T
    V0, V1 = V[:-1], V[1:]
    z = np.linalg.eigvals(np.linalg.pinv(V0) @ V1)
    rates = np.sort(-np.log(np.abs(z)) / dt[0])
    Z = np.exp(-np.outer(t - t[0], rates))
    amps = np.linalg.lstsq(Z, y, rcond=None)[0]
    return rates, amps


def write_curve_csv(curve: DecayCurve, path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["tau_s", "ga"])
        for t, g in zip(curve.times, curve.values):
            w.writerow([repr(float(t)), repr(float(g))])


def read_curve_csv(path: str | Path) -> DecayCurve:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or [c.strip() for c in rows[0]] != ["tau_s", "ga"]:
        raise ValueError("decay curve CSV must start with header 'tau_s,ga'")
    data = np.array([[float(c) for c in r] for r in rows[1:] if r], dtype=float).reshape(-1, 2)
    return DecayCurve(data[:, 0], data[:, 1])


RATE_KEYS = ("mu1", "mu2", "mu12", "sigma12", "delta1", "delta2")


def rates_from_mapping(values: dict, base: RateMatrix | None = None) -> RateMatrix:
    """RateMatrix from a ``{"mu1": ...}`` mapping (1/s); missing keys come from ``base``."""
    base = base or RateMatrix.calibrated()
    kw = base.to_dict()
    for key in RATE_KEYS:
        if key in values:
            kw[key] = float(values[key])
    return RateMatrix(**kw).validate()
