"""Flat ``key = value`` run configuration.

Lines are ``key = value`` (or ``key=value``); ``#`` starts a comment.  Keys
and defaults:

===============  ===========  =========================================
key              default      meaning
===============  ===========  =========================================
J_hz             138          scalar coupling J/2pi (Hz)
B                11.7         static field (T)
T                298.15       temperature (K)
gamma1, gamma2   1H, 13C      gyromagnetic ratios (rad/s/T)
linewidth1/2     3, 3         Lorentzian FWHM (Hz)
points           4096         FID points
dwell            1e-3         FID dwell time (s)
mu1 ... delta2   calibrated   rate-matrix entries (1/s)
rf_spread        0            relative rf-amplitude spread
ensemble_size    200          rf-error ensemble size (used if spread > 0)
amplitude_step   none         rf amplitude grid (Hz)
seed             0            random seed
tau_max          16           relaxation delay range (s)
tau_step         0.5          relaxation delay step (s)
window           6            initial-fit window (s)
===============  ===========  =========================================
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

from .core import GAMMA_13C, GAMMA_1H, SpinSystem
from .relax import RATE_KEYS, RateMatrix, RateMatrixError
from .tomo import RfErrorModel


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    J_hz: float = 138.0
    B: float = 11.7
    T: float = 298.15
    gamma1: float = GAMMA_1H
    gamma2: float = GAMMA_13C
    linewidth1: float = 3.0
    linewidth2: float = 3.0
    points: int = 4096
    dwell: float = 1e-3
    rf_spread: float = 0.0
    ensemble_size: int = 200
    amplitude_step: float | None = None
    seed: int = 0
    tau_max: float = 16.0
    tau_step: float = 0.5
    window: float = 6.0
    rates: dict = field(default_factory=dict)

    def validate(self) -> "RunConfig":
        positive = ("J_hz", "B", "T", "gamma1", "gamma2", "dwell", "tau_max", "tau_step", "window")
        for name in positive:
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ConfigError(f"{name} must be a positive number, got {v!r}")
        for name in ("linewidth1", "linewidth2", "rf_spread"):
            if getattr(self, name) < 0:
                raise ConfigError(f"{name} must be non-negative")
        if self.dwell > 1 / (2 * self.J_hz):
            raise ConfigError(f"dwell {self.dwell} s cannot resolve J/2pi = {self.J_hz} Hz (need <= {1 / (2 * self.J_hz)} s)")
        if self.points < 2:
            raise ConfigError("points must be >= 2")
        if self.ensemble_size < 1:
            raise ConfigError("ensemble_size must be >= 1")
        if self.amplitude_step is not None and self.amplitude_step <= 0:
            raise ConfigError("amplitude_step must be positive")
        try:
            self.rate_matrix()
        except RateMatrixError as exc:
            raise ConfigError(str(exc)) from None
        return self

    def spin_system(self) -> SpinSystem:
        return SpinSystem.from_hz(
            self.J_hz,
            gamma1=self.gamma1,
            gamma2=self.gamma2,
            B=self.B,
            T=self.T,
            linewidth1=self.linewidth1,
            linewidth2=self.linewidth2,
        )

    def rate_matrix(self) -> RateMatrix:
        kw = RateMatrix.calibrated(self.spin_system()).to_dict()
        kw.update(self.rates)
        return RateMatrix(**kw).validate()

    def rf_error(self) -> RfErrorModel:
        size = self.ensemble_size if self.rf_spread > 0 else 1
        return RfErrorModel(self.rf_spread, size, self.amplitude_step, self.seed)


_FIELD_TYPES = {f.name: f.type for f in fields(RunConfig) if f.name != "rates"}


def _convert(key: str, text: str):
    kind = _FIELD_TYPES[key]
    if text.lower() in ("none", "") and "None" in str(kind):
        return None
    if kind in ("int", int):
        return int(text)
    return float(text)


def parse_config(text: str, base: RunConfig | None = None) -> RunConfig:
    values: dict = {}
    rates: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        try:
            if key in RATE_KEYS:
                rates[key] = float(value)
            elif key in _FIELD_TYPES:
                values[key] = _convert(key, value)
            else:
                raise ConfigError(f"line {lineno}: unknown key {key!r}")
        except ValueError as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"line {lineno}: bad value for {key!r}: {value!r}") from None
    base = base or RunConfig()
    return replace(base, rates={**base.rates, **rates}, **values)


def load_config(path: str | Path | None) -> RunConfig:
    if path is None:
        return RunConfig()
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return parse_config(text)
