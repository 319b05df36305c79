"""Closed-form occupation and current dynamics of the two-bath mode."""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DomainError
from .reservoirs import HBAR, Statistics, occupation, thermal_ratio


@dataclass(frozen=True)
class TransportParams:
    gamma_e: float
    gamma_c: float
    nbar_e: float
    nbar_c: float
    n0: float = 1.0
    omega_s: float | None = None
    statistics: Statistics = Statistics.FERMIONIC

    def __post_init__(self):
        object.__setattr__(self, "statistics", Statistics.parse(self.statistics))
        if self.gamma_e < 0 or self.gamma_c < 0:
            raise DomainError("damping rates must be non-negative")
        if not self.gamma_e + self.gamma_c > 0:
            raise DomainError("gamma_e + gamma_c must be positive")
        if self.statistics is Statistics.FERMIONIC:
            for name in ("nbar_e", "nbar_c", "n0"):
                v = getattr(self, name)
                if not 0 <= v <= 1:
                    raise DomainError(f"fermionic {name} must lie in [0, 1], got {v}")

    @classmethod
    def from_temperatures(cls, omega_s: float, T_e: float, T_c: float, gamma_e: float,
                          gamma_c: float, n0: float = 1.0,
                          statistics: Statistics | str = Statistics.FERMIONIC) -> TransportParams:
        """Occupations at ω_s from the two bath temperatures."""
        statistics = Statistics.parse(statistics)
        return cls(gamma_e, gamma_c,
                   occupation(thermal_ratio(omega_s, T_e), statistics),
                   occupation(thermal_ratio(omega_s, T_c), statistics),
                   n0, omega_s, statistics)

    @property
    def gamma_total(self) -> float:
        return self.gamma_e + self.gamma_c

    @property
    def alpha(self) -> float:
        return self.gamma_e * self.nbar_e + self.gamma_c * self.nbar_c

    @property
    def nbar_s(self) -> float:
        return self.alpha / self.gamma_total


class CurrentSolution(NamedTuple):
    current: np.ndarray | float
    I0: float
    Is: float


@dataclass(frozen=True)
class CurrentTrace:
    times: np.ndarray
    occupation: np.ndarray
    current: np.ndarray

    def __post_init__(self):
        if not len(self.times) == len(self.occupation) == len(self.current):
            raise ValueError("trace columns differ in length")


def _scalar_or_array(x):
    return float(x) if np.ndim(x) == 0 else x


def occupation_closed_form(p: TransportParams, t):
    """<n>(t) = n̄_s + (n0 - n̄_s) exp(-(γ_e + γ_c) t)."""
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise DomainError("time must be non-negative")
    return _scalar_or_array(p.nbar_s + (p.n0 - p.nbar_s) * np.exp(-p.gamma_total * t))


def flux_residual(p: TransportParams, n):
    """γ_e(n̄_e - n) - γ_c(n - n̄_c); vanishes only at n = n̄_s."""
    n = np.asarray(n, dtype=float)
    return _scalar_or_array(p.gamma_e * (p.nbar_e - n) - p.gamma_c * (n - p.nbar_c))


def current_at(p: TransportParams, n):
    """I = ½[γ_e(n̄_e - n) + γ_c(n - n̄_c)] at occupation ``n``."""
    n = np.asarray(n, dtype=float)
    return _scalar_or_array(0.5 * (p.gamma_e * (p.nbar_e - n) + p.gamma_c * (n - p.nbar_c)))


def steady_current(p: TransportParams) -> float:
    return p.gamma_e * p.gamma_c / p.gamma_total * (p.nbar_e - p.nbar_c)


def initial_current(p: TransportParams) -> float:
    return current_at(p, p.n0)


def current_closed_form(p: TransportParams, t) -> CurrentSolution:
    """I(t) = I_s + (I_0 - I_s) exp(-(γ_e + γ_c) t), together with I_0 and I_s."""
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise DomainError("time must be non-negative")
    I0, Is = initial_current(p), steady_current(p)
    return CurrentSolution(_scalar_or_array(Is + (I0 - Is) * np.exp(-p.gamma_total * t)), I0, Is)


def steady_energy_loss(p: TransportParams) -> float:
    """E_s = ħ ω_s I_s in watts."""
    if p.omega_s is None:
        raise DomainError("steady_energy_loss needs omega_s")
    return HBAR * p.omega_s * steady_current(p)


def closed_form_trace(p: TransportParams, times) -> CurrentTrace:
    times = np.asarray(times, dtype=float)
    return CurrentTrace(times, np.atleast_1d(occupation_closed_form(p, times)),
                        np.atleast_1d(current_closed_form(p, times).current))
