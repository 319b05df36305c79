"""Physical constants, thermal ratios and bath occupation numbers.

Everything downstream works with the dimensionless ratio x = ħω/(k_B T);
SI quantities are converted once here.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from .errors import DomainError


@dataclass(frozen=True)
class PhysicalConstants:
    hbar: float = 1.054571817e-34  # J s
    k_B: float = 1.380649e-23  # J / K


CONSTANTS = PhysicalConstants()
HBAR = CONSTANTS.hbar
K_B = CONSTANTS.k_B

BOSE_SERIES_THRESHOLD = 1e-6


class Statistics(str, enum.Enum):
    FERMIONIC = "fermionic"
    BOSONIC = "bosonic"

    @classmethod
    def parse(cls, value) -> Statistics:
        if isinstance(value, cls):
            return value
        aliases = {"fermi": cls.FERMIONIC, "fermion": cls.FERMIONIC,
                   "bose": cls.BOSONIC, "boson": cls.BOSONIC}
        value = str(value).lower()
        return aliases.get(value) or cls(value)


@dataclass(frozen=True)
class ReservoirSpec:
    temperature: float
    coupling: float
    statistics: Statistics = Statistics.FERMIONIC

    def __post_init__(self):
        if not self.temperature > 0:
            raise DomainError(f"reservoir temperature must be positive, got {self.temperature}")
        if not self.coupling >= 0:
            raise DomainError(f"coupling rate must be non-negative, got {self.coupling}")

    def occupation(self, omega_s: float) -> float:
        return occupation(thermal_ratio(omega_s, self.temperature), self.statistics)


@dataclass(frozen=True)
class SystemSpec:
    omega_s: float
    statistics: Statistics = Statistics.FERMIONIC
    initial_occupation: float = 1.0

    def __post_init__(self):
        if not self.omega_s > 0:
            raise DomainError(f"omega_s must be positive, got {self.omega_s}")
        n0 = self.initial_occupation
        if self.statistics is Statistics.FERMIONIC and not 0 <= n0 <= 1:
            raise DomainError(f"fermionic initial occupation must lie in [0, 1], got {n0}")
        if self.statistics is Statistics.BOSONIC and not n0 >= 0:
            raise DomainError(f"bosonic initial occupation must be >= 0, got {n0}")


def check_pair(emitter: ReservoirSpec, collector: ReservoirSpec, system: SystemSpec | None = None):
    """Both baths (and the system, if given) must share one statistics value."""
    stats = {emitter.statistics, collector.statistics}
    if system is not None:
        stats.add(system.statistics)
    if len(stats) != 1:
        raise DomainError(f"mixed statistics in one run: {sorted(s.value for s in stats)}")


def thermal_ratio(omega_s, T):
    """x = ħ ω_s / (k_B T)."""
    T = np.asarray(T, dtype=float)
    if np.any(~(T > 0)):
        raise DomainError(f"temperature must be positive, got {T}")
    x = HBAR * np.asarray(omega_s, dtype=float) / (K_B * T)
    return float(x) if np.ndim(x) == 0 else x


def fermi_occupation(x):
    """1 / (e^x + 1), evaluated without overflow."""
    out = expit(-np.asarray(x, dtype=float))
    return float(out) if np.ndim(out) == 0 else out


def bose_occupation(x):
    """1 / (e^x - 1); three-term Laurent series below ``BOSE_SERIES_THRESHOLD``."""
    x = np.asarray(x, dtype=float)
    if np.any(~(x > 0)):
        raise DomainError("bose occupation needs x > 0")
    small = x < BOSE_SERIES_THRESHOLD
    with np.errstate(divide="ignore", over="ignore"):
        direct = 1.0 / np.expm1(np.where(small, 1.0, x))
    series = 1.0 / x - 0.5 + x / 12.0
    out = np.where(small, series, direct)
    return float(out) if out.ndim == 0 else out


def occupation(x, statistics: Statistics | str = Statistics.FERMIONIC):
    if Statistics.parse(statistics) is Statistics.FERMIONIC:
        return fermi_occupation(x)
    return bose_occupation(x)
