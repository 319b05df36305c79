"""Quantum transport factors and the Carnot comparison sweep."""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import DomainError
from .reservoirs import K_B, HBAR, bose_occupation, fermi_occupation, thermal_ratio


@dataclass(frozen=True)
class EfficiencyPoint:
    T_c: float
    T_e: float
    x_c: float
    eta_carnot: float
    eta_fermi: float
    eta_bose: float
    # optional diagnostics, filled when rates are supplied to the sweep
    energy_loss: float | None = None
    heat_in: float | None = None
    f_rate: float | None = None


def _check_order(T_e: float, T_c: float, strict: bool = False) -> None:
    if not T_c > 0:
        raise DomainError(f"T_c must be positive, got {T_c}")
    if T_c > T_e or (strict and T_c == T_e):
        raise DomainError(f"need T_e >= T_c (got T_e={T_e}, T_c={T_c})")


def eta_carnot(T_e: float, T_c: float) -> float:
    _check_order(T_e, T_c)
    return 1.0 - T_c / T_e


def eta_fermionic(omega_s: float, T_e: float, T_c: float, omega: float | None = None) -> float:
    """(2 k_B T_c/(ħω))(1 - n̄_c/n̄_e), occupations at ω_s.

    ``omega`` replaces ω_s in the prefactor only (shifted-frequency variant).
    """
    _check_order(T_e, T_c)
    prefactor = 2 * K_B * T_c / (HBAR * (omega_s if omega is None else omega))
    n_e = fermi_occupation(thermal_ratio(omega_s, T_e))
    n_c = fermi_occupation(thermal_ratio(omega_s, T_c))
    return prefactor * (1.0 - n_c / n_e)


def eta_bosonic(omega_s: float, T_e: float, T_c: float) -> float:
    _check_order(T_e, T_c)
    n_e = bose_occupation(thermal_ratio(omega_s, T_e))
    n_c = bose_occupation(thermal_ratio(omega_s, T_c))
    return 1.0 - n_c / n_e


def eta_fermionic_x(x_c, ratio: float):
    """η_f at collector ratio x_c = ħω_s/(k_B T_c) with T_e = ratio * T_c."""
    x_c = np.asarray(x_c, dtype=float)
    out = (2.0 / x_c) * (1.0 - fermi_occupation(x_c) / fermi_occupation(x_c / ratio))
    return float(out) if np.ndim(out) == 0 else out


def eta_bosonic_x(x_c, ratio: float):
    x_c = np.asarray(x_c, dtype=float)
    out = 1.0 - bose_occupation(x_c) / bose_occupation(x_c / ratio)
    return float(out) if np.ndim(out) == 0 else out


def carnot_crossing(ratio: float, lo: float = 1e-3, hi: float = 30.0) -> float:
    """x_c where η_f equals the Carnot value; η_f < η_Carnot above it."""
    if not ratio > 1:
        raise DomainError("ratio must exceed 1")
    eta_c = 1.0 - 1.0 / ratio
    return brentq(lambda x: eta_fermionic_x(x, ratio) - eta_c, lo, hi, xtol=1e-14)


def efficiency_point(omega_s: float, ratio: float, T_c: float, gamma_e: float | None = None,
                     gamma_c: float | None = None, use_shifted_omega: float | None = None) -> EfficiencyPoint:
    T_e = ratio * T_c
    point = dict(
        T_c=T_c, T_e=T_e, x_c=thermal_ratio(omega_s, T_c),
        eta_carnot=eta_carnot(T_e, T_c),
        eta_fermi=eta_fermionic(omega_s, T_e, T_c, omega=use_shifted_omega),
        eta_bose=eta_bosonic(omega_s, T_e, T_c),
    )
    if gamma_e is not None and gamma_c is not None:
        # E_s, Q = f ħω_s n̄_e and the matching rate f that reproduces Carnot at high T
        g = gamma_e * gamma_c / (gamma_e + gamma_c)
        n_e = fermi_occupation(thermal_ratio(omega_s, T_e))
        n_c = fermi_occupation(thermal_ratio(omega_s, T_c))
        f_rate = g * 2 * K_B * T_c / (HBAR * (use_shifted_omega or omega_s))
        point.update(energy_loss=HBAR * omega_s * g * (n_e - n_c),
                     heat_in=f_rate * HBAR * omega_s * n_e, f_rate=f_rate)
    return EfficiencyPoint(**point)


def sweep_fig1(omega_s: float, ratio: float, T_c_grid, jobs: int = 1,
               gamma_e: float | None = None, gamma_c: float | None = None,
               use_shifted_omega: float | None = None) -> list[EfficiencyPoint]:
    """One EfficiencyPoint per collector temperature at fixed T_e/T_c = ratio."""
    if not ratio > 1:
        raise DomainError(f"ratio T_e/T_c must exceed 1, got {ratio}")
    grid = np.asarray(T_c_grid, dtype=float)
    if grid.ndim != 1 or np.any(grid <= 0) or np.any(np.diff(grid) <= 0):
        raise DomainError("T_c grid must be positive and strictly increasing")

    def one(T_c):
        try:
            return efficiency_point(omega_s, ratio, float(T_c), gamma_e, gamma_c, use_shifted_omega)
        except DomainError as err:
            raise DomainError(f"at T_c = {T_c} K: {err}") from err

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(one, grid))
    return [one(T) for T in grid]


def T_c_for_x(omega_s: float, x_c):
    """Collector temperature giving the thermal ratio ``x_c``."""
    return HBAR * omega_s / (K_B * np.asarray(x_c, dtype=float))
