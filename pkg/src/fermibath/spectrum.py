"""Current operator, two-time current correlations and the current power spectrum.

The spectrum is split into a DC part 2π I_s² δ(ω), stored only as the scalar
``dc_weight = I_s²``, and a continuous part sampled on a frequency grid.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .analytics import TransportParams, initial_current, steady_current
from .errors import ConfigurationError, DomainError
from .lindblad import GeneratorSpec, check_density, evolve, _rhs
from .reservoirs import Statistics

MIN_TAU_COVERAGE = 12.0  # in units of 1/(gamma_e + gamma_c)


@dataclass(frozen=True)
class CurrentOperator:
    """ι = c_identity·1 - c_number·n."""

    c_identity: float
    c_number: float
    dim: int = 2

    def matrix(self) -> np.ndarray:
        return (self.c_identity * np.eye(self.dim)
                - self.c_number * np.diag(np.arange(self.dim, dtype=float))).astype(complex)

    def expectation(self, rho: np.ndarray) -> float:
        return float(np.real(np.trace(self.matrix() @ rho)))

    def value_at(self, n):
        """<ι> on any state with mean occupation ``n``."""
        return self.c_identity - self.c_number * np.asarray(n, dtype=float)


@dataclass(frozen=True)
class SpectrumResult:
    dc_weight: float
    omegas: np.ndarray
    continuous: np.ndarray


def current_operator(p: TransportParams, dim: int = 2) -> CurrentOperator:
    """½[(γ_e n̄_e - γ_c n̄_c)·1 - (γ_e - γ_c)·n]."""
    if dim < 2:
        raise DomainError("dim must be >= 2")
    return CurrentOperator(0.5 * (p.gamma_e * p.nbar_e - p.gamma_c * p.nbar_c),
                           0.5 * (p.gamma_e - p.gamma_c), dim)


def correlation_analytic(p: TransportParams, tau):
    """Closed-form <ι(0)ι(τ)> in terms of I_0 and I_s, even in τ."""
    g = p.gamma_total
    I0, Is = initial_current(p), steady_current(p)
    t = np.abs(np.asarray(tau, dtype=float))
    decay = np.exp(-g * t)
    out = Is**2 + (I0**2 - Is**2) * decay + g * (Is * I0 - Is**2) * t * decay
    return float(out) if out.ndim == 0 else out


def correlation_regression(G: GeneratorSpec, rho0: np.ndarray, taus, op: CurrentOperator,
                           dt: float | None = None) -> np.ndarray:
    """C(τ) = Tr[ι e^{Lτ}(ι ρ0)] on a non-decreasing grid of τ >= 0."""
    taus = np.asarray(taus, dtype=float)
    if np.any(taus < 0) or np.any(np.diff(taus) < 0):
        raise ConfigurationError("tau grid must be non-negative and non-decreasing")
    check_density(rho0)
    iota = op.matrix()
    x = iota @ np.asarray(rho0, dtype=complex)
    f = _rhs(G)
    out, t_prev = [], 0.0
    for tau in taus:
        if tau > t_prev:
            x = evolve(G, x, tau - t_prev, dt, rhs=f)
            t_prev = tau
        out.append(np.trace(iota @ x))
    out = np.array(out)
    if np.max(np.abs(out.imag), initial=0.0) > 1e-9 * max(np.max(np.abs(out.real)), 1e-300):
        raise ConfigurationError("regression correlation picked up an imaginary part")
    return out.real


def regression_closed_form(p: TransportParams, tau, second_moment: float | None = None):
    """Exact regression result for a diagonal initial state of the reference generator.

    With ι(τ) = I_s + (ι - I_s)e^{-γτ} in the Heisenberg picture,
    C(τ) = I_s I_0 + (<ι²>_0 - I_s I_0) e^{-γτ}. ``second_moment`` defaults to
    I_0², the value for a number eigenstate.
    """
    I0, Is = initial_current(p), steady_current(p)
    m2 = I0**2 if second_moment is None else second_moment
    t = np.abs(np.asarray(tau, dtype=float))
    out = Is * I0 + (m2 - Is * I0) * np.exp(-p.gamma_total * t)
    return float(out) if out.ndim == 0 else out


def ordering_gap(op: CurrentOperator, rho0: np.ndarray) -> tuple[float, float]:
    """(C(0), I_0²) = (<ι²>, <ι>²) for the initial state; their difference is the variance."""
    m = op.matrix()
    rho0 = np.asarray(rho0, dtype=complex)
    c0 = float(np.real(np.trace(m @ m @ rho0)))
    i0 = float(np.real(np.trace(m @ rho0)))
    return c0, i0**2


def _lorentzian_form(g: float, I0: float, Is: float, omegas, gap: float | None = None) -> np.ndarray:
    w2 = np.asarray(omegas, dtype=float) ** 2
    den = g**2 + w2
    gap = I0 - Is if gap is None else gap
    return (2 * g * gap / den) * (I0 + Is * 2 * g**2 / den)


def current_gap(p: TransportParams) -> float:
    """I_0 - I_s written as ½(γ_c - γ_e)(n0 - n̄_s), exactly zero when γ_e = γ_c."""
    return 0.5 * (p.gamma_c - p.gamma_e) * (p.n0 - p.nbar_s)


def spectrum_analytic(p: TransportParams, omegas) -> SpectrumResult:
    """DC weight I_s² plus the Lorentzian-squared continuous part."""
    omegas = np.asarray(omegas, dtype=float)
    if not np.all(np.isfinite(omegas)):
        raise ConfigurationError("frequency grid must be finite")
    I0, Is = initial_current(p), steady_current(p)
    return SpectrumResult(Is**2, omegas,
                          _lorentzian_form(p.gamma_total, I0, Is, omegas, current_gap(p)))


def spectrum_bosonic(p: TransportParams, omegas) -> SpectrumResult:
    if p.statistics is not Statistics.BOSONIC:
        raise DomainError("spectrum_bosonic needs Bose occupations")
    return spectrum_analytic(p, omegas)


def spectrum_numeric(taus, correlation, gamma_total: float, omegas,
                     asymptote: float | None = None) -> SpectrumResult:
    """Trapezoid Fourier transform of a sampled correlation on τ >= 0.

    The asymptote (default: the last sample) is removed and reported as the
    DC weight; the remainder is extended evenly to τ < 0.
    """
    taus = np.asarray(taus, dtype=float)
    c = np.asarray(correlation, dtype=float)
    if taus.shape != c.shape or taus.ndim != 1 or len(taus) < 3:
        raise ConfigurationError("need matching 1-D tau and correlation samples")
    h = np.diff(taus)
    if taus[0] != 0 or np.max(np.abs(h - h[0])) > 1e-9 * h[0]:
        raise ConfigurationError("tau grid must be uniform and start at 0")
    if taus[-1] * gamma_total < MIN_TAU_COVERAGE * (1 - 1e-12):
        raise ConfigurationError(
            f"tau grid covers {taus[-1] * gamma_total:.3g}/(gamma_e+gamma_c); need >= {MIN_TAU_COVERAGE}")
    dc = c[-1] if asymptote is None else asymptote
    fluct = c - dc
    omegas = np.asarray(omegas, dtype=float)
    w = np.full(len(taus), h[0])
    w[0] = w[-1] = 0.5 * h[0]
    # even extension: ∫_{-T}^{T} e^{iωτ} f(|τ|) dτ = 2 ∫_0^T cos(ωτ) f(τ) dτ
    continuous = 2.0 * np.cos(np.outer(omegas, taus)) @ (w * fluct)
    return SpectrumResult(float(dc), omegas, continuous)


def symmetric_grid(half_width: float, n_points: int = 513) -> np.ndarray:
    """Linear grid on [-w, w] whose negative half is the exact mirror of the positive half."""
    if n_points % 2 == 0:
        raise ConfigurationError("symmetric grid needs an odd number of points")
    half = np.linspace(0.0, half_width, n_points // 2 + 1)
    return np.concatenate([-half[:0:-1], half])


def default_omega_grid(gamma_total: float, n_points: int = 513) -> np.ndarray:
    return symmetric_grid(10.0 * gamma_total, n_points)


def default_tau_grid(gamma_total: float, n_points: int = 4096) -> np.ndarray:
    return np.linspace(0.0, MIN_TAU_COVERAGE / gamma_total, n_points)


__all__ = [
    "CurrentOperator", "SpectrumResult", "current_operator", "correlation_analytic",
    "correlation_regression", "regression_closed_form", "current_gap", "ordering_gap", "spectrum_analytic",
    "spectrum_bosonic", "spectrum_numeric", "symmetric_grid", "default_omega_grid",
    "default_tau_grid",
]
