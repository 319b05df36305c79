"""Two-reservoir master equations for one fermionic or bosonic mode.

Density matrices are plain ``numpy`` complex arrays in the number basis
|0>, ..., |dim-1>. Two fermionic generators are provided:

``paper_literal``
    -iω[n, ρ] - (γ/2)(nρ + ρn - 2aρa†) - α(ρ - aρa† - a†ρa),
    with γ = γ_e + γ_c and α = γ_e n̄_e + γ_c n̄_c. Its mean occupation obeys
    d<n>/dt = α - (γ + 2α)<n>.
``reference_thermal``
    -iω[n, ρ] + Σ_k γ_k(1 - n̄_k) D[a]ρ + γ_k n̄_k D[a†]ρ, whose mean occupation
    obeys d<n>/dt = α - γ<n>.

The bosonic generator is the standard thermal one with (n̄ + 1, n̄) weights.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

import numpy as np
import scipy.linalg

from .errors import (ConfigurationError, ConvergenceError, DomainError,
                     NumericalInstabilityError, StructuralError, TruncationError)
from .reservoirs import Statistics

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-10
POSITIVITY_TOL = 1e-9
TRACE_RENORM_THRESHOLD = 1e-12
MAX_STEP = 1e-2  # dt * (gamma_e + gamma_c)
TRUNCATION_TOL = 1e-8
STEADY_TOL = 1e-12  # relative to gamma_e + gamma_c
DEFAULT_N_MAX = 40


class Variant(str, enum.Enum):
    PAPER_LITERAL = "paper_literal"
    REFERENCE_THERMAL = "reference_thermal"

    @classmethod
    def parse(cls, value) -> Variant:
        if isinstance(value, cls):
            return value
        value = str(value).lower().replace("-", "_")
        return {"reference": cls.REFERENCE_THERMAL, "paper": cls.PAPER_LITERAL}.get(value) or cls(value)


@dataclass(frozen=True)
class GeneratorSpec:
    statistics: Statistics
    omega: float
    gamma_e: float
    gamma_c: float
    nbar_e: float
    nbar_c: float
    variant: Variant = Variant.REFERENCE_THERMAL
    n_max: int = DEFAULT_N_MAX

    def __post_init__(self):
        object.__setattr__(self, "statistics", Statistics.parse(self.statistics))
        object.__setattr__(self, "variant", Variant.parse(self.variant))
        if self.gamma_e < 0 or self.gamma_c < 0:
            raise DomainError("damping rates must be non-negative")
        for nb in (self.nbar_e, self.nbar_c):
            if self.statistics is Statistics.FERMIONIC and not 0 < nb < 1:
                raise DomainError(f"fermionic occupation must lie in (0, 1), got {nb}")
            if self.statistics is Statistics.BOSONIC and not nb > 0:
                raise DomainError(f"bosonic occupation must be positive, got {nb}")
        if self.statistics is Statistics.BOSONIC and self.n_max < 8:
            raise DomainError(f"n_max must be >= 8, got {self.n_max}")

    @property
    def dim(self) -> int:
        return 2 if self.statistics is Statistics.FERMIONIC else self.n_max + 1

    @property
    def gamma_total(self) -> float:
        return self.gamma_e + self.gamma_c

    @property
    def alpha(self) -> float:
        return self.gamma_e * self.nbar_e + self.gamma_c * self.nbar_c

    @property
    def nbar_s(self) -> float:
        return self.alpha / self.gamma_total

    def with_variant(self, variant) -> GeneratorSpec:
        return replace(self, variant=Variant.parse(variant))


# --------------------------------------------------------------------------
# operators and states
# --------------------------------------------------------------------------

def annihilation(dim: int) -> np.ndarray:
    """Lowering operator; for dim = 2 this is the fermionic a."""
    return np.diag(np.sqrt(np.arange(1, dim, dtype=float)), 1).astype(complex)


def number_operator(dim: int) -> np.ndarray:
    return np.diag(np.arange(dim, dtype=float)).astype(complex)


def number_state(n: int, dim: int) -> np.ndarray:
    rho = np.zeros((dim, dim), dtype=complex)
    rho[n, n] = 1.0
    return rho


def diagonal_state(populations) -> np.ndarray:
    return np.diag(np.asarray(populations, dtype=float)).astype(complex)


def fermion_state(n: float, coherence: complex = 0.0) -> np.ndarray:
    """diag(1 - n, n) with an optional |0><1| coherence."""
    return np.array([[1 - n, coherence], [np.conj(coherence), n]], dtype=complex)


def thermal_state(nbar: float, dim: int) -> np.ndarray:
    """Truncated Bose-Einstein state with mean ``nbar`` (renormalised)."""
    q = nbar / (1 + nbar)
    p = q ** np.arange(dim)
    return diagonal_state(p / p.sum())


def check_density(rho: np.ndarray, *, exc=StructuralError) -> None:
    """Raise ``exc`` unless rho is Hermitian, unit-trace and positive semidefinite."""
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise StructuralError(f"density matrix must be square, got shape {rho.shape}")
    if not np.all(np.isfinite(rho)):
        raise exc("density matrix has non-finite entries")
    herm = np.max(np.abs(rho - rho.conj().T))
    if herm > HERMITIAN_TOL:
        raise exc(f"density matrix not Hermitian (deviation {herm:.3e})")
    tr = np.trace(rho)
    if abs(tr - 1) > TRACE_TOL:
        raise exc(f"density matrix trace {tr} != 1")
    lam = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)).min()
    if lam < -POSITIVITY_TOL:
        raise exc(f"density matrix has negative eigenvalue {lam:.3e}")


def occupation(rho: np.ndarray) -> float:
    """<n> = Tr(n ρ)."""
    rho = np.asarray(rho)
    return float(np.real(np.sum(np.arange(rho.shape[0]) * np.diagonal(rho))))


# --------------------------------------------------------------------------
# generator
# --------------------------------------------------------------------------

def _dissipator(c: np.ndarray, rho: np.ndarray) -> np.ndarray:
    cd = c.conj().T
    cdc = cd @ c
    return c @ rho @ cd - 0.5 * (cdc @ rho + rho @ cdc)


def generator_apply(G: GeneratorSpec, rho: np.ndarray) -> np.ndarray:
    """dρ/dt for the generator ``G``; ``rho`` need not be Hermitian."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (G.dim, G.dim):
        raise StructuralError(f"expected a {G.dim}x{G.dim} matrix, got {rho.shape}")
    a = annihilation(G.dim)
    ad = a.conj().T
    n = ad @ a
    out = -1j * G.omega * (n @ rho - rho @ n)
    rates = ((G.gamma_e, G.nbar_e), (G.gamma_c, G.nbar_c))

    if G.statistics is Statistics.BOSONIC:
        for g, nb in rates:
            out += g * (nb + 1) * _dissipator(a, rho) + g * nb * _dissipator(ad, rho)
        return out

    if G.variant is Variant.PAPER_LITERAL:
        gamma, alpha = G.gamma_total, G.alpha
        out -= 0.5 * gamma * (n @ rho + rho @ n - 2 * a @ rho @ ad)
        out -= alpha * (rho - a @ rho @ ad - ad @ rho @ a)
        return out

    for g, nb in rates:
        out += g * (1 - nb) * _dissipator(a, rho) + g * nb * _dissipator(ad, rho)
    return out


def liouvillian(G: GeneratorSpec) -> np.ndarray:
    """Matrix of the generator acting on row-major ``rho.reshape(-1)``."""
    d = G.dim
    cols = []
    for k in range(d * d):
        e = np.zeros(d * d, dtype=complex)
        e[k] = 1.0
        cols.append(generator_apply(G, e.reshape(d, d)).reshape(-1))
    return np.array(cols).T


# --------------------------------------------------------------------------
# time evolution
# --------------------------------------------------------------------------

def default_dt(G: GeneratorSpec) -> float:
    """MAX_STEP/(γ_e+γ_c), shortened for bosons so RK4 stays inside its stability region.

    The fastest bosonic decay rate is about the diagonal rate of the top Fock level.
    """
    dt = MAX_STEP / G.gamma_total
    if G.statistics is Statistics.BOSONIC:
        n = G.n_max
        top = sum(g * ((nb + 1) * n + nb * (n + 1))
                  for g, nb in ((G.gamma_e, G.nbar_e), (G.gamma_c, G.nbar_c)))
        dt = min(dt, 0.5 / top)
    return dt


def _check_step(G: GeneratorSpec, dt: float) -> None:
    if not dt > 0:
        raise ConfigurationError(f"dt must be positive, got {dt}")
    if dt * G.gamma_total > MAX_STEP * (1 + 1e-12):
        raise ConfigurationError(
            f"dt*(gamma_e+gamma_c) = {dt * G.gamma_total:.3g} exceeds {MAX_STEP}")


def _rhs(G: GeneratorSpec):
    """Dissipative part of the generator (ω set to zero).

    Every generator here is phase covariant, so the dissipator commutes with
    -iω[n, ·] and the rotation can be applied exactly after integration.
    """
    D = replace(G, omega=0.0)
    if G.dim <= 4:
        L = liouvillian(D)
        d = G.dim
        return lambda x: (L @ x.reshape(-1)).reshape(d, d)
    return lambda x: generator_apply(D, x)


def _rotate(G: GeneratorSpec, x: np.ndarray, t: float) -> np.ndarray:
    """e^{-iωnt} x e^{iωnt}: element (j, k) picks up e^{-iω(j-k)t}."""
    if G.omega == 0 or t == 0:
        return x
    n = np.arange(G.dim)
    return x * np.exp(-1j * G.omega * t * (n[:, None] - n[None, :]))


def evolve(G: GeneratorSpec, x0: np.ndarray, t_final: float, dt: float | None = None,
           rhs=None) -> np.ndarray:
    """Fixed-step RK4 of dX/dt = L(X) for any matrix X (no density checks).

    RK4 runs in the frame rotating at ω, where only the dissipator acts; the
    last step is shortened so the result lands exactly on ``t_final``.
    """
    dt = default_dt(G) if dt is None else dt
    _check_step(G, dt)
    if t_final < 0:
        raise ConfigurationError(f"t_final must be >= 0, got {t_final}")
    f = rhs or _rhs(G)
    x = np.array(x0, dtype=complex)
    n_full = int(math.floor(t_final / dt))
    # guard against a sliver step produced by floating-point division
    if t_final - n_full * dt <= 1e-12 * dt and n_full > 0:
        n_full -= 1
    steps = [dt] * n_full
    last = t_final - n_full * dt
    if last > 0:
        steps.append(last)
    for h in steps:
        k1 = f(x)
        k2 = f(x + 0.5 * h * k1)
        k3 = f(x + 0.5 * h * k2)
        k4 = f(x + h * k3)
        x = x + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
    return _rotate(G, x, t_final)


def truncation_weight(rho: np.ndarray) -> float:
    """Population in the top two Fock levels of a truncated bosonic state."""
    return float(np.real(np.diagonal(rho)[-2:]).sum())


def _finish(G: GeneratorSpec, rho: np.ndarray) -> np.ndarray:
    tr = np.trace(rho)
    if abs(tr - 1) > TRACE_RENORM_THRESHOLD:
        rho = rho / tr
    check_density(rho, exc=NumericalInstabilityError)
    if G.statistics is Statistics.BOSONIC and truncation_weight(rho) >= TRUNCATION_TOL:
        raise TruncationError(
            f"top Fock levels hold {truncation_weight(rho):.2e} >= {TRUNCATION_TOL}; raise n_max")
    return rho


def propagate(G: GeneratorSpec, rho0: np.ndarray, t_final: float, dt: float | None = None) -> np.ndarray:
    """ρ(t_final) from ρ(0) = rho0 by RK4."""
    rho0 = np.asarray(rho0, dtype=complex)
    if rho0.shape != (G.dim, G.dim):
        raise StructuralError(f"expected a {G.dim}x{G.dim} state, got {rho0.shape}")
    check_density(rho0)
    if t_final == 0:
        return rho0.copy()
    return _finish(G, evolve(G, rho0, t_final, dt))


def trajectory(G: GeneratorSpec, rho0: np.ndarray, times, dt: float | None = None) -> list[np.ndarray]:
    """States at increasing ``times`` (first entry may be 0), propagating segment by segment."""
    times = np.asarray(times, dtype=float)
    if np.any(np.diff(times) < 0):
        raise ConfigurationError("times must be non-decreasing")
    rho0 = np.asarray(rho0, dtype=complex)
    check_density(rho0)
    f = _rhs(G)
    out, rho, t_prev = [], rho0, 0.0
    for t in times:
        if t > t_prev:
            rho = _finish(G, evolve(G, rho, t - t_prev, dt, rhs=f))
            t_prev = t
        out.append(rho.copy())
    return out


def steady_state(G: GeneratorSpec, max_time: float | None = None, dt: float | None = None) -> np.ndarray:
    """Stationary state of ``G``.

    Fermions: null vector of the 4x4 Liouvillian. Bosons: propagation from the
    vacuum until ||dρ/dt|| <= STEADY_TOL * (γ_e + γ_c), giving up after
    ``max_time`` (default 400/(γ_e + γ_c)).
    """
    if not G.gamma_total > 0:
        raise DomainError("steady state needs gamma_e + gamma_c > 0")
    if G.dim <= 2:
        ns = scipy.linalg.null_space(liouvillian(G))
        if ns.shape[1] != 1:
            raise ConvergenceError(f"stationary subspace has dimension {ns.shape[1]}")
        rho = ns[:, 0].reshape(G.dim, G.dim)
        rho = rho / np.trace(rho)
        rho = 0.5 * (rho + rho.conj().T)
        check_density(rho, exc=NumericalInstabilityError)
        return rho

    gt = G.gamma_total
    max_time = 400.0 / gt if max_time is None else max_time
    chunk = 2.0 / gt
    f = _rhs(G)
    rho, t = number_state(0, G.dim), 0.0
    while t < max_time:
        rho = _finish(G, evolve(G, rho, chunk, dt, rhs=f))
        t += chunk
        if np.max(np.abs(generator_apply(G, rho))) <= STEADY_TOL * gt:
            return rho
    raise ConvergenceError(f"no stationary state reached within t = {max_time:.3g} s")


def steady_occupation_paper_literal(G: GeneratorSpec) -> float:
    """α/(γ + 2α): fixed point of the paper-literal occupation law."""
    return G.alpha / (G.gamma_total + 2 * G.alpha)


def variant_discrepancy_report(G: GeneratorSpec) -> str:
    """Side-by-side steady occupation and relaxation rate of the two fermionic variants."""
    if G.statistics is not Statistics.FERMIONIC:
        raise DomainError("the variant comparison is defined for the fermionic mode only")
    ref = occupation(steady_state(G.with_variant(Variant.REFERENCE_THERMAL)))
    lit = occupation(steady_state(G.with_variant(Variant.PAPER_LITERAL)))
    gamma, alpha = G.gamma_total, G.alpha
    lines = [
        "variant            steady <n>             relaxation rate [1/s]",
        f"reference_thermal  {ref:<22.15g} {gamma:.15g}",
        f"paper_literal      {lit:<22.15g} {gamma + 2 * alpha:.15g}",
        f"closed forms: n_s = alpha/gamma = {G.nbar_s:.15g}, "
        f"alpha/(gamma + 2 alpha) = {steady_occupation_paper_literal(G):.15g}",
        f"difference in steady <n>: {lit - ref:.6e}",
    ]
    return "\n".join(lines)
