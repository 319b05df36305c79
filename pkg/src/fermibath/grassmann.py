"""Exact calculus over anticommuting generators for a single fermionic mode.

Two value types live here:

``GrassmannPoly``
    multilinear polynomial in anticommuting generators with scalar
    coefficients (Python numbers, ``Fraction`` or sympy expressions).
``GrassmannOperator``
    Grassmann-valued operator on the two-level Fock space {|0>, |1>}. The mode
    operators ``a``, ``a†`` are odd and anticommute with the generators, so the
    product is the Z2-graded tensor product.

Conventions (fixed once): canonical generator order is the universe order
(``xi`` before ``xi*``), derivatives act from the left, and the measure
``d2xi`` means ``dxi* dxi`` so that ``∫d2xi xi xi* = 1``.
"""
from __future__ import annotations

from typing import Iterable, Mapping

import numpy as np
import sympy

from .errors import StructuralError

XI = "xi"
XI_STAR = "xi*"
DEFAULT_UNIVERSE = (XI, XI_STAR)
MAX_GENERATORS = 8
MEASURE_D2XI = (XI_STAR, XI)


class GrassmannError(StructuralError):
    """Structural misuse of the algebra (unknown generator, odd P, ...)."""


def _clean(c):
    if isinstance(c, sympy.Basic):
        c = sympy.expand(c)
    return c


def _is_zero(c) -> bool:
    if isinstance(c, np.ndarray):
        return all(_is_zero(x) for x in c.flat)
    return c == 0


def _merge(a: tuple[int, ...], b: tuple[int, ...]):
    """Product of two canonical monomials: (sign, monomial) or None if nilpotent."""
    if set(a) & set(b):
        return None
    inversions = sum(1 for i in a for j in b if i > j)
    return (-1) ** inversions, tuple(sorted(a + b))


def conjugate_name(name: str) -> str:
    return name[:-1] if name.endswith("*") else name + "*"


def _conj_scalar(c):
    if isinstance(c, sympy.Basic):
        return sympy.conjugate(c)
    if isinstance(c, complex):
        return c.conjugate()
    return c


class GrassmannPoly:
    """Immutable multilinear polynomial over a fixed ordered generator universe."""

    __slots__ = ("universe", "terms")

    def __init__(self, terms: Mapping[tuple[int, ...], object] | None = None,
                 universe: Iterable[str] = DEFAULT_UNIVERSE):
        universe = tuple(universe)
        if len(set(universe)) != len(universe):
            raise GrassmannError(f"repeated generator in universe {universe}")
        if len(universe) > MAX_GENERATORS:
            raise GrassmannError(f"universe capped at {MAX_GENERATORS} generators")
        clean = {}
        for mono, c in (terms or {}).items():
            mono = tuple(mono)
            if list(mono) != sorted(set(mono)):
                raise GrassmannError(f"monomial {mono} not canonical")
            c = _clean(c)
            if not _is_zero(c):
                clean[mono] = c
        self.universe = universe
        self.terms = clean

    # constructors -----------------------------------------------------------
    @classmethod
    def scalar(cls, c, universe: Iterable[str] = DEFAULT_UNIVERSE) -> GrassmannPoly:
        return cls({(): c}, universe)

    @classmethod
    def generator(cls, name: str, universe: Iterable[str] = DEFAULT_UNIVERSE) -> GrassmannPoly:
        universe = tuple(universe)
        return cls({(_index(universe, name),): 1}, universe)

    @classmethod
    def monomial(cls, names: Iterable[str], coeff=1,
                 universe: Iterable[str] = DEFAULT_UNIVERSE) -> GrassmannPoly:
        """Ordered product ``coeff * g1 g2 ...`` brought to canonical form."""
        out = cls.scalar(coeff, universe)
        for name in names:
            out = out * cls.generator(name, universe)
        return out

    # algebra -----------------------------------------------------------------
    def _coerce(self, other) -> GrassmannPoly:
        if isinstance(other, GrassmannPoly):
            if other.universe != self.universe:
                raise GrassmannError("generator universes differ")
            return other
        return GrassmannPoly.scalar(other, self.universe)

    def __add__(self, other):
        if isinstance(other, GrassmannOperator):
            return NotImplemented
        other = self._coerce(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, 0) + c
        return GrassmannPoly(terms, self.universe)

    __radd__ = __add__

    def __neg__(self):
        return GrassmannPoly({m: -c for m, c in self.terms.items()}, self.universe)

    def __sub__(self, other):
        if isinstance(other, GrassmannOperator):
            return NotImplemented
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, GrassmannOperator):
            return NotImplemented
        other = self._coerce(other)
        terms: dict = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                merged = _merge(ma, mb)
                if merged is None:
                    continue
                sign, m = merged
                terms[m] = terms.get(m, 0) + sign * ca * cb
        return GrassmannPoly(terms, self.universe)

    def __rmul__(self, other):
        return self._coerce(other) * self

    def __eq__(self, other):
        if isinstance(other, GrassmannOperator):
            return NotImplemented
        try:
            return (self - other).is_zero()
        except GrassmannError:
            return False

    def __hash__(self):
        return hash((self.universe, frozenset(self.terms)))

    def __repr__(self):
        return f"GrassmannPoly({self.pretty()})"

    # queries -----------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def coeff(self, *names: str):
        """Coefficient of the monomial written in the order ``names``.

        ``coeff("xi*", "xi")`` is minus ``coeff("xi", "xi*")``.
        """
        raw = [_index(self.universe, n) for n in names]
        if len(set(raw)) != len(raw):
            return 0
        inversions = sum(1 for i in range(len(raw)) for j in range(i + 1, len(raw)) if raw[i] > raw[j])
        c = self.terms.get(tuple(sorted(raw)), 0)
        return -c if inversions % 2 else c

    def is_even(self) -> bool:
        return all(len(m) % 2 == 0 for m in self.terms)

    def is_odd(self) -> bool:
        return all(len(m) % 2 == 1 for m in self.terms)

    def body(self):
        return self.terms.get((), 0)

    def pretty(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=lambda t: (len(t), t)):
            c = self.terms[m]
            gens = " ".join(self.universe[i] for i in m)
            parts.append(f"({c})" + (f" {gens}" if gens else ""))
        return " + ".join(parts)

    def subs(self, mapping) -> GrassmannPoly:
        """Substitute sympy symbols inside the coefficients."""
        return GrassmannPoly(
            {m: (c.subs(mapping) if isinstance(c, sympy.Basic) else c)
             for m, c in self.terms.items()}, self.universe)

    # calculus ----------------------------------------------------------------
    def derivative_left(self, name: str) -> GrassmannPoly:
        k = _index(self.universe, name)
        terms: dict = {}
        for m, c in self.terms.items():
            if k in m:
                pos = m.index(k)
                rest = m[:pos] + m[pos + 1:]
                terms[rest] = terms.get(rest, 0) + (-1) ** pos * c
        return GrassmannPoly(terms, self.universe)

    def integrate(self, measure: Iterable[str]) -> GrassmannPoly:
        """Iterated Berezin integral ``∫ d m1 d m2 ... f``; the rightmost measure acts first."""
        out = self
        for name in reversed(tuple(measure)):
            out = out.derivative_left(name)
        return out

    def conjugate(self) -> GrassmannPoly:
        """Involution ``(c g1...gk)* = c* gk*...g1*``."""
        out = GrassmannPoly({}, self.universe)
        for m, c in self.terms.items():
            names = [conjugate_name(self.universe[i]) for i in reversed(m)]
            out = out + GrassmannPoly.monomial(names, _conj_scalar(c), self.universe)
        return out


def _index(universe: tuple[str, ...], name: str) -> int:
    try:
        return universe.index(name)
    except ValueError:
        raise GrassmannError(f"unknown generator {name!r} (universe {universe})") from None


def g_mul(a: GrassmannPoly, b: GrassmannPoly) -> GrassmannPoly:
    return a * b


def g_derivative_left(a: GrassmannPoly, g: str) -> GrassmannPoly:
    return a.derivative_left(g)


def berezin_integrate(a: GrassmannPoly, measure: Iterable[str] = MEASURE_D2XI) -> GrassmannPoly:
    return a.integrate(measure)


def xi(universe=DEFAULT_UNIVERSE) -> GrassmannPoly:
    return GrassmannPoly.generator(XI, universe)


def xi_star(universe=DEFAULT_UNIVERSE) -> GrassmannPoly:
    return GrassmannPoly.generator(XI_STAR, universe)


def grassmann_delta() -> GrassmannPoly:
    """Two-dimensional delta ``xi xi*``; normalised so that ``∫d2xi delta = 1``."""
    return xi() * xi_star()


def grassmann_exp(x: GrassmannPoly) -> GrassmannPoly:
    """``exp(x)`` for nilpotent ``x`` (no body); the series truncates exactly."""
    if x.body() != 0:
        raise GrassmannError("exp only implemented for nilpotent arguments")
    out = GrassmannPoly.scalar(1, x.universe)
    power = GrassmannPoly.scalar(1, x.universe)
    k = 0
    while True:
        k += 1
        power = power * x
        if power.is_zero():
            return out
        out = out + power * sympy.Rational(1, sympy.factorial(k))


# --------------------------------------------------------------------------
# Grassmann-valued operators on one fermionic mode
# --------------------------------------------------------------------------

_EVEN_MASK = np.array([[1, 0], [0, 1]], dtype=object)
_ODD_MASK = np.array([[0, 1], [1, 0]], dtype=object)


def _mat(rows) -> np.ndarray:
    return np.array(rows, dtype=object)


def _zero_mat() -> np.ndarray:
    return _mat([[0, 0], [0, 0]])


def _clean_mat(m: np.ndarray) -> np.ndarray:
    return np.vectorize(_clean, otypes=[object])(m)


class GrassmannOperator:
    """Sum of ``monomial ⊗ 2x2 matrix`` with graded multiplication.

    Diagonal matrix entries are parity-even, off-diagonal ones parity-odd
    (they change fermion number by one).
    """

    __slots__ = ("universe", "terms")

    def __init__(self, terms: Mapping[tuple[int, ...], np.ndarray] | None = None,
                 universe: Iterable[str] = DEFAULT_UNIVERSE):
        self.universe = tuple(universe)
        clean = {}
        for m, mat in (terms or {}).items():
            mat = _clean_mat(np.asarray(mat, dtype=object))
            if not _is_zero(mat):
                clean[tuple(m)] = mat
        self.terms = clean

    @classmethod
    def from_matrix(cls, rows, universe=DEFAULT_UNIVERSE) -> GrassmannOperator:
        return cls({(): _mat(rows)}, universe)

    @classmethod
    def from_poly(cls, p: GrassmannPoly) -> GrassmannOperator:
        eye = _mat([[1, 0], [0, 1]])
        return cls({m: c * eye for m, c in p.terms.items()}, p.universe)

    def _coerce(self, other) -> GrassmannOperator:
        if isinstance(other, GrassmannOperator):
            if other.universe != self.universe:
                raise GrassmannError("generator universes differ")
            return other
        if isinstance(other, GrassmannPoly):
            return GrassmannOperator.from_poly(other)
        return GrassmannOperator.from_poly(GrassmannPoly.scalar(other, self.universe))

    def __add__(self, other):
        other = self._coerce(other)
        terms = {m: mat.copy() for m, mat in self.terms.items()}
        for m, mat in other.terms.items():
            terms[m] = terms.get(m, _zero_mat()) + mat
        return GrassmannOperator(terms, self.universe)

    __radd__ = __add__

    def __neg__(self):
        return GrassmannOperator({m: -mat for m, mat in self.terms.items()}, self.universe)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        terms: dict = {}
        for ma, A in self.terms.items():
            a_even, a_odd = A * _EVEN_MASK, A * _ODD_MASK
            for mb, B in other.terms.items():
                merged = _merge(ma, mb)
                if merged is None:
                    continue
                sign, m = merged
                # moving generator monomial mb leftwards through the odd part of A
                graded = a_even + (-1) ** len(mb) * a_odd
                terms[m] = terms.get(m, _zero_mat()) + sign * (graded @ B)
        return GrassmannOperator(terms, self.universe)

    def __rmul__(self, other):
        return self._coerce(other) * self

    def __eq__(self, other):
        try:
            return (self - other).is_zero()
        except GrassmannError:
            return False

    def __hash__(self):
        return hash((self.universe, frozenset(self.terms)))

    def is_zero(self) -> bool:
        return not self.terms

    def dagger(self) -> GrassmannOperator:
        """Hermitian conjugate, ``(g ⊗ A)† = A† g†`` written back in canonical order."""
        out = GrassmannOperator({}, self.universe)
        for m, A in self.terms.items():
            g = GrassmannPoly({m: 1}, self.universe).conjugate()
            a_dag = np.vectorize(_conj_scalar, otypes=[object])(A).T
            # A† g†: odd part of A† picks up a sign when g† (parity len(m)) moves left
            graded = a_dag * _EVEN_MASK + (-1) ** len(m) * (a_dag * _ODD_MASK)
            for mg, cg in g.terms.items():
                out = out + GrassmannOperator({mg: cg * graded}, self.universe)
        return out

    def derivative_left(self, name: str) -> GrassmannOperator:
        k = _index(self.universe, name)
        terms: dict = {}
        for m, A in self.terms.items():
            if k in m:
                pos = m.index(k)
                rest = m[:pos] + m[pos + 1:]
                terms[rest] = terms.get(rest, _zero_mat()) + (-1) ** pos * A
        return GrassmannOperator(terms, self.universe)

    def integrate(self, measure: Iterable[str] = MEASURE_D2XI) -> GrassmannOperator:
        out = self
        for name in reversed(tuple(measure)):
            out = out.derivative_left(name)
        return out

    def scalar_matrix(self) -> np.ndarray:
        """The generator-free part as a 2x2 object matrix; raises if any generator survives."""
        extra = [m for m in self.terms if m]
        if extra:
            raise GrassmannError("operator still carries Grassmann generators")
        return self.terms.get((), _zero_mat()).copy()

    def pretty(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=lambda t: (len(t), t)):
            gens = " ".join(self.universe[i] for i in m) or "1"
            parts.append(f"{gens} ⊗ {self.terms[m].tolist()}")
        return " + ".join(parts)

    def __repr__(self):
        return f"GrassmannOperator({self.pretty()})"


def annihilation(universe=DEFAULT_UNIVERSE) -> GrassmannOperator:
    return GrassmannOperator.from_matrix([[0, 1], [0, 0]], universe)


def creation(universe=DEFAULT_UNIVERSE) -> GrassmannOperator:
    return GrassmannOperator.from_matrix([[0, 0], [1, 0]], universe)


def identity_op(universe=DEFAULT_UNIVERSE) -> GrassmannOperator:
    return GrassmannOperator.from_matrix([[1, 0], [0, 1]], universe)


def vacuum_projector(universe=DEFAULT_UNIVERSE) -> GrassmannOperator:
    return GrassmannOperator.from_matrix([[1, 0], [0, 0]], universe)


def operator_exp(x: GrassmannOperator) -> GrassmannOperator:
    """Power series of a nilpotent Grassmann-valued operator (terminates exactly)."""
    out = identity_op(x.universe)
    power = identity_op(x.universe)
    for k in range(1, 2 * len(x.universe) + 4):
        power = power * x
        if power.is_zero():
            return out
        out = out + power * sympy.Rational(1, sympy.factorial(k))
    raise GrassmannError("operator exponent is not nilpotent")


def displacement() -> GrassmannOperator:
    """``D(xi) = exp(a† xi - xi* a)`` summed exactly."""
    a, ad = annihilation(), creation()
    return operator_exp(ad * xi() - xi_star() * a)


def displacement_expanded() -> GrassmannOperator:
    """Closed form ``1 + (a† xi - xi* a) + (a†a - 1/2) xi* xi``."""
    a, ad = annihilation(), creation()
    half = sympy.Rational(1, 2)
    return (identity_op() + ad * xi() - xi_star() * a
            + (ad * a - half * identity_op()) * (xi_star() * xi()))


def coherent_ket() -> GrassmannOperator:
    """``|xi>`` stored as the operator ``|xi><0|``."""
    return displacement() * vacuum_projector()


def coherent_bra() -> GrassmannOperator:
    """``<xi|`` stored as the operator ``|0><xi|``."""
    return coherent_ket().dagger()


def coherent_projector() -> GrassmannOperator:
    """``|xi><xi|`` with Grassmann-valued entries."""
    return coherent_ket() * coherent_bra()
