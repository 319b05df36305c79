import sympy
import pytest
from hypothesis import given, strategies as st

from fermibath.grassmann import (MEASURE_D2XI, XI, XI_STAR, GrassmannError, GrassmannOperator,
                                 GrassmannPoly, annihilation, berezin_integrate, coherent_bra,
                                 coherent_ket, coherent_projector, creation, displacement,
                                 displacement_expanded, grassmann_delta, grassmann_exp,
                                 identity_op, xi, xi_star)

U4 = ("a", "b", "c", "d")
small = st.integers(-5, 5)


@st.composite
def polys(draw, universe=U4):
    terms = {}
    for mask in range(1 << len(universe)):
        c = draw(small)
        if c:
            terms[tuple(i for i in range(len(universe)) if mask >> i & 1)] = c
    return GrassmannPoly(terms, universe)


def gen(name, universe=U4):
    return GrassmannPoly.generator(name, universe)


def test_berezin_axioms():
    th = GrassmannPoly.generator("t", ("t",))
    assert berezin_integrate(GrassmannPoly.scalar(1, ("t",)), ["t"]).is_zero()
    assert berezin_integrate(th, ["t"]) == GrassmannPoly.scalar(1, ("t",))


def test_measure_convention():
    # ∫d²ξ ξξ* = 1 with d²ξ = dξ* dξ
    assert berezin_integrate(grassmann_delta()) == GrassmannPoly.scalar(1)
    assert berezin_integrate(xi_star() * xi()) == GrassmannPoly.scalar(-1)
    assert berezin_integrate(xi()).is_zero()


@given(polys(), polys(), polys())
def test_product_is_associative(p, q, r):
    assert (p * q) * r == p * (q * r)


@given(polys(), polys())
def test_distributive(p, q):
    a = gen("a")
    assert a * (p + q) == a * p + a * q


@pytest.mark.parametrize("x, y", [("a", "b"), ("a", "c"), ("b", "d")])
def test_generators_anticommute_and_are_nilpotent(x, y):
    gx, gy = gen(x), gen(y)
    assert (gx * gy + gy * gx).is_zero()
    assert (gx * gx).is_zero()


@given(polys())
def test_even_part_commutes(p):
    even = GrassmannPoly({k: v for k, v in p.terms.items() if len(k) % 2 == 0}, U4)
    assert even * gen("b") == gen("b") * even


@given(polys(), polys())
def test_left_derivative_graded_leibniz(p, q):
    # ∂(pq) = (∂p)q + (-1)^{|p|} p ∂q for homogeneous p
    odd = GrassmannPoly({k: v for k, v in p.terms.items() if len(k) % 2 == 1}, U4)
    lhs = (odd * q).derivative_left("a")
    rhs = odd.derivative_left("a") * q - odd * q.derivative_left("a")
    assert lhs == rhs


def test_derivative_and_integral_are_the_same_operation():
    p = gen("a") * gen("b") + 3 * gen("b")
    assert p.integrate(["b"]) == p.derivative_left("b")


def test_coefficients_and_parity():
    p = 2 + 3 * (xi() * xi_star())
    assert p.body() == 2
    assert p.coeff(XI, XI_STAR) == 3
    assert p.coeff(XI_STAR, XI) == -3
    assert p.is_even() and not p.is_odd()
    assert xi().is_odd()


def test_conjugation_reverses_order():
    assert (xi() * xi_star()).conjugate() == xi() * xi_star()
    assert (2j * xi()).conjugate() == -2j * xi_star()


def test_exp_of_nilpotent_terminates():
    x = xi_star() * xi()
    assert grassmann_exp(x) == 1 + x
    c = sympy.Rational(3, 7)
    assert grassmann_exp(c * x) * grassmann_exp(-c * x) == GrassmannPoly.scalar(1)


def test_too_many_generators_rejected():
    with pytest.raises(GrassmannError):
        GrassmannPoly.scalar(1, tuple(f"g{i}" for i in range(9)))


def test_unknown_generator_rejected():
    with pytest.raises(GrassmannError):
        GrassmannPoly.generator("zeta")


def test_mixed_universe_rejected():
    with pytest.raises(GrassmannError):
        gen("a") * xi()


def test_displacement_identities():
    D, a, ad = displacement(), annihilation(), creation()
    assert D == displacement_expanded()
    assert D.dagger() * D == identity_op()
    assert D.dagger() * a * D == a + xi()
    assert D.dagger() * ad * D == ad + xi_star()


def test_coherent_state_eigen_relations():
    a, ad = annihilation(), creation()
    ket, bra, K = coherent_ket(), coherent_bra(), coherent_projector()
    assert a * ket == xi() * ket
    assert bra * ad == xi_star() * bra
    assert ad * ket == -ket.derivative_left(XI) + sympy.Rational(1, 2) * (xi_star() * ket)
    assert K * a == K.derivative_left(XI_STAR) + xi() * K
    assert K.integrate(MEASURE_D2XI) == identity_op()


def test_projector_integral_weights():
    K = coherent_projector()
    c0, c1 = sympy.Rational(2, 5), sympy.Rational(1, 3)
    P = GrassmannOperator.from_poly(c0 + c1 * (xi_star() * xi()))
    m = (P * K).integrate(MEASURE_D2XI).scalar_matrix()
    assert m[0, 0] == c0 - c1 and m[1, 1] == c0 and m[0, 1] == 0


def test_operator_ring_is_graded():
    # the odd operator a anticommutes with the odd number ξ
    a = annihilation()
    assert a * xi() == -(xi() * a)
    n = creation() * a
    assert n * xi() == xi() * n
