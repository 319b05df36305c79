import sympy
import pytest
from hypothesis import given, settings, strategies as st

from fermibath.fokker_planck import (PDistribution, derive_coefficient_ode, exact, fp_apply,
                                     gaussian_steady_equivalence, p_image, verification_report)
from fermibath.grassmann import GrassmannError, grassmann_delta, xi

alpha, beta = sympy.symbols("alpha beta", positive=True)


def test_symbolic_ode_and_solution():
    ode = derive_coefficient_ode()
    assert sympy.simplify(ode.rate + beta) == 0
    assert sympy.simplify(ode.drive - alpha) == 0
    assert ode.p1_rate == 0
    sol, t = ode.solve(0)
    assert sympy.simplify(sol - alpha / beta * (1 - sympy.exp(-beta * t))) == 0


@settings(max_examples=10, deadline=None)
@given(st.floats(0.01, 5.0), st.floats(0.01, 5.0))
def test_numeric_coefficients_are_exact(a, b):
    ode = derive_coefficient_ode(a, b)
    assert ode.rate == -exact(b)
    assert ode.drive == exact(a)


def test_p_image_is_density_like():
    img = p_image(PDistribution(sympy.Rational(1, 4), -1))
    assert img == sympy.Matrix([[sympy.Rational(5, 4), 0], [0, sympy.Rational(1, 4)]])
    # the trace of the image is 2p0 - p1, so unit trace needs the tracked p1
    assert img.trace() == sympy.Rational(3, 2)


def test_delta_is_initial_occupied_state_weight():
    d = PDistribution.from_poly(grassmann_delta())
    assert (d.p0, d.p1) == (0, -1)
    assert d.normalization() == 1


def test_gaussian_equivalence():
    ok, rep = gaussian_steady_equivalence(0.25, 0.75)
    assert ok, rep
    ok_sym, _ = gaussian_steady_equivalence(sympy.Rational(1, 3), sympy.Rational(2, 3))
    assert ok_sym


def test_fp_apply_rejects_odd_input():
    with pytest.raises(GrassmannError):
        fp_apply(alpha, beta, xi())


def test_fokker_planck_source_gives_faster_rate():
    ode = derive_coefficient_ode(source="fokker_planck")
    assert sympy.simplify(ode.rate + beta + 2 * alpha) == 0


def test_unknown_source():
    with pytest.raises(ValueError):
        derive_coefficient_ode(source="wigner")


def test_report_has_no_failures():
    checks, ok = verification_report()
    assert ok
    assert all(c.status in ("PASS", "WARN") for c in checks)
    assert sum(c.status == "WARN" for c in checks) == 5
