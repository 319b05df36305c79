import numpy as np
import pytest
from hypothesis import given, strategies as st

from fermibath.analytics import (TransportParams, closed_form_trace, current_at,
                                 current_closed_form, flux_residual, initial_current,
                                 occupation_closed_form, steady_current, steady_energy_loss)
from fermibath.errors import DomainError
from fermibath.reservoirs import HBAR

rates = st.floats(1e6, 1e10)
occ = st.floats(0.0, 1.0)


@st.composite
def params(draw):
    return TransportParams(draw(rates), draw(rates), draw(occ), draw(occ), draw(occ))


def test_occupation_endpoints():
    p = TransportParams(2e9, 1e9, 0.4, 0.1, n0=1.0)
    assert occupation_closed_form(p, 0.0) == 1.0
    assert occupation_closed_form(p, 200 / p.gamma_total) == pytest.approx(p.nbar_s, abs=1e-15)
    assert p.nbar_s == pytest.approx(0.3)


@given(params())
def test_steady_flux_balance(p):
    assert abs(flux_residual(p, p.nbar_s)) <= 1e-12 * p.gamma_total
    assert current_at(p, p.nbar_s) == pytest.approx(steady_current(p), rel=1e-9, abs=1e-14 * p.gamma_total)


@given(params(), st.floats(0, 10))
def test_current_matches_occupation(p, s):
    t = s / p.gamma_total
    direct = current_at(p, occupation_closed_form(p, t))
    assert current_closed_form(p, t).current == pytest.approx(direct, rel=1e-9, abs=1e-14 * p.gamma_total)


def test_current_anchor_full_bias():
    p = TransportParams(3e9, 1e9, 1.0, 0.0)
    assert steady_current(p) == 3e9 * 1e9 / 4e9


def test_current_solution_fields():
    p = TransportParams(2e9, 1e9, 0.4, 0.1, n0=0.0)
    sol = current_closed_form(p, np.linspace(0, 1e-9, 5))
    assert sol.I0 == initial_current(p) == current_at(p, 0.0)
    assert sol.current[0] == pytest.approx(sol.I0)


def test_energy_loss_needs_frequency():
    p = TransportParams(1e9, 1e9, 0.6, 0.2)
    with pytest.raises(DomainError):
        steady_energy_loss(p)
    q = TransportParams(1e9, 1e9, 0.6, 0.2, omega_s=1e12)
    assert steady_energy_loss(q) == pytest.approx(HBAR * 1e12 * 0.5e9 * 0.4)


@pytest.mark.parametrize("kw", [dict(nbar_e=1.2), dict(n0=-0.1), dict(gamma_e=-1.0),
                                dict(gamma_e=0.0, gamma_c=0.0)])
def test_validation(kw):
    base = dict(gamma_e=1e9, gamma_c=1e9, nbar_e=0.5, nbar_c=0.2, n0=1.0)
    base.update(kw)
    with pytest.raises(DomainError):
        TransportParams(**base)


def test_bosonic_allows_large_occupation():
    p = TransportParams(1e9, 1e9, 3.0, 1.0, n0=5.0, statistics="bose")
    assert p.nbar_s == 2.0


def test_negative_time_rejected():
    p = TransportParams(1e9, 1e9, 0.5, 0.2)
    with pytest.raises(DomainError):
        occupation_closed_form(p, -1e-12)


def test_from_temperatures_and_trace():
    p = TransportParams.from_temperatures(1e12, 300.0, 150.0, 1e9, 1e9)
    assert 0.5 > p.nbar_e > p.nbar_c > 0
    tr = closed_form_trace(p, np.linspace(0, 1e-9, 11))
    assert tr.occupation.shape == tr.current.shape == (11,)
