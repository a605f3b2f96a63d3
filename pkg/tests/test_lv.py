import math
import warnings

import numpy as np
import pytest

from mockq.errors import BlowUpError, DomainError, SaturationWarning, WindowError
from mockq.lv import (FullLVVacuum, LVParams, LVState, complex_disk_samples, full_lv_spectrum,
                      full_lv_vacuum_eval, full_lv_vq_constants, lv_hamiltonian, lv_integrate,
                      lv_rhs, mock_quadratic_flow, oscillation_frequency, verify_vq_constants)


def test_params_and_canonical_roundtrip():
    p = LVParams(2.0, 0.5, 4.0, 3.0)
    assert (p.q1, p.q2) == (0.75, 4.0)
    s = LVState(1.1, 3.3)
    Q, P = s.to_canonical(p)
    back = LVState.from_canonical(Q, P, p)
    assert math.isclose(back.N1, 1.1) and math.isclose(back.N2, 3.3)
    with pytest.raises(DomainError):
        LVParams(-1.0)
    with pytest.raises(DomainError):
        LVState(0.0, 1.0)


def test_rhs_vanishes_at_fixed_point():
    p = LVParams(2.0, 0.5, 4.0, 3.0)
    assert np.allclose(lv_rhs(p, np.array([p.q1, p.q2])), 0)


def test_hamiltonian_minimum():
    assert lv_hamiltonian(0.0, 0.0, 2.0, 3.0) == 5.0
    assert lv_hamiltonian(0.1, -0.2, 2.0, 3.0) > 5.0


def test_integrate_conserves_h():
    p = LVParams(1.0, 1.0, 1.0, 1.0)
    tr = lv_integrate(p, LVState(1.5, 0.7), 30.0, 1e-3, stride=50)
    assert tr.energy_drift() < 1e-10
    assert tr.z_form_residual() < 1e-12
    assert tr.rows().shape[1] == 6


def test_integrate_guards():
    p = LVParams(1.0)
    with pytest.raises(DomainError):
        lv_integrate(p, LVState(1, 1), 1.0, 0.1)
    # huge amplitudes overshoot below zero at a marginal step size
    with pytest.raises(BlowUpError) as info:
        lv_integrate(LVParams(1.0), LVState(1e-6, 1e4), 5.0, 9e-3)
    assert info.value.step > 0


def test_oscillation_frequency_of_sine():
    t = np.linspace(0, 50, 5001)
    assert abs(oscillation_frequency(t, np.sin(1.7 * t)) - 1.7) < 1e-6
    with pytest.raises(DomainError):
        oscillation_frequency(t[:10], np.sin(t[:10]))


def test_mock_flow_modes():
    lit = mock_quadratic_flow(4.0, 1.0, 1.0, (0.1, 0.0), 5.0, 0.01, mode="literal")
    assert lit.frequency_squared == pytest.approx(3.0)
    assert np.ptp(lit.invariant) < 1e-12
    cons = mock_quadratic_flow(4.0, 1.0, 1.0, (0.1, 0.0), 5.0, 0.01)
    assert abs(cons.kappa) < 1e-6
    with pytest.raises(DomainError):
        mock_quadratic_flow(4.0, 1.0, 1.0, (0.1, 0.0), 5.0, 0.01, mode="x")


def test_vacuum_requires_balanced_rates():
    with pytest.raises(DomainError):
        FullLVVacuum(0, 1.0, 0.5, d=-2.0)


@pytest.mark.parametrize("n", [-2, 0, 3])
def test_vacuum_conditions(n):
    vac = FullLVVacuum(n, 1.3, 0.7, phi=0.2)
    r = vac.residuals(complex_disk_samples(50, 3.0, 7))
    assert max(r.values()) < 1e-11
    assert vac.energy == pytest.approx(full_lv_spectrum([n], 1.3, 0.7)[0])


def test_vacuum_saturation_flagged():
    vac = FullLVVacuum(5, 1.0, 0.5)
    with pytest.warns(SaturationWarning):
        vals, sat = full_lv_vacuum_eval(vac, np.array([0.0, 60.0, -60.0]))
    assert sat.any() and np.isinf(vals[sat]).all()


def test_vq_constants_forms():
    c = full_lv_vq_constants(2, 1.5, -1.5, 0.5)
    E = 1j * 1.5 * (0.25 + 4 * math.pi)
    assert c.quadratic == pytest.approx(-(1 / 8) * -1.5 * (8 * math.pi + 0.5) ** 2)
    assert c.lv_exact == pytest.approx(-1.5 * np.exp(0.25j) + 1j * 1.5 * E)
    assert c.lv_exact_operator == pytest.approx(-1.5 * np.exp(0.25j) + E)
    assert full_lv_vq_constants(2, 1.5, 0.0, 0.5) == (0.0, 0j, 0j)
    with pytest.raises(DomainError):
        full_lv_vq_constants(2, 1.5, -1.0, 0.5)


def test_numeric_vq_constants():
    rep = verify_vq_constants(-3, 1.0, 0.5)
    assert rep.ok(1e-9)
    with pytest.raises(WindowError):
        verify_vq_constants(1, 1.0, 0.5, window=-1.0)
