import math
import warnings

import mpmath
import numpy as np
import pytest

from conftest import K_ORACLE, rel_err
from wearsim.errors import DomainError, VariantError, WaveformError
from wearsim.models import (
    EmParams,
    HciParams,
    Mechanism,
    NbtiParams,
    ObParams,
    ObVariant,
    OperatingPoint,
    ParameterRangeWarning,
    Waveform,
    acceleration_factor,
    activation_energy_from_lifetimes,
    celsius_to_kelvin,
    duty_cycle_rate,
    hci_failure_rate,
    hci_mttf,
    hci_vth_shift,
    mechanism_mttf,
    mttf_em,
    mttf_ob_thin,
    mttf_ob_ultrathin,
    nbti_lifetime,
    nbti_vth_shift,
    ob_field,
    ob_lifetime,
    oxide_field,
    quiet_range_checks,
    range_warnings,
    time_to_breakdown,
)

N_ORACLE_CASES = 50


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


# ----------------------------------------------------------------------------
# HCI
# ----------------------------------------------------------------------------

@pytest.mark.parametrize("b, i_d, i_s, m, expected", [
    (1.0, 1.0, 1.0, 3.0, 1.0),
    (1.0, 1.0, 0.0, 2.0, 0.0),
    (2.0, 4.0, 2.0, 2.0, 2.0),
])
def test_hci_failure_rate_examples(b, i_d, i_s, m, expected):
    op = OperatingPoint(temperature_K=300.0, drain_current_A=i_d, substrate_current_A=i_s)
    assert hci_failure_rate(op, HciParams(b_scale=b, m_exponent=m)) == pytest.approx(expected, abs=1e-15)


def test_hci_failure_rate_rejects_zero_drain_current():
    op = OperatingPoint(temperature_K=300.0, drain_current_A=0.0, substrate_current_A=1.0)
    with pytest.raises(DomainError, match="drain_current_A"):
        hci_failure_rate(op, HciParams())


def test_hci_failure_rate_oracle(rng):
    for _ in range(N_ORACLE_CASES):
        b, i_d, ratio, m = rng.uniform(0.1, 10), rng.uniform(1e-4, 1e-2), rng.uniform(1e-4, 1e-2), rng.uniform(1, 4)
        i_s = i_d * ratio
        op = OperatingPoint(temperature_K=300.0, drain_current_A=i_d, substrate_current_A=i_s)
        expected = mpmath.mpf(b) * mpmath.mpf(i_d) * (mpmath.mpf(i_s) / mpmath.mpf(i_d)) ** mpmath.mpf(m)
        assert rel_err(hci_failure_rate(op, HciParams(b_scale=b, m_exponent=m)), expected) < 1e-12


@pytest.mark.parametrize("b, i_s, n, ea, expected", [
    (1.0, 1.0, 3.0, 0.0, 1.0),
    (2.0, 10.0, 2.0, 0.0, 0.02),
])
def test_hci_mttf_examples(b, i_s, n, ea, expected):
    op = OperatingPoint(temperature_K=300.0, substrate_current_A=i_s)
    assert hci_mttf(op, HciParams(b_scale=b, n_exponent=n, ea_eV=ea)) == pytest.approx(expected, rel=1e-14)


def test_hci_mttf_negative_activation_energy():
    op = OperatingPoint(temperature_K=300.0, substrate_current_A=1.0)
    value = hci_mttf(op, HciParams(b_scale=1.0, n_exponent=2.0, ea_eV=-0.15))
    expected = mpmath.exp(mpmath.mpf(-0.15) / (K_ORACLE * 300))
    assert rel_err(value, expected) < 1e-12
    assert value == pytest.approx(3.0207e-3, rel=1e-4)


def test_hci_mttf_oracle(rng):
    for _ in range(N_ORACLE_CASES):
        b, i_s = rng.uniform(1e-12, 1e-8), rng.uniform(1e-7, 1e-5)
        n, ea, t = rng.uniform(2, 4), rng.uniform(-0.2, -0.1), rng.uniform(250, 420)
        op = OperatingPoint(temperature_K=t, substrate_current_A=i_s)
        expected = mpmath.mpf(b) * mpmath.mpf(i_s) ** (-mpmath.mpf(n)) * mpmath.exp(mpmath.mpf(ea) / (K_ORACLE * mpmath.mpf(t)))
        assert rel_err(hci_mttf(op, HciParams(b_scale=b, n_exponent=n, ea_eV=ea)), expected) < 1e-12


def test_hci_mttf_rejects_zero_substrate_current():
    with pytest.raises(DomainError, match="substrate_current_A"):
        hci_mttf(OperatingPoint(temperature_K=300.0, substrate_current_A=0.0), HciParams())


def test_hci_vth_shift_examples():
    zero = OperatingPoint(temperature_K=300.0, stress_time=0.0)
    assert hci_vth_shift(zero, HciParams(n_prime=0.5)) == 0.0

    p = HciParams(vth_prefactor=1.0, q_inversion=4.0, e_ox_Vcm=0.0, phi_it_eV=0.0)
    assert hci_vth_shift(OperatingPoint(temperature_K=300.0, stress_time=1.0), p) == pytest.approx(2.0, rel=1e-15)

    p = HciParams(
        vth_prefactor=1.0, q_inversion=1.0, e_ox_Vcm=1.0e6, e0_Vcm=1.0e6,
        phi_it_eV=1.0, lambda_mfp_cm=1.0, e_m_Vcm=1.0, n_prime=0.25,
    )
    assert hci_vth_shift(OperatingPoint(temperature_K=300.0, stress_time=16.0), p) == pytest.approx(2.0, rel=1e-14)


def test_hci_vth_shift_oracle(rng):
    for _ in range(N_ORACLE_CASES):
        q, e_ox, phi = rng.uniform(0.1, 10), rng.uniform(0, 2e6), rng.uniform(2, 4)
        e_m, t, n_prime = rng.uniform(1e5, 1e6), rng.uniform(1, 1e5), rng.uniform(0.2, 0.7)
        p = HciParams(q_inversion=q, e_ox_Vcm=e_ox, phi_it_eV=phi, e_m_Vcm=e_m, n_prime=n_prime)
        expected = (
            mpmath.sqrt(q)
            * mpmath.exp(mpmath.mpf(e_ox) / mpmath.mpf(1.0e6))
            * mpmath.exp(-mpmath.mpf(phi) / (mpmath.mpf(7.8e-7) * mpmath.mpf(e_m)))
            * mpmath.mpf(t) ** mpmath.mpf(n_prime)
        )
        assert rel_err(hci_vth_shift(OperatingPoint(temperature_K=300.0, stress_time=t), p), expected) < 1e-12


def test_hci_vth_shift_rejects_negative_time():
    with pytest.raises(DomainError, match="stress_time"):
        hci_vth_shift(OperatingPoint(temperature_K=300.0, stress_time=-1.0), HciParams())


# ----------------------------------------------------------------------------
# Oxide breakdown
# ----------------------------------------------------------------------------

@pytest.mark.parametrize("v, d, expected", [(1.0, 1.0, 1.0), (0.0, 5e-7, 0.0), (3.3, 5e-7, 6.6e6)])
def test_oxide_field(v, d, expected):
    assert oxide_field(v, d) == pytest.approx(expected, rel=1e-14)


@pytest.mark.parametrize("d", [0.0, -1e-7])
def test_oxide_field_rejects_non_positive_thickness(d):
    with pytest.raises(DomainError, match="d_ox"):
        oxide_field(1.0, d)


@pytest.mark.parametrize("variant, tau0, gamma, e_ox, expected", [
    (ObVariant.E_MODEL, 1.0, 1.0, 0.0, 1.0),
    (ObVariant.E_MODEL, 1.0, 1.0, 1.0, math.exp(-1.0)),
    (ObVariant.INV_E_MODEL, 1.0, 2.0, 1.0, math.exp(2.0)),
])
def test_time_to_breakdown_examples(variant, tau0, gamma, e_ox, expected):
    p = ObParams(variant=variant, tau0=tau0, gamma=gamma)
    assert time_to_breakdown(e_ox, p) == pytest.approx(expected, rel=1e-14)


def test_time_to_breakdown_variants_oracle(rng):
    for _ in range(N_ORACLE_CASES):
        tau0, gamma, e_ox = rng.uniform(1, 1e3), rng.uniform(0.5, 5), rng.uniform(0.5, 10)
        e_value = time_to_breakdown(e_ox, ObParams(variant="e_model", tau0=tau0, gamma=gamma))
        inv_value = time_to_breakdown(e_ox, ObParams(variant="inv_e_model", tau0=tau0, gamma=gamma))
        assert rel_err(e_value, mpmath.mpf(tau0) * mpmath.exp(-mpmath.mpf(gamma) * mpmath.mpf(e_ox))) < 1e-12
        assert rel_err(inv_value, mpmath.mpf(tau0) * mpmath.exp(mpmath.mpf(gamma) / mpmath.mpf(e_ox))) < 1e-12


def test_time_to_breakdown_rejects_other_variants():
    with pytest.raises(VariantError):
        time_to_breakdown(1.0, ObParams(variant=ObVariant.THIN_ARRHENIUS))


@pytest.mark.parametrize("a, b, e_ox, ea, t, expected", [
    (1.0, 0.0, 1.0, 0.0, 300.0, 1.0),
    (1.0, 1.0, 1.0, 0.0, 300.0, math.e),
])
def test_mttf_ob_thin_examples(a, b, e_ox, ea, t, expected):
    p = ObParams(variant=ObVariant.THIN_ARRHENIUS, a_scale=a, b_field=b, ea_eV=ea)
    assert mttf_ob_thin(e_ox, t, p) == pytest.approx(expected, rel=1e-14)


def test_mttf_ob_thin_activation_energy():
    p = ObParams(variant=ObVariant.THIN_ARRHENIUS, a_scale=1.0, b_field=0.0, ea_eV=0.3)
    value = mttf_ob_thin(1.0, 350.0, p)
    assert rel_err(value, mpmath.exp(mpmath.mpf(0.3) / (K_ORACLE * 350))) < 1e-12
    assert value == pytest.approx(2.08e4, rel=1e-2)


def test_mttf_ob_thin_oracle(rng):
    for _ in range(N_ORACLE_CASES):
        a, b, e_ox = rng.uniform(1e-6, 1), rng.uniform(1e7, 1e8), rng.uniform(2e6, 1e7)
        ea, t = rng.uniform(0.1, 0.8), rng.uniform(300, 420)
        p = ObParams(variant="thin_arrhenius", a_scale=a, b_field=b, ea_eV=ea)
        expected = (
            mpmath.mpf(a) * mpmath.exp(mpmath.mpf(b) / mpmath.mpf(e_ox))
            * mpmath.exp(mpmath.mpf(ea) / (K_ORACLE * mpmath.mpf(t)))
        )
        assert rel_err(mttf_ob_thin(e_ox, t, p), expected) < 1e-12


def test_mttf_ob_thin_rejects_wrong_variant():
    with pytest.raises(VariantError):
        mttf_ob_thin(1.0, 300.0, ObParams(variant=ObVariant.E_MODEL))


@pytest.mark.parametrize("t_bd0, a, b, expected", [
    (1.0, 0.0, 0.0, 1.0),
    (1.0, 300.0, 0.0, math.e),
    (2.0, 0.0, 9e4, 2.0 * math.e),
])
def test_mttf_ob_ultrathin_examples(t_bd0, a, b, expected):
    p = ObParams(variant=ObVariant.ULTRA_THIN, t_bd0=t_bd0, a_coeff_K=a, b_coeff_K2=b)
    assert mttf_ob_ultrathin(300.0, p) == pytest.approx(expected, rel=1e-14)


def test_mttf_ob_ultrathin_oracle(rng):
    for _ in range(N_ORACLE_CASES):
        t_bd0, a, b, t = rng.uniform(1, 1e4), rng.uniform(-3000, 3000), rng.uniform(-1e6, 1e6), rng.uniform(250, 450)
        p = ObParams(variant="ultra_thin", t_bd0=t_bd0, a_coeff_K=a, b_coeff_K2=b)
        tm = mpmath.mpf(t)
        expected = mpmath.mpf(t_bd0) * mpmath.exp(mpmath.mpf(a) / tm + mpmath.mpf(b) / tm ** 2)
        assert rel_err(mttf_ob_ultrathin(t, p), expected) < 1e-12


def test_ob_field_prefers_thickness_over_operating_point_field():
    op = OperatingPoint(temperature_K=300.0, gate_voltage_V=2.0, oxide_field_Vcm=1.0)
    assert ob_field(op, ObParams(d_ox_cm=1e-6)) == pytest.approx(2.0e6)
    assert ob_field(op, ObParams()) == 1.0
    with pytest.raises(DomainError, match="d_ox_cm"):
        ob_field(OperatingPoint(temperature_K=300.0), ObParams())


def test_ob_lifetime_dispatches_by_variant():
    op = OperatingPoint(temperature_K=300.0, oxide_field_Vcm=1.0)
    assert ob_lifetime(op, ObParams(variant="e_model", tau0=1.0, gamma=1.0)) == pytest.approx(math.exp(-1))
    assert ob_lifetime(op, ObParams(variant="thin_arrhenius", b_field=1.0)) == pytest.approx(math.e)
    assert ob_lifetime(op, ObParams(variant="ultra_thin", a_coeff_K=300.0)) == pytest.approx(math.e)


# ----------------------------------------------------------------------------
# Electromigration
# ----------------------------------------------------------------------------

@pytest.mark.parametrize("j, n, expected", [(1.0, 1.5, 1.0), (2.0, 2.0, 0.25)])
def test_mttf_em_examples(j, n, expected):
    op = OperatingPoint(temperature_K=300.0, current_density_A_cm2=j)
    assert mttf_em(op, EmParams(a_scale=1.0, n_exponent=n, ea_eV=0.0)) == pytest.approx(expected, rel=1e-15)


def test_mttf_em_copper_activation_energy():
    op = OperatingPoint(temperature_K=373.15, current_density_A_cm2=1.0)
    value = mttf_em(op, EmParams(a_scale=1.0, n_exponent=1.0, ea_eV=0.7))
    assert rel_err(value, mpmath.exp(mpmath.mpf(0.7) / (K_ORACLE * mpmath.mpf(373.15)))) < 1e-12
    assert value == pytest.approx(2.85e9, rel=1e-2)


def test_mttf_em_oracle(rng):
    for _ in range(N_ORACLE_CASES):
        a, j, n = rng.uniform(0.1, 1e4), rng.uniform(1e5, 1e7), rng.uniform(1.0, 2.0)
        ea, t = rng.uniform(0.5, 1.4), rng.uniform(300, 450)
        op = OperatingPoint(temperature_K=t, current_density_A_cm2=j)
        expected = mpmath.mpf(a) * mpmath.mpf(j) ** (-mpmath.mpf(n)) * mpmath.exp(mpmath.mpf(ea) / (K_ORACLE * mpmath.mpf(t)))
        assert rel_err(mttf_em(op, EmParams(a_scale=a, n_exponent=n, ea_eV=ea)), expected) < 1e-12


@pytest.mark.parametrize("j, t, match", [(0.0, 300.0, "current_density"), (-1.0, 300.0, "current_density"), (1.0, 0.0, "temperature")])
def test_mttf_em_rejects_singular_inputs(j, t, match):
    op = OperatingPoint(temperature_K=t, current_density_A_cm2=j)
    with pytest.raises(DomainError, match=match):
        mttf_em(op, EmParams(a_scale=1.0, n_exponent=1.5, ea_eV=0.7))


def test_em_params_reject_negative_activation_energy():
    with pytest.raises(DomainError, match="ea_eV"):
        EmParams(a_scale=1.0, n_exponent=1.5, ea_eV=-0.1)


# ----------------------------------------------------------------------------
# NBTI
# ----------------------------------------------------------------------------

def test_nbti_vth_shift_examples():
    p = NbtiParams(a0=0.1, gamma_v=1.0, beta_t=0.25, e_nb_eV=0.0)
    assert nbti_vth_shift(OperatingPoint(temperature_K=300.0, gate_voltage_V=-1.0, stress_time=0.0), p) == 0.0
    assert nbti_vth_shift(OperatingPoint(temperature_K=300.0, gate_voltage_V=1.0, stress_time=16.0), p) == pytest.approx(0.2, rel=1e-14)

    p = NbtiParams(a0=0.1, gamma_v=0.0, beta_t=0.25, e_nb_eV=0.1)
    value = nbti_vth_shift(OperatingPoint(temperature_K=423.15, gate_voltage_V=1.0, stress_time=1.0), p)
    assert rel_err(value, mpmath.mpf(0.1) * mpmath.exp(-mpmath.mpf(0.1) / (K_ORACLE * mpmath.mpf(423.15)))) < 1e-12
    assert value == pytest.approx(6.44e-3, rel=1e-2)


def test_nbti_lifetime_examples():
    op = OperatingPoint(temperature_K=300.0, gate_voltage_V=1.0)
    p = NbtiParams(a0=0.1, gamma_v=0.0, beta_t=0.25, e_nb_eV=0.0, vth_crit_V=0.1)
    assert nbti_lifetime(op, p) == pytest.approx(1.0, rel=1e-14)
    p = NbtiParams(a0=0.1, gamma_v=0.0, beta_t=0.25, e_nb_eV=0.0, vth_crit_V=0.2)
    assert nbti_lifetime(op, p) == pytest.approx(16.0, rel=1e-14)


def test_nbti_lifetime_inverts_vth_shift(rng):
    for _ in range(100):
        p = NbtiParams(
            a0=rng.uniform(1e-3, 1.0),
            gamma_v=rng.uniform(0.5, 4.0),
            beta_t=rng.uniform(0.1, 0.5),
            e_nb_eV=rng.uniform(0.0, 0.3),
            vth_crit_V=rng.uniform(0.05, 0.10),
        )
        op = OperatingPoint(temperature_K=rng.uniform(373.15, 423.15), gate_voltage_V=-rng.uniform(0.8, 2.0))
        t_star = nbti_lifetime(op, p)
        shift = nbti_vth_shift(OperatingPoint(temperature_K=op.temperature_K, gate_voltage_V=op.gate_voltage_V, stress_time=t_star), p)
        assert abs(shift - p.vth_crit_V) / p.vth_crit_V < 1e-9


def test_nbti_shift_increases_with_time_and_temperature():
    p = NbtiParams(a0=0.05, gamma_v=3.0, beta_t=0.25, e_nb_eV=0.12)
    times = np.geomspace(1.0, 1e5, 20)
    temps = np.linspace(373.15, 423.15, 20)
    by_time = nbti_vth_shift(OperatingPoint(temperature_K=398.15, gate_voltage_V=-1.5, stress_time=times), p)
    by_temp = nbti_vth_shift(OperatingPoint(temperature_K=temps, gate_voltage_V=-1.5, stress_time=1000.0), p)
    assert np.all(np.diff(by_time) > 0)
    assert np.all(np.diff(by_temp) > 0)


def test_nbti_lifetime_rejects_zero_gate_voltage():
    op = OperatingPoint(temperature_K=400.0, gate_voltage_V=0.0)
    with pytest.raises(DomainError, match="gate_voltage_V"):
        nbti_lifetime(op, NbtiParams(gamma_v=2.0))


# ----------------------------------------------------------------------------
# Monotonicity and scaling over random parameter sets
# ----------------------------------------------------------------------------

N_PAIRS = 200


def _ordered(rng, low, high, log=False):
    a, b = np.sort(rng.uniform(np.log(low), np.log(high), 2) if log else rng.uniform(low, high, 2))
    return (np.exp(a), np.exp(b)) if log else (a, b)


def test_mttf_em_decreases_with_current_density_and_temperature(rng):
    for _ in range(N_PAIRS):
        p = EmParams(a_scale=rng.uniform(1.0, 1e4), n_exponent=rng.uniform(1.1, 1.9), ea_eV=rng.uniform(0.5, 1.2))
        t = rng.uniform(300.0, 450.0)
        j_lo, j_hi = _ordered(rng, 1e5, 5e6, log=True)
        assert mttf_em(OperatingPoint(temperature_K=t, current_density_A_cm2=j_hi), p) < \
            mttf_em(OperatingPoint(temperature_K=t, current_density_A_cm2=j_lo), p)
        t_lo, t_hi = _ordered(rng, 300.0, 450.0)
        assert mttf_em(OperatingPoint(temperature_K=t_hi, current_density_A_cm2=j_lo), p) < \
            mttf_em(OperatingPoint(temperature_K=t_lo, current_density_A_cm2=j_lo), p)


def test_mttf_em_scales_with_prefactor(rng):
    for _ in range(N_PAIRS):
        a, c = rng.uniform(1.0, 1e4), rng.uniform(0.01, 100.0)
        n, ea = rng.uniform(1.1, 1.9), rng.uniform(0.5, 1.2)
        op = OperatingPoint(temperature_K=rng.uniform(300.0, 450.0), current_density_A_cm2=rng.uniform(1e5, 5e6))
        scaled = mttf_em(op, EmParams(a_scale=a * c, n_exponent=n, ea_eV=ea))
        assert scaled == pytest.approx(c * mttf_em(op, EmParams(a_scale=a, n_exponent=n, ea_eV=ea)), rel=1e-12)


def test_mttf_ob_thin_decreases_with_field_and_temperature(rng):
    for _ in range(N_PAIRS):
        p = ObParams(
            variant=ObVariant.THIN_ARRHENIUS,
            a_scale=rng.uniform(1e-6, 1e-3),
            b_field=rng.uniform(1e7, 1e8),
            ea_eV=rng.uniform(0.1, 0.6),
        )
        t = rng.uniform(300.0, 450.0)
        e_lo, e_hi = _ordered(rng, 3e6, 1.2e7)
        assert mttf_ob_thin(e_hi, t, p) < mttf_ob_thin(e_lo, t, p)
        t_lo, t_hi = _ordered(rng, 300.0, 450.0)
        assert mttf_ob_thin(e_lo, t_hi, p) < mttf_ob_thin(e_lo, t_lo, p)


@pytest.mark.parametrize("variant, gamma_range, field_range", [
    (ObVariant.E_MODEL, (1e-7, 1e-6), (1e6, 1e7)),
    (ObVariant.INV_E_MODEL, (1e7, 1e8), (3e6, 1.2e7)),
])
def test_time_to_breakdown_decreases_with_field(rng, variant, gamma_range, field_range):
    for _ in range(N_PAIRS):
        p = ObParams(variant=variant, tau0=rng.uniform(1e-3, 1e3), gamma=rng.uniform(*gamma_range))
        e_lo, e_hi = _ordered(rng, *field_range)
        assert time_to_breakdown(e_hi, p) < time_to_breakdown(e_lo, p)


def test_hci_vth_shift_does_not_decrease_with_time(rng):
    for _ in range(N_PAIRS):
        p = HciParams(q_inversion=rng.uniform(0.1, 10.0), e_ox_Vcm=rng.uniform(0.0, 5e6), n_prime=rng.uniform(0.3, 0.7))
        t_lo, t_hi = _ordered(rng, 0.0, 1e6)
        assert hci_vth_shift(OperatingPoint(temperature_K=300.0, stress_time=t_hi), p) >= \
            hci_vth_shift(OperatingPoint(temperature_K=300.0, stress_time=t_lo), p)


def test_hci_mttf_decreases_with_substrate_current(rng):
    for _ in range(N_PAIRS):
        p = HciParams(b_scale=rng.uniform(1e-12, 1e-8), n_exponent=rng.uniform(2.0, 4.0), ea_eV=rng.uniform(-0.2, -0.1))
        t = rng.uniform(250.0, 420.0)
        i_lo, i_hi = _ordered(rng, 1e-8, 1e-4, log=True)
        assert hci_mttf(OperatingPoint(temperature_K=t, substrate_current_A=i_hi), p) < \
            hci_mttf(OperatingPoint(temperature_K=t, substrate_current_A=i_lo), p)


# ----------------------------------------------------------------------------
# Acceleration, dispatch, Arrhenius extraction
# ----------------------------------------------------------------------------

def test_acceleration_factor_identity(em_params, em_op):
    assert acceleration_factor(Mechanism.EM, em_params, em_op, em_op) == 1.0


def test_acceleration_factor_copper_doping():
    op = OperatingPoint(temperature_K=373.15, current_density_A_cm2=1.0e6)
    af = acceleration_factor(
        "em",
        EmParams(a_scale=1.0, n_exponent=1.5, ea_eV=0.7),
        op,
        op,
        params_use=EmParams(a_scale=1.0, n_exponent=1.5, ea_eV=1.4),
    )
    assert rel_err(af, mpmath.exp(mpmath.mpf(0.7) / (K_ORACLE * mpmath.mpf(373.15)))) < 1e-9


def test_acceleration_factor_current_density():
    p = EmParams(a_scale=1.0, n_exponent=2.0, ea_eV=0.7)
    stress = OperatingPoint(temperature_K=350.0, current_density_A_cm2=2.0e6)
    use = OperatingPoint(temperature_K=350.0, current_density_A_cm2=1.0e6)
    assert acceleration_factor("em", p, stress, use) == pytest.approx(4.0, rel=1e-14)


def test_acceleration_factor_composes(rng):
    p = EmParams(a_scale=1.0, n_exponent=1.7, ea_eV=0.9)
    for _ in range(20):
        c1, c2, c3 = (
            OperatingPoint(temperature_K=rng.uniform(300, 450), current_density_A_cm2=rng.uniform(1e5, 1e7))
            for _ in range(3)
        )
        direct = acceleration_factor("em", p, c1, c3)
        chained = acceleration_factor("em", p, c1, c2) * acceleration_factor("em", p, c2, c3)
        assert direct == pytest.approx(chained, rel=1e-12)


def test_mechanism_mttf_rejects_mismatched_params(em_op):
    with pytest.raises(VariantError):
        mechanism_mttf("hci", EmParams(), em_op)


@pytest.mark.parametrize("mechanism, params, op_kwargs", [
    ("em", EmParams(a_scale=2.0, n_exponent=1.5, ea_eV=0.85), {"current_density_A_cm2": 1e6}),
    ("ob", ObParams(variant="thin_arrhenius", a_scale=1e-5, b_field=8e7, ea_eV=0.4), {"oxide_field_Vcm": 6e6}),
    ("hci", HciParams(b_scale=1e-10, n_exponent=3.0, ea_eV=-0.15), {"substrate_current_A": 1e-6}),
])
def test_activation_energy_recovered_from_three_temperatures(mechanism, params, op_kwargs):
    temps = [350.0, 375.0, 400.0]
    lifetimes = [mechanism_mttf(mechanism, params, OperatingPoint(temperature_K=t, **op_kwargs)) for t in temps]
    ea, _ = activation_energy_from_lifetimes(temps, lifetimes)
    assert ea == pytest.approx(params.ea_eV, rel=1e-9)


def test_activation_energy_needs_two_temperatures():
    with pytest.raises(DomainError):
        activation_energy_from_lifetimes([300.0, 300.0], [1.0, 2.0])


def test_models_broadcast_over_arrays():
    p = EmParams(a_scale=1.0, n_exponent=1.5, ea_eV=0.7)
    j = np.array([1e5, 1e6, 1e7])
    vector = mttf_em(OperatingPoint(temperature_K=350.0, current_density_A_cm2=j), p)
    assert isinstance(vector, np.ndarray)
    scalars = [mttf_em(OperatingPoint(temperature_K=350.0, current_density_A_cm2=x), p) for x in j]
    assert all(isinstance(s, float) for s in scalars)
    np.testing.assert_allclose(vector, scalars, rtol=1e-15)


def test_celsius_to_kelvin():
    assert celsius_to_kelvin(100.0) == pytest.approx(373.15)
    assert OperatingPoint.from_celsius(0.0).temperature_K == pytest.approx(273.15)


# ----------------------------------------------------------------------------
# Typical-range warnings
# ----------------------------------------------------------------------------

def test_range_warning_for_em_exponent():
    with pytest.warns(ParameterRangeWarning, match="EM n"):
        p = EmParams(a_scale=1.0, n_exponent=3.0, ea_eV=0.7)
    assert range_warnings(p) == ["EM n = 3 outside typical (1, 2)"]


def test_range_warning_for_hci_exponent():
    with pytest.warns(ParameterRangeWarning, match="HCI N"):
        HciParams(n_exponent=5.0)


def test_no_range_warning_inside_typical_ranges():
    with warnings.catch_warnings():
        warnings.simplefilter("error", ParameterRangeWarning)
        EmParams(a_scale=1.0, n_exponent=1.5, ea_eV=0.9)
        HciParams(n_exponent=3.0, ea_eV=-0.15)
        NbtiParams(vth_crit_V=0.07)


def test_array_valued_params_are_not_range_checked():
    p = EmParams(a_scale=1.0, n_exponent=1.5, ea_eV=np.array([0.1, 2.0]))
    assert range_warnings(p) == []


def test_quiet_range_checks_silences_construction():
    with warnings.catch_warnings():
        warnings.simplefilter("error", ParameterRangeWarning)
        with quiet_range_checks():
            p = EmParams(a_scale=1.0, n_exponent=3.0, ea_eV=0.7)
    assert range_warnings(p) == ["EM n = 3 outside typical (1, 2)"]
    with pytest.warns(ParameterRangeWarning):
        EmParams(a_scale=1.0, n_exponent=3.0, ea_eV=0.7)


# ----------------------------------------------------------------------------
# Duty cycle
# ----------------------------------------------------------------------------

def _ramp_waveform(n_steps):
    times = np.linspace(0.0, 1.0, n_steps + 1)
    return Waveform.from_profile(times, 1.0, temperature_K=300.0, drain_current_A=1.0, substrate_current_A=times)


def test_duty_cycle_constant_equals_static_rate():
    op = OperatingPoint(temperature_K=300.0, drain_current_A=2.0, substrate_current_A=0.5)
    p = HciParams(b_scale=1.5, m_exponent=2.0)
    w = Waveform(samples=((0.0, op), (0.3, op), (0.7, op)), period=1.0)
    assert duty_cycle_rate(w, p) == hci_failure_rate(op, p)


def test_duty_cycle_square_wave():
    n = 20_000
    times = np.arange(n) / n
    i_sub = np.where(times < 0.5, 2.0, 4.0)
    w = Waveform.from_profile(times, 1.0, temperature_K=300.0, drain_current_A=1.0, substrate_current_A=i_sub)
    assert duty_cycle_rate(w, HciParams(b_scale=1.0, m_exponent=1.0)) == pytest.approx(3.0, abs=1e-4)


def test_duty_cycle_linear_ramp():
    rate = duty_cycle_rate(_ramp_waveform(1000), HciParams(b_scale=1.0, m_exponent=1.0))
    assert rate == pytest.approx(0.5, abs=1e-6)


def test_duty_cycle_converges_at_second_order():
    p = HciParams(b_scale=1.0, m_exponent=2.0)
    errors = [abs(duty_cycle_rate(_ramp_waveform(n), p) - 1.0 / 3.0) for n in (10, 20, 40, 80)]
    orders = [math.log2(coarse / fine) for coarse, fine in zip(errors, errors[1:])]
    assert min(orders) >= 1.9


@pytest.mark.parametrize("samples, period", [
    ((), 1.0),
    (((0.0, None),), 1.0),
    (((0.1, None), (0.5, None)), 1.0),
    (((0.0, None), (0.5, None), (0.5, None)), 1.0),
    (((0.0, None), (2.0, None)), 1.0),
    (((0.0, None), (0.5, None)), 0.0),
])
def test_waveform_rejects_bad_shapes(samples, period):
    with pytest.raises(WaveformError):
        Waveform(samples=samples, period=period)
