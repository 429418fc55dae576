import json

import mpmath
import pytest

from wearsim.models import EmParams, Mechanism, ObParams, ObVariant, OperatingPoint
from wearsim.scenario import TrojanScenario
from wearsim.stochastic import ParameterDistribution, TrojanShift

mpmath.mp.dps = 50

K_ORACLE = mpmath.mpf("8.617333262e-5")


def rel_err(actual, expected):
    expected = mpmath.mpf(expected)
    return float(abs(mpmath.mpf(float(actual)) - expected) / abs(expected))


@pytest.fixture
def em_params():
    return EmParams(a_scale=1000.0, n_exponent=1.5, ea_eV=0.9)


@pytest.fixture
def em_op():
    return OperatingPoint.from_celsius(105.0, current_density_A_cm2=1.0e6)


@pytest.fixture
def thin_ob_params():
    return ObParams(
        variant=ObVariant.THIN_ARRHENIUS,
        a_scale=6.0e-6,
        b_field=1.0e8,
        ea_eV=0.3,
        d_ox_cm=2.0e-7,
        weibull_shape=None,
    )


@pytest.fixture
def ob_op():
    return OperatingPoint.from_celsius(105.0, gate_voltage_V=1.2)


@pytest.fixture
def em_scenario(em_params, em_op):
    """EM Ea ~ N(0.9, 0.02) shifted down by 0.1 eV"""
    return TrojanScenario(
        label="em test",
        mechanism=Mechanism.EM,
        model_params=em_params,
        operating_point=em_op,
        distributions=(ParameterDistribution("ea_em", mean=0.9, sigma=0.02, floor=0.0),),
        shifts=(TrojanShift("ea_em", delta_mean=-0.1),),
        mission_lifetime=87_600.0,
        n_samples=20_000,
        seed=42,
    )


@pytest.fixture
def scenario_document():
    return {
        "label": "ob thin oxide",
        "mechanism": "ob",
        "model_params": {
            "variant": "thin_arrhenius",
            "a_scale": 6.0e-6,
            "b_field": 1.0e8,
            "ea_eV": 0.3,
            "d_ox_cm": 2.0e-7,
            "weibull_shape": None,
        },
        "operating_point": {"temperature_C": 105.0, "gate_voltage_V": 1.2},
        "distributions": [{"name": "d_ox", "mean": 2.0e-7, "sigma": 5.0e-9, "floor": 0.0}],
        "shifts": [{"parameter": "d_ox", "delta_mean": -2.5e-8}],
        "mission_lifetime_hours": 87600,
        "n_samples": 5000,
        "seed": 7,
    }


@pytest.fixture
def write_scenario(tmp_path):
    def _write(document, name="scenario.json"):
        path = tmp_path / name
        path.write_text(json.dumps(document), encoding="utf-8")
        return path
    return _write
