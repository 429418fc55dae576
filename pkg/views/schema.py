"""
Scenario file schema
====================
Pydantic models for scenario JSON documents. Unknown keys are rejected so a
misspelled shift never goes silently unused.
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Type

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from config import Config
from wearsim.errors import DomainError, InputDataError
from wearsim.models import (
    EmParams,
    HciParams,
    Mechanism,
    NbtiParams,
    ObParams,
    ObVariant,
    OperatingPoint,
    celsius_to_kelvin,
)
from wearsim.scenario import TrojanScenario
from wearsim.stochastic import ParameterDistribution, TrojanShift

logger = logging.getLogger(__name__)


class StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


class OperatingPointSpec(StrictModel):
    temperature_C: Optional[float] = None
    temperature_K: Optional[float] = None
    gate_voltage_V: float = 0.0
    drain_current_A: float = 0.0
    substrate_current_A: float = 0.0
    current_density_A_cm2: float = 0.0
    stress_time: float = 0.0
    oxide_field_Vcm: Optional[float] = None

    @model_validator(mode="after")
    def _one_temperature(self):
        if (self.temperature_C is None) == (self.temperature_K is None):
            raise ValueError("give exactly one of temperature_C / temperature_K")
        return self

    def to_operating_point(self) -> OperatingPoint:
        data = self.model_dump(exclude={"temperature_C", "temperature_K"})
        if self.temperature_K is not None:
            return OperatingPoint(temperature_K=self.temperature_K, **data)
        return OperatingPoint(temperature_K=celsius_to_kelvin(self.temperature_C), **data)


class HciParamsSpec(StrictModel):
    b_scale: float
    n_exponent: float
    ea_eV: float
    m_exponent: float = 3.0
    vth_prefactor: float = 1.0
    q_inversion: float = 1.0
    e_ox_Vcm: float = 0.0
    e0_Vcm: float = 1.0e6
    phi_it_eV: float = 3.7
    lambda_mfp_cm: float = 7.8e-7
    e_m_Vcm: float = 5.0e5
    n_prime: float = 0.5

    def to_params(self) -> HciParams:
        return HciParams(**self.model_dump())


class ObParamsSpec(StrictModel):
    variant: ObVariant
    tau0: float = 1.0
    gamma: float = 0.0
    a_scale: float = 1.0
    b_field: float = 0.0
    ea_eV: float = 0.0
    t_bd0: float = 1.0
    a_coeff_K: float = 0.0
    b_coeff_K2: float = 0.0
    weibull_shape: Optional[float] = Field(default=1.0, description="null disables intrinsic Weibull scatter")
    d_ox_cm: Optional[float] = None

    @field_validator("variant", mode="before")
    @classmethod
    def _parse_variant(cls, value):
        return ObVariant.parse(value)

    def to_params(self) -> ObParams:
        return ObParams(**self.model_dump())


class EmParamsSpec(StrictModel):
    a_scale: float
    n_exponent: float
    ea_eV: float

    def to_params(self) -> EmParams:
        return EmParams(**self.model_dump())


class NbtiParamsSpec(StrictModel):
    a0: float
    gamma_v: float
    e_nb_eV: float
    beta_t: float = 0.25
    vth_crit_V: float = 0.05

    def to_params(self) -> NbtiParams:
        return NbtiParams(**self.model_dump())


PARAMS_SPECS: Dict[Mechanism, Type[StrictModel]] = {
    Mechanism.HCI: HciParamsSpec,
    Mechanism.OB: ObParamsSpec,
    Mechanism.EM: EmParamsSpec,
    Mechanism.NBTI: NbtiParamsSpec,
}


class DistributionSpec(StrictModel):
    name: str
    mean: float
    sigma: float
    target: Optional[str] = None
    floor: Optional[float] = None


class ShiftSpec(StrictModel):
    parameter: str
    delta_mean: float = 0.0
    sigma_scale: float = 1.0


class ScenarioFile(StrictModel):
    label: str = "scenario"
    mechanism: Mechanism
    model_params: Dict[str, Any] = Field(default_factory=dict)
    operating_point: OperatingPointSpec
    distributions: List[DistributionSpec] = Field(default_factory=list)
    shifts: List[ShiftSpec] = Field(default_factory=list)
    mission_lifetime_hours: float = Config.DEFAULT_MISSION_LIFETIME_HOURS
    n_samples: int = Config.DEFAULT_N_SAMPLES
    seed: int = Config.DEFAULT_SEED

    @field_validator("mechanism", mode="before")
    @classmethod
    def _parse_mechanism(cls, value):
        return Mechanism.parse(value)


def _format_errors(exc: ValidationError, prefix: str = "") -> List[str]:
    details = []
    for err in exc.errors():
        loc = ".".join(str(p) for p in err.get("loc", ()))
        details.append(f"{prefix}{loc}: {err.get('msg', 'invalid')}" if loc else f"{prefix}{err.get('msg', 'invalid')}")
    return details


def parse_scenario(data: Any) -> TrojanScenario:
    """Validate a decoded scenario document and build the scenario"""
    try:
        doc = ScenarioFile.model_validate(data)
    except ValidationError as exc:
        raise InputDataError("scenario file failed schema validation", _format_errors(exc)) from None

    try:
        params = PARAMS_SPECS[doc.mechanism].model_validate(doc.model_params).to_params()
    except ValidationError as exc:
        raise InputDataError("model_params failed schema validation", _format_errors(exc, "model_params.")) from None
    except DomainError as exc:
        raise InputDataError("model_params rejected", [str(exc)]) from None

    try:
        op = doc.operating_point.to_operating_point()
    except DomainError as exc:
        raise InputDataError("operating_point rejected", [str(exc)]) from None

    return TrojanScenario(
        label=doc.label,
        mechanism=doc.mechanism,
        model_params=params,
        operating_point=op,
        distributions=tuple(
            ParameterDistribution(name=d.name, mean=d.mean, sigma=d.sigma, target=d.target, floor=d.floor)
            for d in doc.distributions
        ),
        shifts=tuple(
            TrojanShift(parameter_name=s.parameter, delta_mean=s.delta_mean, sigma_scale=s.sigma_scale)
            for s in doc.shifts
        ),
        mission_lifetime=doc.mission_lifetime_hours,
        n_samples=doc.n_samples,
        seed=doc.seed,
    )


def load_scenario(path: Path, n_samples: Optional[int] = None, seed: Optional[int] = None) -> TrojanScenario:
    """Read, validate and build a scenario, applying command-line overrides"""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputDataError(f"cannot read scenario file {path}: {exc.strerror or exc}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputDataError(f"scenario file {path} is not valid JSON: {exc}") from None

    scenario = parse_scenario(data)
    logger.debug("loaded scenario '%s' (%s) from %s", scenario.label, scenario.mechanism.value, path)
    return scenario.with_overrides(n_samples=n_samples, seed=seed)
