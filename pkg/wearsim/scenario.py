"""
Trojan Scenario Runner
======================
Compares a nominal process population against one whose parameter
distributions were shifted by a malicious process change, for a single
wearout mechanism.
"""

import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from wearsim.errors import DomainError, IncompatibleBindingError, ScenarioValidationError
from wearsim.models import (
    Mechanism,
    MechanismParams,
    OperatingPoint,
    PARAMS_TYPES,
    range_warnings,
)
from wearsim.stochastic import (
    MechanismTtfModel,
    MonotoneMap,
    ParameterDistribution,
    ParameterTarget,
    PopulationResult,
    TrojanShift,
    binomial_halfwidth,
    check_binding,
    infection_probability_analytic,
    monte_carlo_population,
)

logger = logging.getLogger(__name__)

DEFAULT_MISSION_LIFETIME = 87_600.0  # 10 years in hours

# Per-device output columns; a parameter may not reuse them.
RESERVED_PARAMETER_NAMES = frozenset({"device_id", "ttf", "failed_before_mission", "population"})


class DiagnosticLevel(Enum):
    ERROR = "error"
    WARNING = "warning"


@dataclass(frozen=True)
class Diagnostic:
    level: DiagnosticLevel
    code: str
    message: str

    def __str__(self) -> str:
        return f"{self.level.value}[{self.code}]: {self.message}"

    def to_dict(self) -> Dict[str, str]:
        return {"level": self.level.value, "code": self.code, "message": self.message}


def _error(code: str, message: str) -> Diagnostic:
    return Diagnostic(DiagnosticLevel.ERROR, code, message)


def _warning(code: str, message: str) -> Diagnostic:
    return Diagnostic(DiagnosticLevel.WARNING, code, message)


@dataclass(frozen=True)
class TrojanScenario:
    """A process-shift attack on one wearout mechanism"""
    label: str
    mechanism: Mechanism
    model_params: MechanismParams
    operating_point: OperatingPoint
    distributions: Tuple[ParameterDistribution, ...] = ()
    shifts: Tuple[TrojanShift, ...] = ()
    mission_lifetime: float = DEFAULT_MISSION_LIFETIME
    n_samples: int = 10_000
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "mechanism", Mechanism.parse(self.mechanism))
        object.__setattr__(self, "distributions", tuple(self.distributions))
        object.__setattr__(self, "shifts", tuple(self.shifts))

    def with_overrides(self, n_samples: Optional[int] = None, seed: Optional[int] = None) -> "TrojanScenario":
        return replace(
            self,
            n_samples=self.n_samples if n_samples is None else n_samples,
            seed=self.seed if seed is None else seed,
        )


@dataclass(frozen=True)
class AnalyticCheck:
    """Closed-form infection probabilities next to the Monte Carlo estimates"""
    parameter: str
    nominal_probability: float
    infected_probability: float
    nominal_within_ci: bool
    infected_within_ci: bool

    def to_dict(self) -> Dict[str, Any]:
        return {
            "parameter": self.parameter,
            "nominal_probability": self.nominal_probability,
            "infected_probability": self.infected_probability,
            "nominal_within_ci": self.nominal_within_ci,
            "infected_within_ci": self.infected_within_ci,
        }


@dataclass(frozen=True, eq=False)
class ScenarioReport:
    label: str
    mechanism: Mechanism
    nominal: PopulationResult
    infected: PopulationResult
    infection_delta: float
    mttf_ratio_median: float
    sensitivity: Dict[str, float] = field(default_factory=dict)
    analytic_check: Optional[AnalyticCheck] = None
    diagnostics: Tuple[Diagnostic, ...] = ()

    def to_dict(self) -> Dict[str, Any]:
        return {
            "label": self.label,
            "mechanism": self.mechanism.value,
            "nominal": self.nominal.to_dict(),
            "infected": self.infected.to_dict(),
            "infection_delta": self.infection_delta,
            "mttf_ratio_median": self.mttf_ratio_median,
            "sensitivity": dict(self.sensitivity),
            "analytic_check": self.analytic_check.to_dict() if self.analytic_check else None,
            "diagnostics": [d.to_dict() for d in self.diagnostics],
        }


def validate_scenario(s: TrojanScenario) -> List[Diagnostic]:
    """Every invariant violation as a diagnostic; range issues are warnings"""
    diagnostics: List[Diagnostic] = []

    expected = PARAMS_TYPES[s.mechanism]
    params_ok = isinstance(s.model_params, expected)
    if not params_ok:
        diagnostics.append(_error(
            "params_mismatch",
            f"{s.mechanism.value} needs {expected.__name__}, got {type(s.model_params).__name__}",
        ))

    seen = set()
    for d in s.distributions:
        if d.name in seen:
            diagnostics.append(_error("duplicate_distribution", f"parameter '{d.name}' declared more than once"))
        seen.add(d.name)
        if d.name in RESERVED_PARAMETER_NAMES:
            diagnostics.append(_error("reserved_name", f"parameter name '{d.name}' is a reserved output column"))
        if not d.sigma >= 0:
            diagnostics.append(_error("negative_sigma", f"parameter '{d.name}': sigma {d.sigma!r} < 0"))
        if d.floor is not None and not d.mean > d.floor:
            diagnostics.append(_error(
                "floor_not_below_mean", f"parameter '{d.name}': floor {d.floor!r} is not below mean {d.mean!r}",
            ))
        try:
            target = ParameterTarget.parse(d.target if d.target is not None else d.name)
        except IncompatibleBindingError as exc:
            diagnostics.append(_error("unknown_binding", f"parameter '{d.name}': {exc}"))
            continue
        try:
            check_binding(s.mechanism, s.model_params if params_ok else None, target)
        except IncompatibleBindingError as exc:
            diagnostics.append(_error("incompatible_binding", f"parameter '{d.name}': {exc}"))

    shifted = set()
    for shift in s.shifts:
        if shift.parameter_name not in seen:
            diagnostics.append(_error(
                "undeclared_shift", f"shift references undeclared parameter '{shift.parameter_name}'",
            ))
        elif shift.parameter_name in shifted:
            diagnostics.append(_error("duplicate_shift", f"parameter '{shift.parameter_name}' is shifted twice"))
        shifted.add(shift.parameter_name)
        if not shift.sigma_scale >= 0:
            diagnostics.append(_error(
                "negative_sigma_scale", f"shift of '{shift.parameter_name}': sigma_scale {shift.sigma_scale!r} < 0",
            ))

    if not s.mission_lifetime > 0:
        diagnostics.append(_error("non_positive_mission", f"mission lifetime {s.mission_lifetime!r} must be > 0"))
    if not s.n_samples >= 1:
        diagnostics.append(_error("non_positive_samples", f"n_samples {s.n_samples!r} must be >= 1"))
    if s.seed < 0:
        diagnostics.append(_error("negative_seed", f"seed {s.seed!r} must be >= 0"))

    if params_ok:
        diagnostics.extend(_warning("range", message) for message in range_warnings(s.model_params))
    return diagnostics


def _analytic_check(
    s: TrojanScenario,
    model: MechanismTtfModel,
    nominal: PopulationResult,
    infected: PopulationResult,
) -> Optional[AnalyticCheck]:
    if len(s.distributions) != 1 or model.weibull_shape is not None:
        return None
    dist = s.distributions[0]
    shift = next((x for x in s.shifts if x.parameter_name == dist.name), None)
    ttf_map = MonotoneMap(lambda x: model.ttf({dist.name: np.asarray(x, dtype=float)}))

    p_nominal = infection_probability_analytic(dist, None, ttf_map, s.mission_lifetime)
    p_infected = infection_probability_analytic(dist, shift, ttf_map, s.mission_lifetime)

    def within(result: PopulationResult, p: float) -> bool:
        return bool(abs(result.infection_fraction - p) <= binomial_halfwidth(p, result.sample_count))

    return AnalyticCheck(
        parameter=dist.name,
        nominal_probability=p_nominal,
        infected_probability=p_infected,
        nominal_within_ci=within(nominal, p_nominal),
        infected_within_ci=within(infected, p_infected),
    )


def run_scenario(s: TrojanScenario, workers: Optional[int] = None) -> ScenarioReport:
    """Nominal and infected populations from the same seed, plus one run per shift"""
    diagnostics = validate_scenario(s)
    errors = [d for d in diagnostics if d.level is DiagnosticLevel.ERROR]
    if errors:
        raise ScenarioValidationError(errors)
    warnings_ = [d for d in diagnostics if d.level is DiagnosticLevel.WARNING]

    model = MechanismTtfModel.from_distributions(s.mechanism, s.model_params, s.operating_point, s.distributions)

    def population(shifts) -> PopulationResult:
        return monte_carlo_population(
            model,
            s.distributions,
            shifts=shifts,
            n_samples=s.n_samples,
            mission_lifetime=s.mission_lifetime,
            seed=s.seed,
            workers=workers,
        )

    nominal = population(None)
    logger.info("%s: nominal infection %.6g over %d devices", s.label, nominal.infection_fraction, s.n_samples)
    infected = population(s.shifts) if s.shifts else nominal
    logger.info("%s: infected infection %.6g", s.label, infected.infection_fraction)

    sensitivity: Dict[str, float] = {}
    for shift in s.shifts:
        single = infected if len(s.shifts) == 1 else population([shift])
        sensitivity[shift.parameter_name] = single.infection_fraction
        logger.debug("%s: shift of '%s' alone -> %.6g", s.label, shift.parameter_name, single.infection_fraction)

    if infected.median > 0:
        ratio = nominal.median / infected.median
    else:
        ratio = float("inf")

    analytic = None
    try:
        analytic = _analytic_check(s, model, nominal, infected)
    except DomainError as exc:
        warnings_.append(_warning("analytic_unavailable", str(exc)))
        logger.info("%s: analytic check skipped: %s", s.label, exc)

    return ScenarioReport(
        label=s.label,
        mechanism=s.mechanism,
        nominal=nominal,
        infected=infected,
        infection_delta=infected.infection_fraction - nominal.infection_fraction,
        mttf_ratio_median=float(ratio),
        sensitivity=sensitivity,
        analytic_check=analytic,
        diagnostics=tuple(warnings_),
    )
