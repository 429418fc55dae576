"""
Wearsim
=======
CMOS wearout lifetime models and process-shift ("reliability Trojan")
population simulation.
"""

from wearsim.errors import (
    DomainError,
    FitError,
    IncompatibleBindingError,
    ScenarioValidationError,
    WearsimError,
)
from wearsim.models import (
    EmParams,
    HciParams,
    Mechanism,
    NbtiParams,
    ObParams,
    ObVariant,
    OperatingPoint,
    Waveform,
    acceleration_factor,
    mechanism_mttf,
)
from wearsim.scenario import ScenarioReport, TrojanScenario, run_scenario, validate_scenario
from wearsim.stochastic import (
    ParameterDistribution,
    ParameterTarget,
    PopulationResult,
    TrojanShift,
    WeibullParams,
    monte_carlo_population,
    weibull_mle_fit,
)

__all__ = [
    "DomainError",
    "EmParams",
    "FitError",
    "HciParams",
    "IncompatibleBindingError",
    "Mechanism",
    "NbtiParams",
    "ObParams",
    "ObVariant",
    "OperatingPoint",
    "ParameterDistribution",
    "ParameterTarget",
    "PopulationResult",
    "ScenarioReport",
    "ScenarioValidationError",
    "TrojanScenario",
    "TrojanShift",
    "Waveform",
    "WearsimError",
    "WeibullParams",
    "acceleration_factor",
    "mechanism_mttf",
    "monte_carlo_population",
    "run_scenario",
    "validate_scenario",
    "weibull_mle_fit",
]
