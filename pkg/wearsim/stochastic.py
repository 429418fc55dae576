"""
Process Variation and Population Statistics
===========================================
Normal process-parameter distributions, malicious (Trojan) shifts of those
distributions, seeded Monte Carlo device populations, Weibull sampling and
maximum-likelihood fitting, and the analytic infection probability.

Random streams: devices are grouped in fixed blocks of BLOCK_SIZE. Block b of
stream s draws from Philox(SeedSequence([seed, b, s])); stream s < len(dists)
belongs to parameter s and stream len(dists) carries the Weibull uniforms.
Blocks may run on any number of threads without changing a single bit of
the result.
"""

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any, Callable, Dict, FrozenSet, List, Mapping, Optional, Protocol, Sequence, Tuple, Union

import numpy as np
from scipy.optimize import bisect
from scipy.special import gamma as gamma_fn
from scipy.special import logsumexp
from scipy.stats import norm

from wearsim.errors import (
    ConvergenceError,
    DegenerateDataError,
    DomainError,
    IncompatibleBindingError,
    InsufficientDataError,
    NonMonotoneMapError,
    TruncationExhaustedError,
)
from wearsim.models import (
    Mechanism,
    MechanismParams,
    ObParams,
    ObVariant,
    OperatingPoint,
    PARAMS_TYPES,
    mechanism_mttf,
    quiet_range_checks,
)

logger = logging.getLogger(__name__)

BLOCK_SIZE = 65_536
MAX_TRUNCATION_ATTEMPTS = 100
BISECTION_RTOL = 1e-12
MONOTONE_GRID_POINTS = 64
BRACKET_SIGMAS = 12.0
QUANTILE_LEVELS = (0.01, 0.1, 0.5, 0.9)
WEIBULL_FIT_TOL = 1e-10
WEIBULL_FIT_MAX_ITER = 200
WEIBULL_MIN_SAMPLES = 10


# ============================================================================
# PARAMETER TARGETS (which model input a process parameter feeds)
# ============================================================================

class ParameterTarget(Enum):
    """Model inputs that a varied process parameter can drive"""
    # HCI
    I_SUB = "i_sub"
    EA_HCI = "ea_hci"
    B_HCI = "b_hci"
    # Oxide breakdown
    D_OX = "d_ox"
    EA_OB = "ea_ob"
    B_FIELD_OB = "b_field_ob"
    GAMMA_OB = "gamma_ob"
    T_BD0 = "t_bd0"
    # Electromigration
    J_E = "j_e"
    EA_EM = "ea_em"
    A_EM = "a_em"
    N_EM = "n_em"
    # NBTI
    E_NB = "e_nb"
    A0_NBTI = "a0_nbti"

    @classmethod
    def parse(cls, value: Any) -> "ParameterTarget":
        if isinstance(value, cls):
            return value
        text = str(value).strip()
        try:
            return cls(text.lower())
        except ValueError:
            try:
                return cls[text.upper()]
            except KeyError:
                raise IncompatibleBindingError(f"unknown parameter target '{value}'") from None


@dataclass(frozen=True)
class TargetSpec:
    mechanism: Mechanism
    location: str  # "params" or "op"
    field_name: str
    factors: str
    variants: Optional[FrozenSet[ObVariant]] = None


_FIELD_VARIANTS = frozenset({ObVariant.E_MODEL, ObVariant.INV_E_MODEL, ObVariant.THIN_ARRHENIUS})

TARGET_SPECS: Dict[ParameterTarget, TargetSpec] = {
    ParameterTarget.I_SUB: TargetSpec(Mechanism.HCI, "op", "substrate_current_A",
                                      "drain doping, channel length"),
    ParameterTarget.EA_HCI: TargetSpec(Mechanism.HCI, "params", "ea_eV",
                                       "interface quality"),
    ParameterTarget.B_HCI: TargetSpec(Mechanism.HCI, "params", "b_scale",
                                      "doping profiles, sidewall spacing"),
    ParameterTarget.D_OX: TargetSpec(Mechanism.OB, "params", "d_ox_cm",
                                     "gate oxide thickness", _FIELD_VARIANTS),
    ParameterTarget.EA_OB: TargetSpec(Mechanism.OB, "params", "ea_eV",
                                      "oxide purity", frozenset({ObVariant.THIN_ARRHENIUS})),
    ParameterTarget.B_FIELD_OB: TargetSpec(Mechanism.OB, "params", "b_field",
                                           "oxide purity, trap density", frozenset({ObVariant.THIN_ARRHENIUS})),
    ParameterTarget.GAMMA_OB: TargetSpec(Mechanism.OB, "params", "gamma",
                                         "field acceleration", frozenset({ObVariant.E_MODEL, ObVariant.INV_E_MODEL})),
    ParameterTarget.T_BD0: TargetSpec(Mechanism.OB, "params", "t_bd0",
                                      "ultra-thin oxide quality", frozenset({ObVariant.ULTRA_THIN})),
    ParameterTarget.J_E: TargetSpec(Mechanism.EM, "op", "current_density_A_cm2",
                                    "interconnect geometry"),
    ParameterTarget.EA_EM: TargetSpec(Mechanism.EM, "params", "ea_eV",
                                      "metal type, Cu doping, impurities"),
    ParameterTarget.A_EM: TargetSpec(Mechanism.EM, "params", "a_scale",
                                     "grain size and structure"),
    ParameterTarget.N_EM: TargetSpec(Mechanism.EM, "params", "n_exponent",
                                     "current-density exponent"),
    ParameterTarget.E_NB: TargetSpec(Mechanism.NBTI, "params", "e_nb_eV",
                                     "interfacial nitrogen"),
    ParameterTarget.A0_NBTI: TargetSpec(Mechanism.NBTI, "params", "a0",
                                        "gate oxide thickness, boron penetration"),
}


def check_binding(mechanism: Any, params: Optional[MechanismParams], target: Any) -> ParameterTarget:
    """Resolve a target and make sure it feeds this mechanism (and OB variant)"""
    mechanism = Mechanism.parse(mechanism)
    target = ParameterTarget.parse(target)
    spec = TARGET_SPECS[target]
    if spec.mechanism is not mechanism:
        raise IncompatibleBindingError(
            f"target '{target.value}' feeds {spec.mechanism.value}, not {mechanism.value}"
        )
    if spec.variants is not None and isinstance(params, ObParams) and params.variant not in spec.variants:
        allowed = ", ".join(sorted(v.value for v in spec.variants))
        raise IncompatibleBindingError(
            f"target '{target.value}' does not apply to OB variant {params.variant.value} (applies to: {allowed})"
        )
    return target


def apply_binding(
    mechanism: Any,
    params: MechanismParams,
    op: OperatingPoint,
    value: Any,
    target: Any,
) -> Tuple[MechanismParams, OperatingPoint]:
    """Override the bound input of params/op with value.

    The base params were range-checked when built; derived copies are not.
    """
    target = check_binding(mechanism, params, target)
    spec = TARGET_SPECS[target]
    if spec.location == "op":
        return params, replace(op, **{spec.field_name: value})
    with quiet_range_checks():
        return replace(params, **{spec.field_name: value}), op


def map_param_to_ttf(
    mechanism: Any,
    base_params: MechanismParams,
    base_op: OperatingPoint,
    param_value: Any,
    binding: Any,
):
    """Mechanism lifetime with one input overridden by a process parameter"""
    params, op = apply_binding(mechanism, base_params, base_op, param_value, binding)
    return mechanism_mttf(mechanism, params, op)


# ============================================================================
# DISTRIBUTIONS
# ============================================================================

@dataclass(frozen=True)
class TrojanShift:
    """Malicious modification of one process parameter's distribution"""
    parameter_name: str
    delta_mean: float = 0.0
    sigma_scale: float = 1.0

    def to_dict(self) -> Dict[str, Any]:
        return {"parameter": self.parameter_name, "delta_mean": self.delta_mean, "sigma_scale": self.sigma_scale}


@dataclass(frozen=True)
class ParameterDistribution:
    """Normal distribution of one process parameter, optionally floored"""
    name: str
    mean: float
    sigma: float
    target: Optional[Union[ParameterTarget, str]] = None
    floor: Optional[float] = None

    @property
    def binding(self) -> ParameterTarget:
        """The explicit target, else the parameter name read as a target"""
        return ParameterTarget.parse(self.target if self.target is not None else self.name)

    def validate(self) -> None:
        if not self.sigma >= 0:
            raise DomainError(f"parameter '{self.name}': sigma must be >= 0 (got {self.sigma!r})")
        if self.floor is not None and not self.mean > self.floor:
            raise DomainError(f"parameter '{self.name}': mean {self.mean!r} must lie above floor {self.floor!r}")

    def shifted(self, shift: Optional[TrojanShift] = None) -> Tuple[float, float]:
        """(mean, sigma) with the shift applied"""
        if shift is None:
            return float(self.mean), float(self.sigma)
        if not shift.sigma_scale >= 0:
            raise DomainError(f"shift of '{self.name}': sigma_scale must be >= 0 (got {shift.sigma_scale!r})")
        return float(self.mean + shift.delta_mean), float(self.sigma * shift.sigma_scale)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "mean": self.mean,
            "sigma": self.sigma,
            "target": self.binding.value,
            "floor": self.floor,
        }


def rng_stream(seed: int, block: int, stream: int) -> np.random.Generator:
    """Counter-based generator for one (block, stream) cell"""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, block, stream])))


def sample_parameter(
    dist: ParameterDistribution,
    rng: np.random.Generator,
    shift: Optional[TrojanShift] = None,
    size: Optional[int] = None,
    max_attempts: int = MAX_TRUNCATION_ATTEMPTS,
):
    """Draw from Normal(mean [+ delta], sigma [* scale]), redrawing values at or below the floor"""
    mean, sigma = dist.shifted(shift)
    if not sigma >= 0:
        raise DomainError(f"parameter '{dist.name}': sigma must be >= 0 (got {sigma!r})")
    values = mean + sigma * np.atleast_1d(rng.standard_normal(size))
    if dist.floor is not None:
        rejected = values <= dist.floor
        attempts = 0
        while np.any(rejected):
            if attempts >= max_attempts:
                raise TruncationExhaustedError(dist.name, dist.floor, max_attempts)
            values[rejected] = mean + sigma * rng.standard_normal(int(rejected.sum()))
            rejected = values <= dist.floor
            attempts += 1
    return float(values[0]) if size is None else values


# ============================================================================
# WEIBULL
# ============================================================================

@dataclass(frozen=True)
class WeibullParams:
    shape_beta: float
    scale_eta: float

    def __post_init__(self):
        if not (self.shape_beta > 0 and self.scale_eta > 0):
            raise DomainError(
                f"Weibull shape and scale must be > 0 (got beta={self.shape_beta!r}, eta={self.scale_eta!r})"
            )

    def to_dict(self) -> Dict[str, float]:
        return {"beta": self.shape_beta, "eta": self.scale_eta}


def weibull_scale_from_mttf(mttf, shape_beta: float):
    """eta = MTTF / Gamma(1 + 1/beta)"""
    return np.asarray(mttf, dtype=float) / gamma_fn(1.0 + 1.0 / shape_beta)


def weibull_mean(p: WeibullParams) -> float:
    return float(p.scale_eta * gamma_fn(1.0 + 1.0 / p.shape_beta))


def weibull_cdf(p: WeibullParams, t):
    t = np.asarray(t, dtype=float)
    return -np.expm1(-np.power(np.clip(t, 0.0, None) / p.scale_eta, p.shape_beta))


def weibull_quantile(p: WeibullParams, u):
    """Inverse CDF: eta * (-ln(1 - u))^(1/beta)"""
    u = np.asarray(u, dtype=float)
    return p.scale_eta * np.power(-np.log1p(-u), 1.0 / p.shape_beta)


def weibull_sample(p: WeibullParams, rng: np.random.Generator, size: Optional[int] = None):
    draws = weibull_quantile(p, rng.random(size))
    return float(draws) if size is None else draws


def weibull_log_likelihood(p: WeibullParams, samples) -> float:
    x = np.asarray(samples, dtype=float)
    z = np.log(x) - np.log(p.scale_eta)
    return float(np.sum(np.log(p.shape_beta) - np.log(p.scale_eta) + (p.shape_beta - 1.0) * z - np.exp(p.shape_beta * z)))


def weibull_mle_fit(
    ttf_samples,
    tol: float = WEIBULL_FIT_TOL,
    max_iter: int = WEIBULL_FIT_MAX_ITER,
    min_samples: int = WEIBULL_MIN_SAMPLES,
) -> WeibullParams:
    """Maximum-likelihood Weibull fit.

    Solves the profile equation for beta,

        g(beta) = sum(w_i u_i) - 1/beta = 0,  w = softmax(beta u),  u = ln x - mean(ln x)

    with Newton steps safeguarded by a bisection bracket, then takes eta in
    closed form. g is strictly increasing, so the root is unique.
    """
    x = np.asarray(ttf_samples, dtype=float).ravel()
    if x.size < min_samples:
        raise InsufficientDataError(f"Weibull fit needs at least {min_samples} samples, got {x.size}")
    if not np.all(np.isfinite(x)) or np.any(x <= 0):
        raise DomainError("Weibull fit needs finite samples > 0")
    if np.all(x == x[0]):
        raise DegenerateDataError(f"all {x.size} samples equal {x[0]!r}; shape parameter is unbounded")

    log_x = np.log(x)
    mean_log = float(log_x.mean())
    u = log_x - mean_log

    def profile(beta: float) -> Tuple[float, float]:
        log_w = beta * u - logsumexp(beta * u)
        w = np.exp(log_w)
        m1 = float(np.dot(w, u))
        var = max(float(np.dot(w, u * u)) - m1 * m1, 0.0)
        return m1 - 1.0 / beta, var + 1.0 / (beta * beta)

    spread = float(np.std(log_x))
    beta = np.pi / (np.sqrt(6.0) * spread)
    lo = hi = beta
    for _ in range(max_iter):
        if profile(lo)[0] <= 0:
            break
        lo /= 2.0
    else:
        raise ConvergenceError("could not bracket the Weibull shape from below")
    for _ in range(max_iter):
        if profile(hi)[0] >= 0:
            break
        hi *= 2.0
    else:
        raise ConvergenceError("could not bracket the Weibull shape from above")

    for iteration in range(1, max_iter + 1):
        g, slope = profile(beta)
        if g > 0:
            hi = beta
        else:
            lo = beta
        step = g / slope
        candidate = beta - step
        if not lo < candidate < hi:
            candidate = 0.5 * (lo + hi)
        converged = abs(candidate - beta) < tol * candidate or g == 0
        beta = candidate
        if converged:
            break
    else:
        raise ConvergenceError(f"Weibull fit did not converge in {max_iter} iterations (beta ~ {beta!r})")

    eta = float(np.exp(mean_log + (logsumexp(beta * u) - np.log(x.size)) / beta))
    logger.debug("Weibull fit: n=%d beta=%.6g eta=%.6g after %d iterations", x.size, beta, eta, iteration)
    return WeibullParams(shape_beta=float(beta), scale_eta=eta)


# ============================================================================
# TTF MODELS
# ============================================================================

class TtfModel(Protocol):
    """Maps named parameter draws to device times-to-failure"""

    @property
    def weibull_shape(self) -> Optional[float]: ...

    def check(self, dists: Sequence[ParameterDistribution]) -> None: ...

    def ttf(self, values: Mapping[str, np.ndarray]) -> np.ndarray: ...


@dataclass(frozen=True)
class MechanismTtfModel:
    """One wearout mechanism with process parameters bound to its inputs"""
    mechanism: Mechanism
    params: MechanismParams
    op: OperatingPoint
    bindings: Mapping[str, ParameterTarget] = field(default_factory=dict)

    def __post_init__(self):
        mechanism = Mechanism.parse(self.mechanism)
        object.__setattr__(self, "mechanism", mechanism)
        if not isinstance(self.params, PARAMS_TYPES[mechanism]):
            raise IncompatibleBindingError(
                f"{mechanism.value} needs {PARAMS_TYPES[mechanism].__name__}, got {type(self.params).__name__}"
            )
        bindings = {name: check_binding(mechanism, self.params, target) for name, target in self.bindings.items()}
        object.__setattr__(self, "bindings", bindings)

    @classmethod
    def from_distributions(
        cls,
        mechanism: Any,
        params: MechanismParams,
        op: OperatingPoint,
        dists: Sequence[ParameterDistribution],
    ) -> "MechanismTtfModel":
        return cls(mechanism=mechanism, params=params, op=op, bindings={d.name: d.binding for d in dists})

    @property
    def weibull_shape(self) -> Optional[float]:
        if isinstance(self.params, ObParams):
            return self.params.weibull_shape
        return None

    def check(self, dists: Sequence[ParameterDistribution]) -> None:
        missing = [d.name for d in dists if d.name not in self.bindings]
        if missing:
            raise IncompatibleBindingError(f"no binding for parameter(s): {', '.join(missing)}")

    def ttf(self, values: Mapping[str, np.ndarray]) -> np.ndarray:
        params, op = self.params, self.op
        for name, target in self.bindings.items():
            if name in values:
                params, op = apply_binding(self.mechanism, params, op, values[name], target)
        return np.asarray(mechanism_mttf(self.mechanism, params, op), dtype=float)


@dataclass(frozen=True)
class FunctionTtfModel:
    """Arbitrary vectorized map from parameter draws to TTF"""
    func: Callable[[Mapping[str, np.ndarray]], Any]
    weibull_shape: Optional[float] = None

    def check(self, dists: Sequence[ParameterDistribution]) -> None:
        return None

    def ttf(self, values: Mapping[str, np.ndarray]) -> np.ndarray:
        return np.asarray(self.func(values), dtype=float)


# ============================================================================
# POPULATIONS
# ============================================================================

@dataclass(frozen=True, eq=False)
class PopulationResult:
    """Simulated device population"""
    ttf_samples: np.ndarray
    quantiles: Dict[float, float]
    infection_fraction: float
    infection_ci_halfwidth: float
    seed: int
    sample_count: int
    mission_lifetime: float
    parameter_samples: Dict[str, np.ndarray] = field(default_factory=dict)

    @property
    def failed_before_mission(self) -> np.ndarray:
        return self.ttf_samples < self.mission_lifetime

    @property
    def median(self) -> float:
        return self.quantiles[0.5]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "sample_count": self.sample_count,
            "seed": self.seed,
            "mission_lifetime": self.mission_lifetime,
            "infection_fraction": self.infection_fraction,
            "infection_ci_halfwidth": self.infection_ci_halfwidth,
            "quantiles": {f"{level:g}": value for level, value in self.quantiles.items()},
            "mean_ttf": float(np.mean(self.ttf_samples)),
        }


def binomial_halfwidth(p: float, n: int) -> float:
    """3-sigma half-width of a binomial proportion"""
    return float(3.0 * np.sqrt(p * (1.0 - p) / n))


def _resolve_workers(workers: Optional[int], n_blocks: int) -> int:
    if workers is None:
        workers = os.cpu_count() or 1
    return max(1, min(int(workers), n_blocks))


def monte_carlo_population(
    model: TtfModel,
    dists: Sequence[ParameterDistribution],
    shifts: Optional[Sequence[TrojanShift]] = None,
    n_samples: int = 10_000,
    mission_lifetime: float = 87_600.0,
    seed: int = 0,
    workers: Optional[int] = None,
    block_size: int = BLOCK_SIZE,
) -> PopulationResult:
    """Draw n_samples devices and count those failing before the mission lifetime.

    Each parameter is sampled independently per device. When the model has a
    Weibull shape the deterministic lifetime becomes the Weibull scale through
    eta = MTTF / Gamma(1 + 1/beta) and the device TTF is drawn from it.
    """
    if int(n_samples) < 1:
        raise DomainError(f"n_samples must be >= 1 (got {n_samples!r})")
    if not mission_lifetime > 0:
        raise DomainError(f"mission lifetime must be > 0 (got {mission_lifetime!r})")
    if int(seed) < 0:
        raise DomainError(f"seed must be >= 0 (got {seed!r})")
    n_samples, seed = int(n_samples), int(seed)

    dists = list(dists)
    names = [d.name for d in dists]
    if len(set(names)) != len(names):
        raise DomainError(f"duplicate parameter names: {names}")
    for d in dists:
        d.validate()
    shift_by_name: Dict[str, TrojanShift] = {}
    for s in shifts or []:
        if s.parameter_name not in names:
            raise DomainError(f"shift references undeclared parameter '{s.parameter_name}'")
        if s.parameter_name in shift_by_name:
            raise DomainError(f"parameter '{s.parameter_name}' is shifted twice")
        shift_by_name[s.parameter_name] = s
    model.check(dists)

    beta = model.weibull_shape
    weibull_stream = len(dists)
    n_blocks = -(-n_samples // block_size)

    def run_block(block: int) -> Tuple[Dict[str, np.ndarray], np.ndarray]:
        count = min(block_size, n_samples - block * block_size)
        values = {
            d.name: sample_parameter(d, rng_stream(seed, block, s), shift_by_name.get(d.name), size=count)
            for s, d in enumerate(dists)
        }
        ttf = np.broadcast_to(model.ttf(values), (count,)).astype(float)
        if beta is not None:
            eta = weibull_scale_from_mttf(ttf, beta)
            u = rng_stream(seed, block, weibull_stream).random(count)
            ttf = eta * np.power(-np.log1p(-u), 1.0 / beta)
        return values, ttf

    n_workers = _resolve_workers(workers, n_blocks)
    logger.debug("population: n=%d blocks=%d workers=%d shifts=%d", n_samples, n_blocks, n_workers, len(shift_by_name))
    if n_workers == 1:
        blocks = [run_block(b) for b in range(n_blocks)]
    else:
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            blocks = list(pool.map(run_block, range(n_blocks)))

    ttf = np.concatenate([t for _, t in blocks])
    parameter_samples = {name: np.concatenate([v[name] for v, _ in blocks]) for name in names}
    infection = float(np.count_nonzero(ttf < mission_lifetime)) / n_samples
    levels = np.asarray(QUANTILE_LEVELS)
    quantiles = dict(zip(QUANTILE_LEVELS, (float(q) for q in np.quantile(ttf, levels))))
    return PopulationResult(
        ttf_samples=ttf,
        quantiles=quantiles,
        infection_fraction=infection,
        infection_ci_halfwidth=binomial_halfwidth(infection, n_samples),
        seed=seed,
        sample_count=n_samples,
        mission_lifetime=float(mission_lifetime),
        parameter_samples=parameter_samples,
    )


# ============================================================================
# ANALYTIC INFECTION PROBABILITY
# ============================================================================

@dataclass(frozen=True)
class MonotoneMap:
    """Scalar parameter -> TTF map declared strictly monotone.

    increasing=None takes the direction from the bracket endpoints.
    """
    func: Callable[[float], float]
    increasing: Optional[bool] = None

    def log_ttf(self, x: float) -> float:
        value = float(np.asarray(self.func(x), dtype=float).reshape(-1)[0])
        if not value > 0:
            raise DomainError(f"TTF map returned {value!r} at {x!r}; lifetimes must be > 0")
        return float(np.log(value))


def infection_probability_analytic(
    dist: ParameterDistribution,
    shift: Optional[TrojanShift],
    ttf_map: MonotoneMap,
    mission_lifetime: float,
    rtol: float = BISECTION_RTOL,
    grid_points: int = MONOTONE_GRID_POINTS,
) -> float:
    """P(TTF < mission) for a single normal parameter through a monotone map.

    The mission threshold is inverted through the map by bisection and the
    normal tail beyond it is returned, conditioned on X > floor when the
    distribution is floored.
    """
    if not mission_lifetime > 0:
        raise DomainError(f"mission lifetime must be > 0 (got {mission_lifetime!r})")
    dist.validate()
    mean, sigma = dist.shifted(shift)
    log_mission = float(np.log(mission_lifetime))

    if sigma == 0:
        if dist.floor is not None and not mean > dist.floor:
            raise TruncationExhaustedError(dist.name, dist.floor, MAX_TRUNCATION_ATTEMPTS)
        return 1.0 if ttf_map.log_ttf(mean) < log_mission else 0.0

    lo = mean - BRACKET_SIGMAS * sigma
    hi = mean + BRACKET_SIGMAS * sigma
    if dist.floor is not None and lo <= dist.floor:
        if not hi > dist.floor:
            raise DomainError(f"parameter '{dist.name}': shifted distribution lies entirely below its floor")
        lo = dist.floor + 1e-9 * sigma

    grid = np.linspace(lo, hi, grid_points)
    log_ttf = np.array([ttf_map.log_ttf(x) for x in grid])
    if not np.all(np.isfinite(log_ttf)):
        raise DomainError(f"TTF map is not finite over [{lo!r}, {hi!r}]")
    steps = np.diff(log_ttf)
    increasing = ttf_map.increasing
    if increasing is None:
        increasing = bool(log_ttf[-1] > log_ttf[0])
    monotone = np.all(steps > 0) if increasing else np.all(steps < 0)
    if not monotone:
        direction = "increasing" if increasing else "decreasing"
        raise NonMonotoneMapError(f"TTF map of '{dist.name}' is not strictly {direction} over [{lo!r}, {hi!r}]")

    def excess(x: float) -> float:
        return ttf_map.log_ttf(x) - log_mission

    h_lo, h_hi = log_ttf[0] - log_mission, log_ttf[-1] - log_mission
    if h_lo == 0:
        threshold = lo
    elif h_hi == 0:
        threshold = hi
    elif (h_lo > 0) == (h_hi > 0):
        # threshold outside the bracket: all or nothing within it
        fails_inside = h_lo < 0
        threshold = hi if fails_inside == increasing else lo
    else:
        threshold = bisect(excess, lo, hi, xtol=rtol * sigma, rtol=rtol, maxiter=400)

    z = (threshold - mean) / sigma
    if increasing:
        # fails iff X < threshold
        if dist.floor is None:
            p = norm.cdf(z)
        else:
            z_floor = (dist.floor - mean) / sigma
            p = (norm.cdf(z) - norm.cdf(z_floor)) / norm.sf(z_floor)
    else:
        # fails iff X > threshold
        p = norm.sf(z)
        if dist.floor is not None:
            p = p / norm.sf((dist.floor - mean) / sigma)
    return float(np.clip(p, 0.0, 1.0))
