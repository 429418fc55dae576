"""
Wearout Lifetime Models
=======================
Closed-form lifetime and degradation models for the four CMOS time-based
wearout mechanisms:

- Hot Carrier Injection (HCI): failure rate, substrate-current MTTF, Vth shift
- Oxide Breakdown (OB): E / 1/E time-to-breakdown, thin and ultra-thin MTTF
- Electromigration (EM): Black-form MTTF
- Negative Bias Temperature Instability (NBTI): Vth shift and lifetime

Every function is pure. Numeric inputs may be floats or numpy arrays; arrays
broadcast, scalars come back as scalars. Energies are in eV, temperatures in
Kelvin, fields in V/cm, current densities in A/cm^2. Lifetimes come out in
whatever time unit the prefactor (A, B, tau0, T_BD0) carries.
"""

import logging
import warnings
from contextlib import contextmanager
from contextvars import ContextVar
from dataclasses import dataclass, fields
from enum import Enum
from typing import Any, ClassVar, Dict, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.integrate import trapezoid
from scipy.stats import linregress

from wearsim.errors import DomainError, VariantError, WaveformError

logger = logging.getLogger(__name__)

K_BOLTZMANN_EV = 8.617333262e-5  # eV/K
Q_ELECTRON = 1.602176634e-19  # C
ZERO_CELSIUS_K = 273.15

ArrayLike = Union[float, np.ndarray]


class ParameterRangeWarning(UserWarning):
    """A constant lies outside its typical published range"""


def _parse_enum(enum_cls, value):
    """Accept enum members, values in any case, or member names"""
    if isinstance(value, enum_cls):
        return value
    text = str(value).strip()
    try:
        return enum_cls(text.lower())
    except ValueError:
        try:
            return enum_cls[text.upper()]
        except KeyError:
            choices = ", ".join(m.value for m in enum_cls)
            raise ValueError(f"unknown {enum_cls.__name__} '{value}' (expected one of: {choices})") from None


class Mechanism(Enum):
    """Time-based wearout mechanisms"""
    HCI = "hci"
    OB = "ob"
    EM = "em"
    NBTI = "nbti"

    @classmethod
    def parse(cls, value: Any) -> "Mechanism":
        return _parse_enum(cls, value)


class ObVariant(Enum):
    """Oxide breakdown lifetime models"""
    E_MODEL = "e_model"                # anode hole injection, t_BD = tau0 exp(-gamma E)
    INV_E_MODEL = "inv_e_model"        # thermo-chemical, t_BD = tau0 exp(gamma / E)
    THIN_ARRHENIUS = "thin_arrhenius"  # A exp(B/E) exp(Ea/kT)
    ULTRA_THIN = "ultra_thin"          # T_BD0 exp(a/T + b/T^2)

    @classmethod
    def parse(cls, value: Any) -> "ObVariant":
        return _parse_enum(cls, value)


# ============================================================================
# HELPERS
# ============================================================================

def _out(value: Any) -> ArrayLike:
    arr = np.asarray(value, dtype=float)
    return float(arr) if arr.ndim == 0 else arr


def _fmt(value: Any) -> str:
    arr = np.asarray(value, dtype=float)
    if arr.ndim == 0:
        return repr(float(arr))
    return f"[{arr.min()!r} .. {arr.max()!r}]"


def _require(ok: Any, message: str) -> None:
    if not np.all(ok):
        raise DomainError(message)


def _is_scalar(value: Any) -> bool:
    return np.ndim(value) == 0


def _arrhenius(ea_eV: ArrayLike, temperature_K: ArrayLike) -> ArrayLike:
    return np.exp(np.asarray(ea_eV, dtype=float) / (K_BOLTZMANN_EV * np.asarray(temperature_K, dtype=float)))


def _require_temperature(temperature_K: ArrayLike) -> np.ndarray:
    t = np.asarray(temperature_K, dtype=float)
    _require(t > 0, f"temperature_K must be > 0 (got {_fmt(t)})")
    return t


def _to_dict(obj: Any) -> Dict[str, Any]:
    out = {}
    for f in fields(obj):
        value = getattr(obj, f.name)
        if isinstance(value, Enum):
            value = value.value
        elif isinstance(value, np.ndarray):
            value = value.tolist()
        out[f.name] = value
    return out


def celsius_to_kelvin(temperature_C: ArrayLike) -> ArrayLike:
    return _out(np.asarray(temperature_C, dtype=float) + ZERO_CELSIUS_K)


# ============================================================================
# OPERATING POINT AND PARAMETER SETS
# ============================================================================

@dataclass(frozen=True)
class OperatingPoint:
    """Stress condition at which a model is evaluated"""
    temperature_K: ArrayLike
    gate_voltage_V: ArrayLike = 0.0
    drain_current_A: ArrayLike = 0.0
    substrate_current_A: ArrayLike = 0.0
    current_density_A_cm2: ArrayLike = 0.0
    stress_time: ArrayLike = 0.0
    oxide_field_Vcm: Optional[ArrayLike] = None

    @classmethod
    def from_celsius(cls, temperature_C: ArrayLike, **kwargs: Any) -> "OperatingPoint":
        return cls(temperature_K=celsius_to_kelvin(temperature_C), **kwargs)

    def to_dict(self) -> Dict[str, Any]:
        return _to_dict(self)


@dataclass(frozen=True)
class HciParams:
    """Constants of the HCI failure-rate, MTTF and Vth-shift models.

    b_scale absorbs A(Delta)/W. vth_prefactor is the unnamed proportionality
    constant of the Vth-shift power law.
    """
    b_scale: ArrayLike = 1.0
    m_exponent: ArrayLike = 3.0
    n_exponent: ArrayLike = 3.0
    ea_eV: ArrayLike = -0.15
    vth_prefactor: ArrayLike = 1.0
    q_inversion: ArrayLike = 1.0
    e_ox_Vcm: ArrayLike = 0.0
    e0_Vcm: ArrayLike = 1.0e6
    phi_it_eV: ArrayLike = 3.7
    lambda_mfp_cm: ArrayLike = 7.8e-7
    e_m_Vcm: ArrayLike = 5.0e5
    n_prime: ArrayLike = 0.5

    mechanism: ClassVar[Mechanism] = Mechanism.HCI

    def __post_init__(self):
        _require(np.greater(self.b_scale, 0), f"HCI b_scale must be > 0 (got {_fmt(self.b_scale)})")
        _require(np.greater(self.m_exponent, 0), f"HCI m_exponent must be > 0 (got {_fmt(self.m_exponent)})")
        _require(np.greater_equal(self.q_inversion, 0), "HCI q_inversion must be >= 0")
        _require(np.greater(self.e0_Vcm, 0), "HCI e0_Vcm must be > 0")
        _require(np.greater(self.lambda_mfp_cm, 0), "HCI lambda_mfp_cm must be > 0")
        _require(np.greater(self.e_m_Vcm, 0), "HCI e_m_Vcm must be > 0")
        _emit_range_warnings(self)

    def to_dict(self) -> Dict[str, Any]:
        return _to_dict(self)


@dataclass(frozen=True)
class ObParams:
    """Constants of the oxide-breakdown models.

    The variant selects which fields are consulted. t_bd0, a_coeff_K and
    b_coeff_K2 are pre-evaluated at the operating voltage. weibull_shape=None
    turns off intrinsic Weibull scatter in population runs.
    """
    variant: ObVariant = ObVariant.THIN_ARRHENIUS
    tau0: ArrayLike = 1.0
    gamma: ArrayLike = 0.0
    a_scale: ArrayLike = 1.0
    b_field: ArrayLike = 0.0
    ea_eV: ArrayLike = 0.0
    t_bd0: ArrayLike = 1.0
    a_coeff_K: ArrayLike = 0.0
    b_coeff_K2: ArrayLike = 0.0
    weibull_shape: Optional[float] = 1.0
    d_ox_cm: Optional[ArrayLike] = None

    mechanism: ClassVar[Mechanism] = Mechanism.OB

    def __post_init__(self):
        object.__setattr__(self, "variant", ObVariant.parse(self.variant))
        _require(np.greater(self.tau0, 0), f"OB tau0 must be > 0 (got {_fmt(self.tau0)})")
        _require(np.greater(self.a_scale, 0), f"OB a_scale must be > 0 (got {_fmt(self.a_scale)})")
        _require(np.greater(self.t_bd0, 0), f"OB t_bd0 must be > 0 (got {_fmt(self.t_bd0)})")
        if self.weibull_shape is not None:
            _require(np.greater(self.weibull_shape, 0), f"OB weibull_shape must be > 0 (got {_fmt(self.weibull_shape)})")
        if self.d_ox_cm is not None:
            _require(np.greater(self.d_ox_cm, 0), f"OB d_ox_cm must be > 0 (got {_fmt(self.d_ox_cm)})")
        _emit_range_warnings(self)

    def to_dict(self) -> Dict[str, Any]:
        return _to_dict(self)


@dataclass(frozen=True)
class EmParams:
    """Constants of Black's electromigration MTTF"""
    a_scale: ArrayLike = 1.0
    n_exponent: ArrayLike = 1.5
    ea_eV: ArrayLike = 0.7

    mechanism: ClassVar[Mechanism] = Mechanism.EM

    def __post_init__(self):
        _require(np.greater(self.a_scale, 0), f"EM a_scale must be > 0 (got {_fmt(self.a_scale)})")
        _require(np.greater_equal(self.ea_eV, 0), f"EM ea_eV must be >= 0 (got {_fmt(self.ea_eV)})")
        _emit_range_warnings(self)

    def to_dict(self) -> Dict[str, Any]:
        return _to_dict(self)


@dataclass(frozen=True)
class NbtiParams:
    """Constants of the NBTI Vth-shift model.

    A(Vg, t) is taken as the separable power law a0 * |Vg|^gamma_v * t^beta_t.
    """
    a0: ArrayLike = 1.0
    gamma_v: ArrayLike = 1.0
    beta_t: ArrayLike = 0.25
    e_nb_eV: ArrayLike = 0.1
    vth_crit_V: ArrayLike = 0.05

    mechanism: ClassVar[Mechanism] = Mechanism.NBTI

    def __post_init__(self):
        _require(np.greater(self.a0, 0), f"NBTI a0 must be > 0 (got {_fmt(self.a0)})")
        _require(np.greater(self.beta_t, 0), f"NBTI beta_t must be > 0 (got {_fmt(self.beta_t)})")
        _require(np.greater_equal(self.e_nb_eV, 0), f"NBTI e_nb_eV must be >= 0 (got {_fmt(self.e_nb_eV)})")
        _require(np.greater(self.vth_crit_V, 0), f"NBTI vth_crit_V must be > 0 (got {_fmt(self.vth_crit_V)})")
        _emit_range_warnings(self)

    def to_dict(self) -> Dict[str, Any]:
        return _to_dict(self)


MechanismParams = Union[HciParams, ObParams, EmParams, NbtiParams]

PARAMS_TYPES = {
    Mechanism.HCI: HciParams,
    Mechanism.OB: ObParams,
    Mechanism.EM: EmParams,
    Mechanism.NBTI: NbtiParams,
}

# (field, low, high, open interval, label) for typical published ranges
_TYPICAL_RANGES = {
    HciParams: [("n_exponent", 2.0, 4.0, False, "HCI N"), ("ea_eV", -0.2, -0.1, False, "HCI Ea")],
    EmParams: [("n_exponent", 1.0, 2.0, True, "EM n"), ("ea_eV", 0.5, 1.4, False, "EM Ea")],
    NbtiParams: [("vth_crit_V", 0.05, 0.10, False, "NBTI dVth criterion")],
}


def range_warnings(params: MechanismParams) -> List[str]:
    """Messages for scalar constants outside their typical range.

    Sampled (array-valued) fields are not checked.
    """
    messages = []
    for name, low, high, open_interval, label in _TYPICAL_RANGES.get(type(params), []):
        value = getattr(params, name)
        if not _is_scalar(value):
            continue
        value = float(value)
        inside = low < value < high if open_interval else low <= value <= high
        if not inside:
            bounds = f"({low:g}, {high:g})" if open_interval else f"[{low:g}, {high:g}]"
            messages.append(f"{label} = {value:g} outside typical {bounds}")
    return messages


_range_checks_enabled: ContextVar[bool] = ContextVar("range_checks_enabled", default=True)


@contextmanager
def quiet_range_checks() -> Iterator[None]:
    """Build params without range warnings, e.g. for values derived from checked base params"""
    token = _range_checks_enabled.set(False)
    try:
        yield
    finally:
        _range_checks_enabled.reset(token)


def _emit_range_warnings(params: MechanismParams) -> None:
    if not _range_checks_enabled.get():
        return
    for message in range_warnings(params):
        logger.warning(message)
        warnings.warn(message, ParameterRangeWarning, stacklevel=4)


# ============================================================================
# HOT CARRIER INJECTION
# ============================================================================

def hci_failure_rate(op: OperatingPoint, p: HciParams) -> ArrayLike:
    """lambda = B * I_drain * (I_sub / I_drain)^m"""
    i_d = np.asarray(op.drain_current_A, dtype=float)
    i_s = np.asarray(op.substrate_current_A, dtype=float)
    _require(i_d > 0, f"drain_current_A must be > 0 (got {_fmt(i_d)}); I_sub/I_drain is undefined")
    _require(i_s >= 0, f"substrate_current_A must be >= 0 (got {_fmt(i_s)})")
    return _out(p.b_scale * i_d * (i_s / i_d) ** p.m_exponent)


def hci_mttf(op: OperatingPoint, p: HciParams) -> ArrayLike:
    """MTTF_HCI = B * I_sub^-N * exp(Ea / kT)"""
    i_s = np.asarray(op.substrate_current_A, dtype=float)
    _require(i_s > 0, f"substrate_current_A must be > 0 (got {_fmt(i_s)})")
    t = _require_temperature(op.temperature_K)
    return _out(p.b_scale * i_s ** (-np.asarray(p.n_exponent, dtype=float)) * _arrhenius(p.ea_eV, t))


def hci_vth_shift(op: OperatingPoint, p: HciParams) -> ArrayLike:
    """dVth ~ sqrt(Q_i) exp(E_ox/E_o) exp(-phi_it / (q lambda E_m)) t^n'"""
    t = np.asarray(op.stress_time, dtype=float)
    _require(t >= 0, f"stress_time must be >= 0 (got {_fmt(t)})")
    # phi_it in eV over lambda*E_m in volts is already phi_it / (q lambda E_m)
    trap_term = np.exp(-np.asarray(p.phi_it_eV, dtype=float) / (np.asarray(p.lambda_mfp_cm) * p.e_m_Vcm))
    field_term = np.exp(np.asarray(p.e_ox_Vcm, dtype=float) / p.e0_Vcm)
    return _out(p.vth_prefactor * np.sqrt(p.q_inversion) * field_term * trap_term * t ** p.n_prime)


# ============================================================================
# OXIDE BREAKDOWN
# ============================================================================

def oxide_field(voltage_V: ArrayLike, d_ox_cm: ArrayLike) -> ArrayLike:
    """E_ox = V / d_ox"""
    d = np.asarray(d_ox_cm, dtype=float)
    _require(d > 0, f"d_ox_cm must be > 0 (got {_fmt(d)})")
    return _out(np.asarray(voltage_V, dtype=float) / d)


def time_to_breakdown(e_ox: ArrayLike, p: ObParams) -> ArrayLike:
    """t_BD = tau0 * exp(-n * gamma * E_ox^n), n = 1 (E model) or -1 (1/E model)"""
    e = np.asarray(e_ox, dtype=float)
    if p.variant is ObVariant.E_MODEL:
        return _out(p.tau0 * np.exp(-np.asarray(p.gamma, dtype=float) * e))
    if p.variant is ObVariant.INV_E_MODEL:
        _require(e > 0, f"oxide field must be > 0 for the 1/E model (got {_fmt(e)})")
        return _out(p.tau0 * np.exp(np.asarray(p.gamma, dtype=float) / e))
    raise VariantError(f"time_to_breakdown handles e_model / inv_e_model, not {p.variant.value}")


def mttf_ob_thin(e_ox: ArrayLike, temperature_K: ArrayLike, p: ObParams) -> ArrayLike:
    """MTTF_OB = A exp(B / E_ox) exp(Ea / kT)"""
    if p.variant is not ObVariant.THIN_ARRHENIUS:
        raise VariantError(f"mttf_ob_thin needs variant thin_arrhenius, not {p.variant.value}")
    e = np.asarray(e_ox, dtype=float)
    _require(e > 0, f"oxide field must be > 0 (got {_fmt(e)})")
    t = _require_temperature(temperature_K)
    return _out(p.a_scale * np.exp(np.asarray(p.b_field, dtype=float) / e) * _arrhenius(p.ea_eV, t))


def mttf_ob_ultrathin(temperature_K: ArrayLike, p: ObParams) -> ArrayLike:
    """MTTF_OB = T_BD0(V) exp(a(V)/T + b(V)/T^2)"""
    if p.variant is not ObVariant.ULTRA_THIN:
        raise VariantError(f"mttf_ob_ultrathin needs variant ultra_thin, not {p.variant.value}")
    t = _require_temperature(temperature_K)
    return _out(p.t_bd0 * np.exp(np.asarray(p.a_coeff_K, dtype=float) / t + np.asarray(p.b_coeff_K2, dtype=float) / t ** 2))


def ob_field(op: OperatingPoint, p: ObParams) -> ArrayLike:
    """Oxide field from V_g / d_ox when the thickness is known, else the operating point's field"""
    if p.d_ox_cm is not None:
        return oxide_field(op.gate_voltage_V, p.d_ox_cm)
    if op.oxide_field_Vcm is not None:
        return _out(op.oxide_field_Vcm)
    raise DomainError("OB needs d_ox_cm in the params or oxide_field_Vcm in the operating point")


def ob_lifetime(op: OperatingPoint, p: ObParams) -> ArrayLike:
    if p.variant is ObVariant.ULTRA_THIN:
        return mttf_ob_ultrathin(op.temperature_K, p)
    e_ox = ob_field(op, p)
    if p.variant is ObVariant.THIN_ARRHENIUS:
        return mttf_ob_thin(e_ox, op.temperature_K, p)
    return time_to_breakdown(e_ox, p)


# ============================================================================
# ELECTROMIGRATION
# ============================================================================

def mttf_em(op: OperatingPoint, p: EmParams) -> ArrayLike:
    """MTTF_EM = A * j^-n * exp(Ea / kT)"""
    j = np.asarray(op.current_density_A_cm2, dtype=float)
    _require(j > 0, f"current_density_A_cm2 must be > 0 (got {_fmt(j)})")
    t = _require_temperature(op.temperature_K)
    return _out(p.a_scale * j ** (-np.asarray(p.n_exponent, dtype=float)) * _arrhenius(p.ea_eV, t))


# ============================================================================
# NBTI
# ============================================================================

def _nbti_amplitude(op: OperatingPoint, p: NbtiParams) -> np.ndarray:
    return np.asarray(p.a0, dtype=float) * np.abs(np.asarray(op.gate_voltage_V, dtype=float)) ** p.gamma_v


def nbti_vth_shift(op: OperatingPoint, p: NbtiParams) -> ArrayLike:
    """dVth = a0 |Vg|^gamma_v t^beta exp(-E_NB / kT)"""
    t = _require_temperature(op.temperature_K)
    time = np.asarray(op.stress_time, dtype=float)
    _require(time >= 0, f"stress_time must be >= 0 (got {_fmt(time)})")
    return _out(_nbti_amplitude(op, p) * time ** p.beta_t / _arrhenius(p.e_nb_eV, t))


def nbti_lifetime(op: OperatingPoint, p: NbtiParams) -> ArrayLike:
    """Stress time at which the NBTI shift reaches vth_crit_V"""
    t = _require_temperature(op.temperature_K)
    amplitude = _nbti_amplitude(op, p)
    _require(amplitude > 0, f"gate_voltage_V = {_fmt(op.gate_voltage_V)} with gamma_v > 0: the shift never reaches the criterion")
    ratio = np.asarray(p.vth_crit_V, dtype=float) * _arrhenius(p.e_nb_eV, t) / amplitude
    return _out(ratio ** (1.0 / np.asarray(p.beta_t, dtype=float)))


# ============================================================================
# DISPATCH, ACCELERATION, DUTY CYCLE
# ============================================================================

def mechanism_mttf(mechanism: Any, params: MechanismParams, op: OperatingPoint) -> ArrayLike:
    """Lifetime of one mechanism at one operating point"""
    mechanism = Mechanism.parse(mechanism)
    expected = PARAMS_TYPES[mechanism]
    if not isinstance(params, expected):
        raise VariantError(f"{mechanism.value} needs {expected.__name__}, got {type(params).__name__}")
    if mechanism is Mechanism.HCI:
        return hci_mttf(op, params)
    if mechanism is Mechanism.OB:
        return ob_lifetime(op, params)
    if mechanism is Mechanism.EM:
        return mttf_em(op, params)
    return nbti_lifetime(op, params)


def acceleration_factor(
    mechanism: Any,
    params: MechanismParams,
    op_stress: OperatingPoint,
    op_use: OperatingPoint,
    params_use: Optional[MechanismParams] = None,
) -> ArrayLike:
    """MTTF(use) / MTTF(stress).

    params_use, when given, replaces params at the use condition so a process
    change can be expressed as an acceleration factor.
    """
    mttf_stress = mechanism_mttf(mechanism, params, op_stress)
    mttf_use = mechanism_mttf(mechanism, params if params_use is None else params_use, op_use)
    return _out(np.asarray(mttf_use) / np.asarray(mttf_stress))


def activation_energy_from_lifetimes(
    temperatures_K: Sequence[float],
    lifetimes: Sequence[float],
) -> Tuple[float, float]:
    """Least-squares Arrhenius fit of ln(MTTF) against 1/T.

    Returns (Ea in eV, prefactor) such that MTTF ~ prefactor * exp(Ea / kT).
    """
    t = np.asarray(temperatures_K, dtype=float)
    life = np.asarray(lifetimes, dtype=float)
    if t.shape != life.shape or t.size < 2:
        raise DomainError("need at least two (temperature, lifetime) pairs of equal length")
    _require(t > 0, f"temperatures must be > 0 (got {_fmt(t)})")
    _require(life > 0, f"lifetimes must be > 0 (got {_fmt(life)})")
    if np.unique(t).size < 2:
        raise DomainError("need at least two distinct temperatures")
    fit = linregress(1.0 / t, np.log(life))
    return float(fit.slope * K_BOLTZMANN_EV), float(np.exp(fit.intercept))


@dataclass(frozen=True)
class Waveform:
    """One cycle of a periodic stress, sampled at increasing times starting at 0"""
    samples: Tuple[Tuple[float, OperatingPoint], ...]
    period: float

    def __post_init__(self):
        samples = tuple((float(t), op) for t, op in self.samples)
        object.__setattr__(self, "samples", samples)
        if len(samples) < 2:
            raise WaveformError(f"waveform needs at least 2 samples, got {len(samples)}")
        if not self.period > 0:
            raise WaveformError(f"period must be > 0 (got {self.period!r})")
        times = self.times
        if times[0] != 0.0:
            raise WaveformError(f"first sample must be at time 0 (got {times[0]!r})")
        if np.any(np.diff(times) <= 0):
            raise WaveformError("sample times must be strictly increasing")
        if times[-1] > self.period:
            raise WaveformError(f"last sample at {times[-1]!r} is past the period {self.period!r}")

    @property
    def times(self) -> np.ndarray:
        return np.array([t for t, _ in self.samples])

    @classmethod
    def from_profile(
        cls,
        times: Sequence[float],
        period: float,
        temperature_K: ArrayLike,
        drain_current_A: ArrayLike,
        substrate_current_A: ArrayLike,
    ) -> "Waveform":
        """Build a waveform from per-sample arrays (scalars are held constant)"""
        n = len(times)
        temps = np.broadcast_to(np.asarray(temperature_K, dtype=float), (n,))
        i_d = np.broadcast_to(np.asarray(drain_current_A, dtype=float), (n,))
        i_s = np.broadcast_to(np.asarray(substrate_current_A, dtype=float), (n,))
        samples = [
            (t, OperatingPoint(temperature_K=float(temps[k]), drain_current_A=float(i_d[k]), substrate_current_A=float(i_s[k])))
            for k, t in enumerate(times)
        ]
        return cls(samples=tuple(samples), period=period)


def duty_cycle_rate(w: Waveform, p: HciParams) -> float:
    """Cycle-averaged HCI failure rate.

    Trapezoidal rule over the samples; the last sample is held until the end
    of the period.
    """
    times = w.times
    rates = np.array([hci_failure_rate(op, p) for _, op in w.samples], dtype=float)
    if np.all(rates == rates[0]):
        return float(rates[0])
    area = trapezoid(rates, times) + rates[-1] * (w.period - times[-1])
    return float(area / w.period)
