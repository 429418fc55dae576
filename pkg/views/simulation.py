"""
Model query and simulation subcommands: mttf, accel, scenario, sample
"""

import argparse
import logging
from pathlib import Path
from typing import Dict, Optional

from config import Config
from views.reports import format_scalar, report_document, results_frame, samples_frame, write_csv, write_json
from views.schema import load_scenario
from wearsim.errors import ScenarioValidationError, UsageError
from wearsim.models import (
    EmParams,
    HciParams,
    Mechanism,
    NbtiParams,
    ObParams,
    ObVariant,
    OperatingPoint,
    acceleration_factor,
    celsius_to_kelvin,
    hci_failure_rate,
    mechanism_mttf,
    nbti_vth_shift,
)
from wearsim.scenario import DiagnosticLevel, run_scenario, validate_scenario
from wearsim.stochastic import MechanismTtfModel, PopulationResult, monte_carlo_population

logger = logging.getLogger(__name__)

VARIANTS = {
    "e": ObVariant.E_MODEL,
    "inv-e": ObVariant.INV_E_MODEL,
    "thin": ObVariant.THIN_ARRHENIUS,
    "ultra-thin": ObVariant.ULTRA_THIN,
}

# flag dest -> (flag, help)
PARAM_FLAGS = [
    ("A", "--A", "scale A (EM, thin-oxide OB)"),
    ("B", "--B", "scale B (HCI) or field coefficient B (thin-oxide OB, V/cm)"),
    ("N", "--N", "HCI substrate-current exponent N"),
    ("m", "--m", "HCI failure-rate exponent m"),
    ("n", "--n", "EM current-density exponent n"),
    ("ea", "--ea", "activation energy (eV)"),
    ("tau0", "--tau0", "OB E / 1/E prefactor"),
    ("gamma", "--gamma", "OB field acceleration"),
    ("t_bd0", "--t-bd0", "ultra-thin OB prefactor T_BD0(V)"),
    ("a_coeff", "--a-coeff", "ultra-thin OB a(V) in K"),
    ("b_coeff", "--b-coeff", "ultra-thin OB b(V) in K^2"),
    ("a0", "--a0", "NBTI amplitude"),
    ("gamma_v", "--gamma-v", "NBTI gate-voltage exponent"),
    ("beta_t", "--beta-t", "NBTI time exponent (default 0.25)"),
    ("e_nb", "--e-nb", "NBTI activation energy (eV)"),
    ("vth_crit", "--vth-crit", "NBTI failure criterion in V (default 0.05)"),
    ("d_ox", "--d-ox", "oxide thickness (cm); field = Vg / d_ox"),
    ("weibull_shape", "--weibull-shape", "OB Weibull shape"),
]

OP_FLAGS = [
    ("vg", "--vg", "gate voltage (V)"),
    ("id", "--id", "drain current (A)"),
    ("isub", "--isub", "substrate current (A)"),
    ("j", "--j", "current density (A/cm^2)"),
    ("eox", "--eox", "oxide field (V/cm)"),
    ("time", "--time", "stress time"),
]


def _add_model_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--mechanism", required=True, choices=[m.value for m in Mechanism])
    parser.add_argument("--variant", choices=sorted(VARIANTS), help="OB model variant")
    params = parser.add_argument_group("model parameters")
    for dest, flag, help_text in PARAM_FLAGS:
        params.add_argument(flag, dest=dest, type=float, help=help_text)
    point = parser.add_argument_group("operating point")
    temperature = point.add_mutually_exclusive_group()
    temperature.add_argument("--temp-k", dest="temp_k", type=float, help="temperature (K)")
    temperature.add_argument("--temp-c", dest="temp_c", type=float, help="temperature (C)")
    for dest, flag, help_text in OP_FLAGS:
        point.add_argument(flag, dest=dest, type=float, help=help_text)


def _require(args: argparse.Namespace, mechanism: str, *dests: str) -> None:
    flags = {dest: flag for dest, flag, _ in PARAM_FLAGS + OP_FLAGS}
    missing = [flags.get(d, d) for d in dests if getattr(args, d, None) is None]
    if missing:
        raise UsageError(f"{mechanism} needs {', '.join(missing)}")


def _temperature(k: Optional[float], c: Optional[float], label: str = "--temp-k or --temp-c") -> float:
    if k is not None:
        return k
    if c is not None:
        return celsius_to_kelvin(c)
    raise UsageError(f"missing temperature: give {label}")


def _or_zero(value: Optional[float]) -> float:
    return 0.0 if value is None else value


def build_params(args: argparse.Namespace, ea: Optional[float] = None):
    """Mechanism params from flags; ea overrides --ea / --e-nb"""
    mechanism = Mechanism.parse(args.mechanism)
    if mechanism is Mechanism.EM:
        _require(args, "em", "A", "n", "ea")
        return EmParams(a_scale=args.A, n_exponent=args.n, ea_eV=args.ea if ea is None else ea)
    if mechanism is Mechanism.HCI:
        _require(args, "hci", "B", "N", "ea")
        return HciParams(
            b_scale=args.B,
            n_exponent=args.N,
            m_exponent=3.0 if args.m is None else args.m,
            ea_eV=args.ea if ea is None else ea,
        )
    if mechanism is Mechanism.NBTI:
        _require(args, "nbti", "a0", "gamma_v", "e_nb")
        return NbtiParams(
            a0=args.a0,
            gamma_v=args.gamma_v,
            beta_t=0.25 if args.beta_t is None else args.beta_t,
            e_nb_eV=args.e_nb if ea is None else ea,
            vth_crit_V=0.05 if args.vth_crit is None else args.vth_crit,
        )

    if args.variant is None:
        raise UsageError("ob needs --variant (e, inv-e, thin, ultra-thin)")
    variant = VARIANTS[args.variant]
    # d_ox only sets the field together with a gate voltage; otherwise --eox stands
    d_ox = args.d_ox if args.vg is not None else None
    common = {"variant": variant, "d_ox_cm": d_ox}
    if args.weibull_shape is not None:
        common["weibull_shape"] = args.weibull_shape
    if variant is ObVariant.THIN_ARRHENIUS:
        _require(args, "ob thin", "A", "B", "ea")
        return ObParams(a_scale=args.A, b_field=args.B, ea_eV=args.ea if ea is None else ea, **common)
    if variant is ObVariant.ULTRA_THIN:
        _require(args, "ob ultra-thin", "t_bd0", "a_coeff", "b_coeff")
        return ObParams(t_bd0=args.t_bd0, a_coeff_K=args.a_coeff, b_coeff_K2=args.b_coeff, **common)
    _require(args, f"ob {args.variant}", "tau0", "gamma")
    return ObParams(tau0=args.tau0, gamma=args.gamma, **common)


def build_operating_point(args: argparse.Namespace, prefix: str = "", fallback: Optional[OperatingPoint] = None) -> OperatingPoint:
    """Operating point from flags; with a fallback, missing flags take its values"""
    def pick(dest: str, current):
        value = getattr(args, prefix + dest, None)
        return current if value is None else value

    if fallback is None:
        temperature_K = _temperature(args.temp_k, args.temp_c)
        return OperatingPoint(
            temperature_K=temperature_K,
            gate_voltage_V=_or_zero(args.vg),
            drain_current_A=_or_zero(args.id),
            substrate_current_A=_or_zero(args.isub),
            current_density_A_cm2=_or_zero(args.j),
            stress_time=_or_zero(args.time),
            oxide_field_Vcm=args.eox,
        )

    use_k, use_c = getattr(args, prefix + "temp_k"), getattr(args, prefix + "temp_c")
    temperature_K = fallback.temperature_K if use_k is None and use_c is None else _temperature(use_k, use_c)
    return OperatingPoint(
        temperature_K=temperature_K,
        gate_voltage_V=pick("vg", fallback.gate_voltage_V),
        drain_current_A=pick("id", fallback.drain_current_A),
        substrate_current_A=pick("isub", fallback.substrate_current_A),
        current_density_A_cm2=pick("j", fallback.current_density_A_cm2),
        stress_time=pick("time", fallback.stress_time),
        oxide_field_Vcm=pick("eox", fallback.oxide_field_Vcm),
    )


def _check_mechanism_inputs(args: argparse.Namespace) -> None:
    mechanism = Mechanism.parse(args.mechanism)
    if mechanism is Mechanism.EM:
        _require(args, "em", "j")
    elif mechanism is Mechanism.HCI:
        _require(args, "hci", "isub")
    elif mechanism is Mechanism.NBTI:
        _require(args, "nbti", "vg")
    elif args.variant != "ultra-thin" and args.eox is None and not (args.d_ox is not None and args.vg is not None):
        raise UsageError("ob needs --eox, or --d-ox with --vg")


def _thread_count() -> Optional[int]:
    try:
        return Config.get_thread_count()
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_mttf(args: argparse.Namespace) -> int:
    """Print the lifetime of one mechanism at one operating point"""
    _check_mechanism_inputs(args)
    params = build_params(args)
    op = build_operating_point(args)
    mechanism = Mechanism.parse(args.mechanism)
    lifetime = mechanism_mttf(mechanism, params, op)

    if isinstance(params, ObParams) and params.variant in (ObVariant.E_MODEL, ObVariant.INV_E_MODEL):
        print(format_scalar("t_bd_hours", lifetime))
    else:
        print(format_scalar("mttf_hours", lifetime))
    if mechanism is Mechanism.HCI and args.id is not None and args.m is not None:
        print(format_scalar("failure_rate_per_hour", hci_failure_rate(op, params)))
    if mechanism is Mechanism.NBTI and args.time is not None:
        print(format_scalar("delta_vth_V", nbti_vth_shift(op, params)))
    return 0


def cmd_accel(args: argparse.Namespace) -> int:
    """Print MTTF(use) / MTTF(stress)"""
    _check_mechanism_inputs(args)
    params = build_params(args)
    params_use = build_params(args, ea=args.use_ea) if args.use_ea is not None else None
    op_stress = build_operating_point(args)
    op_use = build_operating_point(args, prefix="use_", fallback=op_stress)
    af = acceleration_factor(args.mechanism, params, op_stress, op_use, params_use=params_use)
    print(format_scalar("acceleration_factor", af))
    return 0


def cmd_scenario(args: argparse.Namespace) -> int:
    """Run a scenario file and write report.json and results.csv"""
    scenario = load_scenario(args.config, n_samples=args.samples, seed=args.seed)
    report = run_scenario(scenario, workers=_thread_count())

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_json(out_dir / "report.json", report_document(scenario, report))
    write_csv(out_dir / "results.csv", results_frame(report))
    for diagnostic in report.diagnostics:
        logger.warning("%s", diagnostic)

    print(format_scalar("nominal_infection", report.nominal.infection_fraction))
    print(format_scalar("infected_infection", report.infected.infection_fraction))
    print(format_scalar("infection_delta", report.infection_delta))
    print(f"report: {out_dir / 'report.json'}")
    print(f"results: {out_dir / 'results.csv'}")
    return 0


def cmd_sample(args: argparse.Namespace) -> int:
    """Write raw parameter draws and TTFs per device"""
    scenario = load_scenario(args.config, n_samples=args.samples, seed=args.seed)
    diagnostics = validate_scenario(scenario)
    errors = [d for d in diagnostics if d.level is DiagnosticLevel.ERROR]
    if errors:
        raise ScenarioValidationError(errors)

    model = MechanismTtfModel.from_distributions(
        scenario.mechanism, scenario.model_params, scenario.operating_point, scenario.distributions
    )
    wanted = ("nominal", "infected") if args.population == "both" else (args.population,)
    populations: Dict[str, PopulationResult] = {}
    for name in wanted:
        populations[name] = monte_carlo_population(
            model,
            scenario.distributions,
            shifts=scenario.shifts if name == "infected" else None,
            n_samples=scenario.n_samples,
            mission_lifetime=scenario.mission_lifetime,
            seed=scenario.seed,
            workers=_thread_count(),
        )

    out = Path(args.out)
    if out.parent:
        out.parent.mkdir(parents=True, exist_ok=True)
    write_csv(out, samples_frame(populations, [d.name for d in scenario.distributions]))
    print(f"samples: {out}")
    return 0


def register(subparsers) -> None:
    mttf = subparsers.add_parser("mttf", help="lifetime of one mechanism at one operating point")
    _add_model_flags(mttf)
    mttf.set_defaults(handler=cmd_mttf)

    accel = subparsers.add_parser("accel", help="acceleration factor between a stress and a use condition")
    _add_model_flags(accel)
    use = accel.add_argument_group("use condition (defaults to the stress values)")
    use_temperature = use.add_mutually_exclusive_group()
    use_temperature.add_argument("--use-temp-k", dest="use_temp_k", type=float)
    use_temperature.add_argument("--use-temp-c", dest="use_temp_c", type=float)
    for dest, flag, help_text in OP_FLAGS:
        use.add_argument(flag.replace("--", "--use-", 1), dest="use_" + dest, type=float, help=help_text)
    use.add_argument("--use-ea", dest="use_ea", type=float, help="activation energy at the use condition (eV)")
    accel.set_defaults(handler=cmd_accel)

    scenario = subparsers.add_parser("scenario", help="run a Trojan scenario file")
    scenario.add_argument("--config", required=True, type=Path)
    scenario.add_argument("--out", required=True, type=Path, help="output directory")
    scenario.add_argument("--samples", type=int, help="override n_samples")
    scenario.add_argument("--seed", type=int, help="override seed")
    scenario.set_defaults(handler=cmd_scenario)

    sample = subparsers.add_parser("sample", help="emit raw parameter and TTF draws")
    sample.add_argument("--config", required=True, type=Path)
    sample.add_argument("--out", required=True, type=Path, help="output CSV file")
    sample.add_argument("--samples", type=int, help="override n_samples")
    sample.add_argument("--seed", type=int, help="override seed")
    sample.add_argument("--population", choices=["nominal", "infected", "both"], default="both")
    sample.set_defaults(handler=cmd_sample)
