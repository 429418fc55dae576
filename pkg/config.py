"""
Wearsim Configuration
=====================
Centralized constants, environment-driven settings and mechanism metadata.
"""

import os

from dotenv import load_dotenv

from wearsim.models import Mechanism, ObVariant
from wearsim.stochastic import TARGET_SPECS

load_dotenv()


class Config:
    """Application configuration"""
    DEFAULT_MISSION_LIFETIME_HOURS = 87_600  # "10 plus years" of commercial service
    COMMERCIAL_TEMPERATURE_RANGE_C = (0.0, 70.0)
    DEFAULT_N_SAMPLES = 10_000
    DEFAULT_SEED = 0

    HISTOGRAM_BINS = 50
    CSV_SIGNIFICANT_DIGITS = 17

    MECHANISMS_DATA = {
        "hci": {
            "name": "Hot Carrier Injection",
            "lifetime_model": "MTTF = B * I_sub^-N * exp(Ea / kT)",
            "failures": [
                "Threshold voltage shift",
                "Transconductance degradation",
                "Drain current reduction",
            ],
            "factors": ["Drain doping", "Channel length", "Sidewall spacing", "Doping profiles"],
        },
        "ob": {
            "name": "Oxide Breakdown (TDDB)",
            "lifetime_model": "t_BD = tau0 exp(-gamma E) | tau0 exp(gamma/E) | A exp(B/E) exp(Ea/kT) | T_BD0 exp(a/T + b/T^2)",
            "failures": ["Gate leakage current", "Gate-to-substrate short"],
            "factors": ["Gate oxide thickness", "Oxide purity", "Trap density"],
        },
        "em": {
            "name": "Electromigration",
            "lifetime_model": "MTTF = A * j^-n * exp(Ea / kT)",
            "failures": ["Open circuit (voids)", "Short circuit (hillocks)", "Increased resistance"],
            "factors": ["Metal type", "Copper doping", "Grain structure", "Interconnect geometry", "Impurities"],
        },
        "nbti": {
            "name": "Negative Bias Temperature Instability",
            "lifetime_model": "dVth = a0 |Vg|^gamma_v t^beta exp(-E_NB / kT)",
            "failures": ["Threshold voltage shift", "Drain current reduction", "Timing degradation"],
            "factors": ["Interfacial nitrogen", "Gate oxide thickness", "Boron penetration"],
        },
    }

    @staticmethod
    def get_thread_count():
        """Worker cap from WEARSIM_THREADS; None lets the pool size itself"""
        value = os.getenv("WEARSIM_THREADS", "").strip()
        if not value:
            return None
        try:
            count = int(value)
        except ValueError:
            raise ValueError(f"WEARSIM_THREADS must be a positive integer, got '{value}'") from None
        if count < 1:
            raise ValueError(f"WEARSIM_THREADS must be a positive integer, got '{value}'")
        return count

    @staticmethod
    def get_log_level():
        return os.getenv("WEARSIM_LOG_LEVEL", "WARNING").strip().upper() or "WARNING"


def get_mechanisms():
    """List wearout mechanisms with their failure modes and process factors"""
    return [
        {"code": m.value, **Config.MECHANISMS_DATA.get(m.value, {})}
        for m in Mechanism
    ]


def get_parameter_targets(mechanism=None):
    """List process parameters that can be varied, optionally for one mechanism"""
    wanted = Mechanism.parse(mechanism) if mechanism is not None else None
    targets = []
    for target, spec in TARGET_SPECS.items():
        if wanted is not None and spec.mechanism is not wanted:
            continue
        targets.append({
            "code": target.value,
            "mechanism": spec.mechanism.value,
            "input": f"{spec.location}.{spec.field_name}",
            "factors": spec.factors,
            "ob_variants": sorted(v.value for v in spec.variants) if spec.variants else None,
        })
    return targets


def get_ob_variants():
    """List oxide breakdown model variants"""
    return [v.value for v in ObVariant]
