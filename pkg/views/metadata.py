"""
Metadata subcommand: targets
"""

import argparse
import json

from config import Config, get_mechanisms, get_ob_variants, get_parameter_targets
from wearsim.models import Mechanism


def cmd_targets(args: argparse.Namespace) -> int:
    """List mechanisms and the process parameters that can be bound to them"""
    mechanisms = get_mechanisms()
    if args.mechanism is not None:
        mechanisms = [m for m in mechanisms if m["code"] == args.mechanism]
    print(json.dumps({
        "mechanisms": mechanisms,
        "targets": get_parameter_targets(args.mechanism),
        "ob_variants": get_ob_variants(),
        "default_mission_lifetime_hours": Config.DEFAULT_MISSION_LIFETIME_HOURS,
        "commercial_temperature_range_C": list(Config.COMMERCIAL_TEMPERATURE_RANGE_C),
    }, indent=2))
    return 0


def register(subparsers) -> None:
    targets = subparsers.add_parser("targets", help="list mechanisms and parameter bindings")
    targets.add_argument("--mechanism", choices=[m.value for m in Mechanism])
    targets.set_defaults(handler=cmd_targets)
