"""
Wearsim Command Line
====================
Wearout lifetime queries and reliability Trojan scenario runs.

    python app.py mttf --mechanism em --A 1 --n 1.5 --ea 0.9 --j 1e6 --temp-c 105
    python app.py scenario --config scenarios/em_copper_doping.json --out results/em
    python app.py fit --input results/em/results.csv --population nominal

Exit codes: 0 success, 2 model domain error, 64 usage error, 65 bad input data.
"""

import argparse
import logging
import sys
from typing import List, Optional

from config import Config
from views import analysis, metadata, simulation
from wearsim.errors import (
    InputDataError,
    InsufficientDataError,
    ScenarioValidationError,
    UsageError,
    WearsimError,
)

logger = logging.getLogger("wearsim")

EXIT_OK = 0
EXIT_DOMAIN = 2
EXIT_USAGE = 64
EXIT_DATA = 65


class WearsimArgumentParser(argparse.ArgumentParser):
    """argparse failures raise UsageError instead of exiting with status 2"""

    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    parser = WearsimArgumentParser(prog="wearsim", description="CMOS wearout lifetime and reliability Trojan simulator")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND", required=True)

    # Register views
    simulation.register(subparsers)
    analysis.register(subparsers)
    metadata.register(subparsers)
    return parser


def configure_logging(verbose: bool = False) -> None:
    level = logging.DEBUG if verbose else getattr(logging, Config.get_log_level(), logging.WARNING)
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        force=True,
    )


def _report(kind: str, exc: Exception, details: Optional[List[str]] = None) -> None:
    print(f"{kind}: {exc}", file=sys.stderr)
    for line in details or []:
        print(f"  - {line}", file=sys.stderr)


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        _report("usage error", exc)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return exc.code if isinstance(exc.code, int) else EXIT_OK

    configure_logging(args.verbose)
    try:
        return args.handler(args)
    except UsageError as exc:
        _report("usage error", exc)
        return EXIT_USAGE
    except ScenarioValidationError as exc:
        _report("invalid scenario", "scenario has errors", [str(d) for d in exc.diagnostics])
        return EXIT_DATA
    except InputDataError as exc:
        _report("input error", exc, exc.details)
        return EXIT_DATA
    except InsufficientDataError as exc:
        _report("input error", exc)
        return EXIT_DATA
    except WearsimError as exc:
        logger.debug("domain error in %s", args.command, exc_info=True)
        _report("domain error", exc)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
