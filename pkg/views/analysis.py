"""
TTF data analysis subcommand: fit
"""

import argparse
import json
import logging
from pathlib import Path

import numpy as np
import pandas as pd

from wearsim.errors import InputDataError
from wearsim.stochastic import weibull_log_likelihood, weibull_mle_fit

logger = logging.getLogger(__name__)


def read_ttf_column(path: Path, column=None, population=None, header: bool = True) -> np.ndarray:
    """Load one numeric column of positive TTF values from a CSV file"""
    try:
        frame = pd.read_csv(path, header=0 if header else None)
    except FileNotFoundError:
        raise InputDataError(f"input file not found: {path}") from None
    except (OSError, UnicodeDecodeError, pd.errors.ParserError, pd.errors.EmptyDataError) as exc:
        raise InputDataError(f"cannot parse {path}: {exc}") from None

    if not header:
        frame.columns = [str(c) for c in frame.columns]

    if population is not None:
        if "population" not in frame.columns:
            raise InputDataError(f"{path} has no 'population' column to filter on")
        frame = frame[frame["population"] == population]

    if column is None:
        if "ttf" in frame.columns:
            column = "ttf"
        elif len(frame.columns) == 1:
            column = frame.columns[0]
        else:
            raise InputDataError(f"{path} has several columns; choose one with --column", [str(c) for c in frame.columns])
    elif column not in frame.columns:
        raise InputDataError(f"column '{column}' not in {path}", [str(c) for c in frame.columns])

    values = pd.to_numeric(frame[column], errors="coerce")
    bad_rows = values.index[values.isna() | ~np.isfinite(values) | (values <= 0)]
    if len(bad_rows):
        shown = [f"row {int(i) + 1}: {frame[column].loc[i]!r}" for i in bad_rows[:10]]
        raise InputDataError(f"column '{column}' needs finite values > 0; {len(bad_rows)} rows rejected", shown)
    return values.to_numpy(dtype=float)


def cmd_fit(args: argparse.Namespace) -> int:
    """Fit a Weibull distribution to a TTF column and print the JSON result"""
    samples = read_ttf_column(args.input, column=args.column, population=args.population, header=not args.no_header)
    params = weibull_mle_fit(samples)
    result = {
        "beta": params.shape_beta,
        "eta": params.scale_eta,
        "log_likelihood": weibull_log_likelihood(params, samples),
        "n": int(samples.size),
    }
    logger.info("fit %d samples from %s", samples.size, args.input)
    print(json.dumps(result, indent=2))
    return 0


def register(subparsers) -> None:
    fit = subparsers.add_parser("fit", help="Weibull maximum-likelihood fit of TTF data")
    fit.add_argument("--input", required=True, type=Path, help="CSV file of TTF values")
    fit.add_argument("--column", help="column to fit (default: 'ttf', or the only column)")
    fit.add_argument("--population", help="keep only rows whose 'population' equals this")
    fit.add_argument("--no-header", dest="no_header", action="store_true", help="file has no header row")
    fit.set_defaults(handler=cmd_fit)
