#!/usr/bin/env python3
"""
Sweep the size of a Trojan mean shift on one parameter of a scenario and
record how the infection fraction grows (Monte Carlo, plus the analytic
value when the scenario has a single parameter and a deterministic TTF).
"""

import argparse
import json
import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from config import Config  # noqa: E402
from views.schema import load_scenario  # noqa: E402
from wearsim.errors import WearsimError  # noqa: E402
from wearsim.stochastic import (  # noqa: E402
    MechanismTtfModel,
    MonotoneMap,
    TrojanShift,
    infection_probability_analytic,
    monte_carlo_population,
)


def failure_direction(model, dist):
    """+1 when larger values shorten life, -1 otherwise"""
    low = float(model.ttf({dist.name: np.asarray(dist.mean - dist.sigma)}))
    high = float(model.ttf({dist.name: np.asarray(dist.mean + dist.sigma)}))
    return 1.0 if high < low else -1.0


def main():
    parser = argparse.ArgumentParser(description="Infection fraction against Trojan shift magnitude.")
    parser.add_argument("--config", required=True, help="scenario JSON file")
    parser.add_argument("--parameter", required=True, help="distribution name to shift")
    parser.add_argument("--max-sigmas", dest="max_sigmas", type=float, default=4.0)
    parser.add_argument("--points", type=int, default=10)
    parser.add_argument("--samples", type=int, help="override n_samples")
    parser.add_argument("--results-dir", dest="results_dir", default="./results", help="Write JSON results here")
    args = parser.parse_args()

    results_dir = Path(args.results_dir)
    results_dir.mkdir(parents=True, exist_ok=True)

    try:
        scenario = load_scenario(Path(args.config), n_samples=args.samples)
        dist = next((d for d in scenario.distributions if d.name == args.parameter), None)
        if dist is None:
            parser.error(f"scenario has no parameter '{args.parameter}'")

        model = MechanismTtfModel.from_distributions(
            scenario.mechanism, scenario.model_params, scenario.operating_point, scenario.distributions
        )
        sign = failure_direction(model, dist)
        analytic_ok = len(scenario.distributions) == 1 and model.weibull_shape is None
        ttf_map = MonotoneMap(lambda x: model.ttf({dist.name: np.asarray(x, dtype=float)}))

        rows = []
        for k in np.linspace(0.0, args.max_sigmas, args.points):
            shift = TrojanShift(parameter_name=dist.name, delta_mean=float(sign * k * dist.sigma))
            population = monte_carlo_population(
                model,
                scenario.distributions,
                shifts=[shift],
                n_samples=scenario.n_samples,
                mission_lifetime=scenario.mission_lifetime,
                seed=scenario.seed,
                workers=Config.get_thread_count(),
            )
            analytic = None
            if analytic_ok:
                analytic = infection_probability_analytic(dist, shift, ttf_map, scenario.mission_lifetime)
            rows.append({
                "shift_sigmas": float(k),
                "delta_mean": shift.delta_mean,
                "infection_fraction": population.infection_fraction,
                "infection_ci_halfwidth": population.infection_ci_halfwidth,
                "analytic_probability": analytic,
                "median_ttf": population.median,
            })
            print(f"shift {k:5.2f} sigma: infection {population.infection_fraction:.6g}"
                  + (f" (analytic {analytic:.6g})" if analytic is not None else ""))
    except WearsimError as exc:
        print(f"Failed: {exc}", file=sys.stderr)
        return 1

    out_json = results_dir / f"{Path(args.config).stem}.{args.parameter}.sweep.json"
    out_json.write_text(json.dumps({
        "scenario": scenario.label,
        "parameter": dist.name,
        "mission_lifetime_hours": scenario.mission_lifetime,
        "n_samples": scenario.n_samples,
        "seed": scenario.seed,
        "points": rows,
    }, ensure_ascii=False, indent=2), encoding="utf-8")
    print(f"Wrote: {out_json}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
