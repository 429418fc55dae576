"""
Report serialization
====================
Scenario report JSON, per-device results CSV and plot-ready histograms.
Outputs carry no timestamps, so identical inputs give identical bytes.
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd

from config import Config
from wearsim.scenario import ScenarioReport, TrojanScenario
from wearsim.stochastic import PopulationResult

logger = logging.getLogger(__name__)

POPULATIONS = ("nominal", "infected")


def format_scalar(label: str, value: float) -> str:
    return f"{label}: {float(value):.{Config.CSV_SIGNIFICANT_DIGITS}g}"


def histogram(populations: Dict[str, PopulationResult], bins: int = Config.HISTOGRAM_BINS) -> Dict[str, Any]:
    """Equal-width bins over the combined finite TTF range, counts per population"""
    combined = np.concatenate([p.ttf_samples for p in populations.values()])
    finite = combined[np.isfinite(combined)]
    if finite.size == 0:
        return {"bin_edges": [], **{name: [] for name in populations}}
    edges = np.histogram_bin_edges(finite, bins=bins)
    out: Dict[str, Any] = {"bin_edges": [float(e) for e in edges]}
    for name, population in populations.items():
        counts, _ = np.histogram(population.ttf_samples, bins=edges)
        out[name] = [int(c) for c in counts]
    return out


def scenario_to_dict(s: TrojanScenario) -> Dict[str, Any]:
    return {
        "label": s.label,
        "mechanism": s.mechanism.value,
        "model_params": s.model_params.to_dict(),
        "operating_point": s.operating_point.to_dict(),
        "distributions": [d.to_dict() for d in s.distributions],
        "shifts": [x.to_dict() for x in s.shifts],
        "mission_lifetime_hours": s.mission_lifetime,
        "n_samples": s.n_samples,
        "seed": s.seed,
    }


def report_document(s: TrojanScenario, report: ScenarioReport) -> Dict[str, Any]:
    document = {"scenario": scenario_to_dict(s)}
    document.update(report.to_dict())
    document["histogram"] = histogram({"nominal": report.nominal, "infected": report.infected})
    return document


def write_json(path: Path, document: Dict[str, Any]) -> None:
    text = json.dumps(document, indent=2, ensure_ascii=False) + "\n"
    Path(path).write_text(text, encoding="utf-8", newline="\n")


def _population_frame(name: str, population: PopulationResult, parameters: Optional[List[str]] = None) -> pd.DataFrame:
    columns: Dict[str, Any] = {"device_id": np.arange(population.sample_count)}
    for param in parameters or []:
        columns[param] = population.parameter_samples[param]
    columns["ttf"] = population.ttf_samples
    if parameters is None:
        columns["failed_before_mission"] = population.failed_before_mission.astype(int)
    columns["population"] = name
    return pd.DataFrame(columns)


def results_frame(report: ScenarioReport) -> pd.DataFrame:
    """device_id, ttf, failed_before_mission, population for both populations"""
    return pd.concat(
        [_population_frame("nominal", report.nominal), _population_frame("infected", report.infected)],
        ignore_index=True,
    )


def samples_frame(populations: Dict[str, PopulationResult], parameters: List[str]) -> pd.DataFrame:
    """device_id, <parameters...>, ttf, population"""
    frames = [_population_frame(name, population, parameters) for name, population in populations.items()]
    return pd.concat(frames, ignore_index=True)


def write_csv(path: Path, frame: pd.DataFrame) -> None:
    frame.to_csv(
        path,
        index=False,
        float_format=f"%.{Config.CSV_SIGNIFICANT_DIGITS}g",
        lineterminator="\n",
    )
    logger.debug("wrote %d rows to %s", len(frame), path)
