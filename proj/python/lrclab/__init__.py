"""Monte Carlo laboratory for two competing long-range infections on the discrete torus.

The heavy lifting lives in the compiled extension; this package re-exports it
and adds a dict-returning scenario runner.
"""

import json as _json

from ._lrc import (
    DefectLog,
    ModelParams,
    ParamFamily,
    RateSummary,
    Rng,
    RunResult,
    TorusSpec,
    builtin_scenario_names,
    classify_regime,
    coupled_run,
    defect_size,
    derive_stream,
    displacement_probabilities,
    geometric_pmf,
    gillespie_run,
    limit_constant,
    nearest_nonzero,
    partial_rate_sum,
    rate_sum,
    rows_csv_for_scenario,
    run_scenario_json,
    torus_distance,
    total_rates,
    urn_run,
    wrap,
    yule_size,
    yule_trajectory,
)

__all__ = [
    "DefectLog",
    "ModelParams",
    "ParamFamily",
    "RateSummary",
    "Rng",
    "RunResult",
    "TorusSpec",
    "builtin_scenario_names",
    "classify_regime",
    "coupled_run",
    "defect_size",
    "derive_stream",
    "displacement_probabilities",
    "geometric_pmf",
    "gillespie_run",
    "limit_constant",
    "nearest_nonzero",
    "partial_rate_sum",
    "rate_sum",
    "rows_csv_for_scenario",
    "run_scenario",
    "run_scenario_json",
    "torus_distance",
    "total_rates",
    "urn_run",
    "wrap",
    "yule_size",
    "yule_trajectory",
]

__version__ = "0.1.0"


def run_scenario(scenario, **overrides):
    """Run a builtin scenario and return the report as a dict.

    Overrides mirror the JSON config keys (runs, seed, n_grid, ...).
    """
    config = {"scenario": scenario}
    config.update(overrides)
    return _json.loads(run_scenario_json(_json.dumps(config)))
