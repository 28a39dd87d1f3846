"""JSON interchange for scenarios, allocations, evaluations and reports.

Schemas (all powers in mW, throughputs in bits/s, positions in meters):

Scenario:
    {"params": {<NetworkParams fields>},
     "ap_positions": [[x, y], ...],
     "sta_positions": [[x, y], ...],
     "association": [ap_index_of_sta0, ...]}

Allocation (STA/AP indices as string keys; RU null means unassigned;
grouping may be null when the producing solver decides none):
    {"ru_of_sta": {"0": 3, "1": null, ...},
     "power_of_sta_mw": {"0": 15.0, ...},
     "group_of_ap": {"0": 0, ...} | null,
     "active_groups": [0, ...] | null}

EvaluationResult:
    {"sinr_of_sta": {"0": ..., ...},
     "throughput_of_sta_bps": {"0": ..., ...},
     "total_throughput_bps": ...,
     "power_used_by_ap_mw": {"0": ..., ...}}

FeasibilityReport:
    {"feasible": bool,
     "violations": [{"constraint": "AP_POWER", "indices": [1], "message": "..."}],
     "not_applicable": ["ONE_GROUP", ...]}

Files are written with sorted keys and a trailing newline, so identical
objects produce identical bytes.
"""

import json
from dataclasses import asdict

import numpy as np

from .core import (
    UNASSIGNED,
    Allocation,
    EvaluationResult,
    FeasibilityReport,
    NetworkParams,
    Scenario,
)


def scenario_to_dict(scenario: Scenario) -> dict:
    return {
        "params": asdict(scenario.params),
        "ap_positions": [[float(x), float(y)] for x, y in scenario.ap_positions],
        "sta_positions": [[float(x), float(y)] for x, y in scenario.sta_positions],
        "association": [int(a) for a in scenario.association],
    }


def scenario_from_dict(data: dict) -> Scenario:
    return Scenario(
        params=NetworkParams(**data["params"]),
        ap_positions=np.asarray(data["ap_positions"], dtype=float),
        sta_positions=np.asarray(data["sta_positions"], dtype=float),
        association=np.asarray(data["association"], dtype=int),
    )


def allocation_to_dict(alloc: Allocation) -> dict:
    ru = {
        str(u): (None if r == UNASSIGNED else int(r))
        for u, r in enumerate(alloc.ru_of_sta)
    }
    power = {str(u): float(p) for u, p in enumerate(alloc.power_of_sta_mw)}
    if alloc.group_of_ap is None:
        groups = None
        active = None
    else:
        groups = {str(n): int(g) for n, g in enumerate(alloc.group_of_ap)}
        active = sorted(alloc.active_groups)
    return {"ru_of_sta": ru, "power_of_sta_mw": power,
            "group_of_ap": groups, "active_groups": active}


def allocation_from_dict(data: dict) -> Allocation:
    n_stas = len(data["ru_of_sta"])
    ru = np.full(n_stas, UNASSIGNED)
    power = np.zeros(n_stas)
    for key, r in data["ru_of_sta"].items():
        ru[int(key)] = UNASSIGNED if r is None else int(r)
    for key, p in data["power_of_sta_mw"].items():
        power[int(key)] = float(p)
    groups_raw = data.get("group_of_ap")
    if groups_raw is None:
        return Allocation(ru_of_sta=ru, power_of_sta_mw=power)
    groups = np.empty(len(groups_raw), dtype=int)
    for key, g in groups_raw.items():
        groups[int(key)] = int(g)
    return Allocation(
        ru_of_sta=ru,
        power_of_sta_mw=power,
        group_of_ap=groups,
        active_groups=frozenset(int(g) for g in data["active_groups"]),
    )


def evaluation_to_dict(result: EvaluationResult) -> dict:
    return {
        "sinr_of_sta": {str(u): float(s) for u, s in enumerate(result.sinr_of_sta)},
        "throughput_of_sta_bps": {
            str(u): float(t) for u, t in enumerate(result.throughput_of_sta_bps)
        },
        "total_throughput_bps": float(result.total_throughput_bps),
        "power_used_by_ap_mw": {
            str(n): float(p) for n, p in enumerate(result.power_used_by_ap_mw)
        },
    }


def feasibility_to_dict(report: FeasibilityReport) -> dict:
    return {
        "feasible": report.feasible,
        "violations": [
            {"constraint": v.constraint.name,
             "indices": [int(i) for i in v.indices],
             "message": v.message}
            for v in report.violations
        ],
        "not_applicable": [c.name for c in report.not_applicable],
    }


def solver_report_to_dict(report) -> dict:
    """JSON form of an exact SolveReport."""
    return {
        "objective_bps": float(report.objective_bps),
        "allocation": allocation_to_dict(report.allocation),
        "evaluation": evaluation_to_dict(report.evaluation),
        "nodes_explored": int(report.nodes_explored),
        "pruned": int(report.pruned),
        "proven_optimal": bool(report.proven_optimal),
        "wall_time_s": float(report.wall_time_s),
    }


def _dump(data: dict, path) -> None:
    with open(path, "w") as fh:
        json.dump(data, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _load(path) -> dict:
    with open(path) as fh:
        return json.load(fh)


def save_scenario(scenario: Scenario, path) -> None:
    _dump(scenario_to_dict(scenario), path)


def load_scenario(path) -> Scenario:
    return scenario_from_dict(_load(path))


def save_allocation(alloc: Allocation, path) -> None:
    _dump(allocation_to_dict(alloc), path)


def load_allocation(path) -> Allocation:
    return allocation_from_dict(_load(path))
