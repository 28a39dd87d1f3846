"""Desk-scale exhaustive solver for the joint RU / power / grouping problem.

The search space is the cross product of AP groupings (set partitions with a
bounded number of blocks), RU maps (each STA gets one RU or stays idle,
subject to intra-BSS RU exclusivity and same-group RU sharing), and a small
grid of discrete power levels per assigned STA.  Guard rails refuse instances
whose enumeration would not finish at a desk; within them the returned
allocation is the grid optimum, certified by tests against an independently
coded enumerator.

Because STAs on different RUs do not interfere, the power optimum of an RU
map decomposes per RU; each RU set's best grid combination is memoized across
RU maps and groupings.  Only when those per-RU optima overdraw an AP budget
does a joint constrained search over the RU sets' combination tables run,
with branches cut by the budget and by an upper bound against the incumbent.

Objective bookkeeping mirrors core.evaluate bit-for-bit (same per-STA SINR
accumulation order, same STA-index summation order), so the reported
objective equals evaluate() of the returned allocation exactly.
"""

import math
import time
from dataclasses import dataclass
from itertools import product

import numpy as np

from .core import (
    UNASSIGNED,
    Allocation,
    EvaluationResult,
    GainMatrix,
    Scenario,
    evaluate,
    member_sinr,
)

# grid sizes beyond this make |grid|^U explode past desk scale
MAX_GRID_LEVELS = 4


class SizeLimitError(RuntimeError):
    """Instance outside the configured enumeration guard rails."""


@dataclass(frozen=True)
class ExactConfig:
    """Search-space and termination knobs of the exhaustive solver."""

    power_grid_mw: tuple[float, ...] = (5.0, 10.0, 15.0)  # levels > 0; idle = unassigned
    max_groups: int | None = None  # None: use NetworkParams.g_max
    limits: tuple[int, int, int] = (8, 4, 4)  # max STAs, max RUs, max APs
    refine_powers: bool = False    # continuous coordinate-ascent polish
    time_budget_s: float | None = None

    def __post_init__(self):
        grid = tuple(float(p) for p in self.power_grid_mw)
        object.__setattr__(self, "power_grid_mw", grid)
        if not grid or grid[0] <= 0 or any(a >= b for a, b in zip(grid, grid[1:])):
            raise ValueError("power grid must be positive and strictly increasing")
        if any(v < 1 for v in self.limits) or len(self.limits) != 3:
            raise ValueError("limits must be three positive integers")
        if self.max_groups is not None and self.max_groups < 1:
            raise ValueError("max_groups must be >= 1")


@dataclass(eq=False)
class SolveReport:
    """Everything solve_exact learned, for the JSON report interface."""

    allocation: Allocation
    evaluation: EvaluationResult
    objective_bps: float
    nodes_explored: int      # RU maps scored (across all groupings)
    pruned: int              # RU maps whose per-RU optima overdrew a budget
    proven_optimal: bool     # False when the time budget cut the search
    wall_time_s: float


def enumerate_groupings(n_aps: int, g_max: int) -> list[tuple[tuple[int, ...], ...]]:
    """All partitions of APs 0..n_aps-1 into at most g_max blocks.

    Canonical form: blocks ordered by smallest member, members ascending.
    The recursion assigns each AP to an existing block or opens a new one,
    which yields exactly that form with no duplicates.
    """
    if n_aps < 1:
        raise ValueError("need at least one AP")
    if g_max < 1:
        raise ValueError("g_max must be >= 1")
    out: list[tuple[tuple[int, ...], ...]] = []

    def rec(ap: int, blocks: list[list[int]]) -> None:
        if ap == n_aps:
            out.append(tuple(tuple(b) for b in blocks))
            return
        for b in blocks:
            b.append(ap)
            rec(ap + 1, blocks)
            b.pop()
        if len(blocks) < g_max:
            blocks.append([ap])
            rec(ap + 1, blocks)
            blocks.pop()

    rec(1, [[0]])
    return out


def enumerate_ru_maps(association, grouping, num_rus: int):
    """Yield every RU map for the given association and AP grouping.

    A map assigns each STA an RU index or UNASSIGNED such that no AP repeats
    an RU among its own STAs and APs sharing an RU lie in one block of the
    grouping.  STAs are walked in index order, options in the order
    (UNASSIGNED, RU 0, RU 1, ...), so the stream is deterministic.
    """
    association = [int(a) for a in association]
    block_of_ap = {ap: bi for bi, block in enumerate(grouping) for ap in block}
    n_stas = len(association)
    assignment = [UNASSIGNED] * n_stas
    ap_uses = {(ap, r): False for ap in set(association) for r in range(num_rus)}
    ru_block = [None] * num_rus   # block currently claiming each RU
    ru_count = [0] * num_rus

    def rec(u: int):
        if u == n_stas:
            yield tuple(assignment)
            return
        assignment[u] = UNASSIGNED
        yield from rec(u + 1)
        ap = association[u]
        blk = block_of_ap[ap]
        for r in range(num_rus):
            if ap_uses[(ap, r)]:
                continue  # (7) one use per BSS
            if ru_count[r] and ru_block[r] != blk:
                continue  # (12) cross-group sharing forbidden
            assignment[u] = r
            ap_uses[(ap, r)] = True
            ru_count[r] += 1
            ru_block[r] = blk
            yield from rec(u + 1)
            ap_uses[(ap, r)] = False
            ru_count[r] -= 1
            if ru_count[r] == 0:
                ru_block[r] = None
        assignment[u] = UNASSIGNED

    yield from rec(0)


def enumerate_assignments(scenario: Scenario, grouping):
    """RU maps of a scenario under one grouping; see enumerate_ru_maps."""
    return enumerate_ru_maps(scenario.association, grouping, scenario.params.num_rus)


def _set_table(members, association, gains_arr, noise, bandwidth, grid):
    """All grid combinations for one co-RU set, best first.

    Rows are (fast_sum, powers, thr_by_member, spend_by_ap); fast_sum adds
    member throughputs in index order and only ranks rows, the global
    objective is always re-accumulated canonically over all STAs.
    """
    aps = [association[u] for u in members]
    rows = []
    for powers in product(grid, repeat=len(members)):
        co_ru = list(zip(members, aps, powers))
        thr = tuple(
            bandwidth * math.log2(1.0 + member_sinr(u, co_ru, gains_arr, noise))
            for u in members
        )
        fast = 0.0
        for t in thr:
            fast += t
        spend = {}
        for ap, p in zip(aps, powers):
            spend[ap] = spend.get(ap, 0.0) + p
        rows.append((fast, powers, thr, spend))
    rows.sort(key=lambda row: -row[0])
    return rows


def _solve_grid(scenario, gains, config, deadline):
    """Grid search over groupings x RU maps; returns the incumbent and counters."""
    params = scenario.params
    n_stas = scenario.num_stas
    association = [int(a) for a in scenario.association]
    gains_arr = gains.gains
    grid = config.power_grid_mw
    budget = params.p_max_ap_mw
    g_max = config.max_groups if config.max_groups is not None else params.g_max

    tables: dict[tuple[int, ...], list] = {}

    def table_of(members: tuple[int, ...]):
        rows = tables.get(members)
        if rows is None:
            rows = _set_table(members, association, gains_arr, params.noise_power_mw,
                              params.ru_bandwidth_hz, grid)
            tables[members] = rows
        return rows

    best_obj = -math.inf
    best_pick = None  # (grouping, ru_map, {ru: powers})
    nodes = 0
    pruned = 0
    timed_out = False

    for grouping in enumerate_groupings(scenario.num_aps, g_max):
        for ru_map in enumerate_ru_maps(association, grouping, params.num_rus):
            if deadline is not None and time.monotonic() > deadline:
                timed_out = True
                break
            nodes += 1
            members_by_ru: dict[int, list[int]] = {}
            for u in range(n_stas):
                r = ru_map[u]
                if r != UNASSIGNED:
                    members_by_ru.setdefault(r, []).append(u)

            # unconstrained per-RU optima; valid whenever budgets hold
            spend = {}
            feasible = True
            chosen = {}
            for r, members in members_by_ru.items():
                top = table_of(tuple(members))[0]
                chosen[r] = top
                for ap, p in top[3].items():
                    spend[ap] = spend.get(ap, 0.0) + p
            if any(s > budget for s in spend.values()):
                pruned += 1
                feasible, chosen = _joint_best(
                    members_by_ru, table_of, budget, best_obj)
            if not feasible:
                continue

            thr_by_sta = [0.0] * n_stas
            for r, members in members_by_ru.items():
                for u, t in zip(members, chosen[r][2]):
                    thr_by_sta[u] = t
            obj = 0.0
            for t in thr_by_sta:
                obj += t
            if obj > best_obj:
                best_obj = obj
                best_pick = (grouping, ru_map, {r: row[1] for r, row in chosen.items()})
        if timed_out:
            break

    return best_obj, best_pick, nodes, pruned, timed_out


def _joint_best(members_by_ru, table_of, budget, global_best):
    """Budget-coupled fallback: pick one row per RU maximizing the total.

    Returns (feasible, chosen_rows).  Branches are cut when the per-AP spend
    overdraws or when an optimistic bound (sum of per-RU maxima still open)
    cannot beat the incumbent; the bound carries a relative slack so float
    associativity can never cut the true optimum.
    """
    rus = sorted(members_by_ru)
    row_lists = [table_of(tuple(members_by_ru[r])) for r in rus]
    suffix_max = [0.0] * (len(rus) + 1)
    for i in range(len(rus) - 1, -1, -1):
        suffix_max[i] = suffix_max[i + 1] + row_lists[i][0][0]

    best_local = -math.inf
    best_rows: dict | None = None
    chosen: list = [None] * len(rus)
    spend: dict = {}

    def cutoff():
        ref = max(abs(global_best), abs(best_local), 1.0)
        return max(global_best, best_local) - 1e-9 * ref

    def rec(i: int, partial: float):
        nonlocal best_local, best_rows
        if i == len(rus):
            # canonical re-sum happens in the caller; local fast sum is fine
            # for picking since rows are compared within one RU map only
            if partial > best_local:
                best_local = partial
                best_rows = {r: row for r, row in zip(rus, chosen)}
            return
        for row in row_lists[i]:
            if partial + row[0] + suffix_max[i + 1] < cutoff():
                break  # rows are sorted; nothing below can recover
            if any(spend.get(ap, 0.0) + p > budget for ap, p in row[3].items()):
                continue
            for ap, p in row[3].items():
                spend[ap] = spend.get(ap, 0.0) + p
            chosen[i] = row
            rec(i + 1, partial + row[0])
            for ap, p in row[3].items():
                spend[ap] -= p
        chosen[i] = None

    rec(0, 0.0)
    if best_rows is None:
        return False, None
    return True, best_rows


def _polish(scenario, gains, alloc, assigned):
    """Cyclic single-coordinate continuous ascent on the assigned powers."""
    from scipy.optimize import minimize_scalar

    params = scenario.params
    powers = alloc.power_of_sta_mw
    work = Allocation(
        ru_of_sta=alloc.ru_of_sta.copy(),
        power_of_sta_mw=powers.copy(),
        group_of_ap=None if alloc.group_of_ap is None else alloc.group_of_ap.copy(),
        active_groups=alloc.active_groups,
    )

    def objective() -> float:
        return evaluate(scenario, gains, work).total_throughput_bps

    current = objective()
    for _ in range(3):
        improved = False
        for u in assigned:
            ap = int(scenario.association[u])
            spent_others = 0.0
            for k in scenario.stas_of_ap(ap):
                if k != u:
                    spent_others += float(work.power_of_sta_mw[k])
            hi = min(params.p_max_sta_mw, (params.p_max_ap_mw - spent_others) * (1 - 1e-12))
            if hi <= 0:
                continue
            original = float(work.power_of_sta_mw[u])

            def neg(p: float) -> float:
                work.power_of_sta_mw[u] = p
                return -objective()

            res = minimize_scalar(neg, bounds=(0.0, hi), method="bounded",
                                  options={"xatol": 1e-10})
            # compare interior optimum, upper endpoint and the incumbent
            candidates = [(-res.fun, float(res.x)), (-neg(hi), hi)]
            best_val, best_p = max(candidates)
            if best_val > current:
                work.power_of_sta_mw[u] = best_p
                current = best_val
                improved = True
            else:
                work.power_of_sta_mw[u] = original
        if not improved:
            break
    return work


def solve_exact_report(
    scenario: Scenario,
    gains: GainMatrix,
    config: ExactConfig | None = None,
) -> SolveReport:
    """Run the exhaustive search and return the full report.

    Raises SizeLimitError outside the guard rails.  With a time budget the
    incumbent comes back flagged proven_optimal=False instead of failing.
    """
    if config is None:
        config = ExactConfig()
    params = scenario.params
    max_stas, max_rus, max_aps = config.limits
    if scenario.num_stas > max_stas or params.num_rus > max_rus \
            or scenario.num_aps > max_aps:
        raise SizeLimitError(
            f"instance ({scenario.num_stas} STAs, {params.num_rus} RUs, "
            f"{scenario.num_aps} APs) exceeds limits {config.limits}")
    if len(config.power_grid_mw) > MAX_GRID_LEVELS:
        raise SizeLimitError(
            f"power grid has {len(config.power_grid_mw)} levels > {MAX_GRID_LEVELS}")
    if config.power_grid_mw[-1] > params.p_max_sta_mw:
        raise ValueError("power grid exceeds the per-STA power cap")

    t0 = time.monotonic()
    deadline = None if config.time_budget_s is None else t0 + config.time_budget_s
    best_obj, best_pick, nodes, pruned, timed_out = _solve_grid(
        scenario, gains, config, deadline)

    if best_pick is None:
        # every RU map was cut before completion; the all-unassigned map is
        # always feasible, fall back to it
        best_pick = (enumerate_groupings(scenario.num_aps, 1)[0],
                     tuple([UNASSIGNED] * scenario.num_stas), {})

    grouping, ru_map, powers_by_ru = best_pick
    ru_of_sta = np.full(scenario.num_stas, UNASSIGNED)
    power_of_sta = np.zeros(scenario.num_stas)
    members_by_ru: dict[int, list[int]] = {}
    for u, r in enumerate(ru_map):
        if r != UNASSIGNED:
            members_by_ru.setdefault(r, []).append(u)
    for r, members in members_by_ru.items():
        for u, p in zip(members, powers_by_ru[r]):
            ru_of_sta[u] = r
            power_of_sta[u] = p
    group_of_ap = np.empty(scenario.num_aps, dtype=int)
    for bi, block in enumerate(grouping):
        for ap in block:
            group_of_ap[ap] = bi
    alloc = Allocation(
        ru_of_sta=ru_of_sta,
        power_of_sta_mw=power_of_sta,
        group_of_ap=group_of_ap,
        active_groups=frozenset(range(len(grouping))),
    )
    if config.refine_powers:
        assigned = [u for u in range(scenario.num_stas) if ru_of_sta[u] != UNASSIGNED]
        alloc = _polish(scenario, gains, alloc, assigned)

    evaluation = evaluate(scenario, gains, alloc)
    return SolveReport(
        allocation=alloc,
        evaluation=evaluation,
        objective_bps=evaluation.total_throughput_bps,
        nodes_explored=nodes,
        pruned=pruned,
        proven_optimal=not timed_out,
        wall_time_s=time.monotonic() - t0,
    )


def solve_exact(
    scenario: Scenario,
    gains: GainMatrix,
    config: ExactConfig | None = None,
) -> tuple[Allocation, EvaluationResult]:
    """Optimal allocation over groupings x RU maps x power grid."""
    report = solve_exact_report(scenario, gains, config)
    return report.allocation, report.evaluation
