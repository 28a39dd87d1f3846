"""Greedy per-RU construction of coordinated transmission sets.

The scheduler walks the RUs in index order and builds for each one a
conflict-free set: the still-unallocated STA with the best own-AP gain,
joined by STAs of other APs picked in least-interfering order.  Every
candidate set is scored over the full grid of discrete power levels; a
combination survives only if every member's SINR (interference from the set
itself plus noise) clears the configured threshold and no member overdraws
its AP's remaining power budget.  The best surviving (set, powers) pair is
committed, after which APs left with a budget at or below the lowest power
level have their remaining STAs withdrawn from the pool.

The target set size is set per RU by the configured policy (a fixed
ceil(U / J) quota, or re-planned from the unallocated count and the RUs still
ahead) and shrinks by one whenever no candidate of the current size survives;
a size of zero leaves the RU empty.  Grouping variables are intentionally not
synthesized: per-RU sets may imply AP pairings that no single group structure
can cover, so the returned allocation carries no grouping and is audited on
the power and RU-exclusivity constraints only.
"""

import math
from dataclasses import dataclass
from enum import Enum
from itertools import combinations, islice, product
from typing import IO

import numpy as np

from .core import UNASSIGNED, Allocation, GainMatrix, Scenario, member_sinr


class CapacityMetric(Enum):
    """How a surviving power combination is scored."""

    MIN_SINR = "min-sinr"   # log2(1 + min member SINR)
    SUM_RATE = "sum-rate"   # sum of log2(1 + SINR) over members


class TargetSizePolicy(Enum):
    """Initial conflict-free set size tried for each RU.

    STATIC aims every RU at the same quota ceil(U / J).  When U is not a
    multiple of J that quota over-packs early RUs and leaves late RUs idle
    (14 STAs on 10 RUs become 7 pairs and 3 unused RUs).  ADAPTIVE re-plans
    the quota per RU from the STAs still unallocated and the RUs still ahead,
    which serves everyone with the least sharing (4 pairs and 6 singles in
    the same case) and is the default.
    """

    STATIC = "static"
    ADAPTIVE = "adaptive"


@dataclass(frozen=True)
class HeuristicConfig:
    """Tuning knobs of the greedy scheduler."""

    # discrete transmit powers tried per member, strictly increasing; the
    # usual triple is (P_min, P_mid, P_max)
    power_levels_mw: tuple[float, ...] = (5.0, 10.0, 15.0)
    sinr_threshold_linear: float = 10.0 ** 0.2  # 2 dB
    capacity_metric: CapacityMetric = CapacityMetric.MIN_SINR
    candidate_beam_width: int = 64  # max candidate sets enumerated per RU
    target_size_policy: TargetSizePolicy = TargetSizePolicy.ADAPTIVE

    def __post_init__(self):
        levels = tuple(float(p) for p in self.power_levels_mw)
        object.__setattr__(self, "power_levels_mw", levels)
        if len(levels) < 2:
            raise ValueError("need at least two power levels")
        if levels[0] <= 0 or any(a >= b for a, b in zip(levels, levels[1:])):
            raise ValueError("power levels must be positive and strictly increasing")
        if self.sinr_threshold_linear < 0:
            raise ValueError("SINR threshold cannot be negative")
        if self.candidate_beam_width < 1:
            raise ValueError("beam width must be >= 1")


@dataclass(frozen=True)
class RuDecision:
    """One committed RU: the scheduled (STA, power mW) pairs."""

    ru: int
    members: tuple[tuple[int, float], ...]  # sorted by STA index, one per AP


def sort_stas_by_gain(scenario: Scenario, gains: GainMatrix) -> list[int]:
    """STA indices ordered by own-AP gain descending, index ascending on ties."""
    own = [float(gains.gains[u, scenario.association[u]]) for u in range(scenario.num_stas)]
    return sorted(range(scenario.num_stas), key=lambda u: (-own[u], u))


def candidate_sets(
    first_sta: int,
    unallocated: list[int],
    size: int,
    gains: GainMatrix,
    scenario: Scenario,
    config: HeuristicConfig,
) -> list[tuple[int, ...]]:
    """Enumerate candidate co-RU sets around first_sta, best-first.

    Each set holds first_sta plus size - 1 STAs drawn from size - 1 distinct
    other APs.  APs are ranked by the gain of their link to first_sta
    ascending (the least interfering AP first), and an AP contributes its
    unallocated STAs in the order they appear in the pool (own-gain
    descending).  Sets come out in lexicographic preference order over that
    ranking, truncated at the configured beam width; members inside a set are
    sorted by STA index.  If fewer than size - 1 other APs have unallocated
    STAs, no set of the requested size exists and the list is empty.
    """
    if size < 1:
        raise ValueError("set size must be >= 1")
    if first_sta not in unallocated:
        raise ValueError("first_sta must be unallocated")
    if size == 1:
        return [(first_sta,)]

    own_ap = int(scenario.association[first_sta])
    stas_by_ap: dict[int, list[int]] = {}
    for u in unallocated:
        ap = int(scenario.association[u])
        if ap != own_ap:
            stas_by_ap.setdefault(ap, []).append(u)
    ranked_aps = sorted(stas_by_ap, key=lambda n: (float(gains.gains[first_sta, n]), n))
    if len(ranked_aps) < size - 1:
        return []

    def emit():
        for ap_combo in combinations(ranked_aps, size - 1):
            for partners in product(*(stas_by_ap[ap] for ap in ap_combo)):
                yield tuple(sorted((first_sta,) + partners))

    return list(islice(emit(), config.candidate_beam_width))


def best_combo(
    sta_set: tuple[int, ...],
    gains: GainMatrix,
    scenario: Scenario,
    config: HeuristicConfig,
    remaining_budget_mw: dict[int, float] | None = None,
) -> tuple[tuple[float, ...], float] | None:
    """Best power levels for one candidate set, or None if nothing survives.

    Tries every |levels|^|set| combination; a combination is discarded when a
    member's power exceeds its AP's remaining budget or when the minimum
    member SINR (intra-set interference only; other RUs are orthogonal) falls
    below the threshold.  Survivors are ranked by the configured metric, ties
    by lower total power, then by lexicographically smaller power vector.
    Returns (powers aligned with the index-sorted set, metric value).
    """
    members = sorted(int(u) for u in sta_set)
    aps = [int(scenario.association[u]) for u in members]
    if len(set(aps)) != len(aps):
        raise ValueError("candidate set holds two STAs of one AP")
    noise = scenario.params.noise_power_mw
    gains_arr = gains.gains
    metric_kind = config.capacity_metric
    threshold = config.sinr_threshold_linear

    best: tuple[float, float, tuple[float, ...]] | None = None  # metric, total, powers
    for powers in product(config.power_levels_mw, repeat=len(members)):
        if remaining_budget_mw is not None:
            if any(p > remaining_budget_mw.get(ap, math.inf) for ap, p in zip(aps, powers)):
                continue
        co_ru = list(zip(members, aps, powers))
        sinrs = [member_sinr(u, co_ru, gains_arr, noise) for u in members]
        s_min = min(sinrs)
        if s_min < threshold:
            continue
        if metric_kind is CapacityMetric.MIN_SINR:
            metric = math.log2(1.0 + s_min)
        else:
            metric = sum(math.log2(1.0 + s) for s in sinrs)
        total = sum(powers)
        if best is None or (metric, -total) > (best[0], -best[1]):
            best = (metric, total, powers)
    if best is None:
        return None
    return best[2], best[0]


def run_heuristic(
    scenario: Scenario,
    gains: GainMatrix,
    config: HeuristicConfig | None = None,
    trace: IO[str] | None = None,
) -> Allocation:
    """Allocate RUs and powers greedily; see the module docstring.

    The result always satisfies the per-STA power cap, intra-BSS RU
    exclusivity and the per-AP budget; it carries no grouping.  When trace is
    given, one line per RU is written:

        ru=<j> size=<k> tries=<t> members=[u0,u1] powers_mw=[15,10] metric=<m>
        ru=<j> empty tries=<t>

    with members index-sorted, powers aligned, metric formatted %.6f, and
    tries counting the set sizes attempted (0 once the pool is empty).
    """
    if config is None:
        config = HeuristicConfig()
    params = scenario.params
    n_stas = scenario.num_stas
    p_min = config.power_levels_mw[0]

    pool = sort_stas_by_gain(scenario, gains)
    ru_of_sta = np.full(n_stas, UNASSIGNED)
    power_of_sta = np.zeros(n_stas)
    spent = {n: 0.0 for n in range(scenario.num_aps)}
    g_static = math.ceil(n_stas / params.num_rus)

    for j in range(params.num_rus):
        if not pool:
            if trace is not None:
                trace.write(f"ru={j} empty tries=0\n")
            continue
        if config.target_size_policy is TargetSizePolicy.STATIC:
            size = g_static
        else:
            size = math.ceil(len(pool) / (params.num_rus - j))
        tries = 0
        committed: RuDecision | None = None
        while size >= 1:
            tries += 1
            first = pool[0]
            remaining = {n: params.p_max_ap_mw - spent[n] for n in spent}
            best: tuple[float, tuple[int, ...], tuple[float, ...]] | None = None
            for cand in candidate_sets(first, pool, size, gains, scenario, config):
                result = best_combo(cand, gains, scenario, config, remaining)
                if result is None:
                    continue
                powers, metric = result
                # ties between sets keep the earlier (preferred) candidate
                if best is None or metric > best[0]:
                    best = (metric, cand, powers)
            if best is not None:
                metric, members, powers = best
                committed = RuDecision(ru=j, members=tuple(zip(members, powers)))
                for u, p in committed.members:
                    ru_of_sta[u] = j
                    power_of_sta[u] = p
                    spent[int(scenario.association[u])] += p
                    pool.remove(u)
                # an AP whose leftover budget cannot fund even the lowest
                # level is done for this TXOP
                drained = {n for n in spent if params.p_max_ap_mw - spent[n] <= p_min}
                if drained:
                    pool = [u for u in pool if int(scenario.association[u]) not in drained]
                if trace is not None:
                    m = ",".join(str(u) for u, _ in committed.members)
                    p = ",".join(f"{p:g}" for _, p in committed.members)
                    trace.write(
                        f"ru={j} size={len(members)} tries={tries} "
                        f"members=[{m}] powers_mw=[{p}] metric={metric:.6f}\n"
                    )
                break
            size -= 1
        if committed is None and trace is not None:
            trace.write(f"ru={j} empty tries={tries}\n")

    return Allocation(ru_of_sta=ru_of_sta, power_of_sta_mw=power_of_sta)
