"""Shared builders for the test suite."""

import numpy as np
from hypothesis import settings

from mapcsim import NetworkParams, Scenario, UNASSIGNED, Allocation

settings.register_profile("suite", deadline=None, max_examples=60, derandomize=True)
settings.load_profile("suite")


def make_scenario(ap_positions, sta_positions, association, params=None) -> Scenario:
    return Scenario(
        ap_positions=np.asarray(ap_positions, dtype=float),
        sta_positions=np.asarray(sta_positions, dtype=float),
        association=np.asarray(association, dtype=int),
        params=params or NetworkParams(),
    )


def single_link_scenario(distance_m: float, params=None) -> Scenario:
    """One AP at the origin, one STA on the x axis."""
    return make_scenario([[0.0, 0.0]], [[distance_m, 0.0]], [0], params)


def random_partition(n: int, rng, max_blocks: int) -> list[list[int]]:
    """Uniform-ish random set partition of range(n) with at most max_blocks blocks."""
    while True:
        blocks: list[list[int]] = []
        for item in range(n):
            choices = len(blocks) + (1 if len(blocks) < max_blocks else 0)
            pick = int(rng.integers(choices))
            if pick == len(blocks):
                blocks.append([item])
            else:
                blocks[pick].append(item)
        if len(blocks) <= max_blocks:
            return blocks


def random_feasible_allocation(scenario, rng, levels=(5.0, 10.0, 15.0),
                               p_unassigned: float = 0.15) -> Allocation:
    """Draw a random allocation satisfying every constraint family.

    Constructive: draw a grouping first, then give each STA either no RU or
    an RU that neither its own AP nor any AP outside its group is using, then
    a random grid power.  The per-AP budget is respected by down-leveling
    when a draw would overdraw (the grid's lowest level always fits at these
    test sizes).
    """
    params = scenario.params
    n_aps, n_stas = scenario.num_aps, scenario.num_stas
    blocks = random_partition(n_aps, rng, params.g_max)
    group_of_ap = np.zeros(n_aps, dtype=int)
    for gid, block in enumerate(blocks):
        for ap in block:
            group_of_ap[ap] = gid

    ru_of_sta = np.full(n_stas, UNASSIGNED)
    power = np.zeros(n_stas)
    used_by_ap: dict[tuple[int, int], bool] = {}
    ru_group: dict[int, int] = {}
    spent = np.zeros(n_aps)
    for u in rng.permutation(n_stas):
        if rng.random() < p_unassigned:
            continue
        ap = int(scenario.association[u])
        ok = [j for j in range(params.num_rus)
              if not used_by_ap.get((ap, j))
              and (j not in ru_group or ru_group[j] == group_of_ap[ap])]
        if not ok:
            continue
        j = int(rng.choice(ok))
        p = float(rng.choice(levels))
        while spent[ap] + p > params.p_max_ap_mw and p > levels[0]:
            p = max(l for l in levels if l < p)
        if spent[ap] + p > params.p_max_ap_mw:
            continue
        ru_of_sta[u] = j
        power[u] = p
        used_by_ap[(ap, j)] = True
        ru_group[j] = int(group_of_ap[ap])
        spent[ap] += p
    return Allocation(ru_of_sta=ru_of_sta, power_of_sta_mw=power,
                      group_of_ap=group_of_ap,
                      active_groups=frozenset(range(len(blocks))))
