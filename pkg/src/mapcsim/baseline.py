"""Non-coordinated benchmark: random RUs, maximum power, no cooperation.

Each AP draws, independently of every other AP, a uniformly random injective
map from its STAs to RUs (a uniform subset of STAs is served if there are
more STAs than RUs) and transmits to each at the per-STA maximum power.
Cross-AP RU collisions just happen at the natural random rate and degrade
SINR.  All APs sit in one group so collisions are representable within the
model.  Per-AP draws come from independent child streams of one seed, so the
result does not depend on AP iteration order.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .core import UNASSIGNED, Allocation, Scenario
from .propagation import channel_gain


class CapMode(Enum):
    """What to do when max-power transmission overdraws an AP's budget."""

    SCALE = "scale"        # shrink all of the AP's powers uniformly to the cap
    TRUNCATE = "truncate"  # drop the lowest-gain STAs until within the cap


@dataclass(frozen=True)
class BaselineConfig:
    seed: int = 0
    cap_mode: CapMode = CapMode.SCALE


def non_coordinated_allocate(scenario: Scenario, config: BaselineConfig | None = None) -> Allocation:
    """One-shot uncoordinated allocation; deterministic given the seed."""
    if config is None:
        config = BaselineConfig()
    params = scenario.params
    n_rus = params.num_rus
    ru_of_sta = np.full(scenario.num_stas, UNASSIGNED)
    power_of_sta = np.zeros(scenario.num_stas)

    streams = np.random.SeedSequence(config.seed).spawn(scenario.num_aps)
    for n in range(scenario.num_aps):
        rng = np.random.default_rng(streams[n])
        stas = scenario.stas_of_ap(n)
        if len(stas) > n_rus:
            served = [stas[i] for i in rng.choice(len(stas), size=n_rus, replace=False)]
        else:
            served = list(stas)
        rus = rng.choice(n_rus, size=len(served), replace=False)
        for u, r in zip(served, rus):
            ru_of_sta[u] = int(r)
            power_of_sta[u] = params.p_max_sta_mw

        total = params.p_max_sta_mw * len(served)
        if total > params.p_max_ap_mw:
            if config.cap_mode is CapMode.SCALE:
                factor = params.p_max_ap_mw / total
                for u in served:
                    power_of_sta[u] *= factor
                # rounding can leave the re-summed spend one ulp over the
                # cap; shave the last STA until the audit-order sum fits
                while True:
                    spent = 0.0
                    for u in stas:
                        spent += float(power_of_sta[u])
                    if spent <= params.p_max_ap_mw:
                        break
                    worst = max(served)
                    power_of_sta[worst] = np.nextafter(power_of_sta[worst], 0.0)
            else:
                # keep the best links, drop from the weakest up
                def own_gain(u: int) -> float:
                    d = float(np.linalg.norm(
                        scenario.sta_positions[u] - scenario.ap_positions[n]))
                    return channel_gain(max(d, params.ref_distance_m), params)

                keep = int(params.p_max_ap_mw // params.p_max_sta_mw)
                ranked = sorted(served, key=lambda u: (-own_gain(u), u))
                for u in ranked[keep:]:
                    ru_of_sta[u] = UNASSIGNED
                    power_of_sta[u] = 0.0

    return Allocation(
        ru_of_sta=ru_of_sta,
        power_of_sta_mw=power_of_sta,
        group_of_ap=np.zeros(scenario.num_aps, dtype=int),
        active_groups=frozenset({0}),
    )
