"""Domain types and allocation scoring for multi-AP downlink coordination.

Contents:
    NetworkParams      physical and regulatory constants of one network
    Scenario           AP/STA geometry plus association
    GainMatrix         linear channel gain from every AP to every STA
    Allocation         per-STA RU and power decisions plus AP grouping
    EvaluationResult   per-STA SINR/throughput and aggregates
    FeasibilityReport  itemized constraint violations
    compute_sinr       SINR of one STA under an allocation
    evaluate           full scoring of an allocation
    check_feasibility  constraint-by-constraint audit
    throughput_gain    percent gain of one evaluation over another

All powers are linear milliwatts, all gains linear ratios.  Throughput of an
assigned STA is ru_bandwidth_hz * log2(1 + SINR); unassigned STAs contribute
exactly zero.
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import NamedTuple

import numpy as np

# RU value for an STA that is not scheduled in this TXOP.
UNASSIGNED = -1


class UndefinedGainError(ValueError):
    """Raised when a percent gain is requested against a zero baseline."""


@dataclass(frozen=True)
class NetworkParams:
    """Physical and regulatory constants shared by every allocation decision."""

    frequency_hz: float = 2.4e9          # carrier frequency
    pathloss_exponent: float = 2.5       # log-distance decay exponent
    ref_distance_m: float = 1.0          # path-loss reference distance d0
    noise_power_mw: float = 10.0 ** -9.6  # -96 dBm in linear mW
    p_max_sta_mw: float = 15.0           # per-STA per-RU transmit power cap
    p_max_ap_mw: float = 100.0           # per-AP total transmit power cap
    num_rus: int = 10                    # orthogonal RUs in the channel
    ru_bandwidth_hz: float = 2e6         # bandwidth of a single RU
    g_max: int = 4                       # maximum number of active AP groups
    sinr_threshold_linear: float = 10.0 ** 0.2  # 2 dB minimum acceptable SINR

    def __post_init__(self):
        positive = (
            self.frequency_hz, self.pathloss_exponent, self.ref_distance_m,
            self.noise_power_mw, self.p_max_sta_mw, self.p_max_ap_mw,
            self.ru_bandwidth_hz, self.sinr_threshold_linear,
        )
        if any(not (v > 0) for v in positive):
            raise ValueError("all physical parameters must be strictly positive")
        if self.num_rus < 1:
            raise ValueError("num_rus must be >= 1")
        if self.g_max < 1:
            raise ValueError("g_max must be >= 1")
        if self.p_max_sta_mw > self.p_max_ap_mw:
            raise ValueError("per-STA power cap cannot exceed the per-AP cap")


@dataclass(eq=False)
class Scenario:
    """One concrete network: parameters, AP/STA coordinates, association."""

    params: NetworkParams
    ap_positions: np.ndarray   # (N, 2) meters
    sta_positions: np.ndarray  # (U, 2) meters
    association: np.ndarray    # (U,) AP index serving each STA

    def __post_init__(self):
        self.ap_positions = np.asarray(self.ap_positions, dtype=float).reshape(-1, 2)
        self.sta_positions = np.asarray(self.sta_positions, dtype=float).reshape(-1, 2)
        self.association = np.asarray(self.association, dtype=int).reshape(-1)
        if len(self.association) != len(self.sta_positions):
            raise ValueError("association length must match the number of STAs")
        if self.num_stas == 0 or self.num_aps == 0:
            raise ValueError("scenario needs at least one AP and one STA")
        if self.association.min() < 0 or self.association.max() >= self.num_aps:
            raise ValueError("association refers to an AP that does not exist")
        served = np.bincount(self.association, minlength=self.num_aps)
        if served.min() == 0:
            raise ValueError("every AP must serve at least one STA")

    @property
    def num_aps(self) -> int:
        return len(self.ap_positions)

    @property
    def num_stas(self) -> int:
        return len(self.sta_positions)

    def stas_of_ap(self, n: int) -> list[int]:
        """Indices of the STAs associated to AP n, ascending."""
        return [int(u) for u in np.flatnonzero(self.association == n)]


@dataclass(eq=False)
class GainMatrix:
    """Linear channel gains, gains[u, n] from AP n to STA u."""

    gains: np.ndarray  # (U, N), entries in (0, 1]

    def __post_init__(self):
        self.gains = np.asarray(self.gains, dtype=float)
        if self.gains.ndim != 2:
            raise ValueError("gain matrix must be two-dimensional (STA x AP)")
        if np.any(self.gains <= 0) or np.any(self.gains > 1):
            raise ValueError("channel gains must lie in (0, 1]")


@dataclass(eq=False)
class Allocation:
    """Decision variables of one TXOP.

    ru_of_sta maps each STA to an RU index or UNASSIGNED; power_of_sta_mw is
    zero for unassigned STAs.  group_of_ap/active_groups may both be None for
    allocations produced by solvers that do not decide a grouping; see
    check_feasibility for how that case is reported.
    """

    ru_of_sta: np.ndarray        # (U,) int, UNASSIGNED for idle STAs
    power_of_sta_mw: np.ndarray  # (U,) float mW
    group_of_ap: np.ndarray | None = None  # (N,) group id per AP
    active_groups: frozenset[int] | None = None

    def __post_init__(self):
        self.ru_of_sta = np.asarray(self.ru_of_sta, dtype=int).reshape(-1)
        self.power_of_sta_mw = np.asarray(self.power_of_sta_mw, dtype=float).reshape(-1)
        if len(self.ru_of_sta) != len(self.power_of_sta_mw):
            raise ValueError("ru_of_sta and power_of_sta_mw must have equal length")
        if (self.group_of_ap is None) != (self.active_groups is None):
            raise ValueError("group_of_ap and active_groups must be set together")
        if self.group_of_ap is not None:
            self.group_of_ap = np.asarray(self.group_of_ap, dtype=int).reshape(-1)
            self.active_groups = frozenset(int(g) for g in self.active_groups)

    def canonical_grouping(self) -> tuple[tuple[int, ...] | None, frozenset[int] | None]:
        """Relabel groups 0..k-1 ordered by smallest member AP.

        Active groups with no member keep only their count (labels are
        arbitrary), so allocations differing in group labels compare equal.
        """
        if self.group_of_ap is None:
            return None, None
        first_member: dict[int, int] = {}
        for ap, g in enumerate(self.group_of_ap):
            first_member.setdefault(int(g), ap)
        order = sorted(first_member, key=first_member.get)
        relabel = {g: i for i, g in enumerate(order)}
        members = tuple(relabel[int(g)] for g in self.group_of_ap)
        n_used_active = sum(1 for g in first_member if g in self.active_groups)
        n_empty_active = len(self.active_groups) - n_used_active
        active = frozenset(relabel[g] for g in self.active_groups if g in relabel)
        active |= frozenset(range(len(order), len(order) + n_empty_active))
        return members, active

    def __eq__(self, other):
        if not isinstance(other, Allocation):
            return NotImplemented
        return (
            np.array_equal(self.ru_of_sta, other.ru_of_sta)
            and np.array_equal(self.power_of_sta_mw, other.power_of_sta_mw)
            and self.canonical_grouping() == other.canonical_grouping()
        )


@dataclass(eq=False)
class EvaluationResult:
    """Scores of one allocation: per-STA SINR/throughput and aggregates."""

    sinr_of_sta: np.ndarray            # (U,) linear
    throughput_of_sta_bps: np.ndarray  # (U,) bits/s
    total_throughput_bps: float
    power_used_by_ap_mw: np.ndarray    # (N,) mW


class ConstraintId(Enum):
    """Constraint families of the allocation model.

    ONE_RU is structurally enforced (the RU map cannot hold two RUs for one
    STA), so it never appears in a report; it is kept for completeness.
    ONE_GROUP covers both exclusive membership and the membership-activation
    link (a member AP implies its group is active), plus the optional
    per-group size cap.
    """

    ONE_RU = 5
    STA_POWER = 6
    NO_INTRA_BSS_REUSE = 7
    AP_POWER = 8
    ONE_GROUP = 9
    GROUP_CAP = 11
    GROUP_RU_REUSE = 12


class Violation(NamedTuple):
    constraint: ConstraintId
    indices: tuple[int, ...]
    message: str


@dataclass(eq=False)
class FeasibilityReport:
    """Outcome of check_feasibility.

    violations is empty iff the allocation satisfies every constraint family
    that was checked; families that could not be checked because the
    allocation carries no grouping are listed in not_applicable instead.
    """

    violations: list[Violation] = field(default_factory=list)
    not_applicable: tuple[ConstraintId, ...] = ()

    @property
    def feasible(self) -> bool:
        return not self.violations


def _check_dims(scenario: Scenario, gains: GainMatrix | None, alloc: Allocation) -> None:
    if len(alloc.ru_of_sta) != scenario.num_stas:
        raise ValueError("allocation does not match the scenario's STA count")
    if gains is not None and gains.gains.shape != (scenario.num_stas, scenario.num_aps):
        raise ValueError("gain matrix does not match the scenario's dimensions")
    if alloc.group_of_ap is not None and len(alloc.group_of_ap) != scenario.num_aps:
        raise ValueError("group_of_ap does not match the scenario's AP count")
    ru = alloc.ru_of_sta
    bad = (ru != UNASSIGNED) & ((ru < 0) | (ru >= scenario.params.num_rus))
    if np.any(bad):
        raise ValueError("RU index out of range for this scenario")


def member_sinr(
    u: int,
    co_ru: list[tuple[int, int, float]],
    gains_arr: np.ndarray,
    noise_mw: float,
) -> float:
    """SINR of STA u given the (sta, ap, power) triples sharing its RU.

    co_ru must be ordered by STA index and contain u itself; interference is
    accumulated in that order so every caller produces bit-identical sums.
    """
    num = 0.0
    den = noise_mw
    for k, ap_k, p_k in co_ru:
        if k == u:
            num = p_k * gains_arr[u, ap_k]
        else:
            den += p_k * gains_arr[u, ap_k]
    return num / den


def compute_sinr(scenario: Scenario, gains: GainMatrix, alloc: Allocation, u: int) -> float:
    """Linear SINR of STA u: own received power over co-RU interference plus noise.

    STAs sharing u's RU interfere through the gain from their serving AP to u;
    STAs on other RUs are orthogonal.  An unassigned STA has SINR 0 by
    convention (it contributes log2(1) = 0 to any objective).
    """
    _check_dims(scenario, gains, alloc)
    ru = int(alloc.ru_of_sta[u])
    if ru == UNASSIGNED:
        return 0.0
    co_ru = [
        (int(k), int(scenario.association[k]), float(alloc.power_of_sta_mw[k]))
        for k in range(scenario.num_stas)
        if alloc.ru_of_sta[k] == ru
    ]
    return member_sinr(u, co_ru, gains.gains, scenario.params.noise_power_mw)


def evaluate(scenario: Scenario, gains: GainMatrix, alloc: Allocation) -> EvaluationResult:
    """Score an allocation: per-STA SINR and throughput, totals, per-AP power.

    The total is accumulated over STAs in index order; solvers that need to
    compare objectives bit-exactly rely on that fixed order.
    """
    _check_dims(scenario, gains, alloc)
    n_stas, n_aps = scenario.num_stas, scenario.num_aps
    params = scenario.params
    members_by_ru: dict[int, list[tuple[int, int, float]]] = {}
    for u in range(n_stas):
        ru = int(alloc.ru_of_sta[u])
        if ru != UNASSIGNED:
            members_by_ru.setdefault(ru, []).append(
                (u, int(scenario.association[u]), float(alloc.power_of_sta_mw[u]))
            )

    sinr = np.zeros(n_stas)
    thr = np.zeros(n_stas)
    power_by_ap = np.zeros(n_aps)
    total = 0.0
    for u in range(n_stas):
        ru = int(alloc.ru_of_sta[u])
        if ru != UNASSIGNED:
            s = member_sinr(u, members_by_ru[ru], gains.gains, params.noise_power_mw)
            sinr[u] = s
            thr[u] = params.ru_bandwidth_hz * math.log2(1.0 + s)
        total += thr[u]
        power_by_ap[scenario.association[u]] += alloc.power_of_sta_mw[u]
    return EvaluationResult(
        sinr_of_sta=sinr,
        throughput_of_sta_bps=thr,
        total_throughput_bps=total,
        power_used_by_ap_mw=power_by_ap,
    )


def check_feasibility(
    scenario: Scenario,
    alloc: Allocation,
    max_group_size: int | None = None,
) -> FeasibilityReport:
    """Audit an allocation against every constraint family.

    Returns one Violation per breached (constraint, index) pair.  When the
    allocation carries no grouping (group_of_ap is None) the grouping families
    cannot be judged and are reported in not_applicable, never as violations.
    max_group_size optionally caps the member count of a group (default: no
    cap below the number of APs).
    """
    _check_dims(scenario, None, alloc)
    params = scenario.params
    v: list[Violation] = []

    # (6): 0 <= P <= P_max, and positive power only on an assigned RU.
    for u in range(scenario.num_stas):
        p = float(alloc.power_of_sta_mw[u])
        if alloc.ru_of_sta[u] == UNASSIGNED:
            if p != 0.0:
                v.append(Violation(ConstraintId.STA_POWER, (u,),
                                   f"STA {u} is unassigned but transmits {p} mW"))
        elif p < 0.0 or p > params.p_max_sta_mw:
            v.append(Violation(ConstraintId.STA_POWER, (u,),
                               f"STA {u} power {p} mW outside [0, {params.p_max_sta_mw}]"))

    # (7): an RU serves at most one STA of any single AP.
    for n in range(scenario.num_aps):
        seen: dict[int, int] = {}
        for u in scenario.stas_of_ap(n):
            ru = int(alloc.ru_of_sta[u])
            if ru == UNASSIGNED:
                continue
            if ru in seen:
                v.append(Violation(ConstraintId.NO_INTRA_BSS_REUSE, (n, ru),
                                   f"AP {n} schedules STAs {seen[ru]} and {u} on RU {ru}"))
            else:
                seen[ru] = u

    # (8): per-AP power budget.
    for n in range(scenario.num_aps):
        spent = 0.0
        for u in scenario.stas_of_ap(n):
            spent += float(alloc.power_of_sta_mw[u])
        if spent > params.p_max_ap_mw:
            v.append(Violation(ConstraintId.AP_POWER, (n,),
                               f"AP {n} spends {spent} mW > {params.p_max_ap_mw} mW"))

    if alloc.group_of_ap is None:
        return FeasibilityReport(
            violations=v,
            not_applicable=(ConstraintId.ONE_GROUP, ConstraintId.GROUP_CAP,
                            ConstraintId.GROUP_RU_REUSE),
        )

    # (9)+(10): exactly one group per AP holds by map construction; a member
    # AP requires its group active, and the optional size cap binds members.
    groups = alloc.group_of_ap
    active = alloc.active_groups
    for n in range(scenario.num_aps):
        g = int(groups[n])
        if g not in active:
            v.append(Violation(ConstraintId.ONE_GROUP, (n,),
                               f"AP {n} is a member of group {g} which is not active"))
    cap = max_group_size if max_group_size is not None else scenario.num_aps
    sizes: dict[int, int] = {}
    for g in groups:
        sizes[int(g)] = sizes.get(int(g), 0) + 1
    for g, size in sorted(sizes.items()):
        if size > cap:
            v.append(Violation(ConstraintId.ONE_GROUP, (g,),
                               f"group {g} has {size} member APs > cap {cap}"))

    # (11): bounded number of active groups.
    if len(active) > params.g_max:
        v.append(Violation(ConstraintId.GROUP_CAP, tuple(sorted(active)),
                           f"{len(active)} active groups > G_max = {params.g_max}"))

    # (12): cross-AP RU sharing only inside one group.
    aps_on_ru: dict[int, list[int]] = {}
    for u in range(scenario.num_stas):
        ru = int(alloc.ru_of_sta[u])
        if ru != UNASSIGNED:
            aps_on_ru.setdefault(ru, []).append(int(scenario.association[u]))
    for ru in sorted(aps_on_ru):
        ap_list = sorted(set(aps_on_ru[ru]))
        used_groups = sorted({int(groups[n]) for n in ap_list})
        if len(used_groups) > 1:
            v.append(Violation(ConstraintId.GROUP_RU_REUSE, (ru,),
                               f"RU {ru} is shared by APs {ap_list} from groups {used_groups}"))

    return FeasibilityReport(violations=v)


def throughput_gain(test: EvaluationResult, baseline: EvaluationResult) -> float:
    """Signed percent throughput gain of test over baseline."""
    base = baseline.total_throughput_bps
    if base <= 0.0:
        raise UndefinedGainError("baseline throughput is zero; gain undefined")
    return 100.0 * (test.total_throughput_bps - base) / base
