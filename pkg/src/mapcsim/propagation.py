"""Log-distance channel model and random scenario generation.

The channel is deterministic log-distance path loss:

    PL(d) [dB] = PL(d0) + 10 * eta * log10(d / d0),   PL(d0) = 20 * log10(4 pi d0 / lambda)
    H(d)       = 10 ** (-PL(d) / 10)

with lambda the carrier wavelength.  Distances below d0 are clamped to d0
(the model is undefined there and would otherwise amplify).

Scenario generation follows a fixed recipe: APs sit on a regular polygon
(square for four APs) sized so the mean pairwise AP distance hits a target;
each STA is associated uniformly at random subject to every AP serving at
least one STA; a configured fraction of STAs sit close to their AP with a
truncated-Rayleigh radius, the rest uniformly in the outer half of the
coverage disk.  All randomness comes from one explicit seed.
"""

import csv
import math
from dataclasses import dataclass

import numpy as np

from .core import GainMatrix, NetworkParams, Scenario

SPEED_OF_LIGHT_M_S = 299792458.0


@dataclass(frozen=True)
class PlacementConfig:
    """Geometry and clustering knobs of the scenario generator."""

    coverage_radius_m: float = 10.0          # R, maximum STA distance from its AP
    mean_inter_ap_distance_m: float = 11.74  # target average pairwise AP distance
    near_fraction: float = 0.45              # p, share of STAs clustered near their AP
    rayleigh_shape_divisor: float = 3.0      # a, near radii ~ Rayleigh(sigma = R / a)
    seed: int = 0

    def __post_init__(self):
        if not (0.0 <= self.near_fraction <= 1.0):
            raise ValueError("near_fraction must lie in [0, 1]")
        if self.rayleigh_shape_divisor <= 0:
            raise ValueError("rayleigh_shape_divisor must be positive")
        if self.coverage_radius_m <= 0 or self.mean_inter_ap_distance_m <= 0:
            raise ValueError("radii and distances must be positive")


def path_loss_db(d: float, params: NetworkParams) -> float:
    """Log-distance path loss in dB at distance d meters.

    d <= 0 is a domain error; 0 < d < d0 is clamped to d0.
    """
    if d <= 0:
        raise ValueError("distance must be strictly positive")
    d0 = params.ref_distance_m
    d = max(d, d0)
    wavelength = SPEED_OF_LIGHT_M_S / params.frequency_hz
    pl_ref = 20.0 * math.log10(4.0 * math.pi * d0 / wavelength)
    return pl_ref + 10.0 * params.pathloss_exponent * math.log10(d / d0)


def channel_gain(d: float, params: NetworkParams) -> float:
    """Linear channel gain 10^(-PL(d)/10), in (0, 1] for any sane carrier."""
    return 10.0 ** (-path_loss_db(d, params) / 10.0)


def build_gain_matrix(scenario: Scenario) -> GainMatrix:
    """Channel gain from every AP to every STA (serving and interfering links)."""
    n_stas, n_aps = scenario.num_stas, scenario.num_aps
    gains = np.empty((n_stas, n_aps))
    for u in range(n_stas):
        for n in range(n_aps):
            d = float(np.linalg.norm(scenario.sta_positions[u] - scenario.ap_positions[n]))
            # coincident positions fall under the d0 clamp
            gains[u, n] = channel_gain(max(d, scenario.params.ref_distance_m), scenario.params)
    return GainMatrix(gains)


def place_aps(config: PlacementConfig, n_aps: int = 4) -> np.ndarray:
    """AP coordinates on a regular polygon centered at the origin.

    The circumradius is chosen so the mean pairwise distance equals
    mean_inter_ap_distance_m exactly.  Four APs give an axis-aligned square
    of side mean * 6 / (4 + 2 sqrt(2)).  A single AP sits at the origin.
    """
    if n_aps < 1:
        raise ValueError("need at least one AP")
    if n_aps == 1:
        return np.zeros((1, 2))
    # mean chord of the unit-circumradius polygon
    chord_sum = 0.0
    for i in range(n_aps):
        for j in range(i + 1, n_aps):
            chord_sum += 2.0 * math.sin(math.pi * (j - i) / n_aps)
    n_pairs = n_aps * (n_aps - 1) // 2
    radius = config.mean_inter_ap_distance_m * n_pairs / chord_sum
    angles = 2.0 * math.pi * (np.arange(n_aps) + 0.5) / n_aps
    return radius * np.stack([np.cos(angles), np.sin(angles)], axis=1)


def generate_scenario(
    n_aps: int,
    n_stas: int,
    params: NetworkParams,
    config: PlacementConfig,
) -> Scenario:
    """Draw one random network instance, fully reproducible from config.seed.

    Draw order (fixed for reproducibility): association vectors are redrawn
    whole until every AP serves at least one STA; then a random subset of
    round(near_fraction * n_stas) STAs is marked near; then per STA in index
    order a radius (near: Rayleigh(sigma = R/a) resampled until <= R; far:
    uniform on [R/2, R]) and a uniform angle.
    """
    if n_stas < n_aps:
        raise ValueError("cannot give every AP an STA: n_stas < n_aps")
    rng = np.random.default_rng(config.seed)
    ap_positions = place_aps(config, n_aps)

    while True:
        association = rng.integers(0, n_aps, size=n_stas)
        if len(np.unique(association)) == n_aps:
            break

    n_near = round(config.near_fraction * n_stas)
    near = np.zeros(n_stas, dtype=bool)
    near[rng.permutation(n_stas)[:n_near]] = True

    radius_cap = config.coverage_radius_m
    sigma = radius_cap / config.rayleigh_shape_divisor
    sta_positions = np.empty((n_stas, 2))
    for u in range(n_stas):
        if near[u]:
            # rejection keeps the in-range density Rayleigh-shaped instead of
            # piling rejected mass onto the coverage edge
            r = rng.rayleigh(sigma)
            while r > radius_cap:
                r = rng.rayleigh(sigma)
        else:
            r = rng.uniform(0.5 * radius_cap, radius_cap)
        theta = rng.uniform(0.0, 2.0 * math.pi)
        sta_positions[u] = ap_positions[association[u]] + [r * math.cos(theta), r * math.sin(theta)]

    return Scenario(params=params, ap_positions=ap_positions,
                    sta_positions=sta_positions, association=association)


def rescale_ap_distance(scenario: Scenario, new_mean_m: float) -> Scenario:
    """Move the APs so their mean pairwise distance becomes new_mean_m.

    Every STA keeps its offset from its serving AP, so only the AP layout
    stretches; per-link distances to the serving AP are unchanged.
    """
    if new_mean_m <= 0:
        raise ValueError("target mean distance must be positive")
    n_aps = scenario.num_aps
    if n_aps < 2:
        raise ValueError("rescaling needs at least two APs")
    dists = [
        float(np.linalg.norm(scenario.ap_positions[i] - scenario.ap_positions[j]))
        for i in range(n_aps) for j in range(i + 1, n_aps)
    ]
    factor = new_mean_m / (sum(dists) / len(dists))
    new_aps = scenario.ap_positions * factor
    offsets = scenario.sta_positions - scenario.ap_positions[scenario.association]
    return Scenario(
        params=scenario.params,
        ap_positions=new_aps,
        sta_positions=new_aps[scenario.association] + offsets,
        association=scenario.association.copy(),
    )


def export_positions_csv(scenario: Scenario, path) -> None:
    """Write AP and STA coordinates as CSV (kind,index,x_m,y_m,ap_of_sta)."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["kind", "index", "x_m", "y_m", "ap_of_sta"])
        for n, (x, y) in enumerate(scenario.ap_positions):
            writer.writerow(["ap", n, repr(float(x)), repr(float(y)), ""])
        for u, (x, y) in enumerate(scenario.sta_positions):
            writer.writerow(["sta", u, repr(float(x)), repr(float(y)),
                             int(scenario.association[u])])
