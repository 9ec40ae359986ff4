"""Independent Monte Carlo oracle for the analytic coverage expressions.

Each trial draws a Poisson number of BSs in a truncated d-ball, applies
Rayleigh fading and nearest-BS association, and reports the resulting SINR.
Only radial coordinates are sampled: with nearest-BS association and an
isotropic path gain the directions never enter the SINR, and the radial
marginal of a uniform point in the (half-)ball is R * U^(1/d) in all three
deployment geometries.

Randomness is counter-based: every trial derives an independent splitmix64
stream from (master_seed, trial_index), so results are bit-identical for a
fixed seed no matter how trials are scheduled across workers.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from numba import njit

from .model import NetworkModel

__all__ = [
    "SimConfig",
    "McEstimate",
    "TrialStream",
    "truncation_radius",
    "run_trial",
    "estimate_coverage",
    "nearest_distances",
]

_U64 = np.uint64
_GOLDEN = _U64(0x9E3779B97F4A7C15)
_STREAM_SALT = _U64(0xD1B54A32D192ED03)
_INV_2_53 = 1.0 / 9007199254740992.0


@dataclass(frozen=True)
class SimConfig:
    trials: int
    master_seed: int
    tail_fraction_eps: float = 1e-3
    record_distances: bool = False

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if not 0.0 < self.tail_fraction_eps < 0.1:
            raise ValueError(
                f"tail_fraction_eps must be in (0, 0.1), got {self.tail_fraction_eps}"
            )
        if not 0 <= self.master_seed < 2**64:
            raise ValueError("master_seed must fit in 64 unsigned bits")


@dataclass(frozen=True)
class McEstimate:
    p_hat: float
    trials: int
    ci_half_width: float  # 3-sigma normal-approximation binomial half width
    empty_realizations: int


@dataclass(frozen=True)
class TrialStream:
    """Identifies one trial's independent random stream."""

    master_seed: int
    trial_index: int


def truncation_radius(model: NetworkModel, eps: float) -> float:
    """Simulation region radius bounding the neglected far interference.

    Chooses R so that the mean interference from BSs beyond R is at most
    eps times the mean interference from the annulus (R_c, R]; the ratio is
    density-free.  Never less than 10 R_c.
    """
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    pl = model.pl
    d = model.dim.d
    r = pl.r_c * ((1.0 + eps) / eps) ** (1.0 / (pl.alpha1 - d))
    return max(r, 10.0 * pl.r_c)


@njit(cache=True, nogil=True, inline="always")
def _mix(x):
    # splitmix64 finalizer
    z = x + _U64(0x9E3779B97F4A7C15)
    z = (z ^ (z >> _U64(30))) * _U64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> _U64(27))) * _U64(0x94D049BB133111EB)
    return z ^ (z >> _U64(31))


@njit(cache=True, nogil=True, inline="always")
def _uniform(key, ctr):
    # open (0, 1): 53-bit mantissa offset by half an ulp
    bits = _mix(key + ctr * _U64(0x9E3779B97F4A7C15))
    return (np.float64(bits >> _U64(11)) + 0.5) * _INV_2_53


@njit(cache=True, nogil=True)
def _poisson(key, ctr, mu):
    """Counter-based Poisson draw; returns (count, advanced counter).

    Multiplicative inversion for small means, Hormann's PTRS transformed
    rejection for large ones.
    """
    if mu < 10.0:
        limit = math.exp(-mu)
        k = -1
        prod = 1.0
        while prod > limit:
            prod *= _uniform(key, ctr)
            ctr += _U64(1)
            k += 1
        return k, ctr
    b = 0.931 + 2.53 * math.sqrt(mu)
    a = -0.059 + 0.02483 * b
    inv_alpha = 1.1239 + 1.1328 / (b - 3.4)
    v_r = 0.9277 - 3.6224 / (b - 2.0)
    log_mu = math.log(mu)
    while True:
        u = _uniform(key, ctr) - 0.5
        ctr += _U64(1)
        v = _uniform(key, ctr)
        ctr += _U64(1)
        us = 0.5 - abs(u)
        k = int(math.floor((2.0 * a / us + b) * u + mu + 0.43))
        if us >= 0.07 and v <= v_r:
            return k, ctr
        if k < 0 or (us < 0.013 and v > us):
            continue
        lhs = math.log(v * inv_alpha / (a / (us * us) + b))
        if lhs <= k * log_mu - mu - math.lgamma(k + 1.0):
            return k, ctr


@njit(cache=True, nogil=True)
def _trial_sinr(key, mean_n, region_r, inv_d, a0, a1, rc, eta, sigma2):
    """One trial: (sinr, nearest distance); sinr = -1 flags an empty realization."""
    ctr = _U64(0)
    n, ctr = _poisson(key, ctr, mean_n)
    if n == 0:
        return -1.0, -1.0
    nearest = math.inf
    nearest_p = 0.0
    total_p = 0.0
    for _ in range(n):
        r = region_r * _uniform(key, ctr) ** inv_d
        ctr += _U64(1)
        h = -math.log(_uniform(key, ctr))
        ctr += _U64(1)
        if r <= rc:
            g = r**-a0
        else:
            g = eta * r**-a1
        p = h * g
        total_p += p
        if r < nearest:
            nearest = r
            nearest_p = p
    denom = sigma2 + (total_p - nearest_p)
    if denom <= 0.0:
        return math.inf, nearest
    return nearest_p / denom, nearest


@njit(cache=True, nogil=True)
def _run_block(
    master_seed,
    start,
    stop,
    mean_n,
    region_r,
    inv_d,
    a0,
    a1,
    rc,
    eta,
    sigma2,
    t_grid,
    counts,
    empties,
    dists,
    record,
):
    for i in range(start, stop):
        key = _mix(_U64(master_seed) ^ (_U64(i) * _STREAM_SALT))
        sinr, nearest = _trial_sinr(
            key, mean_n, region_r, inv_d, a0, a1, rc, eta, sigma2
        )
        if record:
            dists[i - start] = nearest
        if sinr < 0.0:
            empties[0] += 1
            continue  # empty realization: not covered at any threshold
        for j in range(t_grid.shape[0]):
            if sinr > t_grid[j]:
                counts[j] += 1


def _stream_key(master_seed: int, trial_index: int) -> int:
    # numpy warns on intended uint64 wraparound; the compiled kernels wrap silently
    with np.errstate(over="ignore"):
        return int(_mix.py_func(_U64(master_seed) ^ (_U64(trial_index) * _STREAM_SALT)))


def run_trial(
    model: NetworkModel, region_radius: float, trial_rng: TrialStream
) -> float | None:
    """Simulate one deployment; returns the SINR, or None if no BS fell
    inside the region (an empty realization, counted as not covered)."""
    if region_radius <= 0:
        raise ValueError(f"region_radius must be positive, got {region_radius}")
    pl = model.pl
    d = model.dim.d
    mean_n = model.lam * model.dim.v_d * region_radius**d
    key = _U64(_stream_key(trial_rng.master_seed, trial_rng.trial_index))
    sinr, _ = _trial_sinr(
        key, mean_n, region_radius, 1.0 / d, pl.alpha0, pl.alpha1, pl.r_c, pl.eta,
        model.sigma2,
    )
    return None if sinr < 0.0 else sinr


def _simulate(
    model: NetworkModel, t_grid, config: SimConfig, workers: int, record: bool
):
    pl = model.pl
    d = model.dim.d
    region_r = truncation_radius(model, config.tail_fraction_eps)
    mean_n = model.lam * model.dim.v_d * region_r**d
    t_arr = np.asarray(t_grid, dtype=np.float64)
    trials = config.trials

    def block(start: int, stop: int):
        counts = np.zeros(t_arr.shape[0], dtype=np.int64)
        empties = np.zeros(1, dtype=np.int64)
        dists = np.empty(stop - start if record else 0, dtype=np.float64)
        _run_block(
            _U64(config.master_seed), start, stop, mean_n, region_r, 1.0 / d,
            pl.alpha0, pl.alpha1, pl.r_c, pl.eta, model.sigma2,
            t_arr, counts, empties, dists, record,
        )
        return counts, int(empties[0]), dists

    if workers <= 1:
        results = [block(0, trials)]
    else:
        step = -(-trials // workers)
        ranges = [(s, min(s + step, trials)) for s in range(0, trials, step)]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda r: block(*r), ranges))

    counts = np.zeros(t_arr.shape[0], dtype=np.int64)
    empties = 0
    dist_parts = []
    for c, e, dd in results:
        counts += c
        empties += e
        if record:
            dist_parts.append(dd)
    dists = np.concatenate(dist_parts) if record else None
    return counts, empties, dists


def estimate_coverage(
    model: NetworkModel,
    t_grid,
    sim_config: SimConfig,
    workers: int = 1,
) -> list[McEstimate]:
    """Empirical coverage over a threshold grid with common random numbers.

    Every trial's SINR is reused across the whole grid, so p_hat is exactly
    non-increasing along an increasing grid.  Deterministic for a fixed
    master_seed, independent of the worker count.
    """
    if len(t_grid) == 0:
        raise ValueError("t_grid must be nonempty")
    counts, empties, _ = _simulate(model, t_grid, sim_config, workers, record=False)
    n = sim_config.trials
    out = []
    for c in counts:
        p = c / n
        out.append(McEstimate(p, n, 3.0 * math.sqrt(p * (1.0 - p) / n), empties))
    return out


def nearest_distances(
    model: NetworkModel, sim_config: SimConfig, workers: int = 1
) -> np.ndarray:
    """Nearest-BS distance per non-empty trial, for distribution checks."""
    _, _, dists = _simulate(model, [math.inf], sim_config, workers, record=True)
    return dists[dists >= 0.0]
