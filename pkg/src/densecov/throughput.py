"""Potential throughput, density sweeps, and scaling-regime classification."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Sequence

import numpy as np

from . import coverage as _cov
from .errors import DegenerateFit
from .model import NetworkModel
from .specfun import DEFAULT_QUAD, QuadratureSpec

__all__ = [
    "SweepMetric",
    "DensitySweep",
    "RegimeTag",
    "RegimeLabel",
    "potential_throughput",
    "sweep",
    "fit_loglog_slope",
    "classify_regime",
]


class SweepMetric(str, Enum):
    COVERAGE_SINR = "coverage-sinr"
    COVERAGE_SIR = "coverage-sir"
    THROUGHPUT = "throughput"


@dataclass(frozen=True)
class DensitySweep:
    lambdas: tuple[float, ...]
    values: tuple[float, ...]
    metric: SweepMetric
    base_model: NetworkModel
    threshold_t: float

    def __post_init__(self) -> None:
        if len(self.lambdas) != len(self.values):
            raise ValueError("lambdas and values must have equal length")
        if any(b <= a for a, b in zip(self.lambdas, self.lambdas[1:])):
            raise ValueError("lambdas must be strictly increasing")


class RegimeTag(str, Enum):
    LINEAR = "linear"
    SUBLINEAR = "sublinear"
    DECAY = "decay"
    BOUNDARY_UPPER = "boundary-upper"  # alpha0 = d
    BOUNDARY_LOWER = "boundary-lower"  # alpha0 = d/2


@dataclass(frozen=True)
class RegimeLabel:
    tag: RegimeTag
    exponent: float = field(default=math.nan)

    def __post_init__(self) -> None:
        if self.tag is RegimeTag.SUBLINEAR and not 0.0 < self.exponent < 1.0:
            raise ValueError(f"sublinear exponent must be in (0,1): {self.exponent}")


def potential_throughput(
    model: NetworkModel,
    t: float,
    coverage_fn: Callable[[NetworkModel, float], float] | None = None,
) -> float:
    """Best-case area spectral efficiency: log2(1+T) * lambda * P_c(T).

    `coverage_fn` defaults to the SINR closed form; inject a stub to test
    the arithmetic in isolation.
    """
    if t <= 0:
        raise ValueError(f"threshold must be positive, got {t}")
    pc = (coverage_fn or _cov.coverage_sinr)(model, t)
    return math.log2(1.0 + t) * model.lam * pc


def sweep(
    base_model: NetworkModel,
    t: float,
    lambdas: Sequence[float],
    metric: SweepMetric,
    spec: QuadratureSpec = DEFAULT_QUAD,
) -> DensitySweep:
    """Evaluate a metric over increasing densities, other parameters fixed."""
    if len(lambdas) == 0:
        raise ValueError("lambdas must be nonempty")
    values = []
    for lam in lambdas:
        m = base_model.with_density(lam)
        if metric is SweepMetric.COVERAGE_SINR:
            values.append(_cov.coverage_sinr(m, t, spec))
        elif metric is SweepMetric.COVERAGE_SIR:
            values.append(_cov.coverage_sir(m, t, spec))
        else:
            values.append(math.log2(1.0 + t) * lam * _cov.coverage_sinr(m, t, spec))
    return DensitySweep(tuple(lambdas), tuple(values), metric, base_model, t)


def fit_loglog_slope(sw: DensitySweep, window: range | slice | None = None) -> float:
    """Least-squares slope of log10(value) against log10(lambda)."""
    if window is None:
        idx = range(len(sw.lambdas))
    elif isinstance(window, slice):
        idx = range(*window.indices(len(sw.lambdas)))
    else:
        idx = window
    lam = [sw.lambdas[i] for i in idx]
    val = [sw.values[i] for i in idx]
    if len(lam) < 3:
        raise ValueError("window must contain at least 3 points")
    if any(v <= 0.0 for v in val):
        raise DegenerateFit("log-log fit requires strictly positive values")
    return float(np.polyfit(np.log10(lam), np.log10(val), 1)[0])


def classify_regime(alpha0: float, d: int) -> RegimeLabel:
    """Asymptotic throughput-scaling regime as density grows.

    Linear above alpha0 = d, sublinear with exponent 2 - d/alpha0 between
    d/2 and d, decay below d/2; the two boundaries get explicit tags since
    the growth rate exactly there is not asserted.
    """
    if alpha0 < 0:
        raise ValueError(f"alpha0 must be nonnegative, got {alpha0}")
    if d not in (2, 3):
        raise ValueError(f"d must be 2 or 3, got {d}")
    if alpha0 == d:
        return RegimeLabel(RegimeTag.BOUNDARY_UPPER)
    if alpha0 == d / 2.0:
        return RegimeLabel(RegimeTag.BOUNDARY_LOWER)
    if alpha0 > d:
        return RegimeLabel(RegimeTag.LINEAR, 1.0)
    if alpha0 > d / 2.0:
        return RegimeLabel(RegimeTag.SUBLINEAR, 2.0 - d / alpha0)
    return RegimeLabel(RegimeTag.DECAY)
