"""Deployment geometry, dual-slope path loss and the 2D-equivalence mapping.

All quantities are in normalized units: unit transmit power, dimensionless
path gain, BS density per unit d-volume.  Types are immutable and safe to
share across threads.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum

from .errors import DivergentInterference, InvalidExponents, InvalidScalar

__all__ = [
    "DimTag",
    "Dimension",
    "DualSlopePathLoss",
    "NetworkModel",
    "Equivalent2DParams",
    "ball_volume_coeff",
    "make_model",
    "path_loss",
    "equivalent_2d",
]


class DimTag(str, Enum):
    """Deployment geometry: full plane, full space, or upper half space."""

    TWO_D = "2d"
    THREE_D = "3d"
    THREE_D_PLUS = "3d+"


@dataclass(frozen=True)
class Dimension:
    tag: DimTag
    d: int
    v_d: float  # volume of the unit d-ball (half of it for 3d+)


_V2 = math.pi
_V3 = 4.0 * math.pi / 3.0

_DIMENSIONS = {
    DimTag.TWO_D: Dimension(DimTag.TWO_D, 2, _V2),
    DimTag.THREE_D: Dimension(DimTag.THREE_D, 3, _V3),
    # exact floating-point half of the 3D coefficient, so that a 3d+
    # deployment at density lambda matches 3d at lambda/2 bit-for-bit
    DimTag.THREE_D_PLUS: Dimension(DimTag.THREE_D_PLUS, 3, _V3 / 2.0),
}


def _as_tag(tag: DimTag | str) -> DimTag:
    return tag if isinstance(tag, DimTag) else DimTag(str(tag).lower())


def ball_volume_coeff(tag: DimTag | str) -> float:
    """Volume coefficient V_d: pi, 4*pi/3 or 2*pi/3."""
    return _DIMENSIONS[_as_tag(tag)].v_d


@dataclass(frozen=True)
class DualSlopePathLoss:
    """Piecewise power-law gain, continuous at the critical distance r_c.

    gain(r) = r**-alpha0 for r <= r_c, eta * r**-alpha1 beyond, with
    eta = r_c**(alpha1 - alpha0).
    """

    alpha0: float
    alpha1: float
    r_c: float
    eta: float

    @classmethod
    def create(cls, alpha0: float, alpha1: float, r_c: float) -> "DualSlopePathLoss":
        for name, val in (("alpha0", alpha0), ("alpha1", alpha1), ("r_c", r_c)):
            if not math.isfinite(val):
                raise InvalidScalar(f"{name} must be finite, got {val!r}")
        if alpha0 < 0 or alpha0 > alpha1:
            raise InvalidExponents(
                f"need 0 <= alpha0 <= alpha1, got alpha0={alpha0}, alpha1={alpha1}"
            )
        if r_c <= 0:
            raise InvalidScalar(f"r_c must be positive, got {r_c}")
        return cls(alpha0, alpha1, r_c, r_c ** (alpha1 - alpha0))

    def gain(self, r: float) -> float:
        if r <= 0:
            raise InvalidScalar(f"distance must be positive, got {r}")
        if r <= self.r_c:
            return r ** -self.alpha0
        return self.eta * r ** -self.alpha1


def path_loss(pl: DualSlopePathLoss, r: float) -> float:
    """Path gain at distance r > 0; the two branches agree at r = r_c."""
    return pl.gain(r)


@dataclass(frozen=True)
class NetworkModel:
    """A d-dimensional PPP deployment with dual-slope path loss."""

    dim: Dimension
    pl: DualSlopePathLoss
    lam: float  # BS density per unit d-volume
    sigma2: float  # noise power, normalized units

    def with_density(self, lam: float) -> "NetworkModel":
        if lam <= 0 or not math.isfinite(lam):
            raise InvalidScalar(f"lambda must be positive, got {lam}")
        return replace(self, lam=lam)


def make_model(
    dim_tag: DimTag | str,
    alpha0: float,
    alpha1: float,
    r_c: float,
    lam: float,
    sigma2: float,
) -> NetworkModel:
    """Validate and build a NetworkModel.

    Rejects alpha1 <= d: the mean interference diverges there and the
    closed-form kernel C(-alpha1/d, .) hits a pole at alpha1 = d.
    """
    dim = _DIMENSIONS[_as_tag(dim_tag)]
    pl = DualSlopePathLoss.create(alpha0, alpha1, r_c)
    if not math.isfinite(lam) or lam <= 0:
        raise InvalidScalar(f"lambda must be positive and finite, got {lam}")
    if not math.isfinite(sigma2) or sigma2 < 0:
        raise InvalidScalar(f"sigma2 must be nonnegative and finite, got {sigma2}")
    if alpha1 <= dim.d:
        raise DivergentInterference(
            f"alpha1={alpha1} must exceed the dimension d={dim.d}"
        )
    return NetworkModel(dim, pl, lam, sigma2)


@dataclass(frozen=True)
class Equivalent2DParams:
    """Primed parameters of the coverage-preserving d -> 2D mapping."""

    alpha0p: float
    alpha1p: float
    lambdap: float
    r_c: float
    sigma2p: float

    def as_model(self) -> NetworkModel:
        return make_model(
            DimTag.TWO_D, self.alpha0p, self.alpha1p, self.r_c, self.lambdap, self.sigma2p
        )


def equivalent_2d(model: NetworkModel) -> Equivalent2DParams:
    """Map a d-dimensional model to the 2D model with identical coverage.

    The mapping is the identity for d = 2 (idempotent on 2D models).
    """
    d = model.dim.d
    pl = model.pl
    alpha0p = (2.0 / d) * pl.alpha0
    alpha1p = (2.0 / d) * pl.alpha1
    lambdap = (pl.r_c**d / pl.r_c**2) * (model.dim.v_d / _V2) * model.lam
    sigma2p = model.sigma2 * pl.r_c ** (pl.alpha0 - alpha0p)
    return Equivalent2DParams(alpha0p, alpha1p, lambdap, pl.r_c, sigma2p)
