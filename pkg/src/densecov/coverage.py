"""Analytic coverage probabilities for d-dimensional PPP deployments.

Two independent routes are provided: the general nested-quadrature integral
(any monotone path loss) and the dual-slope closed form built on the
hypergeometric kernel.  Their agreement is a release-blocking test.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable

from .errors import SingularParameter
from .model import NetworkModel
from .specfun import DEFAULT_QUAD, QuadratureSpec, c_func, integrate_adaptive

__all__ = [
    "CoverageKind",
    "CoverageMethod",
    "CoveragePoint",
    "coverage_general",
    "coverage_sinr",
    "coverage_sir",
    "coverage_snr",
    "nearest_distance_pdf",
    "interference_laplace",
]

# first closed-form integral has an integrable boundary layer at r -> 0;
# clamp there and let the graded panels resolve it
_R_MIN = 1e-12
_R_PANELS = (1e-12, 1e-9, 1e-6, 1e-3, 1e-1, 1.0)
_EXP_UNDERFLOW = -745.0


class CoverageKind(str, Enum):
    SINR = "sinr"
    SIR = "sir"
    SNR = "snr"


class CoverageMethod(str, Enum):
    CLOSED_FORM = "closed-form"
    GENERAL_QUADRATURE = "general-quadrature"
    MONTE_CARLO = "monte-carlo"


@dataclass(frozen=True)
class CoveragePoint:
    threshold_t: float
    probability: float
    kind: CoverageKind
    method: CoverageMethod

    def __post_init__(self) -> None:
        if not 0.0 <= self.probability <= 1.0:
            raise ValueError(f"probability out of range: {self.probability}")


def _exp(x: float) -> float:
    return math.exp(x) if x > _EXP_UNDERFLOW else 0.0


def _clamp01(p: float) -> float:
    return min(1.0, max(0.0, p))


def nearest_distance_pdf(model: NetworkModel, x: float) -> float:
    """Density of the nearest-BS distance: V_d d lambda x^(d-1) e^(-lambda V_d x^d)."""
    if x <= 0:
        raise ValueError(f"distance must be positive, got {x}")
    d = model.dim.d
    lam_v = model.lam * model.dim.v_d
    return lam_v * d * x ** (d - 1) * _exp(-lam_v * x**d)


def interference_laplace(
    model: NetworkModel,
    s: float,
    serving_dist: float,
    spec: QuadratureSpec = DEFAULT_QUAD,
) -> float:
    """Laplace transform of the interference seen past the serving distance.

    exp(-lambda int_x^inf s l(z)/(1 + s l(z)) V_d d z^(d-1) dz) for Rayleigh
    fading and nearest-BS association.
    """
    if s < 0:
        raise ValueError(f"s must be nonnegative, got {s}")
    if serving_dist <= 0:
        raise ValueError(f"serving_dist must be positive, got {serving_dist}")
    if s == 0.0:
        return 1.0
    d = model.dim.d
    vd = model.dim.v_d

    def integrand(z: float) -> float:
        g = s * model.pl.gain(z)
        return g / (1.0 + g) * vd * d * z ** (d - 1)

    x = serving_dist
    total = 0.0
    if x < model.pl.r_c:  # split at the path loss kink
        total += integrate_adaptive(integrand, x, model.pl.r_c, spec)
        x = model.pl.r_c
    total += integrate_adaptive(integrand, x, math.inf, spec)
    return _exp(-model.lam * total)


def coverage_general(
    model: NetworkModel,
    pathloss: Callable[[float], float],
    t: float,
    spec: QuadratureSpec = DEFAULT_QUAD,
) -> float:
    """SINR coverage for an arbitrary decreasing path gain, by nested quadrature.

    Evaluates lambda V_d int_0^inf exp(-T sigma^2 / l(y^(1/d)))
    exp(-lambda V_d y (1 + int_1^inf T/(T + l(y^(1/d))/l((u y)^(1/d))) du)) dy,
    rescaled so the outer exponential decays on an O(1) scale.
    """
    if t <= 0:
        raise ValueError(f"threshold must be positive, got {t}")
    d = model.dim.d
    lam_v = model.lam * model.dim.v_d
    # the inner integral only enters through exp(-w (1 + inner)); an absolute
    # error of 1e-9 there perturbs the coverage value by well under 1e-8
    inner_spec = QuadratureSpec(
        rel_tol=min(spec.rel_tol * 10.0, 1e-9),
        abs_tol=1e-10,
        max_subdivisions=spec.max_subdivisions,
    )

    def inner(y: float) -> float:
        # int_1^inf T/(T + l(x)/l(x u^(1/d))) du.  Quadrature covers [1, U];
        # past U the gain is assumed (and, for any eventually-power-law l,
        # verified by measuring the local decay exponent) to follow
        # l ~ u^(-p), and the tail is summed analytically through third
        # order in T l / l(x), doubling U until the truncated order is
        # negligible.  This sidesteps the arbitrarily slow 1/u-like tails
        # that arise when the decay exponent p barely exceeds 1.
        lx = pathloss(y ** (1.0 / d))

        def g(u: float) -> float:
            far = pathloss((u * y) ** (1.0 / d))
            if far == 0.0:  # gain underflow far out; integrand limit is 0
                return 0.0
            return t / (t + lx / far)

        total = 0.0
        lo, hi = 1.0, 64.0
        while True:
            pts = tuple(lo * 2.0**k for k in range(1, int(math.log2(hi / lo))))
            total += integrate_adaptive(g, lo, hi, inner_spec, points=pts)
            l1 = pathloss((hi * y) ** (1.0 / d))
            l2 = pathloss((2.0 * hi * y) ** (1.0 / d))
            lw = pathloss((2.0**24 * hi * y) ** (1.0 / d))
            if l1 == 0.0 or l2 == 0.0 or lw == 0.0:
                return total  # tail already underflowed to nothing
            p = math.log2(l1 / l2)
            # the local exponent must persist across a wide span, or a slope
            # change (e.g. the dual-slope kink) still lies in the tail
            settled = abs(p - math.log2(l1 / lw) / 24.0) < 1e-9 * max(1.0, abs(p))
            eps_u = t * l1 / lx  # expansion parameter at u = hi
            if settled and p > 1.0 and eps_u < 0.5:
                third = eps_u**3 * hi / (3.0 * p - 1.0)
                if third < 1e-11 * max(1.0, total):
                    return (
                        total
                        + eps_u * hi / (p - 1.0)
                        - eps_u**2 * hi / (2.0 * p - 1.0)
                        + third
                    )
            lo, hi = hi, 4.0 * hi

    def outer(w: float) -> float:
        if w <= 0.0:
            return 0.0
        y = w / lam_v
        lx = pathloss(y ** (1.0 / d))
        expo = -t * model.sigma2 / lx - w * (1.0 + inner(y))
        return _exp(expo)

    # per-panel tolerances are absolute: the nested inner quadrature leaves
    # ~1e-10 evaluation noise on the integrand, so demanding 1e-12 panel
    # accuracy only trips QUADPACK's roundoff detector
    outer_spec = QuadratureSpec(
        rel_tol=spec.rel_tol,
        abs_tol=max(spec.abs_tol, 1e-9),
        max_subdivisions=spec.max_subdivisions,
    )
    # graded panels keep QUADPACK honest about the decaying tail and any
    # path loss kinks near the origin
    panels = (0.0, 1e-4, 1e-2, 1.0, 5.0, 25.0)
    total = 0.0
    for lo, hi in zip(panels, panels[1:]):
        total += integrate_adaptive(outer, lo, hi, outer_spec)
    total += integrate_adaptive(outer, panels[-1], math.inf, outer_spec)
    return _clamp01(total)


def _closed_form_pieces(model: NetworkModel, t: float):
    pl = model.pl
    if pl.alpha0 == 0:
        raise SingularParameter(
            "alpha0 = 0 has no closed form; use coverage_general instead"
        )
    d = model.dim.d
    b = pl.alpha0 / d
    a1d = pl.alpha1 / d
    mu = model.lam * model.dim.v_d * pl.r_c**d
    noise = t * model.sigma2 * pl.r_c**pl.alpha0
    return b, a1d, mu, noise


def _inner_integral(
    mu: float, b: float, a1d: float, t: float, noise: float, spec: QuadratureSpec
) -> float:
    c_b_invt = c_func(b, 1.0 / t)
    c_a1_t = c_func(-a1d, t)

    def f(r: float) -> float:
        if r >= 1.0:
            rho_r = c_a1_t  # exact r = 1 limit of rho
        else:
            trb = t * r**b
            rho_r = c_func(b, 1.0 / trb) + c_func(-a1d, trb) - r * c_b_invt + r - 1.0
        return _exp(-mu * rho_r - noise * r**b)

    total = 0.0
    for lo, hi in zip(_R_PANELS, _R_PANELS[1:]):
        total += integrate_adaptive(f, lo, hi, spec)
    return total


def coverage_sinr(
    model: NetworkModel, t: float, spec: QuadratureSpec = DEFAULT_QUAD
) -> float:
    """Dual-slope SINR coverage probability via the closed form."""
    if t <= 0:
        raise ValueError(f"threshold must be positive, got {t}")
    b, a1d, mu, noise = _closed_form_pieces(model, t)
    c_a1_t = c_func(-a1d, t)
    i1 = _inner_integral(mu, b, a1d, t, noise, spec)

    # second integral: int_1^inf exp(-mu C r - noise r^(a1/d)) dr, with the
    # integration variable rescaled to the local decay rate at r = 1
    s0 = mu * c_a1_t + noise * a1d

    def f2(v: float) -> float:
        r = 1.0 + v / s0
        return _exp(-mu * c_a1_t * r - noise * r**a1d)

    if -mu * c_a1_t - noise < _EXP_UNDERFLOW:
        i2 = 0.0
    else:
        i2 = integrate_adaptive(f2, 0.0, math.inf, spec) / s0
    return _clamp01(mu * (i1 + i2))


def coverage_sir(
    model: NetworkModel, t: float, spec: QuadratureSpec = DEFAULT_QUAD
) -> float:
    """Interference-limited (sigma^2 = 0) coverage; upper bounds coverage_sinr."""
    if t <= 0:
        raise ValueError(f"threshold must be positive, got {t}")
    b, a1d, mu, _ = _closed_form_pieces(model, t)
    c_a1_t = c_func(-a1d, t)
    i1 = _inner_integral(mu, b, a1d, t, 0.0, spec)
    tail = _exp(-mu * c_a1_t) / c_a1_t  # closed form of the second integral
    return _clamp01(mu * i1 + tail)


def coverage_snr(
    model: NetworkModel, t: float, spec: QuadratureSpec = DEFAULT_QUAD
) -> float:
    """Noise-only coverage: success probability against the nearest-BS pdf.

    With the serving-distance density from the nearest-BS association and
    no interferers, P = int_0^inf exp(-T sigma^2 / l(x)) f(x) dx; substituting
    y = lambda V_d x^d turns the density into a unit exponential.
    """
    if t <= 0:
        raise ValueError(f"threshold must be positive, got {t}")
    if model.sigma2 == 0.0:
        return 1.0
    d = model.dim.d
    lam_v = model.lam * model.dim.v_d

    def f(y: float) -> float:
        if y <= 0.0:
            return 0.0
        x = (y / lam_v) ** (1.0 / d)
        return _exp(-t * model.sigma2 / model.pl.gain(x) - y)

    y_kink = lam_v * model.pl.r_c**d
    pts = sorted({1e-6, 1e-3, min(y_kink, 700.0), 1.0, 30.0})
    total = 0.0
    lo = 0.0
    for hi in pts:
        if hi > lo:
            total += integrate_adaptive(f, lo, hi, spec)
            lo = hi
    total += integrate_adaptive(f, lo, math.inf, spec)
    return _clamp01(total)
