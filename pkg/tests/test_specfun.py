import math
import random

import pytest
from scipy.integrate import quad

from densecov import (
    NoConvergence,
    QuadratureSpec,
    SingularParameter,
    c_func,
    integrate_adaptive,
    rho,
)
from densecov.specfun import integrate_tanhsinh


def c_quadrature(b: float, z: float) -> float:
    """Independent oracle for C(b, z) from two integral representations.

    b > 0: C = a int_0^1 u^(a-1)/(1+zu) du with a = 1/b, computed after the
    substitution w = u^a that removes the endpoint singularity.
    b < 0: C = 1 + int_1^inf z/(u^(-b) + z) du.
    """
    if b > 0:
        a = 1.0 / b
        val, _ = quad(lambda w: 1.0 / (1.0 + z * w ** (1.0 / a)), 0.0, 1.0,
                      epsabs=1e-14, epsrel=1e-13, limit=500)
        return val
    ap = -b
    val, _ = quad(lambda u: z / (u**ap + z), 1.0, math.inf,
                  epsabs=1e-14, epsrel=1e-13, limit=500)
    return 1.0 + val


def test_spot_values():
    assert c_func(1.0, 1.0) == pytest.approx(math.log(2.0), abs=1e-10)
    assert c_func(-2.0, 1.0) == pytest.approx(1.0 + math.pi / 4.0, abs=1e-10)
    assert c_func(0.5, 1.0) == pytest.approx(2.0 * (1.0 - math.log(2.0)), abs=1e-10)


def test_limits():
    assert c_func(0.7, 0.0) == 1.0
    assert c_func(-1.7, 0.0) == 1.0
    assert c_func(0.7, math.inf) == 0.0
    with pytest.raises(ValueError):
        c_func(-1.7, math.inf)
    with pytest.raises(ValueError):
        c_func(1.0, -1.0)


def test_singularities():
    with pytest.raises(SingularParameter):
        c_func(0.0, 1.0)
    with pytest.raises(SingularParameter):
        c_func(-1.0, 1.0)  # 1/b = -1 is a pole
    with pytest.raises(SingularParameter):
        c_func(-0.5, 1.0)  # 1/b = -2 is a pole


@pytest.mark.parametrize("z", [1e-3, 0.3, 0.5, 0.500001, 2.0, 4.0, 4.1, 30.0, 1e4])
@pytest.mark.parametrize("b", [0.25, 0.5, 0.9, 1.0, 1.1, 1.65, 3.0])
def test_positive_b_against_quadrature(b, z):
    assert c_func(b, z) == pytest.approx(c_quadrature(b, z), rel=1e-10)


@pytest.mark.parametrize("z", [1e-3, 0.3, 0.500001, 2.0, 4.1, 30.0, 1e4])
@pytest.mark.parametrize("b", [-1.05, -4.0 / 3.0, -1.5, -2.2, -3.0])
def test_negative_b_against_quadrature(b, z):
    assert c_func(b, z) == pytest.approx(c_quadrature(b, z), rel=1e-10)


@pytest.mark.parametrize("a", [1.0 - 3.6e-9, 1.0 + 1e-9, 2.0 - 1e-8, 2.0 + 1e-8, 3.0 - 1e-7])
def test_near_integer_recursion_is_stable(a):
    # 1/b near an integer makes the reflection and recursion terms cancel;
    # the expm1-folded branches must stay accurate through the cancellation
    for z in (5.0, 100.0, 1e6):
        assert c_func(1.0 / a, z) == pytest.approx(c_quadrature(1.0 / a, z), rel=1e-9)


def test_random_grid_against_quadrature():
    rng = random.Random(424242)
    for _ in range(60):
        b = rng.choice([1, -1]) * rng.uniform(0.3, 3.0)
        if b < 0:
            b = min(b, -1.05)
        z = 10.0 ** rng.uniform(-3, 5)
        assert c_func(b, z) == pytest.approx(c_quadrature(b, z), rel=1e-9), (b, z)


def test_rho_at_r_one_reduces_to_c():
    # rho(b, a1/d, T, 1) = C(-a1/d, T) exactly: the other three terms cancel
    for t in (0.1, 1.0, 10.0):
        assert rho(1.1, 5.0 / 3.0, t, 1.0) == pytest.approx(
            c_func(-5.0 / 3.0, t), rel=1e-14
        )


def test_rho_validation():
    with pytest.raises(SingularParameter):
        rho(0.0, 1.5, 1.0, 0.5)
    with pytest.raises(ValueError):
        rho(1.0, 1.5, 1.0, 1.5)
    with pytest.raises(ValueError):
        rho(1.0, 1.5, 0.0, 0.5)


def test_integrate_adaptive_polynomial():
    spec = QuadratureSpec()
    assert integrate_adaptive(lambda x: 3.0 * x**2, 0.0, 2.0, spec) == pytest.approx(
        8.0, rel=1e-12
    )
    assert integrate_adaptive(lambda x: math.exp(-x), 0.0, math.inf, spec) == (
        pytest.approx(1.0, rel=1e-12)
    )


def test_integrate_adaptive_with_breakpoints():
    spec = QuadratureSpec()
    f = lambda x: 1.0 if x < 0.3 else 2.0  # noqa: E731
    got = integrate_adaptive(f, 0.0, 1.0, spec, points=(0.3,))
    assert got == pytest.approx(0.3 + 1.4, rel=1e-12)


def test_integrate_tanhsinh_endpoint_singularity():
    spec = QuadratureSpec()
    got = integrate_tanhsinh(lambda x: 1.0 / math.sqrt(x) if x > 0 else 0.0,
                             0.0, 1.0, spec)
    assert got == pytest.approx(2.0, rel=1e-9)


def test_quadrature_spec_validation():
    with pytest.raises(ValueError):
        QuadratureSpec(rel_tol=0.0)
    with pytest.raises(ValueError):
        QuadratureSpec(max_subdivisions=0)


def test_noconvergence_is_raised():
    # a single subdivision cannot resolve a fast oscillation
    spec = QuadratureSpec(rel_tol=1e-12, abs_tol=1e-14, max_subdivisions=1)
    with pytest.raises(NoConvergence):
        integrate_adaptive(lambda x: math.sin(1000.0 * x), 0.0, 1.0, spec)


def test_determinism():
    args = (0.77, 123.456)
    assert c_func(*args) == c_func(*args)
    spec = QuadratureSpec()
    f = lambda x: math.sin(x) ** 2 * math.exp(-x)  # noqa: E731
    assert integrate_adaptive(f, 0.0, math.inf, spec) == integrate_adaptive(
        f, 0.0, math.inf, spec
    )
