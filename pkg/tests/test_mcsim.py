import math

import numpy as np
import pytest
from scipy import stats

from densecov import (
    SimConfig,
    TrialStream,
    estimate_coverage,
    make_model,
    nearest_distances,
    run_trial,
    truncation_radius,
)

FIG1_HALF = make_model("3d", 3.3, 5.0, 0.4, 5.0, 1.0)


def test_sim_config_validation():
    SimConfig(trials=1, master_seed=0)
    with pytest.raises(ValueError):
        SimConfig(trials=0, master_seed=0)
    with pytest.raises(ValueError):
        SimConfig(trials=10, master_seed=0, tail_fraction_eps=0.0)
    with pytest.raises(ValueError):
        SimConfig(trials=10, master_seed=0, tail_fraction_eps=0.2)
    with pytest.raises(ValueError):
        SimConfig(trials=10, master_seed=2**64)


def test_truncation_radius_closed_formula():
    # independent evaluation of the tail-ratio formula
    for eps in (1e-3, 3e-3, 0.05):
        expected = max(0.4 * ((1.0 + eps) / eps) ** (1.0 / (5.0 - 3.0)), 4.0)
        assert truncation_radius(FIG1_HALF, eps) == pytest.approx(expected, rel=1e-14)
    assert truncation_radius(FIG1_HALF, 1e-3) == pytest.approx(12.6554336156451,
                                                               rel=1e-12)


def test_truncation_radius_is_density_free():
    assert truncation_radius(FIG1_HALF, 1e-3) == truncation_radius(
        FIG1_HALF.with_density(500.0), 1e-3
    )


def test_truncation_radius_floor_and_divergence():
    # alpha1 close to d blows the radius up; a huge eps hits the 10 rc floor
    near = make_model("3d", 2.0, 3.05, 0.4, 1.0, 1.0)
    assert truncation_radius(near, 1e-3) > 1e50
    assert truncation_radius(FIG1_HALF, 0.09) == pytest.approx(4.0, rel=1e-12)
    with pytest.raises(ValueError):
        truncation_radius(FIG1_HALF, 0.0)


def test_run_trial_values():
    # sparse region: empty realizations (None) and single-BS infinities both occur
    sparse = make_model("3d", 3.3, 5.0, 0.4, 0.05, 0.0)
    seen_none = seen_inf = seen_finite = False
    for i in range(300):
        out = run_trial(sparse, 1.2, TrialStream(9, i))
        if out is None:
            seen_none = True
        elif math.isinf(out):
            seen_inf = True  # exactly one BS, zero interference, sigma2 = 0
        else:
            assert out > 0.0
            seen_finite = True
    assert seen_none and seen_inf and seen_finite
    with pytest.raises(ValueError):
        run_trial(sparse, 0.0, TrialStream(9, 0))


def test_estimates_monotone_and_deterministic():
    cfg = SimConfig(trials=4000, master_seed=31, tail_fraction_eps=3e-3)
    grid = [0.1, 0.5, 1.0, 5.0, 20.0]
    est1 = estimate_coverage(FIG1_HALF, grid, cfg, workers=1)
    est4 = estimate_coverage(FIG1_HALF, grid, cfg, workers=4)
    assert [e.p_hat for e in est1] == [e.p_hat for e in est4]
    p = [e.p_hat for e in est1]
    assert all(a >= b for a, b in zip(p, p[1:]))
    for e in est1:
        assert e.ci_half_width == pytest.approx(
            3.0 * math.sqrt(e.p_hat * (1.0 - e.p_hat) / e.trials), rel=1e-12
        )
    with pytest.raises(ValueError):
        estimate_coverage(FIG1_HALF, [], cfg)


def test_halfspace_matches_halved_density_exactly():
    # 3d+ at lambda and 3d at lambda/2 share V_d * lambda bit-for-bit, so the
    # same seed gives identical realizations, not merely compatible statistics
    cfg = SimConfig(trials=3000, master_seed=8, tail_fraction_eps=3e-3)
    grid = [0.5, 1.0, 2.0]
    plus = estimate_coverage(make_model("3d+", 3.3, 5.0, 0.4, 10.0, 1.0), grid, cfg)
    full = estimate_coverage(FIG1_HALF, grid, cfg)
    assert [e.p_hat for e in plus] == [e.p_hat for e in full]


def test_all_covered_when_threshold_below_every_sinr():
    # sigma2 = 0 and a tiny threshold: every non-empty trial is covered, and
    # the region is dense enough that no trial is empty
    m = make_model("3d", 3.3, 5.0, 0.4, 20.0, 0.0)
    cfg = SimConfig(trials=2000, master_seed=5, tail_fraction_eps=0.05)
    (est,) = estimate_coverage(m, [1e-12], cfg)
    assert est.empty_realizations == 0
    assert est.p_hat == 1.0


def test_empty_realization_fraction_bound():
    sparse = make_model("3d", 3.3, 5.0, 0.4, 4e-4, 1.0)
    cfg = SimConfig(trials=5000, master_seed=13, tail_fraction_eps=0.05)
    (est,) = estimate_coverage(sparse, [1.0], cfg)
    region = truncation_radius(sparse, 0.05)
    p_empty = math.exp(-sparse.lam * sparse.dim.v_d * region**3)
    slack = 3.0 * math.sqrt(p_empty * (1.0 - p_empty) / cfg.trials)
    assert est.empty_realizations > 0  # the bound is actually exercised
    assert est.empty_realizations / cfg.trials <= p_empty + slack


def test_nearest_distance_distribution():
    m = FIG1_HALF
    cfg = SimConfig(trials=100_000, master_seed=5, tail_fraction_eps=0.01,
                    record_distances=True)
    dists = nearest_distances(m, cfg, workers=4)
    lam_v = m.lam * m.dim.v_d

    def cdf(x):
        return 1.0 - np.exp(-lam_v * np.asarray(x) ** 3)

    ks = stats.kstest(dists, cdf).statistic
    assert ks <= 0.01
