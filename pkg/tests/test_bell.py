import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from spin1epr import bell
from spin1epr.bell import (
    BellConfig,
    chsh_config,
    chsh_lhs,
    coplanar_config,
    coplanar_lhs,
    evaluate,
    maximize_violation,
    mermin_lhs,
    symmetric_config,
    weighted_lhs,
)
from spin1epr.correlations import CmfConfig, cmf_correlation, cmf_probabilities
from spin1epr.kinematics import random_direction, random_rotation

angles = st.floats(0, 2 * math.pi, allow_nan=False)
xs = st.floats(0, 20, allow_nan=False)


def _rational_weighted(x, ab, bc, ca, an, bn, cn):
    """Weighted LHS from dot products, in exact arithmetic."""
    u = 1 + 2 * x
    bracket = -u * (ab + bc + ca) + 2 * x * (an * bn + bn * cn + cn * an)
    return Fraction(2) / (2 + u * u) * (bracket + Fraction(1, 2) * (ab + 2 * x * an * bn) ** 2)


def test_weighted_nine_eighths_rational():
    half = Fraction(-1, 2)
    value = _rational_weighted(Fraction(1, 6), half, half, half, 0, 0, 0)
    assert value == Fraction(153, 136) == Fraction(9, 8)


def test_weighted_symmetric_float():
    assert weighted_lhs(symmetric_config(1 / 6)) == pytest.approx(1.125, abs=1e-15)
    assert coplanar_lhs(math.pi / 6, 1 / 6) == pytest.approx(1.125, abs=1e-15)


def test_weighted_term_is_p00():
    cfg = coplanar_config(0.4, 0.3)
    pair = CmfConfig.from_vectors(cfg.x, cfg.a, cfg.b, cfg.n)
    mermin = mermin_lhs(cfg)
    assert weighted_lhs(cfg) - mermin == pytest.approx(cmf_probabilities(pair)[0, 0], abs=1e-14)


@given(angles, xs)
@settings(max_examples=200, deadline=None)
def test_coplanar_closed_form(theta, x):
    assert coplanar_lhs(theta, x) == pytest.approx(weighted_lhs(coplanar_config(theta, x)), abs=1e-12)


def test_coplanar_angles():
    # theta = pi/6 gives the symmetric triple; 2 pi/3 does not reach 9/8
    # frozen value from a 30-digit evaluation
    assert coplanar_lhs(2 * math.pi / 3, 1 / 6) < 1.0
    assert coplanar_lhs(0.3, 0.0) == pytest.approx(1.1713103112343506, abs=1e-13)


def test_mermin_symmetric_closed_form():
    for x in (0.0, 0.1, 0.5, 2.0):
        u = 1 + 2 * x
        assert mermin_lhs(symmetric_config(x)) == pytest.approx(3 * u / (2 + u * u), abs=1e-14)


def test_chsh_canonical():
    # in-plane directions: C = -2u cos(angle)/(2+u^2)
    for x in (0.0, (math.sqrt(2) - 1) / 2, 3.0):
        u = 1 + 2 * x
        assert chsh_lhs(chsh_config(x)) == pytest.approx(2 * math.sqrt(2) * u / (2 + u * u), abs=1e-14)


def test_evaluate_and_config_validation():
    cfg = symmetric_config(0.2)
    assert evaluate("mermin", cfg) == mermin_lhs(cfg)
    with pytest.raises(ValueError):
        evaluate("bogus", cfg)
    with pytest.raises(ValueError):
        BellConfig([1, 0, 0], [0, 2, 0], [0, 0, 1])
    with pytest.raises(ValueError):
        BellConfig([1, 0, 0], [0, 1, 0], [0, 0, 1], x=-1)


def test_axial_invariance(rng):
    for _ in range(50):
        v = [random_direction(rng) for _ in range(5)]
        cfg = BellConfig(*v[:4], n=v[4], x=rng.uniform(0, 3))
        r = random_rotation(rng)
        moved = BellConfig(*(r @ t for t in v[:4]), n=r @ v[4], x=cfg.x)
        for name in bell.INEQUALITIES:
            assert evaluate(name, moved) == pytest.approx(evaluate(name, cfg), abs=1e-12)


def test_correlation_bound_holds(rng):
    for _ in range(200):
        a, b, n = (random_direction(rng) for _ in range(3))
        assert abs(cmf_correlation(CmfConfig.from_vectors(rng.uniform(0, 10), a, b, n))) <= 1 + 1e-12


def test_fast_path_matches_evaluators(rng):
    for name in bell.INEQUALITIES:
        for _ in range(20):
            params = rng.uniform(0, math.pi, size=2 * bell.N_DIRECTIONS[name] + 1)
            cfg = bell._config(name, params, None)
            assert bell._fast_lhs(name, params, cfg.x) == pytest.approx(evaluate(name, cfg), abs=1e-13)


def test_phase_map_roundtrip():
    for x in (1e-6, 1e-3, 0.2, 7.0, 1e4):
        assert bell._x_from_phase(bell._phase_from_x(x)) == pytest.approx(x, rel=1e-9)


def test_mermin_fixed_x_matches_symmetric(bell_max):
    report = bell_max("mermin", 0.2, 0, 16)
    u = 1.4
    assert report.lhs == pytest.approx(3 * u / (2 + u * u), abs=1e-9)
    assert report.violated and report.converged


def test_chsh_nonrelativistic(bell_max):
    report = bell_max("chsh", 0.0, 0, 64)
    assert report.lhs == pytest.approx(2 * math.sqrt(2) / 3, abs=1e-6)
    assert not report.violated


def test_report_record_shape(bell_max):
    report = bell_max("mermin", 0.2, 0, 16)
    keys = [k for k, _ in report.as_record()]
    assert keys[:3] == ["inequality", "lhs", "bound"]
    assert "d" not in keys
    assert report.argmax.x == 0.2
    assert evaluate("mermin", report.argmax) == pytest.approx(report.lhs, abs=1e-12)


def test_workers_do_not_change_result():
    one = maximize_violation("weighted", fixed_x=1 / 6, seed=3, starts=6, workers=1)
    two = maximize_violation("weighted", fixed_x=1 / 6, seed=3, starts=6, workers=2)
    assert one.as_record() == two.as_record()


def test_maximize_rejects():
    with pytest.raises(ValueError):
        maximize_violation("bogus")
    with pytest.raises(ValueError):
        maximize_violation("chsh", fixed_x=-1.0)
    with pytest.raises(ValueError):
        maximize_violation("chsh", starts=0)
