import math

import numpy as np
import pytest

from spinring import (
    DistanceMatrix,
    IndexOutOfRange,
    InvalidArgs,
    MetricClassification,
    QuotientOnOddRing,
    RingKind,
    RingSpec,
    asymptotic_distance,
    check_metric_axioms,
    circulant_spectrum,
    classify_ring,
    distance_matrix,
    distance_profile,
    distance_variance_sweep,
    merge_distinct_values,
    p_max,
    p_max_closed_form,
    sqrt_p_max_closed_form,
    transfer_probability_time_series,
)


def test_p_max_closed_form_small_rings():
    assert p_max_closed_form(3, 1) == pytest.approx(4.0 / 9.0, abs=1e-14)
    assert p_max_closed_form(4, 1) == pytest.approx(0.25, abs=1e-14)
    # Antipodal transfer on the 4-ring is perfect.
    assert p_max_closed_form(4, 2) == pytest.approx(1.0, abs=1e-14)


def test_p_max_closed_form_zero_separation_is_one():
    for n in (3, 4, 7, 10):
        assert p_max_closed_form(n, 0) == pytest.approx(1.0, abs=1e-12)


def test_p_max_closed_form_validation():
    with pytest.raises(InvalidArgs):
        sqrt_p_max_closed_form(2, 1)
    with pytest.raises(InvalidArgs):
        sqrt_p_max_closed_form(5, 3)
    with pytest.raises(InvalidArgs):
        sqrt_p_max_closed_form(5, -1)


def test_p_max_uniform_on_prime_ring():
    assert p_max_closed_form(5, 1) == pytest.approx(p_max_closed_form(5, 2), abs=1e-14)


def test_p_max_separation_dependent_on_composite_ring():
    assert abs(p_max_closed_form(9, 1) - p_max_closed_form(9, 3)) > 1e-3


def test_p_max_projector_route_matches_closed_form():
    for n in (5, 6, 9):
        dec = circulant_spectrum(RingSpec(n))
        for m in range(1, n // 2 + 1):
            assert p_max(dec, 1, 1 + m) == pytest.approx(
                p_max_closed_form(n, m), abs=1e-12
            )


def test_distance_values_small_rings():
    d3 = distance_matrix(RingSpec(3)).entries
    assert d3[0, 1] == pytest.approx(math.log(9.0 / 4.0), abs=1e-12)
    d4q = distance_matrix(RingSpec(4), quotient=True).entries
    assert d4q.shape == (2, 2)
    assert d4q[0, 1] == pytest.approx(math.log(4.0), abs=1e-12)


def test_even_ring_antipodal_zero_and_reflection():
    d6 = distance_matrix(RingSpec(6)).entries
    assert d6[0, 3] == 0.0
    # d(m) = d(n/2 - m) on even rings, so separations 1 and 2 coincide.
    assert d6[0, 1] == pytest.approx(d6[0, 2], abs=1e-12)
    profile = distance_profile(6)
    assert profile[1] == pytest.approx(profile[2], abs=1e-12)
    assert profile[3] == 0.0


def test_quotient_requires_even_ring():
    with pytest.raises(QuotientOnOddRing):
        distance_matrix(RingSpec(5), quotient=True)


def test_distance_matrix_from_entries_validation():
    with pytest.raises(InvalidArgs):
        DistanceMatrix.from_entries(np.zeros((2, 3)))
    with pytest.raises(InvalidArgs):
        DistanceMatrix.from_entries(np.array([[0.0, 1.0], [2.0, 0.0]]))
    with pytest.raises(InvalidArgs):
        DistanceMatrix.from_entries(np.array([[0.5, 1.0], [1.0, 0.0]]))
    with pytest.raises(InvalidArgs):
        DistanceMatrix.from_entries(np.array([[0.0, -1.0], [-1.0, 0.0]]))


def test_metric_axioms_odd_ring():
    report = check_metric_axioms(distance_matrix(RingSpec(7)))
    assert report.classification is MetricClassification.METRIC
    assert report.exhaustive
    assert not report.violations


def test_metric_axioms_even_ring_semi_metric():
    report = check_metric_axioms(distance_matrix(RingSpec(8)))
    assert report.classification is MetricClassification.SEMI_METRIC_ANTIPODAL
    assert report.identity_ok and report.symmetry_ok and report.triangle_ok
    assert not report.separation_ok
    pairs = sorted(v.sites for v in report.violations if v.kind == "separation")
    assert pairs == [(1, 5), (2, 6), (3, 7), (4, 8)]


def test_metric_axioms_even_ring_quotient_is_metric():
    report = check_metric_axioms(distance_matrix(RingSpec(8), quotient=True))
    assert report.classification is MetricClassification.METRIC


def test_metric_axioms_detect_triangle_violation():
    entries = np.array(
        [
            [0.0, 1.0, 3.0],
            [1.0, 0.0, 1.0],
            [3.0, 1.0, 0.0],
        ]
    )
    report = check_metric_axioms(DistanceMatrix.from_entries(entries))
    assert report.classification is MetricClassification.NOT_SEMI_METRIC
    assert not report.triangle_ok
    assert any(v.kind == "triangle" for v in report.violations)


def test_metric_axioms_detect_identity_violation():
    entries = np.array([[0.1, 1.0], [1.0, 0.0]])
    report = check_metric_axioms(DistanceMatrix(2, entries))
    assert not report.identity_ok
    assert report.classification is MetricClassification.NOT_SEMI_METRIC


def test_metric_axioms_sampled_path_on_large_ring():
    report = check_metric_axioms(distance_matrix(RingSpec(201)), seed=0)
    assert not report.exhaustive
    assert report.classification is MetricClassification.METRIC


def test_merge_distinct_values():
    values = np.array([1.0, 1.0 + 5e-11, 2.0])
    assert len(merge_distinct_values(values)) == 2


def test_classify_ring_kinds():
    for n, kind, uniform in (
        (11, RingKind.PRIME, True),
        (10, RingKind.TWICE_PRIME, True),
        (15, RingKind.ODD_COMPOSITE, False),
        (12, RingKind.TWICE_COMPOSITE, False),
    ):
        quotient = n % 2 == 0
        cls = classify_ring(n, distance_matrix(RingSpec(n), quotient=quotient))
        assert cls.kind is kind, n
        assert cls.uniform is uniform, n
        if not uniform:
            assert len(cls.distinct_values) >= 2


def test_asymptotic_distance_value():
    limit = asymptotic_distance()
    assert limit == pytest.approx(2.0 * math.log(math.pi / 2.0), abs=1e-15)
    assert math.exp(-limit) == pytest.approx((2.0 / math.pi) ** 2, abs=1e-15)


def test_distance_approaches_limit():
    limit = asymptotic_distance()
    err_11 = abs(-2.0 * math.log(sqrt_p_max_closed_form(11, 1)) - limit)
    err_101 = abs(-2.0 * math.log(sqrt_p_max_closed_form(101, 1)) - limit)
    assert err_101 < err_11


def test_variance_sweep_basics():
    rows = distance_variance_sweep(3, 16)
    assert [n for n, _ in rows] == list(range(3, 17))
    by_n = dict(rows)
    assert by_n[5] < 1e-20
    assert by_n[7] < 1e-20
    assert by_n[15] > 1e-6
    assert by_n[9] > 1e-6


def test_variance_sweep_never_policy_keeps_raw_even_rings():
    by_n = dict(distance_variance_sweep(6, 10, quotient_policy="never"))
    # The raw 8-ring mixes a zero antipodal distance with nonzero ones.
    assert by_n[8] > 1e-3


def test_variance_sweep_validation():
    with pytest.raises(InvalidArgs):
        distance_variance_sweep(10, 3)
    with pytest.raises(InvalidArgs):
        distance_variance_sweep(2, 10)
    with pytest.raises(InvalidArgs):
        distance_variance_sweep(3, 10, quotient_policy="sometimes")


def test_transfer_probability_at_time_zero():
    spec = RingSpec(5)
    grid = np.array([0.0])
    assert transfer_probability_time_series(spec, 2, 2, grid)[0] == pytest.approx(
        1.0, abs=1e-12
    )
    assert transfer_probability_time_series(spec, 1, 3, grid)[0] == pytest.approx(
        0.0, abs=1e-12
    )


def test_transfer_probability_hits_bound_on_triangle():
    # For the 3-ring the probability reaches p_max = 4/9 exactly at t = pi/6.
    spec = RingSpec(3)
    value = transfer_probability_time_series(spec, 1, 2, np.array([math.pi / 6.0]))[0]
    assert value == pytest.approx(4.0 / 9.0, abs=1e-12)


def test_transfer_probability_respects_bound():
    spec = RingSpec(5)
    grid = np.linspace(0.0, 25.0, 2001)
    for m in (1, 2):
        series = transfer_probability_time_series(spec, 1, 1 + m, grid)
        assert float(series.max()) <= p_max_closed_form(5, m) + 1e-10


def test_transfer_probability_validation():
    spec = RingSpec(5)
    with pytest.raises(InvalidArgs):
        transfer_probability_time_series(spec, 1, 2, np.array([-1.0]))
    with pytest.raises(IndexOutOfRange):
        transfer_probability_time_series(spec, 0, 2, np.array([0.0]))
    with pytest.raises(IndexOutOfRange):
        transfer_probability_time_series(spec, 1, 6, np.array([0.0]))
