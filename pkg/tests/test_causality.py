import numpy as np
import pytest

from src.geometry.causality import (
    AchronalGraph,
    AcausalityMode,
    AffineDomainU,
    CausalRelation,
    CompactSample,
    Orientation,
    acausality_report,
    bounding_affine_domain,
    causal_classify,
    certify_acausal,
    future_envelope,
    in_future_of,
    klein_classify,
    past_envelope,
    sphere_distance,
    sphere_distance_matrix,
    time_spread,
)
from src.geometry.einstein_models import UniversalPoint, universal_to_klein_array
from src.geometry.errors import NotAcausalError


def _point(angle: float, t: float) -> UniversalPoint:
    return UniversalPoint([np.cos(angle), np.sin(angle)], t)


@pytest.mark.unit
class TestSphereDistance:
    """Distância d₀ na esfera."""

    def test_known_values(self):
        assert sphere_distance(np.array([1.0, 0.0]), np.array([0.0, 1.0])) == pytest.approx(np.pi / 2.0)
        assert sphere_distance(np.array([1.0, 0.0]), np.array([-1.0, 0.0])) == pytest.approx(np.pi)
        assert sphere_distance(np.array([1.0, 0.0]), np.array([1.0, 0.0])) == 0.0

    def test_small_angles_are_accurate(self):
        angle = 1e-9
        assert sphere_distance(np.array([1.0, 0.0]), np.array([np.cos(angle), np.sin(angle)])) == pytest.approx(angle, rel=1e-6)

    def test_matrix_shape(self, rng):
        xs = rng.standard_normal((7, 3))
        ys = rng.standard_normal((5, 3))
        xs /= np.linalg.norm(xs, axis=1, keepdims=True)
        ys /= np.linalg.norm(ys, axis=1, keepdims=True)
        assert sphere_distance_matrix(xs, ys).shape == (7, 5)


@pytest.mark.unit
class TestCausalClassification:
    """Relações causais no recobrimento universal."""

    def test_relations(self):
        origin = _point(0.0, 0.0)
        assert causal_classify(origin, _point(np.pi / 2.0, 0.3)) is CausalRelation.UNRELATED
        assert causal_classify(origin, _point(0.3, 1.0)) is CausalRelation.TIMELIKE
        assert causal_classify(origin, _point(np.pi / 2.0, np.pi / 2.0)) is CausalRelation.LIGHTLIKE

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            causal_classify(_point(0.0, 0.0), UniversalPoint([1.0, 0.0, 0.0], 0.0))

    def test_klein_path_agrees(self, rng):
        checked = 0
        for _ in range(200):
            p = _point(rng.uniform(0.0, 2.0 * np.pi), rng.uniform(-1.5, 1.5))
            q = _point(rng.uniform(0.0, 2.0 * np.pi), rng.uniform(-1.5, 1.5))
            slack = sphere_distance(p.x, q.x) - abs(p.t - q.t)
            if abs(slack) < 1e-3:
                continue
            assert klein_classify(p, q) is causal_classify(p, q)
            checked += 1
        assert checked > 150

    def test_klein_inner_formula(self):
        p, q = _point(0.0, 0.0), _point(1.0, 0.4)
        reps = universal_to_klein_array(np.vstack([p.x, q.x]), np.array([p.t, q.t]))
        value = -reps[0, 0] * reps[1, 0] - reps[0, 1] * reps[1, 1] + reps[0, 2:] @ reps[1, 2:]
        assert value == pytest.approx((np.cos(1.0) - np.cos(0.4)) / 2.0)


@pytest.mark.unit
class TestEnvelopes:
    """Envelopes futuro e passado de amostras compactas."""

    @pytest.fixture
    def two_points(self):
        return CompactSample(np.array([[1.0, 0.0], [-1.0, 0.0]]), np.array([0.0, 0.5]), 0.01)

    def test_future_envelope(self, two_points):
        values = future_envelope(two_points, np.array([[0.0, 1.0], [1.0, 0.0]]))
        np.testing.assert_allclose(values, [np.pi / 2.0, 0.0])

    def test_past_envelope(self, two_points):
        values = past_envelope(two_points, np.array([[0.0, 1.0], [-1.0, 0.0]]))
        np.testing.assert_allclose(values, [0.5 - np.pi / 2.0, 0.5])

    def test_in_future_of(self, two_points):
        assert in_future_of(two_points, UniversalPoint([0.0, 1.0], 2.0))
        assert not in_future_of(two_points, UniversalPoint([0.0, 1.0], 0.0))
        assert in_future_of(two_points, UniversalPoint([0.0, 1.0], -2.0), Orientation.PAST)

    def test_empty_sample_rejected(self):
        with pytest.raises(ValueError):
            CompactSample(np.zeros((0, 2)), np.zeros(0), 0.1)
        with pytest.raises(ValueError):
            CompactSample(np.array([[1.0, 0.0]]), np.zeros(1), 0.0)

    def test_envelope_graph_is_lipschitz(self, two_points):
        angles = np.linspace(0.0, 2.0 * np.pi, 90, endpoint=False)
        grid = np.column_stack([np.cos(angles), np.sin(angles)])
        graph = AchronalGraph(grid, future_envelope(two_points, grid))
        assert graph.is_valid()
        assert graph.lipschitz_defect() <= 1e-9

    def test_steep_graph_is_invalid(self):
        graph = AchronalGraph(np.array([[1.0, 0.0], [0.0, 1.0]]), np.array([0.0, 3.0]))
        assert not graph.is_valid()


@pytest.mark.unit
class TestAcausality:
    """Certificados de acausalidade e lajes afins."""

    def test_spacelike_pair_is_acausal(self):
        points = [_point(0.0, 0.0), _point(np.pi / 2.0, 0.5)]
        assert certify_acausal(points)

    def test_lightlike_pair_fails_acausal_but_is_achronal(self):
        points = [_point(0.0, 0.0), _point(np.pi / 2.0, np.pi / 2.0)]
        assert not certify_acausal(points)
        assert certify_acausal(points, AcausalityMode.ACHRONAL)

    def test_single_point(self):
        assert certify_acausal([_point(0.0, 0.0)])

    def test_report_names_worst_pair(self):
        xs = np.array([[1.0, 0.0], [0.0, 1.0], [1.0, 0.0]])
        ts = np.array([0.0, 0.0, 1.0])
        report = acausality_report(xs, ts)
        assert not report.certified
        assert report.worst_pair == (0, 2)
        assert report.worst_slack == pytest.approx(-1.0)

    def test_bounding_affine_domain(self):
        points = [_point(0.0, 0.2), _point(np.pi, 0.6)]
        domain = bounding_affine_domain(points)
        assert domain.t0 == pytest.approx(0.4 - np.pi / 2.0)
        assert all(domain.contains(p) for p in points)
        for p in points:
            rep = universal_to_klein_array(p.x, p.t)[0]
            assert domain.contains_klein(rep)

    def test_bounding_domain_requires_acausal(self):
        with pytest.raises(NotAcausalError):
            bounding_affine_domain([_point(0.0, 0.0), _point(0.0, 1.0)])
        with pytest.raises(ValueError):
            bounding_affine_domain([])

    def test_affine_domain_excludes_far_times(self):
        domain = AffineDomainU(0.0)
        assert not domain.contains(_point(0.0, 4.0))
        assert not domain.contains_klein(universal_to_klein_array(np.array([1.0, 0.0]), np.array([-0.5]))[0])

    def test_time_spread(self):
        assert time_spread(np.array([0.5, -0.25, 1.0])) == pytest.approx(1.25)
        assert time_spread(np.array([])) == 0.0
