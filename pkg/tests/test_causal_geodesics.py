import numpy as np
import pytest

from src.geometry.causal_geodesics import (
    GeodesicClass,
    Plane2,
    act_plane,
    avoids_limit_set,
    classify,
    delta_metric,
    delta_to_planes_through,
    expansion_probe,
    fiber_distance,
    hausdorff_oracle,
    intersect_domain,
    photon_curve,
    photon_plane,
    photon_tangent,
    plane_from_vectors,
)
from src.geometry.core_forms import split_basis_in_diagonal
from src.geometry.errors import GeodesicMeetsLimitSetError
from src.geometry.groups import ProjectivePoint, boost_element, identity, inverse, random_element

E = np.eye(4)


def _rotated_plane(angle: float) -> Plane2:
    return plane_from_vectors(E[0], np.cos(angle) * E[1] + np.sin(angle) * E[2])


@pytest.mark.unit
class TestPlanes:
    """Construção e classificação de 2-planos."""

    def test_frame_is_orthonormal(self):
        plane = plane_from_vectors(np.array([1.0, 1.0, 0.0, 0.0]), np.array([0.0, 1.0, 1.0, 0.0]))
        np.testing.assert_allclose(plane.frame @ plane.frame.T, np.eye(2), atol=1e-12)
        assert plane.dim == 4

    def test_dependent_vectors_rejected(self):
        with pytest.raises(ValueError):
            plane_from_vectors(E[0], 2.0 * E[0])

    def test_wrong_row_count_rejected(self):
        with pytest.raises(ValueError):
            Plane2(E[:3])

    def test_frame_is_canonical(self):
        first = plane_from_vectors(E[0], E[1])
        second = plane_from_vectors(E[0] + E[1], E[0] - E[1])
        np.testing.assert_allclose(first.frame, second.frame, atol=1e-12)

    @pytest.mark.parametrize("vectors,expected", [
        ((E[0], E[1]), GeodesicClass.TIMELIKE_ADS),
        ((E[0] + E[2], E[1] + E[3]), GeodesicClass.LIGHTLIKE_EIN),
        ((E[0], E[1] + E[2]), GeodesicClass.LIGHTLIKE_ADS),
        ((E[2], E[3]), GeodesicClass.NOT_CAUSAL),
        ((E[0], E[2]), GeodesicClass.NOT_CAUSAL),
    ])
    def test_classification(self, vectors, expected):
        assert classify(plane_from_vectors(*vectors)) is expected

    def test_class_is_invariant(self, rng):
        plane = plane_from_vectors(E[0] + E[2], E[1] + E[3])
        for _ in range(5):
            g, _, _ = random_element(rng, 2, lambda_max=2.0)
            assert classify(act_plane(g, plane)) is GeodesicClass.LIGHTLIKE_EIN


@pytest.mark.unit
class TestDeltaMetric:
    """Distância δ por ângulos principais."""

    def test_orthogonal_planes(self):
        assert delta_metric(plane_from_vectors(E[0], E[1]), plane_from_vectors(E[2], E[3])) == pytest.approx(np.pi / 2.0)

    @pytest.mark.parametrize("angle", [0.0, 0.1, 0.7, 1.3])
    def test_rotated_plane(self, angle):
        base = plane_from_vectors(E[0], E[1])
        assert delta_metric(base, _rotated_plane(angle)) == pytest.approx(angle, abs=1e-12)

    def test_symmetric(self):
        first, second = _rotated_plane(0.4), plane_from_vectors(E[1], E[3] + E[0])
        assert delta_metric(first, second) == pytest.approx(delta_metric(second, first), abs=1e-12)

    def test_agrees_with_hausdorff_oracle(self):
        first = _rotated_plane(0.5)
        second = plane_from_vectors(E[0] + 0.3 * E[3], E[1] - 0.2 * E[2])
        assert hausdorff_oracle(first, second, samples=4000) == pytest.approx(delta_metric(first, second), abs=2e-3)


@pytest.mark.unit
class TestFibers:
    """Distância de um plano à fibra F_q."""

    def test_orthogonal_line(self):
        assert fiber_distance(plane_from_vectors(E[0], E[1]), E[2]) == pytest.approx(np.pi / 2.0)

    def test_line_inside_plane(self):
        assert fiber_distance(plane_from_vectors(E[0], E[1]), E[0] + E[1]) == pytest.approx(0.0, abs=1e-12)

    def test_projective_point_input(self):
        plane = plane_from_vectors(E[0], E[1])
        assert fiber_distance(plane, ProjectivePoint(E[0] + E[2])) == pytest.approx(np.pi / 4.0)

    def test_short_points_are_padded(self):
        plane = plane_from_vectors(np.eye(5)[0], np.eye(5)[1])
        assert fiber_distance(plane, E[2]) == pytest.approx(np.pi / 2.0)

    def test_planes_through_point_match_delta(self, rng):
        plane = plane_from_vectors(rng.standard_normal(4), rng.standard_normal(4))
        q = rng.standard_normal(4)
        directions = rng.standard_normal((20, 4))
        batch = delta_to_planes_through(plane, q, directions)
        expected = [delta_metric(plane, plane_from_vectors(q, w)) for w in directions]
        np.testing.assert_allclose(batch, expected, atol=1e-12)
        assert batch.min() >= fiber_distance(plane, q) - 1e-12

    def test_avoids_limit_set(self, fuchsian_fixture):
        sample = fuchsian_fixture.sample
        assert avoids_limit_set(plane_from_vectors(E[0], E[1]), sample)
        through_lambda = plane_from_vectors(E[0] + E[2], E[1])
        assert not avoids_limit_set(through_lambda, sample)

    def test_avoids_rejects_spacelike(self, fuchsian_fixture):
        with pytest.raises(ValueError):
            avoids_limit_set(plane_from_vectors(E[2], E[3]), fuchsian_fixture.sample)


@pytest.mark.unit
class TestExpansion:
    """Sonda de expansão perto de um polo atrator."""

    POLE = split_basis_in_diagonal(0, 4)

    def test_identity_ratio_is_one(self):
        result = expansion_probe(identity(2), self.POLE, 0.5, 500, seed=3)
        assert result.c_est == pytest.approx(1.0, abs=1e-9)
        assert result.valid_samples > 0

    def test_boost_expands_near_attracting_pole(self):
        g = boost_element(6.0, 2.0, 2)
        forward = expansion_probe(g, self.POLE, 0.5, 2000, seed=3)
        backward = expansion_probe(inverse(g), self.POLE, 0.5, 2000, seed=3)
        assert forward.c_est > 1.0
        assert backward.c_est < 1.0
        assert fiber_distance(forward.witness_plane, self.POLE) < 0.5


@pytest.mark.unit
class TestPhotons:
    """Fótons de Ein_{1,n} e o fibrado tangente unitário."""

    def test_round_trip(self):
        x, v = np.array([1.0, 0.0]), np.array([0.0, 1.0])
        plane = photon_plane(x, v)
        assert classify(plane) is GeodesicClass.LIGHTLIKE_EIN
        back_x, back_v = photon_tangent(plane)
        np.testing.assert_allclose(back_x, x, atol=1e-12)
        np.testing.assert_allclose(back_v, v, atol=1e-12)

    def test_round_trip_higher_dimension(self, rng):
        x = rng.standard_normal(3)
        x /= np.linalg.norm(x)
        v = rng.standard_normal(3)
        v -= (v @ x) * x
        v /= np.linalg.norm(v)
        back_x, back_v = photon_tangent(photon_plane(x, v))
        np.testing.assert_allclose(back_x, x, atol=1e-10)
        np.testing.assert_allclose(back_v, v, atol=1e-10)

    def test_curve_reaches_antipode(self):
        x, v = np.array([1.0, 0.0]), np.array([0.0, 1.0])
        xs, ts = photon_curve(x, v, np.array([0.0, np.pi / 2.0, np.pi]))
        np.testing.assert_allclose(xs[0], x, atol=1e-15)
        np.testing.assert_allclose(xs[1], v, atol=1e-15)
        np.testing.assert_allclose(xs[2], -x, atol=1e-15)
        np.testing.assert_allclose(ts, [0.0, np.pi / 2.0, np.pi])


@pytest.mark.unit
class TestDomainIntersection:
    """Interseção de geodésicas causais com Ω."""

    def test_photon_through_pole(self, equator_domain):
        plane = photon_plane(np.array([0.0, 0.0, 1.0]), np.array([1.0, 0.0, 0.0]))
        result = intersect_domain(plane, equator_domain, samples=2048)
        assert result.hits
        assert result.runs == 1
        assert result.connected
        assert result.arc[0] == pytest.approx(-np.pi / 4.0, abs=0.01)
        assert result.arc[1] == pytest.approx(np.pi / 4.0, abs=0.01)

    def test_photon_arcs_match_membership(self, schottky_domain, rng):
        """Arco exato contra a pertinência amostrada ao longo do fóton."""
        checked = 0
        while checked < 20:
            x = rng.standard_normal(3)
            x /= np.linalg.norm(x)
            v = rng.standard_normal(3)
            v -= (v @ x) * x
            v /= np.linalg.norm(v)
            plane = photon_plane(x, v)
            if not avoids_limit_set(plane, schottky_domain.sample):
                continue
            checked += 1
            result = intersect_domain(plane, schottky_domain)
            assert result.hits
            assert result.connected

            low, high = schottky_domain.time_window()
            ts = np.linspace(low, high, 4096)[1:-1]
            xs, _ = photon_curve(x, v, ts)
            inside = schottky_domain.contains_array(xs, ts, margin=0.0)
            start, end = result.arc
            assert np.all(inside[(ts > start + 1e-6) & (ts < end - 1e-6)])
            assert not np.any(inside[(ts < start - 1e-6) | (ts > end + 1e-6)])

    def test_timelike_ads_geodesic(self, equator_domain):
        result = intersect_domain(plane_from_vectors(E[0], E[1]), equator_domain, samples=2048)
        assert result.hits
        assert result.connected
        assert result.arc[0] == pytest.approx(-np.pi / 2.0, abs=0.01)
        assert result.arc[1] == pytest.approx(np.pi / 2.0, abs=0.01)

    def test_geodesic_meeting_limit_set(self, equator_domain):
        with pytest.raises(GeodesicMeetsLimitSetError):
            intersect_domain(plane_from_vectors(E[0] + E[2], E[1]), equator_domain)

    def test_spacelike_plane_rejected(self, equator_domain):
        with pytest.raises(ValueError):
            intersect_domain(plane_from_vectors(E[2], E[3]), equator_domain)

    def test_dimension_mismatch(self, equator_domain):
        e = np.eye(6)
        with pytest.raises(ValueError):
            intersect_domain(plane_from_vectors(e[0], e[1]), equator_domain)
