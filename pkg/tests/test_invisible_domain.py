import numpy as np
import pytest

from src.geometry.causality import sphere_distance
from src.geometry.einstein_models import UniversalPoint, act_universal_array
from src.geometry.errors import EmptyBoundaryError, OracleDisagreementError
from src.geometry.invisible_domain import (
    FUTURE_SIDE_LABELS,
    Component,
    InvisibleDomain,
    RegionLabel,
    Side,
    boundary_grid,
    embed_equator,
)
from src.geometry.limit_sets import sample_from_universal

POLE = np.array([0.0, 0.0, 1.0])
SOUTH = np.array([0.0, 0.0, -1.0])


@pytest.mark.unit
class TestGrids:
    """Grades de esferas usadas pelos envelopes."""

    def test_circle_grid(self):
        grid = boundary_grid(2, 8)
        assert grid.shape == (8, 2)
        np.testing.assert_allclose(grid[2], [0.0, 1.0], atol=1e-15)

    @pytest.mark.parametrize("dim", [3, 5])
    def test_unit_points(self, dim):
        grid = boundary_grid(dim, 100, seed=1)
        np.testing.assert_allclose(np.linalg.norm(grid, axis=1), 1.0)

    def test_embed_equator(self):
        embedded = embed_equator(np.array([[1.0, 0.0]]))
        np.testing.assert_allclose(embedded, [[1.0, 0.0, 0.0]])


@pytest.mark.unit
class TestEquatorDomain:
    """Ω de um círculo equatorial em t = 0: dois diamantes."""

    def test_dimensions(self, equator_domain):
        assert equator_domain.n == 2
        assert equator_domain.lambda_xs.shape[1] == 3

    def test_envelopes_at_poles(self, equator_domain):
        assert equator_domain.f_plus(POLE)[0] == pytest.approx(np.pi / 2.0, abs=1e-12)
        assert equator_domain.f_minus(POLE)[0] == pytest.approx(-np.pi / 2.0, abs=1e-12)
        assert equator_domain.f_plus(SOUTH)[0] == pytest.approx(np.pi / 2.0, abs=1e-12)

    def test_time_window(self, equator_domain):
        low, high = equator_domain.time_window()
        assert low == pytest.approx(-np.pi)
        assert high == pytest.approx(np.pi)

    def test_affine_domain(self, equator_domain):
        assert equator_domain.affine_domain().t0 == pytest.approx(-np.pi / 2.0)

    def test_membership(self, equator_domain):
        assert equator_domain.contains(UniversalPoint(POLE, 0.0))
        assert equator_domain.contains(UniversalPoint(POLE, 1.0))
        assert not equator_domain.contains(UniversalPoint(POLE, 1.6))
        assert not equator_domain.contains(UniversalPoint([1.0, 0.0, 0.0], 0.0))

    def test_dual_cone_agrees_with_envelopes(self, equator_domain, rng):
        xs, ts = equator_domain.random_probes(rng, 2000)
        by_envelopes = equator_domain.contains_array(xs, ts, margin=0.0)
        by_cone = equator_domain.dual_cone_array(xs, ts)
        slack = np.minimum(
            np.abs(equator_domain.f_plus(xs) - ts),
            np.abs(ts - equator_domain.f_minus(xs)),
        )
        far = slack > 2.0 * equator_domain.mesh
        np.testing.assert_array_equal(by_envelopes[far], by_cone[far])

    def test_cross_checked_membership(self, equator_domain):
        assert equator_domain.contains(UniversalPoint(POLE, 0.2), cross_check=True)

    def test_components(self, equator_domain):
        assert equator_domain.component_of(UniversalPoint(POLE, 0.0)) is Component.E1
        assert equator_domain.component_of(UniversalPoint(SOUTH, 0.0)) is Component.E2
        with pytest.raises(ValueError):
            equator_domain.component_of(UniversalPoint(POLE, 3.0))

    def test_boundary_is_empty(self, equator_domain):
        with pytest.raises(EmptyBoundaryError):
            equator_domain.boundary_sample(Side.PLUS)

    def test_grid_labels_are_core_only(self, equator_domain):
        xs = np.vstack([POLE, POLE, SOUTH])
        grid = equator_domain.classify_grid(xs, np.array([0.5, -0.5, 0.0]))
        assert grid.boundary_empty
        assert grid.labels == [RegionLabel.FUTURE_CORE] * 3
        assert grid.past_labels == [RegionLabel.PAST_CORE] * 3

    def test_region_requires_boundary(self, equator_domain):
        with pytest.raises(EmptyBoundaryError):
            equator_domain.classify_region(UniversalPoint(POLE, 0.0))

    def test_region_outside(self, equator_domain):
        result = equator_domain.classify_region(UniversalPoint(POLE, 2.0))
        assert result.label is RegionLabel.OUTSIDE_OMEGA

    def test_lambda_graph_is_flat(self, equator_domain):
        graph = equator_domain.lambda_pm_graph(Side.PLUS, boundary_grid(2, 64))
        np.testing.assert_allclose(graph.values, 0.0, atol=1e-12)
        assert graph.is_valid()

    def test_requires_lift(self, cyclic_fixture):
        with pytest.raises(ValueError):
            InvisibleDomain(cyclic_fixture.sample, 0.02)

    def test_build_lifts_sample(self, cyclic_fixture):
        domain = InvisibleDomain.build(cyclic_fixture.sample, 0.02)
        assert domain.sample.has_lift
        assert len(domain.sample) == 2


@pytest.mark.unit
class TestJoinDomain:
    """Ω de dois pontos antípodas em t = 0: horizontes e regiões."""

    def test_boundary_sample_exists(self, join_domain):
        boundary = join_domain.boundary_sample(Side.PLUS)
        assert len(boundary) > 0
        assert np.max(boundary.ts) == pytest.approx(np.pi / 2.0, abs=1e-6)

    def test_future_side_above_pole(self, join_domain):
        result = join_domain.classify_region(UniversalPoint(POLE, 0.5))
        assert result.label is RegionLabel.FUTURE_CORE
        assert result.past_label is RegionLabel.FUTURE_OF_BOUNDARY

    def test_past_side_below_pole(self, join_domain):
        result = join_domain.classify_region(UniversalPoint(POLE, -0.5))
        assert result.label is RegionLabel.PAST_OF_BOUNDARY
        assert result.past_label is RegionLabel.PAST_CORE

    def test_horizons_at_pole(self, join_domain):
        result = join_domain.classify_region(UniversalPoint(POLE, 0.0))
        assert result.label is RegionLabel.FUTURE_HORIZON
        assert result.past_label is RegionLabel.PAST_HORIZON
        assert abs(result.future_slack) < 1e-9

    def test_horizon_surface(self, join_domain):
        heights = join_domain.horizon_surface(Side.PLUS, np.vstack([POLE, [1.0, 0.0, 0.0]]))
        assert heights[0] == pytest.approx(0.0, abs=1e-9)
        assert np.isnan(heights[1])

    def test_outside_and_boundary_labels(self, join_domain):
        outside = join_domain.classify_region(UniversalPoint(POLE, 2.0))
        assert outside.label is RegionLabel.OUTSIDE_OMEGA
        assert outside.past_label is None

    def test_grid_partitions_inside_points(self, join_domain, rng):
        xs, ts = join_domain.random_probes(rng, 500, Component.E1)
        grid = join_domain.classify_grid(xs, ts)
        inside = join_domain.contains_array(xs, ts)
        assert not grid.boundary_empty
        for label, is_inside in zip(grid.labels, inside):
            if is_inside:
                assert label in FUTURE_SIDE_LABELS
            else:
                assert label is RegionLabel.OUTSIDE_OMEGA
        assert sum(grid.counts().values()) == 500


@pytest.mark.unit
class TestSchottkyDomain:
    """Ω do grupo de Schottky: regiões, invariância e convexidade causal."""

    @staticmethod
    def _center(domain):
        return float(np.median(domain.lambda_ts))

    def test_future_core_deep_inside(self, schottky_domain):
        result = schottky_domain.classify_region(UniversalPoint(POLE, self._center(schottky_domain)))
        assert result.label is RegionLabel.FUTURE_CORE
        assert result.past_label is RegionLabel.PAST_CORE
        assert result.future_slack < -0.5

    def test_past_of_boundary_near_equator(self, schottky_domain):
        boundary = schottky_domain.boundary_sample(Side.PLUS)
        top = int(np.argmax(boundary.ts))
        tilt = 0.03
        x = np.cos(tilt) * boundary.xs[top] + np.sin(tilt) * POLE
        t = boundary.ts[top] - 0.1

        assert schottky_domain.contains_array(x[None, :], np.array([t]))[0]
        result = schottky_domain.classify_region(UniversalPoint(x, t))
        assert result.label is RegionLabel.PAST_OF_BOUNDARY
        assert result.future_slack > 0.05

    def test_invariant_under_generators(self, schottky_fixture, schottky_domain, rng):
        domain = schottky_domain
        xs, ts = domain.random_probes(rng, 2000)
        deep = domain.contains_array(xs, ts, margin=0.1)
        far_outside = ~domain.contains_array(xs, ts, margin=-0.2)
        assert deep.any() and far_outside.any()

        for matrix in schottky_fixture.presentation.letter_matrices():
            image_xs, image_ts = act_universal_array(matrix, xs, ts, self._center(domain))
            image_inside = domain.contains_array(image_xs, image_ts, margin=0.0)
            assert np.all(image_inside[deep])
            assert not np.any(image_inside[far_outside])

    def test_causally_convex(self, schottky_domain, rng):
        domain = schottky_domain
        xs, ts = domain.random_probes(rng, 3000)
        inside = domain.contains_array(xs, ts)
        xs, ts = xs[inside], ts[inside]
        candidates_xs, candidates_ts = domain.random_probes(rng, 4000)

        pairs = 0
        for i in range(min(len(ts), 400)):
            later = ts > ts[i]
            causal = later & (sphere_distance(xs[i], xs) <= ts - ts[i])
            if not causal.any():
                continue
            j = int(np.flatnonzero(causal)[0])
            between = (
                (sphere_distance(xs[i], candidates_xs) <= candidates_ts - ts[i])
                & (sphere_distance(candidates_xs, xs[j]) <= ts[j] - candidates_ts)
            )
            assert np.all(domain.contains_array(candidates_xs[between], candidates_ts[between], margin=0.0))
            pairs += 1
            if pairs == 50:
                break
        assert pairs > 0


@pytest.mark.unit
class TestOracleDisagreement:
    """Discordância entre os dois testes de pertinência."""

    def test_disagreement_raises(self, mocker):
        sample = sample_from_universal(np.array([[1.0, 0.0], [-1.0, 0.0]]), np.zeros(2))
        domain = InvisibleDomain(sample, 0.02)
        mocker.patch.object(InvisibleDomain, 'dual_cone_array', return_value=np.array([False]))
        with pytest.raises(OracleDisagreementError) as exc_info:
            domain.contains(UniversalPoint(POLE, 0.0), cross_check=True)
        assert exc_info.value.slack > domain.mesh
