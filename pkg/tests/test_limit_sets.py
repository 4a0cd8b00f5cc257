import numpy as np
import pytest

from src.geometry.errors import EmptySampleError, InconsistentLiftError, WordBudgetExceededError
from src.geometry.groups import boost_element, projective_distance
from src.geometry.limit_sets import (
    GroupPresentation,
    LimitSetSample,
    RelationHint,
    approximate_limit_set,
    certify_negative,
    dedupe_projective,
    enumerate_word_arrays,
    enumerate_words,
    free_word_count,
    hausdorff_distance,
    invert_word,
    lift_acausal,
    sample_from_universal,
)


@pytest.fixture
def cyclic_presentation():
    return GroupPresentation((boost_element(3.0, 1.0, 2),))


@pytest.mark.unit
class TestWords:
    """Enumeração de palavras reduzidas."""

    def test_invert_word(self):
        assert invert_word("abB") == "bBA"
        assert invert_word("") == ""

    def test_free_word_count(self):
        assert free_word_count(2, 3) == 4 + 12 + 36
        assert free_word_count(1, 8) == 16

    def test_free_enumeration_matches_count(self, schottky_fixture):
        words, matrices = enumerate_word_arrays(schottky_fixture.presentation, 3)
        assert len(words) == free_word_count(2, 3)
        assert matrices.shape == (52, 4, 4)
        assert all("aA" not in w and "Aa" not in w and "bB" not in w and "Bb" not in w for w in words)

    def test_word_matrices_match_products(self, schottky_fixture):
        presentation = schottky_fixture.presentation
        words, matrices = enumerate_word_arrays(presentation, 2)
        for word, matrix in zip(words, matrices):
            np.testing.assert_allclose(matrix, presentation.word_matrix(word), atol=1e-10)

    def test_zero_length(self, cyclic_presentation):
        words, matrices = enumerate_word_arrays(cyclic_presentation, 0)
        assert words == []
        assert matrices.shape == (0, 4, 4)

    def test_budget_exceeded(self, schottky_fixture):
        with pytest.raises(WordBudgetExceededError) as exc_info:
            enumerate_word_arrays(schottky_fixture.presentation, 3, budget=10)
        assert exc_info.value.count == 52

    def test_unknown_relations_identify_elements(self):
        g = boost_element(1.0, 0.5, 2)
        presentation = GroupPresentation((g, g), RelationHint.UNKNOWN)
        words = enumerate_words(presentation, 3)
        assert len(words) == 6

    def test_presentation_validation(self):
        with pytest.raises(ValueError):
            GroupPresentation(())
        with pytest.raises(ValueError):
            GroupPresentation((boost_element(1.0, 0.0, 2), boost_element(1.0, 0.0, 3)))

    def test_letters(self, schottky_fixture):
        assert schottky_fixture.presentation.letters() == ['a', 'A', 'b', 'B']
        assert schottky_fixture.presentation.rank == 2


@pytest.mark.unit
class TestApproximateLimitSet:
    """Amostras de Λ a partir de polos de palavras proximais."""

    def test_cyclic_has_two_points(self, cyclic_presentation):
        sample = approximate_limit_set(cyclic_presentation, 8)
        assert len(sample) == 2
        expected = [np.array([1.0, 0.0, 1.0, 0.0]) / np.sqrt(2.0), np.array([1.0, 0.0, -1.0, 0.0]) / np.sqrt(2.0)]
        for point in expected:
            assert np.min(projective_distance(sample.representatives, point)) < 1e-9
        assert sample.invariance_residual < 1e-9

    def test_short_words_do_not_reach_gap(self, cyclic_presentation):
        with pytest.raises(EmptySampleError):
            approximate_limit_set(cyclic_presentation, 4)

    def test_zero_length_is_empty(self, cyclic_presentation):
        with pytest.raises(EmptySampleError):
            approximate_limit_set(cyclic_presentation, 0)

    def test_gaps_recorded(self, cyclic_presentation):
        sample = approximate_limit_set(cyclic_presentation, 8)
        assert np.all(sample.gaps >= 10.0)
        assert len(sample.source_words) == len(sample)

    def test_schottky_sample_is_invariant(self, schottky_fixture):
        sample = schottky_fixture.sample
        assert len(sample) > 20
        assert sample.invariance_residual < 0.2

    def test_hausdorff_between_refinements(self, schottky_fixture):
        coarse = approximate_limit_set(schottky_fixture.presentation, 6, gap_min=11.0)
        assert len(coarse) < len(schottky_fixture.sample)
        assert hausdorff_distance(schottky_fixture.sample, schottky_fixture.sample) == 0.0
        assert hausdorff_distance(coarse, schottky_fixture.sample) < 0.5

    def test_dedupe_projective_merges_antipodes(self):
        points = np.array([[1.0, 0.0, 1.0, 0.0], [-1.0, 0.0, -1.0, 0.0], [1.0, 0.0, -1.0, 0.0]])
        np.testing.assert_array_equal(dedupe_projective(points, 1e-6), [0, 2])

    def test_non_null_points_rejected(self):
        with pytest.raises(ValueError):
            LimitSetSample(np.array([[1.0, 0.0, 0.0, 0.0]]), ("a",), 0.0)


@pytest.mark.unit
class TestNegativityAndLift:
    """Certificado de negatividade e levantamento acausal."""

    def test_cyclic_is_negative(self, cyclic_fixture):
        report = certify_negative(cyclic_fixture.sample)
        assert report.negative
        assert report.worst_value == pytest.approx(-1.0, abs=1e-9)

    def test_lift_is_acausal(self, cyclic_fixture):
        lifted = lift_acausal(cyclic_fixture.sample)
        assert lifted.has_lift
        points = lifted.universal_lift()
        assert len(points) == 2
        gap = abs(points[0].t - points[1].t)
        distance = np.arccos(np.clip(points[0].x @ points[1].x, -1.0, 1.0))
        assert distance > gap

    def test_timelike_triple_is_not_negative(self):
        xs = np.array([[1.0, 0.0]] * 3)
        sample = sample_from_universal(xs, np.array([0.0, 0.5, 1.0]))
        assert not certify_negative(sample).negative
        with pytest.raises(InconsistentLiftError):
            lift_acausal(sample)

    def test_certificate_requires_two_points(self):
        sample = sample_from_universal(np.array([[1.0, 0.0]]), np.zeros(1))
        with pytest.raises(ValueError):
            certify_negative(sample)

    def test_schottky_sample_lifts(self, schottky_fixture):
        assert certify_negative(schottky_fixture.sample).negative
        lifted = lift_acausal(schottky_fixture.sample)
        assert lifted.lift_xs.shape == (len(schottky_fixture.sample), 2)

    def test_lift_times_in_half_open_slab(self, schottky_fixture):
        """Tempos em (t₀ − π, t₀ + π], sem o extremo inferior."""
        lifted = lift_acausal(schottky_fixture.sample)
        offsets = lifted.lift_ts - lifted.lift_ts[0]
        assert np.all(offsets > -np.pi)
        assert np.all(offsets <= np.pi)

    def test_universal_sample_is_already_lifted(self):
        angles = np.linspace(0.0, 2.0 * np.pi, 16, endpoint=False)
        sample = sample_from_universal(np.column_stack([np.cos(angles), np.sin(angles)]), np.zeros(16))
        assert sample.has_lift
        assert sample.source_words[0] == "p0"
        assert certify_negative(sample).negative
