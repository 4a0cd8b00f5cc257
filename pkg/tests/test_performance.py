import gc
import time

import numpy as np
import psutil
import pytest

from src.geometry.causality import CompactSample, future_envelope
from src.geometry.fixtures import schottky_generators
from src.geometry.groups import p1_data_batch
from src.geometry.invisible_domain import boundary_grid
from src.geometry.limit_sets import enumerate_word_arrays, free_word_count


@pytest.mark.performance
class TestSystemPerformance:
    """Testes de desempenho das rotinas vetorizadas."""

    def test_word_enumeration_speed(self):
        """Enumeração de 4·3⁷ palavras de comprimento ≤ 8."""
        presentation = schottky_generators(2.0)
        start_time = time.time()
        words, matrices = enumerate_word_arrays(presentation, 8)
        elapsed = time.time() - start_time

        assert len(words) == free_word_count(2, 8)
        assert matrices.shape[0] == len(words)
        assert elapsed < 10.0

    def test_batched_poles_speed(self):
        presentation = schottky_generators(2.0)
        _, matrices = enumerate_word_arrays(presentation, 7)
        start_time = time.time()
        gaps, plus, minus = p1_data_batch(matrices)
        elapsed = time.time() - start_time

        assert gaps.shape[0] == matrices.shape[0]
        assert plus.shape == minus.shape == (matrices.shape[0], 4)
        assert elapsed < 10.0

    def test_envelope_memory_is_chunked(self):
        """Envelopes em 20 000 pontos contra 4096 amostras sem matriz densa."""
        process = psutil.Process()
        gc.collect()
        before = process.memory_info().rss

        lambda_xs = np.column_stack([boundary_grid(2, 4096), np.zeros(4096)])
        sample = CompactSample(lambda_xs, np.zeros(4096), 2.0 * np.pi / 4096)
        values = future_envelope(sample, boundary_grid(3, 20_000))

        gc.collect()
        growth = process.memory_info().rss - before
        assert values.shape == (20_000,)
        assert np.all(values >= 0.0)
        assert growth < 300 * 1024 * 1024

    @pytest.mark.slow
    def test_domain_build_speed(self, schottky_fixture):
        start_time = time.time()
        domain = schottky_fixture.domain()
        xs = boundary_grid(3, 5000)
        domain.f_plus(xs)
        domain.f_minus(xs)
        assert time.time() - start_time < 30.0
