import numpy as np
import pytest

from src.geometry.core_forms import (
    AmbientDims,
    AmbientVector,
    FormBasis,
    basis_vector,
    change_basis,
    convert_matrix,
    form_inner,
    gram_matrix,
    inner_product,
    quadratic_form,
    restricted_signature,
    signature_of_frame,
    split_basis_in_diagonal,
    transfer_matrix,
)
from src.geometry.errors import DependentVectorsError, FormMismatchError
from src.geometry.groups import weyl_matrix


@pytest.mark.unit
class TestGramAndTransfer:
    """Matrizes de Gram e troca entre as bases diagonal e split."""

    @pytest.mark.parametrize("dim", [4, 5, 7])
    def test_transfer_is_isometry(self, dim):
        t = transfer_matrix(dim, FormBasis.SPLIT)
        j_split = gram_matrix(FormBasis.SPLIT, dim)
        j_diag = gram_matrix(FormBasis.DIAGONAL, dim)
        np.testing.assert_allclose(t.T @ j_split @ t, j_diag, atol=1e-15)

    @pytest.mark.parametrize("dim", [4, 5])
    def test_transfer_inverse(self, dim):
        t = transfer_matrix(dim, FormBasis.SPLIT)
        t_inv = transfer_matrix(dim, FormBasis.DIAGONAL)
        np.testing.assert_allclose(t_inv @ t, np.eye(dim), atol=1e-15)

    def test_small_dimension_rejected(self):
        with pytest.raises(FormMismatchError):
            gram_matrix(FormBasis.DIAGONAL, 3)

    def test_split_vectors_in_diagonal(self):
        np.testing.assert_allclose(split_basis_in_diagonal(0, 4), [0.5, 0.0, 0.5, 0.0])
        np.testing.assert_allclose(split_basis_in_diagonal(3, 4), [-0.5, 0.0, 0.5, 0.0])

    def test_split_first_and_last_are_null_and_paired(self):
        first = split_basis_in_diagonal(0, 5)
        last = split_basis_in_diagonal(4, 5)
        assert abs(form_inner(first, first)) < 1e-15
        assert abs(form_inner(last, last)) < 1e-15
        assert form_inner(first, last) == pytest.approx(0.5)

    def test_weyl_matrix_agrees_across_bases(self):
        diagonal = weyl_matrix(2.0, 0.7, 3, FormBasis.DIAGONAL)
        split = weyl_matrix(2.0, 0.7, 3, FormBasis.SPLIT)
        converted = convert_matrix(diagonal, FormBasis.DIAGONAL, FormBasis.SPLIT)
        np.testing.assert_allclose(converted, split, atol=1e-10)


@pytest.mark.unit
class TestInnerProducts:
    """Produto interno, forma quadrática e validação de bases."""

    def test_diagonal_form_values(self):
        u = AmbientVector([1.0, 0.0, 1.0, 0.0])
        v = AmbientVector([0.0, 2.0, 0.0, 3.0])
        assert quadratic_form(u) == pytest.approx(0.0)
        assert quadratic_form(v) == pytest.approx(-4.0 + 9.0)
        assert inner_product(u, v) == pytest.approx(0.0)

    def test_inner_product_is_basis_independent(self, rng):
        a = AmbientVector(rng.standard_normal(6))
        b = AmbientVector(rng.standard_normal(6))
        expected = inner_product(a, b)
        split = inner_product(change_basis(a, FormBasis.SPLIT), change_basis(b, FormBasis.SPLIT))
        assert split == pytest.approx(expected, rel=1e-12, abs=1e-12)

    def test_batched_form_inner(self, rng):
        a = rng.standard_normal((10, 5))
        b = rng.standard_normal((10, 5))
        batched = form_inner(a, b)
        single = [form_inner(x, y) for x, y in zip(a, b)]
        np.testing.assert_allclose(batched, single)

    def test_mixed_bases_rejected(self):
        u = basis_vector(0, 4, FormBasis.DIAGONAL)
        v = basis_vector(0, 4, FormBasis.SPLIT)
        with pytest.raises(FormMismatchError):
            inner_product(u, v)

    def test_mixed_dimensions_rejected(self):
        with pytest.raises(FormMismatchError):
            inner_product(basis_vector(0, 4), basis_vector(0, 5))

    def test_non_finite_coordinates_rejected(self):
        with pytest.raises(ValueError):
            AmbientVector([np.nan, 0.0, 0.0, 0.0])

    def test_ambient_dims(self):
        assert AmbientDims(3).ambient == 5
        with pytest.raises(ValueError):
            AmbientDims(1)


@pytest.mark.unit
class TestSignatures:
    """Assinatura da forma restrita a subespaços."""

    def test_negative_plane(self):
        frame = np.eye(4)[:2]
        assert signature_of_frame(frame).as_tuple() == (2, 0, 0)

    def test_totally_isotropic_plane(self):
        frame = np.array([[1.0, 0.0, 1.0, 0.0], [0.0, 1.0, 0.0, 1.0]])
        assert signature_of_frame(frame).as_tuple() == (0, 0, 2)

    def test_degenerate_plane(self):
        frame = np.array([[1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 1.0, 0.0]])
        assert signature_of_frame(frame).as_tuple() == (1, 0, 1)

    def test_positive_plane(self):
        frame = np.eye(4)[2:]
        assert signature_of_frame(frame).as_tuple() == (0, 2, 0)

    def test_dependent_vectors(self):
        frame = np.array([[1.0, 0.0, 0.0, 0.0], [2.0, 0.0, 0.0, 0.0]])
        with pytest.raises(DependentVectorsError):
            signature_of_frame(frame)

    def test_restricted_signature_in_split_basis(self):
        vectors = [basis_vector(0, 4, FormBasis.SPLIT), basis_vector(3, 4, FormBasis.SPLIT)]
        assert restricted_signature(vectors).as_tuple() == (1, 1, 0)

    def test_restricted_signature_empty(self):
        with pytest.raises(DependentVectorsError):
            restricted_signature([])
