import numpy as np
import orjson
import pandas as pd
import pytest

from src.data.processor import GeometryDataIO
from src.data.validator import InputValidator
from src.geometry.errors import NotInGroupError
from src.geometry.groups import weyl_matrix
from src.geometry.limit_sets import RelationHint


@pytest.mark.unit
class TestMatrixFiles:
    """Leitura de matrizes em texto."""

    def test_load_matrices(self, matrix_file, output_dir):
        io = GeometryDataIO(output_dir)
        matrices = io.load_matrices(matrix_file)

        assert len(matrices) == 2
        np.testing.assert_allclose(matrices[0], np.eye(4))
        np.testing.assert_allclose(matrices[1], weyl_matrix(2.0, 0.5, 2))
        assert io.get_io_stats()['matrices_loaded'] == 2

    def test_comment_lines_do_not_split(self, tmp_path):
        path = tmp_path / "m.txt"
        rows = [' '.join(str(v) for v in row) for row in np.eye(4)]
        path.write_text('\n'.join(rows[:2] + ["# meio da matriz"] + rows[2:]) + '\n', encoding='utf-8')
        matrices = GeometryDataIO(tmp_path).load_matrices(path)
        assert len(matrices) == 1
        assert matrices[0].shape == (4, 4)

    def test_inline_comments(self, tmp_path):
        path = tmp_path / "m.txt"
        rows = [' '.join(str(v) for v in row) + "  # linha" for row in np.eye(4)]
        path.write_text('\n'.join(rows) + '\n', encoding='utf-8')
        np.testing.assert_allclose(GeometryDataIO(tmp_path).load_matrices(path)[0], np.eye(4))

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            GeometryDataIO(tmp_path).load_matrices(tmp_path / "nada.txt")

    def test_non_numeric(self, tmp_path):
        path = tmp_path / "m.txt"
        path.write_text("1 0 0 0\n0 1 x 0\n0 0 1 0\n0 0 0 1\n", encoding='utf-8')
        with pytest.raises(ValueError, match="Matriz 1"):
            GeometryDataIO(tmp_path).load_matrices(path)

    def test_small_matrix(self, tmp_path):
        path = tmp_path / "m.txt"
        path.write_text("1 0 0\n0 1 0\n0 0 1\n", encoding='utf-8')
        with pytest.raises(ValueError, match="< 4"):
            GeometryDataIO(tmp_path).load_matrices(path)

    def test_empty_file(self, tmp_path):
        path = tmp_path / "m.txt"
        path.write_text("# só comentários\n\n", encoding='utf-8')
        with pytest.raises(ValueError, match="sem matrizes"):
            GeometryDataIO(tmp_path).load_matrices(path)


@pytest.mark.unit
class TestGeneratorFiles:
    """Leitura de geradores em JSON."""

    def test_load_generators(self, generators_file, output_dir):
        presentation = GeometryDataIO(output_dir).load_generators(generators_file)
        assert presentation.rank == 2
        assert presentation.relation_hint is RelationHint.FREE
        assert presentation.dim == 4

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "g.json"
        path.write_text("{não é json", encoding='utf-8')
        with pytest.raises(ValueError, match="JSON inválido"):
            GeometryDataIO(tmp_path).load_generators(path)

    def test_schema_errors(self, tmp_path):
        path = tmp_path / "g.json"
        path.write_bytes(orjson.dumps({'basis': 'polar', 'generators': []}))
        with pytest.raises(ValueError, match="basis inválida"):
            GeometryDataIO(tmp_path).load_generators(path)

    def test_generator_outside_group(self, tmp_path):
        path = tmp_path / "g.json"
        matrix = np.eye(4)
        matrix[0, 0] = 3.0
        path.write_bytes(orjson.dumps({'generators': [matrix.reshape(-1).tolist()]}))
        with pytest.raises(NotInGroupError):
            GeometryDataIO(tmp_path).load_generators(path)


@pytest.mark.unit
class TestWriters:
    """Escrita de matrizes, CSV, JSON e OBJ."""

    def test_matrices_round_trip(self, output_dir):
        io = GeometryDataIO(output_dir)
        matrices = [np.eye(4), weyl_matrix(1.0, 0.25, 2)]
        path = io.write_matrices(matrices, "out.txt", header="duas matrizes")

        assert path.parent == output_dir
        assert path.read_text(encoding='utf-8').startswith("# duas matrizes\n")
        loaded = io.load_matrices(path)
        np.testing.assert_allclose(loaded[1], matrices[1], rtol=1e-11)

    def test_csv_is_deterministic(self, output_dir):
        io = GeometryDataIO(output_dir)
        frame = pd.DataFrame({'a': [1.0 / 3.0, 2.0], 'label': ['x', 'y']})
        first = io.write_csv(frame, "a.csv").read_bytes()
        second = io.write_csv(frame, "b.csv").read_bytes()
        assert first == second
        assert first.splitlines()[1] == b"0.333333333333,x"

    def test_json_sorted_with_numpy(self, output_dir):
        io = GeometryDataIO(output_dir)
        path = io.write_json({'b': np.float64(1.5), 'a': np.array([1, 2])}, "r.json")
        text = path.read_text(encoding='utf-8')
        assert text.index('"a"') < text.index('"b"')
        assert orjson.loads(path.read_bytes()) == {'a': [1, 2], 'b': 1.5}

    def test_obj_groups_and_offsets(self, output_dir):
        io = GeometryDataIO(output_dir)
        triangle = (np.array([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.5]]), np.array([[0, 1, 2]]))
        path = io.write_obj({'f_plus': triangle, 'f_minus': triangle}, "mesh.obj")
        lines = path.read_text(encoding='utf-8').splitlines()

        assert "g f_plus" in lines and "g f_minus" in lines
        faces = [line for line in lines if line.startswith('f ')]
        assert faces == ["f 1 2 3", "f 4 5 6"]
        assert sum(1 for line in lines if line.startswith('v ')) == 6

    def test_io_stats(self, output_dir):
        io = GeometryDataIO(output_dir)
        io.write_json({'ok': True}, "s.json")
        stats = io.get_io_stats()
        assert stats['files_written'] == 1
        assert stats['bytes_written'] > 0


@pytest.mark.unit
class TestInputValidator:
    """Validação estrutural das entradas."""

    def test_valid_matrix(self):
        validator = InputValidator()
        assert validator.validate_matrix(np.eye(5)) == []

    def test_invalid_matrices(self):
        validator = InputValidator()
        assert validator.validate_matrix(np.ones((4, 5)))
        nan = np.eye(4)
        nan[1, 1] = np.nan
        assert any("não finitas" in issue for issue in validator.validate_matrix(nan))

    def test_payloads(self):
        validator = InputValidator()
        assert validator.validate_generator_payload([1, 2])
        assert validator.validate_generator_payload({'generators': [[1.0] * 15]})
        assert validator.validate_generator_payload({'generators': [[1.0] * 16, [1.0] * 25]})
        assert validator.validate_generator_payload({'generators': [[True] * 16]})
        assert validator.validate_generator_payload({'relation_hint': 'abelian', 'generators': [[0.0] * 16]})
        assert validator.validate_generator_payload({'generators': [np.eye(4).reshape(-1).tolist()]}) == []

    def test_summary(self):
        validator = InputValidator()
        validator.validate_matrix(np.eye(4))
        validator.validate_matrix(np.eye(3))
        summary = validator.get_validation_summary()
        assert summary == {'total_validations': 2, 'passed_validations': 1, 'failed_validations': 1}
