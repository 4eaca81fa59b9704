import pytest
import torch

from enriqueslab import vinberg
from enriqueslab.graphs import IntersectionGraph
from enriqueslab.lattice import GammaVectors, NumX
from enriqueslab.math import IntegerSymMatrix
from enriqueslab.typing import PreconditionError
from enriqueslab.vinberg import AffineType, Component, ParabolicDiagram


def _tree(n: int, edges: list[tuple[int, int]]) -> IntersectionGraph:
    rows = [[-2 if i == j else 0 for j in range(n)] for i in range(n)]
    for i, j in edges:
        rows[i][j] = rows[j][i] = 1
    return IntersectionGraph.from_rows([str(i) for i in range(n)], rows)


class TestRecognition:
    @pytest.mark.parametrize(
        ("n", "edges", "expected"),
        [
            (3, [(0, 1), (1, 2), (0, 2)], AffineType("A", 2)),
            (5, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)], AffineType("A", 4)),
            (5, [(0, 1), (0, 2), (0, 3), (0, 4)], AffineType("D", 4)),
            (6, [(0, 1), (0, 2), (0, 3), (1, 4), (1, 5)], AffineType("D", 5)),
            (7, [(0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (5, 6)], AffineType("E", 6)),
            (3, [(0, 1), (1, 2)], None),
            (5, [(0, 1), (1, 2), (2, 3), (1, 4)], None),
        ],
    )
    def test_simple_diagrams(self, n: int, edges: list[tuple[int, int]], expected):
        G = _tree(n, edges)
        assert vinberg.recognize_affine(range(n), G) == expected
        assert vinberg.classify_shape(range(n), G) == expected

    def test_e8_tilde(self):
        edges = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (2, 8)]
        assert vinberg.recognize_affine(range(9), _tree(9, edges)) == AffineType("E", 8)

    def test_double_edge(self):
        G = IntersectionGraph.from_rows("ab", [[-2, 2], [2, -2]])
        assert vinberg.recognize_affine((0, 1), G) == AffineType("A", 1)

    def test_disconnected(self):
        with pytest.raises(ValueError, match="not a connected vertex set"):
            vinberg.recognize_affine((0, 2), _tree(3, [(0, 1), (1, 2)]))

    def test_invalid_type(self):
        with pytest.raises(ValueError, match="is not an affine type"):
            AffineType("E", 5)

    def test_kernel_vector(self):
        gram = IntegerSymMatrix.from_rows([[-2, 1, 1], [1, -2, 1], [1, 1, -2]])
        assert vinberg.kernel_vector(gram).tolist() == [1, 1, 1]
        assert vinberg.kernel_vector(IntegerSymMatrix.from_rows([[-2]])) is None


class TestParabolics:
    def test_every_double_edge_is_a_component(
        self, gamma: IntersectionGraph, parabolics: tuple
    ):
        components, _ = parabolics
        n_doubles = int(gamma.adjacency(2).sum()) // 2
        assert n_doubles == 210
        assert sum(t == AffineType("A", 1) for _, t in components) == n_doubles

    def test_components_have_rank_at_most_eight(self, parabolics: tuple):
        components, _ = parabolics
        assert all(t.rank <= vinberg.MAX_RANK for _, t in components)

    def test_progress_options_as_dict(self, parabolics: tuple):
        options = {"disable": True}
        assert vinberg.gamma_parabolics(pbar=options) == parabolics
        assert options == {"disable": True}

    def test_census(self, parabolics: tuple):
        _, diagrams = parabolics
        census = vinberg.parabolic_census(diagrams)
        assert set(census) == vinberg.GAMMA_MAXIMAL_TYPES
        assert all(count > 0 for count in census.values())
        assert all(d.total_rank == 8 for d in diagrams)

    def test_diagrams_are_orthogonal(self, gamma: IntersectionGraph, parabolics: tuple):
        _, diagrams = parabolics
        for diagram in diagrams[::50]:
            parts = [vs for vs, _ in diagram.components]
            for i, first in enumerate(parts):
                for second in parts[i + 1 :]:
                    assert all(gamma.value(u, v) == 0 for u in first for v in second)

    def test_unexpected_census_is_rejected(self):
        G = _tree(3, [(0, 1), (1, 2), (0, 2)])
        with pytest.raises(vinberg.CertificateError, match="type census"):
            vinberg.maximal_parabolics(G, max_rank=2, expected_types=[("A~1", "A~1")])


class TestFibrationExamples:
    @pytest.mark.parametrize(
        ("name", "types"),
        [
            ("four I3", ("A~2", "A~2", "A~2", "A~2")),
            ("two I5", ("A~4", "A~4")),
            ("I6, IV and III", ("A~5", "A~2", "A~1")),
            ("two I4 and two III", ("A~3", "A~3", "A~1", "A~1")),
        ],
    )
    def test_located(
        self, gamma: IntersectionGraph, parabolics: tuple, name: str, types: tuple
    ):
        (example,) = (e for e in vinberg.FIBRATION_EXAMPLES if e.name == name)
        diagram = vinberg.locate_example(gamma, parabolics[1], example)
        assert diagram.types() == types

    def test_two_sections(self, gamma: IntersectionGraph, parabolics, vectors, numx):
        for example in vinberg.FIBRATION_EXAMPLES:
            diagram = vinberg.locate_example(gamma, parabolics[1], example)
            F = vinberg.fiber_class(diagram, vectors.coords, numx.gram10)
            assert numx.pair(F, F) == 0
            section = vectors.coords[gamma.index(example.section)]
            assert vinberg.multisection_degree(F, section, numx.gram10) == 2

    def test_missing_example(self, gamma: IntersectionGraph):
        ghost = vinberg.FibrationExample("ghost", (("12", "34"),), "56")
        with pytest.raises(vinberg.CertificateError, match="ghost"):
            vinberg.locate_example(gamma, [], ghost)


class TestCriterion:
    def test_gamma_has_finite_index(self, gamma: IntersectionGraph, parabolics: tuple):
        components, diagrams = parabolics
        certificate = vinberg.vinberg_check(
            gamma, components=components, diagrams=diagrams
        )
        assert certificate.verdict
        assert certificate.missing() == []

    def test_lonely_double_edge_fails(self):
        G = IntersectionGraph.from_rows("ab", [[-2, 2], [2, -2]])
        certificate = vinberg.vinberg_check(G, check_span=False)
        assert not certificate.verdict
        assert certificate.missing() == [((0, 1), AffineType("A", 1))]

    def test_span_precondition(self):
        G = IntersectionGraph.from_rows("ab", [[-2, 2], [2, -2]])
        with pytest.raises(PreconditionError, match="span rank 1"):
            vinberg.vinberg_check(G)

    def test_small_ambient_rank(self):
        G = _tree(3, [(0, 1), (1, 2), (0, 2)])
        components: list[Component] = [((0, 1, 2), AffineType("A", 2))]
        certificate = vinberg.vinberg_check(
            G, max_rank=2, ambient_rank=2, components=components
        )
        assert certificate.verdict
        assert certificate.completions == (ParabolicDiagram(tuple(components)),)


class TestReflections:
    def test_reflection_properties(self, numx: NumX, vectors: GammaVectors):
        delta = vinberg.ReflectionVector(vectors.coords[0], numx.gram10)
        assert torch.equal(vinberg.reflect(delta.coords, delta), -delta.coords)
        for x in vectors.coords[1:6]:
            image = vinberg.reflect(x, delta)
            assert torch.equal(vinberg.reflect(image, delta), x)
            assert numx.pair(image, image) == numx.pair(x, x)

    def test_rejects_non_root(self, numx: NumX, vectors: GammaVectors):
        with pytest.raises(ValueError, match="expected -2"):
            vinberg.ReflectionVector(2 * vectors.coords[0], numx.gram10)
