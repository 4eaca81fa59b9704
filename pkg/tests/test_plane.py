"""Tests for PG(2,4), the cubic and the general six-point sets."""

import itertools

import numpy as np
import pytest
import torch

from enriqueslab import plane
from enriqueslab.fields import binary_field
from enriqueslab.plane import ProjLine, ProjPoint, Transversal, TripleTangent


W = binary_field(4).generator()


class TestIncidence:
    def test_counts(self):
        assert len(plane.enumerate_points()) == 21
        assert len(plane.enumerate_lines()) == 21
        inc = plane.incidence_matrix()
        assert inc.sum(dim=0).tolist() == [5] * 21
        assert inc.sum(dim=1).tolist() == [5] * 21

    def test_two_lines_meet_once(self):
        inc = plane.incidence_matrix()
        meets = inc @ inc.T
        assert torch.equal(meets, 4 * torch.eye(21, dtype=torch.int64) + 1)

    def test_matrix_matches_pairing(self):
        inc = plane.incidence_matrix()
        for (i, L), (j, p) in itertools.product(
            enumerate(plane.enumerate_lines()), enumerate(plane.enumerate_points())
        ):
            assert bool(inc[i, j]) == plane.incidence(p, L)

    def test_join_and_meet(self):
        p, q = ProjPoint.of(1, 0, 0), ProjPoint.of(0, 1, 0)
        L = plane.join(p, q)
        assert L == ProjLine.of(0, 0, 1)
        assert plane.meet(L, ProjLine.of(0, 1, 0)) == p
        with pytest.raises(ValueError, match="do not span a line"):
            plane.join(p, p)

    def test_normalisation(self):
        assert ProjPoint.of(W, W, W) == ProjPoint.of(1, 1, 1)
        assert str(ProjPoint.of(0, W, 1)) == "(0,1,w^2)"
        with pytest.raises(ValueError, match="cannot all vanish"):
            ProjPoint.of(0, 0, 0)
        with pytest.raises(ValueError, match="not normalised"):
            ProjPoint((0, 2, 1))


class TestCubic:
    def test_torsion_points_on_cubic(self):
        torsion = plane.torsion_points()
        assert len(torsion) == 9
        assert set(plane.rational_points_on_cubic()) == set(torsion)

    def test_line_census(self):
        assert plane.line_census() == {"TripleTangent": 9, "Transversal": 12}
        assert len(plane.transversals()) == 12

    def test_lines_through_torsion_point(self):
        for p in plane.torsion_points():
            kinds = [plane.line_type(L) for L in plane.lines_through(p)]
            assert sum(isinstance(k, TripleTangent) for k in kinds) == 1
            assert sum(isinstance(k, Transversal) for k in kinds) == 4

    def test_triple_tangents_are_distinct(self):
        tangents = [plane.line_type(L) for L in plane.enumerate_lines()]
        points = [t.at for t in tangents if isinstance(t, TripleTangent)]
        assert sorted(points) == sorted(plane.torsion_points())

    def test_pencil_triangles(self):
        triangles = plane.pencil_triangles()
        assert len(triangles) == 4
        members = {s for s, _ in triangles}
        assert members == {binary_field(4).one, W, W**2, None}
        used = [L for _, triple in triangles for L in triple]
        assert sorted(used) == sorted(plane.transversals())
        for _, triple in triangles:
            covered = [p for L in triple for p in plane.line_type(L).through]
            assert sorted(covered) == sorted(plane.torsion_points())

    def test_pencil_contains_torsion_points(self):
        for s in [*binary_field(4).elements(), None]:
            member = plane.pencil_member(s)
            for p in plane.torsion_points():
                point = dict(zip(plane.COORDINATES, p.field_coords(), strict=True))
                assert not member.evaluate(point)


class TestSextuples:
    def test_collinearity_table_matches_determinants(self):
        points = plane.enumerate_points()
        table = plane.collinearity_table()
        for a, b, c in itertools.combinations(range(21), 3):
            expected = plane.is_collinear(points[a], points[b], points[c])
            assert bool(table[a, b, c]) == expected

    def test_168_general_sextuples(self):
        sextuples = plane.general_sextuples()
        assert len(sextuples) == 168
        assert all(plane.make_sextuple(s.points).general for s in sextuples)

    def test_brute_force_count_on_a_sample(self, rng: np.random.Generator):
        points = plane.enumerate_points()
        general = {s.points for s in plane.general_sextuples()}
        for _ in range(500):
            chosen = sorted(points[i] for i in rng.choice(21, size=6, replace=False))
            sextuple = plane.make_sextuple(chosen)
            assert sextuple.general == (sextuple.points in general)

    def test_external_lines_form_dual_hyperoval(self):
        inc = plane.incidence_matrix()
        for s in plane.general_sextuples():
            lines = plane.external_lines(s.points)
            assert len(lines) == 6
            rows = inc[[plane.line_index(L) for L in lines]]
            assert int(rows.sum(dim=0).max()) <= 2

    def test_collineations_permute_general_sextuples(self, rng: np.random.Generator):
        general = {s.points for s in plane.general_sextuples()}
        for _ in range(20):
            matrix = plane.random_collineation(rng)
            images = {
                tuple(sorted(plane.apply_collineation(matrix, p) for p in s))
                for s in general
            }
            assert images == general

    def test_sextuple_validation(self):
        points = plane.enumerate_points()
        with pytest.raises(ValueError, match="six distinct points"):
            plane.Sextuple(points[:5], general=False)
