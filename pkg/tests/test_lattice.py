import pytest
import torch

from enriqueslab import lattice, plane
from enriqueslab.graphs import IntersectionGraph, find_isomorphism
from enriqueslab.lattice import ContractionConfig, NsY, NumX
from enriqueslab.math import det_lattice, exact_rank, exact_signature
from enriqueslab.sylvester import Duad, Syntheme, TenVector


class TestNsY:
    def test_configuration_gram(self):
        gram = lattice.configuration_gram()
        assert gram.dimension == 42
        assert exact_rank(gram.entries) == 22
        assert int((gram.entries == 1).sum()) == 2 * 21 * 5

    def test_invariants(self, ns: NsY):
        assert ns.radical_basis.shape == (20, 42)
        assert exact_signature(ns.gram22) == (1, 21, 0)
        assert abs(det_lattice(ns.gram22)) == 4
        assert ns.gram22.is_even

    def test_radical_pairs_to_zero(self, ns: NsY):
        for row in ns.radical_basis:
            assert ns.in_radical(row)
            assert not ns.to_quotient(row).any()

    def test_lift_inverts_to_quotient(self, ns: NsY):
        for curve_id in (0, 20, 21, 41):
            x = ns.curve(curve_id)
            assert torch.equal(ns.to_quotient(ns.lift(x)), x)

    def test_curve_pairings_survive_the_quotient(self, ns: NsY):
        for i, j in [(0, 0), (0, 21), (3, 30), (21, 22)]:
            assert ns.pair(ns.curve(i), ns.curve(j)) == ns.gram42[i, j]

    def test_line_pullback_is_independent_of_the_line(self, ns: NsY):
        lines = plane.enumerate_lines()
        classes = {tuple(lattice.ell_class(ns, m).tolist()) for m in lines}
        assert len(classes) == 1
        ell = lattice.ell_class(ns, plane.enumerate_lines()[0])
        assert ns.pair(ell, ell) == 2

    def test_cremona_vectors(self, ns: NsY):
        vectors = lattice.cremona_vectors(ns)
        assert len(vectors) == 168
        squares = {ns.pair(c.coords, c.coords) for c in vectors}
        assert squares == {-4}


class TestContractions:
    def test_count(self, configs: tuple[ContractionConfig, ...]):
        assert len(configs) == 168

    def test_lines_are_external_to_the_points(
        self, configs: tuple[ContractionConfig, ...]
    ):
        for cfg in configs:
            assert plane.make_sextuple(cfg.points).general
            assert cfg.lines == tuple(sorted(plane.external_lines(cfg.points)))

    def test_ten_orthogonal_cremona_vectors(self, ns: NsY, cfg: ContractionConfig):
        assert len(lattice.orthogonal_cremona(ns, cfg)) == 10

    def test_triangle_splitting(self, ns: NsY, cfg: ContractionConfig):
        for crem in lattice.orthogonal_cremona(ns, cfg):
            first, second = lattice.triangle_splitting(cfg, crem.sextuple)
            assert len(first) == len(second) == 3

    def test_rejects_incident_point(self, cfg: ContractionConfig):
        on = plane.points_on(cfg.lines[0])[0]
        with pytest.raises(ValueError, match="lies on a contracted line"):
            ContractionConfig.of(cfg.lines, [on, *cfg.points[1:]])

    def test_exceptional_curves(self, ns: NsY, cfg: ContractionConfig):
        rows = lattice.exceptional_curve_check(ns, cfg)
        assert len(rows) == 12
        assert all((r["square"], r["canonical"], r["genus"]) == (-1, -1, 0) for r in rows)

    def test_progress_options_as_dict(self, configs: tuple[ContractionConfig, ...]):
        options = {"disable": True}
        assert lattice.find_contraction_configs(pbar=options) == configs
        assert options == {"disable": True}

    def test_points_are_forced_by_the_lines(
        self, configs: tuple[ContractionConfig, ...]
    ):
        for cfg in configs:
            missed = [
                p
                for p in plane.enumerate_points()
                if not any(plane.incidence(p, L) for L in cfg.lines)
            ]
            assert tuple(sorted(missed)) == cfg.points
            assert plane.make_sextuple(cfg.points).general

    @pytest.mark.slow
    def test_pruning_loses_nothing(self, configs: tuple[ContractionConfig, ...]):
        assert lattice.find_contraction_configs(prune=False) == configs


class TestNumX:
    def test_unimodular(self, numx: NumX):
        assert numx.complement_basis.shape == (10, 22)
        assert det_lattice(numx.gram10) == -1
        assert exact_signature(numx.gram10) == (1, 9, 0)
        assert numx.gram10.is_even

    def test_basis_is_orthogonal_to_contraction(self, numx: NumX, cfg: ContractionConfig):
        ns = numx.ns
        products = cfg.contracted_matrix(ns) @ ns.gram22.entries @ numx.complement_basis.T
        assert not products.any()

    def test_projection_round_trip(self, numx: NumX):
        x = torch.tensor([1, 0, -2, 0, 0, 3, 0, 0, 1, 0])
        assert torch.equal(lattice.project_to_num_x(numx, numx.embed(x)), x)

    def test_projection_rejects_contracted_class(
        self, numx: NumX, cfg: ContractionConfig
    ):
        with pytest.raises(ValueError, match="not in the span"):
            lattice.project_to_num_x(numx, numx.ns.curve(cfg.curve_ids[0]))

    def test_nodal_classes(self, numx: NumX, cfg: ContractionConfig):
        nodal = lattice.nodal_curve_classes(numx, cfg)
        assert len(nodal) == 30
        assert {numx.pair(c.coords, c.coords) for c in nodal} == {-2}


class TestGammaVectors:
    def test_labels(self, numx: NumX, cfg: ContractionConfig):
        nodal = lattice.nodal_curve_classes(numx, cfg)
        labels = [lattice.curve_label(c.curve, cfg) for c in nodal]
        assert sum(isinstance(v, Duad) for v in labels) == 15
        assert sum(isinstance(v, Syntheme) for v in labels) == 15
        tens = {
            lattice.cremona_label(cfg, c.sextuple)
            for c in lattice.orthogonal_cremona(numx.ns, cfg)
        }
        assert len(tens) == 10
        assert all(isinstance(t, TenVector) for t in tens)

    def test_lattice_graph_equals_combinatorial_graph(
        self, gamma: IntersectionGraph, gamma_from_lattice: IntersectionGraph
    ):
        assert gamma_from_lattice.labels == gamma.labels
        assert torch.equal(gamma_from_lattice.pairing.entries, gamma.pairing.entries)

    def test_other_contraction_is_isomorphic(
        self, ns: NsY, configs: tuple[ContractionConfig, ...], gamma: IntersectionGraph
    ):
        cfg = configs[-1]
        other = lattice.lattice_gamma(lattice.orthogonal_complement(ns, cfg), cfg)
        assert torch.equal(other.pairing.entries, gamma.pairing.entries)
        assert find_isomorphism(other, gamma) is not None

    def test_coordinates_span_num_x(self, vectors: lattice.GammaVectors):
        assert vectors.coords.shape == (40, 10)
        assert exact_rank(vectors.coords) == 10
