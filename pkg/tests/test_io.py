import json
from pathlib import Path

import pytest
import torch

from enriqueslab import io
from enriqueslab.graphs import IntersectionGraph
from enriqueslab import plane
from enriqueslab.lattice import GammaVectors, NsY, NumX
from enriqueslab.math import det_lattice
from enriqueslab.typing import SCHEMA
from enriqueslab.vinberg import Component, ParabolicDiagram, vinberg_check


class TestRender:
    def test_dot(self):
        text = io.render("gamma-dot")
        assert text.count("[label=") == 40
        assert '[label="(12,34,56)"]' in text
        assert text.count("[multiplicity=2]") == 210

    def test_gamma_json(self):
        document = json.loads(io.render("gamma-json"))
        assert document["schema"] == SCHEMA
        assert document["labels"][:2] == ["12", "13"]
        assert len(document["pairing"]) == 40

    def test_lattice_json(self, ns: NsY, numx: NumX, vectors: GammaVectors):
        document = json.loads(io.render("lattice-json"))
        assert document["kind"] == "lattice"
        assert document["config_index"] == 0
        assert document["ns_y"] == ns.gram22.rows()
        assert document["num_x"] == numx.gram10.rows()
        assert len(document["contracted"]["lines"]) == 6
        assert document["vectors"]["coords"] == vectors.coords.tolist()
        assert document["vectors"]["labels"] == [str(v) for v in vectors.labels]
        assert len(document["vectors"]["coords"]) == 40

    def test_plane_json(self):
        document = json.loads(io.render("plane-json"))
        assert document["kind"] == "plane"
        assert len(document["points"]) == len(document["lines"]) == 21
        assert document["incidence"] == plane.incidence_matrix().tolist()
        assert len(document["torsion"]) == 9
        assert len(document["transversals"]) == 12
        assert len(document["sextuples"]) == 168

    def test_vinberg_json(self, parabolics: tuple):
        components, diagrams = parabolics
        document = json.loads(io.render("vinberg-json"))
        assert document["verdict"] is True
        assert len(document["components"]) == len(components)
        assert len(document["diagrams"]) == len(diagrams)
        assert sum(row["count"] for row in document["census"]) == len(diagrams)
        for entry in document["components"]:
            completion = document["diagrams"][entry["completion"]]
            members = [c["vertices"] for c in completion["components"]]
            assert entry["vertices"] in members

    def test_unknown(self):
        with pytest.raises(ValueError, match="is not one of"):
            io.render("gamma-svg")

    def test_bad_config_index(self):
        with pytest.raises(IndexError):
            io.render("lattice-json", config_index=168)


class TestExport:
    def test_gamma_json_reads_back(self, tmp_path: Path, gamma: IntersectionGraph):
        path = io.export("gamma-json", tmp_path / "nested" / "gamma.json")
        assert path.is_file()
        graph = io.read_gamma_json(path)
        assert graph.labels == gamma.labels
        assert torch.equal(graph.pairing.entries, gamma.pairing.entries)

    def test_lattice_json_reads_back(self, tmp_path: Path, gamma: IntersectionGraph):
        path = io.export("lattice-json", tmp_path / "lattice.json")
        grams = io.read_lattice_json(path)
        assert set(grams) == set(io.LATTICE_KEYS)
        assert det_lattice(grams["num_x"]) == -1
        assert abs(det_lattice(grams["ns_y"])) == 4
        assert grams["gamma"].rows() == gamma.pairing.rows()

    def test_plane_json_reads_back(self, tmp_path: Path):
        document = io.read_plane_json(io.export("plane-json", tmp_path / "plane.json"))
        assert document["points"] == plane.enumerate_points()
        assert document["lines"] == plane.enumerate_lines()
        assert torch.equal(document["incidence"], plane.incidence_matrix())
        assert document["torsion"] == plane.torsion_points()
        assert document["transversals"] == plane.transversals()
        assert document["sextuples"] == plane.general_sextuples()

    def test_vinberg_json_reads_back(
        self,
        tmp_path: Path,
        gamma: IntersectionGraph,
        parabolics: tuple[tuple[Component, ...], tuple[ParabolicDiagram, ...]],
    ):
        components, diagrams = parabolics
        path = io.export("vinberg-json", tmp_path / "vinberg.json")
        certificate = io.read_vinberg_json(path)
        assert certificate == vinberg_check(
            gamma, components=components, diagrams=diagrams
        )
        assert certificate.verdict
        assert not certificate.missing()

    def test_dot_is_written_verbatim(self, tmp_path: Path):
        path = io.export("gamma-dot", tmp_path / "gamma.dot")
        assert path.read_text(encoding="utf-8") == io.render("gamma-dot")

    def test_unwritable_path(self, tmp_path: Path):
        blocker = tmp_path / "file"
        blocker.write_text("", encoding="utf-8")
        with pytest.raises(OSError, match="cannot write gamma-dot export to"):
            io.export("gamma-dot", blocker / "gamma.dot")

    def test_wrong_kind(self, tmp_path: Path):
        path = io.export("gamma-json", tmp_path / "gamma.json")
        with pytest.raises(ValueError, match="lattice document"):
            io.read_lattice_json(path)

    def test_missing_file(self, tmp_path: Path):
        with pytest.raises(OSError, match="cannot read"):
            io.read_gamma_json(tmp_path / "absent.json")
