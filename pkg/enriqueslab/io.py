"""Export of the plane, the 40-vertex graph, the lattices and the Vinberg certificate.

Five formats are written:

* ``gamma-dot``: undirected DOT, pairing 2 drawn as two parallel edges
* ``gamma-json``: vertex labels and pairing rows
* ``lattice-json``: Gram matrices of NS(Y), Num(X) and the 40 vectors, with the
  coordinates of the 40 vectors, for one contraction configuration
* ``plane-json``: points, lines, incidence, torsion points and general sextuples of
  PG(2,4); points and lines are referred to by index after their own lists
* ``vinberg-json``: every connected parabolic with the index of a completing rank-8
  diagram, the diagrams and the type census

JSON documents carry ``"schema": "enriqueslab/v1"`` and a ``"kind"``.
"""

import json
from pathlib import Path
from typing import Any

import torch

from enriqueslab.graphs import IntersectionGraph
from enriqueslab.lattice import (
    build_ns_y,
    find_contraction_configs,
    gamma_vectors,
    gram_of_40,
    orthogonal_complement,
)
from enriqueslab.math import IntegerSymMatrix
from enriqueslab.plane import (
    ProjLine,
    ProjPoint,
    Sextuple,
    enumerate_lines,
    enumerate_points,
    general_sextuples,
    incidence_matrix,
    line_index,
    point_index,
    torsion_points,
    transversals,
)
from enriqueslab.sylvester import combinatorial_gamma
from enriqueslab.typing import SCHEMA, ExportKind
from enriqueslab.vinberg import (
    AffineType,
    Component,
    ParabolicDiagram,
    VinbergCertificate,
    gamma_parabolics,
    parabolic_census,
    vinberg_check,
)


EXPORT_KINDS: tuple[ExportKind, ...] = (
    "gamma-dot",
    "gamma-json",
    "lattice-json",
    "plane-json",
    "vinberg-json",
)
LATTICE_KEYS = ("ns_y", "num_x", "gamma")


def lattice_document(config_index: int = 0) -> dict[str, Any]:
    """Gram matrices of NS(Y), Num(X) and the 40 vectors as a JSON-ready mapping."""
    ns = build_ns_y()
    cfg = find_contraction_configs()[config_index]
    numx = orthogonal_complement(ns, cfg)
    vectors = gamma_vectors(numx, cfg)
    return {
        "schema": SCHEMA,
        "kind": "lattice",
        "config_index": config_index,
        "contracted": {
            "lines": [str(L) for L in cfg.lines],
            "points": [str(p) for p in cfg.points],
        },
        "ns_y": ns.gram22.rows(),
        "num_x": numx.gram10.rows(),
        "gamma": gram_of_40(numx, cfg).rows(),
        "vectors": {
            "labels": [str(label) for label in vectors.labels],
            "coords": vectors.coords.tolist(),
        },
    }


def plane_document() -> dict[str, Any]:
    """PG(2,4) with the cubic's torsion points and the general sextuples."""
    sextuples = general_sextuples()
    return {
        "schema": SCHEMA,
        "kind": "plane",
        "points": [list(p.coords) for p in enumerate_points()],
        "lines": [list(L.dual_coords) for L in enumerate_lines()],
        "incidence": incidence_matrix().tolist(),
        "torsion": [point_index(p) for p in torsion_points()],
        "transversals": [line_index(L) for L in transversals()],
        "sextuples": [[point_index(p) for p in s.points] for s in sextuples],
    }


def _component_entry(component: Component, G: IntersectionGraph) -> dict[str, Any]:
    vertices, affine = component
    return {
        "kind": affine.kind,
        "rank": affine.rank,
        "vertices": list(vertices),
        "labels": [G.labels[v] for v in vertices],
    }


def vinberg_document() -> dict[str, Any]:
    """The finite-index certificate of the 40-vertex graph as a JSON-ready mapping."""
    G = combinatorial_gamma()
    components, diagrams = gamma_parabolics()
    certificate = vinberg_check(G, components=components, diagrams=diagrams)
    position = {d: i for i, d in enumerate(diagrams)}
    return {
        "schema": SCHEMA,
        "kind": "vinberg",
        "verdict": certificate.verdict,
        "components": [
            {
                **_component_entry(c, G),
                "completion": None if d is None else position[d],
            }
            for c, d in zip(certificate.components, certificate.completions, strict=True)
        ],
        "diagrams": [
            {
                "types": list(d.types()),
                "components": [_component_entry(c, G) for c in d.components],
            }
            for d in diagrams
        ],
        "census": [
            {"types": list(types), "count": count}
            for types, count in parabolic_census(diagrams).items()
        ],
    }


def render(what: ExportKind, config_index: int = 0) -> str:
    """Text of an export.

    Raises:
        ValueError: If ``what`` is not a known export.
    """
    if what == "gamma-dot":
        return combinatorial_gamma().to_dot()
    if what == "gamma-json":
        return combinatorial_gamma().to_json() + "\n"
    documents = {
        "lattice-json": lambda: lattice_document(config_index),
        "plane-json": plane_document,
        "vinberg-json": vinberg_document,
    }
    if what not in documents:
        raise ValueError(f"{what=} is not one of {EXPORT_KINDS}")
    return json.dumps(documents[what](), sort_keys=True) + "\n"


def export(what: ExportKind, path: str | Path, config_index: int = 0) -> Path:
    """Write an export to ``path``.

    Args:
        what (ExportKind): Which export.
        path (str | Path): Destination file; parent directories are created.
        config_index (int): Contraction configuration for ``lattice-json``.

    Returns:
        Path: The written file.

    Raises:
        OSError: If the file cannot be written, with the path in the message.
    """
    path = Path(path)
    text = render(what, config_index)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot write {what} export to {path}: {exc}") from exc
    return path


def _read_document(path: str | Path, kind: str) -> dict[str, Any]:
    path = Path(path)
    try:
        document = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise OSError(f"cannot read {path}: {exc}") from exc
    if document.get("schema") != SCHEMA or document.get("kind") != kind:
        raise ValueError(
            f"{path} is not an {SCHEMA} {kind} document: "
            f"schema={document.get('schema')!r}, kind={document.get('kind')!r}"
        )
    return document


def read_lattice_json(path: str | Path) -> dict[str, IntegerSymMatrix]:
    """Gram matrices from a ``lattice-json`` export, keyed ns_y, num_x and gamma.

    Raises:
        OSError: If the file cannot be read.
        ValueError: If the document is not a lattice export.
    """
    document = _read_document(path, "lattice")
    return {key: IntegerSymMatrix.from_rows(document[key]) for key in LATTICE_KEYS}


def read_gamma_json(path: str | Path) -> IntersectionGraph:
    """Graph from a ``gamma-json`` export.

    Raises:
        OSError: If the file cannot be read.
        ValueError: If the document is not a graph export.
    """
    document = _read_document(path, "intersection-graph")
    return IntersectionGraph.from_rows(document["labels"], document["pairing"])


def read_plane_json(path: str | Path) -> dict[str, Any]:
    """Points, lines, incidence, torsion points and sextuples of a ``plane-json``.

    Raises:
        OSError: If the file cannot be read.
        ValueError: If the document is not a plane export.
    """
    document = _read_document(path, "plane")
    points = tuple(ProjPoint(tuple(c)) for c in document["points"])
    lines = tuple(ProjLine(tuple(c)) for c in document["lines"])
    return {
        "points": points,
        "lines": lines,
        "incidence": torch.tensor(document["incidence"], dtype=torch.int64),
        "torsion": tuple(points[i] for i in document["torsion"]),
        "transversals": tuple(lines[i] for i in document["transversals"]),
        "sextuples": tuple(
            Sextuple(tuple(points[i] for i in s), general=True)
            for s in document["sextuples"]
        ),
    }


def _read_component(entry: dict[str, Any]) -> Component:
    return tuple(entry["vertices"]), AffineType(entry["kind"], entry["rank"])


def read_vinberg_json(path: str | Path) -> VinbergCertificate:
    """Certificate from a ``vinberg-json`` export.

    Raises:
        OSError: If the file cannot be read.
        ValueError: If the document is not a Vinberg certificate.
    """
    document = _read_document(path, "vinberg")
    diagrams = [
        ParabolicDiagram(tuple(_read_component(c) for c in d["components"]))
        for d in document["diagrams"]
    ]
    entries = document["components"]
    completions = tuple(
        None if c["completion"] is None else diagrams[c["completion"]] for c in entries
    )
    return VinbergCertificate(
        document["verdict"], tuple(_read_component(c) for c in entries), completions
    )
