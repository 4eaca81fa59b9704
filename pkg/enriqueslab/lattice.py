"""NS(Y) from the 42-curve configuration and the Num(X) model of the quotient.

The 21 lines and 21 points of PG(2,4) give 42 nodal classes: ``A_m`` for a line m
and ``C_p`` for a point p. Their Gram matrix has a rank-20 radical and the quotient
is an even lattice of signature (1,21). Twelve pairwise disjoint classes (six lines
missing six points) are contracted; the orthogonal complement of their span, with
its pairing halved, is the even unimodular lattice of signature (1,9).

Vectors of NS(Y) are held in quotient coordinates, the last 22 coordinates of ``v V``
where ``V`` is a unimodular completion of the radical basis. Vectors of Num(X) are
held in the coordinates of the complement basis.

Example::

    ns = build_ns_y()
    cfg = find_contraction_configs()[0]
    numx = orthogonal_complement(ns, cfg)
    assert det_lattice(numx.gram10) == -1
"""

# ruff: noqa: RUF002

import functools
import itertools
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Any

import torch
from tqdm import tqdm

from enriqueslab.graphs import IntersectionGraph
from enriqueslab.math import (
    IntegerSymMatrix,
    det_lattice,
    exact_rank,
    exact_signature,
    extend_to_unimodular,
    integer_kernel,
    is_primitive,
    snf_kernel,
    solve_in_basis,
    to_tensor,
)
from enriqueslab.plane import (
    ProjLine,
    ProjPoint,
    Sextuple,
    collinearity_table,
    enumerate_lines,
    enumerate_points,
    general_sextuples,
    incidence_matrix,
    line_index,
    point_index,
)
from enriqueslab.sylvester import Duad, Syntheme, TenVector, Vertex, gamma_vertices
from enriqueslab.typing import CertificateError, Family


N_CURVES = 42
N_RADICAL = 20


@dataclass(frozen=True)
class CurveClass:
    """One of the 42 nodal curves.

    Attributes:
        id (int): 0..20 for family A (lines), 21..41 for family B (points).
        family (Family): ``"A"`` or ``"B"``.
        plane_object (ProjLine | ProjPoint): The line or point it lies over.
    """

    id: int
    family: Family
    plane_object: ProjLine | ProjPoint

    def vector(self) -> torch.Tensor:
        """Unit vector in the free module on the 42 curves."""
        return unit(self.id)


def unit(curve_id: int) -> torch.Tensor:
    """Basis vector of Z^42."""
    v = torch.zeros(N_CURVES, dtype=torch.int64)
    v[curve_id] = 1
    return v


def line_curve(L: ProjLine) -> int:
    """Curve id of ``A_L``."""
    return line_index(L)


def point_curve(p: ProjPoint) -> int:
    """Curve id of ``C_p``."""
    return 21 + point_index(p)


@functools.cache
def curve_classes() -> tuple[CurveClass, ...]:
    """The 42 curves, family A first."""
    lines = [CurveClass(i, "A", L) for i, L in enumerate(enumerate_lines())]
    points = [CurveClass(21 + i, "B", p) for i, p in enumerate(enumerate_points())]
    return (*lines, *points)


def configuration_gram() -> IntegerSymMatrix:
    """Gram of the 42 curves: -2 on the diagonal, incidence across the families."""
    inc = incidence_matrix()
    eye = torch.eye(21, dtype=torch.int64)
    top = torch.cat([-2 * eye, inc], dim=1)
    bottom = torch.cat([inc.T, -2 * eye], dim=1)
    return IntegerSymMatrix(torch.cat([top, bottom]))


@dataclass(frozen=True, eq=False)
class NsY:
    """NS(Y) as the quotient of Z^42 by the radical of the configuration Gram.

    Attributes:
        gram42 (IntegerSymMatrix): Configuration Gram on the 42 curves.
        radical_basis (torch.Tensor): 20 x 42 HNF basis of the radical.
        quotient_basis (torch.Tensor): 22 x 42 lifts completing the radical basis.
        transform (torch.Tensor): 42 x 42 unimodular ``V``; ``(v V)[20:]`` are the
            quotient coordinates of ``v``.
        gram22 (IntegerSymMatrix): Gram of the quotient basis.
    """

    gram42: IntegerSymMatrix
    radical_basis: torch.Tensor
    quotient_basis: torch.Tensor
    transform: torch.Tensor
    gram22: IntegerSymMatrix

    def to_quotient(self, v: torch.Tensor) -> torch.Tensor:
        """Quotient coordinates of a vector of Z^42."""
        return (v @ self.transform)[N_RADICAL:]

    def lift(self, x: torch.Tensor) -> torch.Tensor:
        """A vector of Z^42 with the given quotient coordinates."""
        return x @ self.quotient_basis

    def pair(self, x: torch.Tensor, y: torch.Tensor) -> int:
        """Pairing of two vectors in quotient coordinates."""
        return self.gram22.pair(x, y)

    def curve(self, curve_id: int) -> torch.Tensor:
        """Quotient coordinates of a curve class."""
        return self.to_quotient(unit(curve_id))

    def in_radical(self, v: torch.Tensor) -> bool:
        """Whether a vector of Z^42 pairs to zero with everything."""
        return not bool((self.gram42.entries @ v).any())


def ell_vector(m: ProjLine) -> torch.Tensor:
    """``2 A_m + sum of C_p over p on m`` in Z^42."""
    v = 2 * unit(line_curve(m))
    v[21:] += incidence_matrix()[line_index(m)]
    return v


def ell_class(ns: NsY, m: ProjLine) -> torch.Tensor:
    """The pullback of a line, in quotient coordinates."""
    return ns.to_quotient(ell_vector(m))


@functools.cache
def build_ns_y() -> NsY:
    """Assemble NS(Y) and certify its invariants.

    Raises:
        CertificateError: On a wrong radical rank, signature, determinant or parity,
            or when the pullback of a line depends on the line.
    """
    gram42 = configuration_gram()
    radical = snf_kernel(gram42)
    if radical.shape[0] != N_RADICAL:
        raise CertificateError(f"radical has rank {radical.shape[0]}, expected 20")
    echelon = extend_to_unimodular(radical, N_CURVES)
    transform = to_tensor(echelon.transform)
    quotient_basis = to_tensor(echelon.inverse[N_RADICAL:])
    gram22 = gram42.congruent(quotient_basis)
    ns = NsY(gram42, radical, quotient_basis, transform, gram22)
    if (signature := exact_signature(gram22)) != (1, 21, 0):
        raise CertificateError(f"NS(Y) has {signature=}, expected (1, 21, 0)")
    if abs(det := det_lattice(gram22)) != 4 or not gram22.is_even:
        raise CertificateError(f"NS(Y) has {det=}, even={gram22.is_even}")
    lines = enumerate_lines()
    reference = ell_vector(lines[0])
    for m in lines[1:]:
        if not ns.in_radical(ell_vector(m) - reference):
            raise CertificateError(f"pullback of {m} differs from that of {lines[0]}")
    ell = ell_class(ns, lines[0])
    if ns.pair(ell, ell) != 2:
        raise CertificateError("the pullback of a line does not have square 2")
    return ns


@dataclass(frozen=True, eq=False)
class CremonaVector:
    """``2 ell - (C_1 + ... + C_6)`` for a general six-point set.

    Attributes:
        sextuple (Sextuple): The six points.
        vector (torch.Tensor): Representative in Z^42.
        coords (torch.Tensor): Quotient coordinates.
    """

    sextuple: Sextuple
    vector: torch.Tensor
    coords: torch.Tensor


@functools.cache
def _cremona_vectors(ns: NsY) -> tuple[CremonaVector, ...]:
    ell = ell_vector(enumerate_lines()[0])
    out = []
    for sextuple in general_sextuples():
        v = 2 * ell
        for p in sextuple.points:
            v[point_curve(p)] -= 1
        out.append(CremonaVector(sextuple, v, ns.to_quotient(v)))
    return tuple(out)


def cremona_vectors(ns: NsY) -> tuple[CremonaVector, ...]:
    """One (-4)-vector per general six-point set, in sextuple order."""
    return _cremona_vectors(ns)


def cremona_matrix(ns: NsY) -> torch.Tensor:
    """168 x 22 tensor of the Cremona vectors in quotient coordinates."""
    return torch.stack([c.coords for c in cremona_vectors(ns)])


@dataclass(frozen=True)
class ContractionConfig:
    """Six lines and six points, no point on any line.

    Attributes:
        lines (tuple[ProjLine, ...]): The contracted lines, sorted.
        points (tuple[ProjPoint, ...]): The contracted points, sorted.
        curve_ids (tuple[int, ...]): Ids of the twelve classes, lines first.
    """

    lines: tuple[ProjLine, ...]
    points: tuple[ProjPoint, ...]
    curve_ids: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(set(self.lines)) != 6 or len(set(self.points)) != 6:
            raise ValueError("a contraction uses six distinct lines and six points")
        inc = incidence_matrix()
        if any(
            inc[line_index(L), point_index(p)] for L in self.lines for p in self.points
        ):
            raise ValueError("a contracted point lies on a contracted line")
        expected = tuple(
            [line_curve(L) for L in self.lines] + [point_curve(p) for p in self.points]
        )
        if self.curve_ids != expected:
            raise ValueError(f"{self.curve_ids=} do not match the lines and points")

    @classmethod
    def of(
        cls, lines: Sequence[ProjLine], points: Sequence[ProjPoint]
    ) -> "ContractionConfig":
        """Sorted configuration with derived curve ids."""
        lines, points = tuple(sorted(lines)), tuple(sorted(points))
        ids = tuple([line_curve(L) for L in lines] + [point_curve(p) for p in points])
        return cls(lines, points, ids)

    @property
    def letters(self) -> dict[ProjPoint, int]:
        """The contracted points numbered 1..6 in sorted order."""
        return {p: k for k, p in enumerate(self.points, start=1)}

    def contracted_matrix(self, ns: NsY) -> torch.Tensor:
        """12 x 22 quotient coordinates of the contracted classes."""
        return torch.stack([ns.curve(i) for i in self.curve_ids])

    def divisor(self) -> torch.Tensor:
        """``-(E_1 + ... + E_12)`` in Z^42."""
        v = torch.zeros(N_CURVES, dtype=torch.int64)
        v[list(self.curve_ids)] = -1
        return v


def orthogonal_cremona(ns: NsY, cfg: ContractionConfig) -> tuple[CremonaVector, ...]:
    """Cremona vectors orthogonal to all twelve contracted classes."""
    products = cremona_matrix(ns) @ ns.gram22.entries @ cfg.contracted_matrix(ns).T
    keep = (products == 0).all(dim=1).tolist()
    return tuple(c for c, k in zip(cremona_vectors(ns), keep, strict=True) if k)


def triangle_splitting(
    cfg: ContractionConfig, sextuple: Sextuple
) -> tuple[tuple[ProjLine, ...], ...]:
    """The two triangles of contracted lines whose vertices are the sextuple.

    Two contracted lines go in the same triangle when they meet in a point of the
    sextuple.

    Raises:
        CertificateError: If the lines do not split into two triangles this way.
    """
    chosen = set(sextuple.points)
    inc = incidence_matrix()

    def meet_in_sextuple(L: ProjLine, M: ProjLine) -> bool:
        row = inc[line_index(L)] * inc[line_index(M)]
        hits = row.nonzero().flatten().tolist()
        return any(enumerate_points()[i] in chosen for i in hits)

    first = cfg.lines[0]
    triangle = tuple(L for L in cfg.lines if L == first or meet_in_sextuple(first, L))
    other = tuple(L for L in cfg.lines if L not in triangle)
    for part in (triangle, other):
        if len(part) != 3 or not all(
            meet_in_sextuple(L, M) for L, M in itertools.combinations(part, 2)
        ):
            names = [str(p) for p in sextuple.points]
            raise CertificateError(f"{names} is not a triangle pair")
    if any(meet_in_sextuple(L, M) for L in triangle for M in other):
        raise CertificateError("triangles share a vertex")
    return tuple(sorted((triangle, other)))


def _no_three_concurrent(line_sets: torch.Tensor) -> torch.Tensor:
    inc = incidence_matrix().T
    concurrent = torch.einsum("pa,pb,pc->abc", inc, inc, inc) > 0
    triples = torch.combinations(torch.arange(6), r=3)
    hits = concurrent[
        line_sets[:, triples[:, 0]],
        line_sets[:, triples[:, 1]],
        line_sets[:, triples[:, 2]],
    ]
    return ~hits.any(dim=1)


_CONFIGS: dict[bool, tuple[ContractionConfig, ...]] = {}


def find_contraction_configs(
    *, prune: bool = True, pbar: bool | dict[str, Any] = False
) -> tuple[ContractionConfig, ...]:
    """All six-line, six-point contractions with exactly ten orthogonal Cremona vectors.

    Line sets come first; with ``prune`` those with three concurrent lines are
    skipped. For each remaining set every six-subset of the points it misses is
    tried, kept when general, and accepted when exactly ten of the 168 Cremona
    vectors are orthogonal to the twelve classes. The result is memoised per
    ``prune``, so the progress bar only shows on the first search.

    Args:
        prune (bool): Skip line sets with three concurrent lines. Defaults to True.
        pbar (bool | dict[str, Any], optional): Progress bar over candidate line sets,
            or tqdm keyword arguments. Defaults to False.

    Returns:
        tuple[ContractionConfig, ...]: Configurations sorted by curve ids.

    Raises:
        CertificateError: If no configuration exists.
    """
    if prune not in _CONFIGS:
        _CONFIGS[prune] = _search_configs(prune=prune, pbar=pbar)
    return _CONFIGS[prune]


def _search_configs(
    *, prune: bool, pbar: bool | dict[str, Any]
) -> tuple[ContractionConfig, ...]:
    ns = build_ns_y()
    lines, points = enumerate_lines(), enumerate_points()
    inc = incidence_matrix().to(torch.bool)
    line_sets = torch.combinations(torch.arange(21), r=6)
    if prune:
        line_sets = line_sets[_no_three_concurrent(line_sets)]
    missed = ~inc[line_sets].any(dim=1)
    enough = missed.sum(dim=1) >= 6
    line_sets, missed = line_sets[enough], missed[enough]
    collinear = collinearity_table()
    crem = cremona_matrix(ns) @ ns.gram22.entries

    pbar_kwargs = dict(pbar) if isinstance(pbar, dict) else {}
    pbar_kwargs.setdefault("desc", "Contraction search")
    pbar_kwargs.setdefault("disable", not pbar)
    configs = []
    for row, free in tqdm(
        zip(line_sets.tolist(), missed, strict=True), total=len(line_sets), **pbar_kwargs
    ):
        for chosen in itertools.combinations(free.nonzero().flatten().tolist(), 6):
            if any(collinear[t].item() for t in itertools.combinations(chosen, 3)):
                continue
            cfg = ContractionConfig.of(
                [lines[i] for i in row], [points[i] for i in chosen]
            )
            orthogonal = (crem @ cfg.contracted_matrix(ns).T == 0).all(dim=1)
            if int(orthogonal.sum()) == 10:
                configs.append(cfg)
    if not configs:
        raise CertificateError("no contraction configuration exists")
    return tuple(sorted(configs, key=lambda c: c.curve_ids))


@dataclass(frozen=True, eq=False)
class NumX:
    """The orthogonal complement of the contracted classes with halved pairing.

    Attributes:
        ns (NsY): Ambient lattice.
        config (ContractionConfig): The contracted classes.
        complement_basis (torch.Tensor): 10 x 22 HNF basis in quotient coordinates.
        complement_gram (IntegerSymMatrix): Gram of the basis in NS(Y).
        gram10 (IntegerSymMatrix): ``complement_gram / 2``.
    """

    ns: NsY
    config: ContractionConfig
    complement_basis: torch.Tensor
    complement_gram: IntegerSymMatrix
    gram10: IntegerSymMatrix

    def pair(self, x: torch.Tensor, y: torch.Tensor) -> int:
        """Pairing of two vectors in complement coordinates."""
        return self.gram10.pair(x, y)

    def embed(self, x: torch.Tensor) -> torch.Tensor:
        """Quotient coordinates of a vector given in complement coordinates."""
        return x @ self.complement_basis


@functools.cache
def orthogonal_complement(ns: NsY, cfg: ContractionConfig) -> NumX:
    """Num(X) for one contraction.

    Raises:
        CertificateError: If the complement has odd entries, or the halved pairing
            is not even, unimodular and of signature (1,9), or the basis is not
            primitive.
    """
    products = cfg.contracted_matrix(ns) @ ns.gram22.entries
    basis = to_tensor(integer_kernel(products, 22), 22)
    if basis.shape[0] != 10 or not is_primitive(basis, 22):
        raise CertificateError(
            f"complement basis of shape {tuple(basis.shape)} is not primitive"
        )
    gram = ns.gram22.congruent(basis)
    try:
        gram10 = gram.halved()
    except ValueError as exc:
        raise CertificateError("complement Gram has odd entries") from exc
    if det_lattice(gram10) != -1 or not gram10.is_even:
        raise CertificateError("halved complement Gram is not even unimodular")
    if (signature := exact_signature(gram10)) != (1, 9, 0):
        raise CertificateError(f"halved complement Gram has {signature=}")
    return NumX(ns, cfg, basis, gram, gram10)


def project_to_num_x(numx: NumX, v: torch.Tensor) -> torch.Tensor:
    """Complement coordinates of a quotient vector orthogonal to the contraction.

    Raises:
        ValueError: If ``v`` is not in the complement.
    """
    return torch.tensor(solve_in_basis(numx.complement_basis, v), dtype=torch.int64)


@dataclass(frozen=True, eq=False)
class NodalClass:
    """A non-contracted curve C with the two contracted curves it meets.

    Attributes:
        curve (CurveClass): C.
        meets (tuple[int, int]): Ids of the contracted curves E, E'.
        coords (torch.Tensor): ``2C + E + E'`` in Num(X) coordinates.
    """

    curve: CurveClass
    meets: tuple[int, int]
    coords: torch.Tensor


def nodal_curve_classes(numx: NumX, cfg: ContractionConfig) -> tuple[NodalClass, ...]:
    """The 30 nodal classes on X, family A first.

    Raises:
        CertificateError: If a non-contracted curve meets other than two contracted ones.
    """
    ns, gram = numx.ns, numx.ns.gram42.entries
    contracted = set(cfg.curve_ids)
    out = []
    for curve in curve_classes():
        if curve.id in contracted:
            continue
        meets = tuple(j for j in cfg.curve_ids if gram[curve.id, j] == 1)
        if len(meets) != 2:
            raise CertificateError(
                f"curve {curve.id} meets {len(meets)} contracted curves"
            )
        v = 2 * unit(curve.id) + unit(meets[0]) + unit(meets[1])
        out.append(NodalClass(curve, meets, project_to_num_x(numx, ns.to_quotient(v))))
    return tuple(out)


def curve_label(curve: CurveClass, cfg: ContractionConfig) -> Vertex:
    """Duad of a secant line or syntheme of a point off the contracted points.

    A secant meets the contracted points in two letters. A point off them lies on
    three secants whose duads form a syntheme.
    """
    letters = cfg.letters
    inc = incidence_matrix()
    if curve.family == "A":
        on = [letters[p] for p in cfg.points if inc[curve.id, point_index(p)]]
        if len(on) != 2:
            raise CertificateError(f"line {curve.plane_object} is not a secant")
        return Duad.of(*on)
    p = point_index(curve.plane_object)
    secants = [
        curve_label(c, cfg)
        for c in curve_classes()[:21]
        if inc[c.id, p] and c.plane_object not in cfg.lines
    ]
    return Syntheme.of(secants)


def cremona_label(cfg: ContractionConfig, sextuple: Sextuple) -> TenVector:
    """Tenvector of an orthogonal Cremona vector.

    The six secants missing the sextuple carry the duads of two disjoint triangles of
    letters, and their vertex sets are the two triples.
    """
    letters, chosen = cfg.letters, set(sextuple.points)
    inc = incidence_matrix()
    duads = []
    for L in enumerate_lines():
        if L in cfg.lines:
            continue
        hits = inc[line_index(L)].nonzero().flatten().tolist()
        on = {enumerate_points()[i] for i in hits}
        if not on & chosen:
            duads.append(Duad.of(*(letters[p] for p in cfg.points if p in on)))
    first = {k for d in duads if 1 in d for k in d.pair}
    if len(duads) != 6 or len(first) != 3:
        raise CertificateError(f"{duads=} do not form two triangles of letters")
    ten = TenVector.of(first)
    if sorted(d for d in duads) != sorted(d for d in _duads_inside(ten)):
        raise CertificateError(f"{duads=} do not match {ten}")
    return ten


def _duads_inside(ten: TenVector) -> list[Duad]:
    return [Duad.of(*pair) for t in ten.triples for pair in itertools.combinations(t, 2)]


@dataclass(frozen=True, eq=False)
class GammaVectors:
    """The 40 (-2)-vectors of Num(X) with their duad/syntheme/tenvector labels.

    Attributes:
        labels (tuple[Vertex, ...]): Vertex labels in canonical vertex order.
        coords (torch.Tensor): 40 x 10 coordinates in the complement basis.
    """

    labels: tuple[Vertex, ...]
    coords: torch.Tensor


def gamma_vectors(numx: NumX, cfg: ContractionConfig) -> GammaVectors:
    """Label the 30 nodal classes and the 10 projected Cremona vectors.

    Raises:
        CertificateError: If there are not exactly ten orthogonal Cremona vectors,
            or labels collide.
    """
    found: dict[Vertex, torch.Tensor] = {}
    for nodal in nodal_curve_classes(numx, cfg):
        found[curve_label(nodal.curve, cfg)] = nodal.coords
    orthogonal = orthogonal_cremona(numx.ns, cfg)
    if len(orthogonal) != 10:
        raise CertificateError(
            f"{len(orthogonal)} Cremona vectors are orthogonal, expected 10"
        )
    for crem in orthogonal:
        found[cremona_label(cfg, crem.sextuple)] = project_to_num_x(numx, crem.coords)
    order = gamma_vertices()
    if set(found) != set(order):
        raise CertificateError("labels of the 40 vectors are not the 40 vertices")
    return GammaVectors(order, torch.stack([found[v] for v in order]))


def gram_of_40(numx: NumX, cfg: ContractionConfig) -> IntegerSymMatrix:
    """Gram of the 40 labelled vectors in Num(X).

    Raises:
        CertificateError: If a pairing is outside {0, 1, 2}, the diagonal is not -2,
            or the vectors do not span Num(X).
    """
    vectors = gamma_vectors(numx, cfg)
    gram = numx.gram10.congruent(vectors.coords)
    entries = gram.entries
    off = entries[~torch.eye(40, dtype=torch.bool)]
    if not bool((entries.diagonal() == -2).all()):
        raise CertificateError("a vector of the 40 does not have square -2")
    if bool(((off < 0) | (off > 2)).any()):
        raise CertificateError("a pairing among the 40 vectors is outside {0, 1, 2}")
    if exact_rank(entries) != 10:
        raise CertificateError("the 40 vectors do not span Num(X)")
    return gram


def lattice_gamma(numx: NumX, cfg: ContractionConfig) -> IntersectionGraph:
    """The graph of the 40 vectors with duad, syntheme and tenvector labels."""
    labels = tuple(str(v) for v in gamma_vertices())
    return IntersectionGraph(labels, gram_of_40(numx, cfg))


def exceptional_curve_check(ns: NsY, cfg: ContractionConfig) -> list[dict[str, int]]:
    """Numerics of each contracted curve on the quotient surface.

    The image C' of a contracted class C has square C^2/2 and canonical degree
    ``<E_1 + ... + E_12, C>/2``; both are -1, so the genus formula gives 0.

    Raises:
        CertificateError: If some curve is not a (-1)-curve of genus 0.
    """
    total = -cfg.divisor()
    out = []
    for curve_id in cfg.curve_ids:
        square = ns.gram42[curve_id, curve_id] // 2
        canonical = int(total @ ns.gram42.entries @ unit(curve_id)) // 2
        genus = (square + canonical) // 2 + 1
        if (square, canonical, genus) != (-1, -1, 0):
            raise CertificateError(f"curve {curve_id}: {square=}, {canonical=}, {genus=}")
        out.append(
            {"curve": curve_id, "square": square, "canonical": canonical, "genus": genus}
        )
    return out
