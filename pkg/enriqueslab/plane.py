"""The projective plane PG(2,4) and the supersingular cubic E over GF(4).

Points and lines are normalised homogeneous triples of GF(4) residues, compared and
sorted by their coordinates under the element order 0 < 1 < w < w^2. The incidence
matrix and the collinearity table are dense ``torch`` tensors so that the search for
general six-point sets is a handful of batched gathers.

Example::

    points, lines = enumerate_points(), enumerate_lines()
    assert len(points) == len(lines) == 21
    assert incidence_matrix().sum(dim=0).tolist() == [5] * 21

Notes:
    E is x1^2 x2 + x1 x2^2 = x0^3. Its nine GF(4)-points are its 3-torsion points;
    nine of the 21 lines are triple tangents at them and the other twelve cut E in
    three distinct torsion points.
"""

import functools
import itertools
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
import torch

from enriqueslab.fields import FieldElement, binary_field, embed_residue, residue_mul
from enriqueslab.polynomials import SparsePoly, polynomial_ring, substitute
from enriqueslab.typing import CertificateError


GF4 = binary_field(4)
W = GF4.generator()
COORDINATES = ("x0", "x1", "x2")
_MUL = torch.tensor(
    [[residue_mul(4, a, b) for b in range(4)] for a in range(4)], dtype=torch.int64
)


def _normalize(coords: Sequence[FieldElement | int]) -> tuple[int, int, int]:
    residues = [
        embed_residue(c.residue, c.field_order, 4) if isinstance(c, FieldElement) else c
        for c in coords
    ]
    if len(residues) != 3 or not all(0 <= r < 4 for r in residues):
        raise ValueError(f"{coords=} is not a triple over GF(4)")
    lead = next((r for r in residues if r), 0)
    if not lead:
        raise ValueError("homogeneous coordinates cannot all vanish")
    inv = FieldElement(4, lead).inverse().residue
    return tuple(residue_mul(4, r, inv) for r in residues)


def _render(residues: tuple[int, ...]) -> str:
    return "(" + ",".join(str(FieldElement(4, r)) for r in residues) + ")"


@dataclass(frozen=True, order=True)
class ProjPoint:
    """A GF(4)-rational point, first nonzero coordinate equal to 1.

    Attributes:
        coords (tuple[int, int, int]): GF(4) residues.
    """

    coords: tuple[int, int, int]

    def __post_init__(self) -> None:
        if _normalize(self.coords) != tuple(self.coords):
            raise ValueError(f"{self.coords=} is not normalised, use ProjPoint.of")

    @classmethod
    def of(cls, *coords: FieldElement | int) -> "ProjPoint":
        """Normalise an arbitrary nonzero triple."""
        return cls(_normalize(coords))

    def field_coords(self) -> tuple[FieldElement, ...]:
        """Coordinates as field elements."""
        return tuple(FieldElement(4, r) for r in self.coords)

    def __str__(self) -> str:
        return _render(self.coords)


@dataclass(frozen=True, order=True)
class ProjLine:
    """A GF(4)-rational line, stored as its dual point.

    Attributes:
        dual_coords (tuple[int, int, int]): Normalised coefficients of the linear form.
    """

    dual_coords: tuple[int, int, int]

    def __post_init__(self) -> None:
        if _normalize(self.dual_coords) != tuple(self.dual_coords):
            raise ValueError(f"{self.dual_coords=} is not normalised, use ProjLine.of")

    @classmethod
    def of(cls, *coords: FieldElement | int) -> "ProjLine":
        """Normalise an arbitrary nonzero triple."""
        return cls(_normalize(coords))

    def linear_form(self) -> SparsePoly:
        """The form sum L_i x_i."""
        xs = polynomial_ring(*COORDINATES, field_order=4)
        return sum(
            (FieldElement(4, c) * x for c, x in zip(self.dual_coords, xs, strict=True)),
            start=SparsePoly.constant(0, COORDINATES, field_order=4),
        )

    def __str__(self) -> str:
        return "L" + _render(self.dual_coords)


@dataclass(frozen=True)
class Sextuple:
    """Six distinct points with their generality flag.

    Attributes:
        points (tuple[ProjPoint, ...]): Sorted points.
        general (bool): Whether no three of them are collinear.
    """

    points: tuple[ProjPoint, ...]
    general: bool

    def __post_init__(self) -> None:
        if len(set(self.points)) != 6 or tuple(sorted(self.points)) != self.points:
            raise ValueError("a sextuple holds six distinct points in sorted order")


@dataclass(frozen=True)
class TripleTangent:
    """A line meeting E in a single point with multiplicity 3."""

    at: ProjPoint


@dataclass(frozen=True)
class Transversal:
    """A line meeting E in three distinct torsion points."""

    through: tuple[ProjPoint, ProjPoint, ProjPoint]


LineType = TripleTangent | Transversal


def _triples() -> list[tuple[int, int, int]]:
    return sorted(
        _normalize(t) for t in itertools.product(range(4), repeat=3) if any(t)
    )


@functools.cache
def enumerate_points() -> tuple[ProjPoint, ...]:
    """The 21 rational points in coordinate order."""
    return tuple(ProjPoint(t) for t in sorted(set(_triples())))


@functools.cache
def enumerate_lines() -> tuple[ProjLine, ...]:
    """The 21 rational lines in dual-coordinate order."""
    return tuple(ProjLine(t) for t in sorted(set(_triples())))


def incidence(p: ProjPoint, L: ProjLine) -> bool:
    """Whether the dual pairing sum L_i p_i vanishes."""
    total = 0
    for a, b in zip(L.dual_coords, p.coords, strict=True):
        total ^= residue_mul(4, a, b)
    return total == 0


@functools.cache
def incidence_matrix() -> torch.Tensor:
    """21 x 21 int64 tensor indexed ``[line, point]``, 1 on incidence."""
    points = torch.tensor([p.coords for p in enumerate_points()], dtype=torch.int64)
    lines = torch.tensor([L.dual_coords for L in enumerate_lines()], dtype=torch.int64)
    products = _MUL[lines[:, None, :], points[None, :, :]]
    pairing = products[..., 0] ^ products[..., 1] ^ products[..., 2]
    return (pairing == 0).to(torch.int64)


def point_index(p: ProjPoint) -> int:
    """Position of a point in :func:`enumerate_points`."""
    return enumerate_points().index(p)


def line_index(L: ProjLine) -> int:
    """Position of a line in :func:`enumerate_lines`."""
    return enumerate_lines().index(L)


def points_on(L: ProjLine) -> tuple[ProjPoint, ...]:
    """The 5 points of a line."""
    return tuple(p for p in enumerate_points() if incidence(p, L))


def lines_through(p: ProjPoint) -> tuple[ProjLine, ...]:
    """The 5 lines through a point."""
    return tuple(L for L in enumerate_lines() if incidence(p, L))


def join(p: ProjPoint, q: ProjPoint) -> ProjLine:
    """The line through two distinct points."""
    if p == q:
        raise ValueError(f"{p} and {q} do not span a line")
    return next(L for L in lines_through(p) if incidence(q, L))


def meet(L: ProjLine, M: ProjLine) -> ProjPoint:
    """The intersection point of two distinct lines."""
    if L == M:
        raise ValueError(f"{L} and {M} do not meet in a point")
    return next(p for p in points_on(L) if incidence(p, M))


def determinant(rows: Sequence[Sequence[FieldElement]]) -> FieldElement:
    """3 x 3 determinant over GF(4) by cofactor expansion."""
    (a, b, c), (d, e, f), (g, h, i) = rows
    return a * (e * i + f * h) + b * (d * i + f * g) + c * (d * h + e * g)


def is_collinear(p: ProjPoint, q: ProjPoint, r: ProjPoint) -> bool:
    """Collinearity via the coordinate determinant, independent of the incidence table."""
    return not determinant([p.field_coords(), q.field_coords(), r.field_coords()])


def cubic_polynomial() -> SparsePoly:
    """x1^2 x2 + x1 x2^2 + x0^3 over GF(4)."""
    x0, x1, x2 = polynomial_ring(*COORDINATES, field_order=4)
    return x1**2 * x2 + x1 * x2**2 + x0**3


def on_cubic(p: ProjPoint) -> bool:
    """Whether a point lies on E."""
    values = dict(zip(COORDINATES, p.field_coords(), strict=True))
    return not cubic_polynomial().evaluate(values)


# 3-torsion points of E, transcribed as (x0, x1, x2) with w a primitive cube root of 1
TORSION_COORDINATES: tuple[tuple[FieldElement | int, ...], ...] = (
    (0, 1, 0),
    (0, 0, 1),
    (0, 1, 1),
    (1, W, 1),
    (W, W, 1),
    (W**2, W, 1),
    (1, W**2, 1),
    (W, W**2, 1),
    (W**2, W**2, 1),
)


@functools.cache
def torsion_points() -> tuple[ProjPoint, ...]:
    """Q0, ..., Q8 in the transcribed order.

    Raises:
        CertificateError: If a transcribed point is not on E.
    """
    points = tuple(ProjPoint.of(*coords) for coords in TORSION_COORDINATES)
    for k, p in enumerate(points):
        if not on_cubic(p):
            raise CertificateError(f"Q{k} = {p} does not satisfy the cubic")
    if len(set(points)) != 9:
        raise CertificateError("transcribed torsion points are not distinct")
    return points


def rational_points_on_cubic() -> tuple[ProjPoint, ...]:
    """All GF(4)-points of E."""
    return tuple(p for p in enumerate_points() if on_cubic(p))


@functools.cache
def line_type(L: ProjLine) -> LineType:
    """Classify a rational line by how the cubic restricted to it factors.

    With P, Q the first two points of L, the cubic on ``s P + Q`` is a polynomial
    g(s) of degree at most 3; ``3 - deg g`` is the multiplicity at P and the roots of
    g over GF(64) give the other intersection points.

    Raises:
        CertificateError: On any factorisation pattern other than one triple root or
            three simple roots at torsion points.
    """
    P, Q = points_on(L)[:2]
    (s,) = polynomial_ring("s", field_order=4)
    restricted = substitute(
        cubic_polynomial(),
        {
            name: s * FieldElement(4, a) + FieldElement(4, b)
            for name, a, b in zip(COORDINATES, P.coords, Q.coords, strict=True)
        },
    ).numerator
    if restricted.is_zero:
        raise CertificateError(f"{L} lies on the cubic")
    meeting: list[tuple[ProjPoint, int]] = []
    if (at_p := 3 - restricted.degree("s")) > 0:
        meeting.append((P, at_p))
    rational = {FieldElement(4, r).embed(64): r for r in range(4)}
    for root, multiplicity in restricted.roots(64):
        if root not in rational:
            raise CertificateError(f"{L} meets the cubic at a point outside PG(2,4)")
        r = rational[root]
        coords = zip(P.coords, Q.coords, strict=True)
        point = ProjPoint.of(*(residue_mul(4, r, a) ^ b for a, b in coords))
        meeting.append((point, multiplicity))
    torsion = set(torsion_points())
    if sum(m for _, m in meeting) != 3 or any(p not in torsion for p, _ in meeting):
        raise CertificateError(f"{L} meets the cubic in {meeting}")
    if len(meeting) == 1:
        return TripleTangent(meeting[0][0])
    if len(meeting) == 3:
        return Transversal(tuple(sorted(p for p, _ in meeting)))
    raise CertificateError(f"{L} is a simple tangent: {meeting}")


def line_census() -> dict[str, int]:
    """Counts of triple tangents and transversals."""
    kinds = [type(line_type(L)).__name__ for L in enumerate_lines()]
    return {
        "TripleTangent": kinds.count("TripleTangent"),
        "Transversal": kinds.count("Transversal"),
    }


def transversals() -> tuple[ProjLine, ...]:
    """The 12 lines cutting E in three torsion points."""
    return tuple(L for L in enumerate_lines() if isinstance(line_type(L), Transversal))


@functools.cache
def collinearity_table() -> torch.Tensor:
    """Boolean 21 x 21 x 21 tensor, true where three point indices share a line."""
    inc = incidence_matrix()
    return torch.einsum("la,lb,lc->abc", inc, inc, inc) > 0


@functools.cache
def general_sextuples() -> tuple[Sextuple, ...]:
    """All six-point sets with no three collinear, in lexicographic index order."""
    points = enumerate_points()
    subsets = torch.combinations(torch.arange(len(points)), r=6)
    triples = torch.combinations(torch.arange(6), r=3)
    table = collinearity_table()
    collinear = table[
        subsets[:, triples[:, 0]], subsets[:, triples[:, 1]], subsets[:, triples[:, 2]]
    ].any(dim=1)
    return tuple(
        Sextuple(tuple(points[i] for i in row), general=True)
        for row in subsets[~collinear].tolist()
    )


def make_sextuple(points: Sequence[ProjPoint]) -> Sextuple:
    """Wrap six points, deciding generality with the determinant oracle."""
    ordered = tuple(sorted(points))
    general = not any(is_collinear(*t) for t in itertools.combinations(ordered, 3))
    return Sextuple(ordered, general=general)


def external_lines(points: Sequence[ProjPoint]) -> tuple[ProjLine, ...]:
    """Lines containing none of the given points."""
    chosen = set(points)
    return tuple(L for L in enumerate_lines() if not chosen & set(points_on(L)))


def random_collineation(rng: np.random.Generator) -> list[list[int]]:
    """A uniformly drawn invertible 3 x 3 matrix over GF(4), as residues."""
    while True:
        matrix = rng.integers(0, 4, size=(3, 3)).tolist()
        if determinant([[FieldElement(4, x) for x in row] for row in matrix]):
            return matrix


def apply_collineation(matrix: Sequence[Sequence[int]], p: ProjPoint) -> ProjPoint:
    """Image of a point under ``x -> M x``."""
    image = []
    for row in matrix:
        total = 0
        for a, b in zip(row, p.coords, strict=True):
            total ^= residue_mul(4, a, b)
        image.append(total)
    return ProjPoint.of(*image)


def pencil_member(s: FieldElement | None) -> SparsePoly:
    """Member ``E + s x0 (x1^2 + x1 x2 + x2^2)`` of the pencil; ``None`` means s = oo."""
    x0, x1, x2 = polynomial_ring(*COORDINATES, field_order=4)
    conic_part = x0 * (x1**2 + x1 * x2 + x2**2)
    if s is None:
        return conic_part
    return cubic_polynomial() + conic_part * s


def _proportional(p: SparsePoly, q: SparsePoly) -> bool:
    if p.is_zero or q.is_zero:
        return p.is_zero and q.is_zero
    return p * q.leading_term()[1] == q * p.leading_term()[1]


def pencil_triangles() -> list[tuple[FieldElement | None, tuple[ProjLine, ...]]]:
    """Singular members of the pencil spanned by E and x0 (x1^2 + x1 x2 + x2^2).

    Every triple of transversals whose torsion points partition the nine points is a
    triangle; its product of linear forms is matched against the members with
    s in GF(4) or s = oo.

    Raises:
        CertificateError: If a triangle is not a member of the pencil.
    """
    found = []
    parameters: list[FieldElement | None] = [*GF4.elements(), None]
    for triple in itertools.combinations(transversals(), 3):
        covered = [p for L in triple for p in line_type(L).through]
        if len(set(covered)) != 9:
            continue
        first, second, third = (L.linear_form() for L in triple)
        product = first * second * third
        match = [s for s in parameters if _proportional(pencil_member(s), product)]
        if len(match) != 1:
            names = [str(L) for L in triple]
            raise CertificateError(f"triangle {names} is not in the pencil")
        found.append((match[0], triple))
    return found
