"""Duads, synthemes, totals and the 40-vertex graph built from them.

On the six letters 1..6 there are 15 duads (2-subsets), 15 synthemes (perfect
matchings) and 6 totals (sets of five synthemes covering every duad). Baker's table
names the totals A..F and lists, for each pair of totals, the unique syntheme they
share. Reading letter k against total X off that table gives the outer automorphism
of S6 that swaps duads with synthemes.

Example::

    gamma = combinatorial_gamma()
    assert gamma.n_vertices == 40
    assert gamma.value(gamma.index("12"), gamma.index("(12,34,56)")) == 2
"""

import functools
import itertools
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

import torch

from enriqueslab.graphs import IntersectionGraph, VertexMap
from enriqueslab.math import IntegerSymMatrix
from enriqueslab.typing import CertificateError


LETTERS = (1, 2, 3, 4, 5, 6)
TOTAL_NAMES = ("A", "B", "C", "D", "E", "F")

# Baker's table of the six totals: the entry in row X, column Y is the syntheme
# shared by the totals X and Y
BAKER_TABLE: dict[tuple[str, str], str] = {
    ("A", "B"): "14,25,36",
    ("A", "C"): "16,24,35",
    ("A", "D"): "13,26,45",
    ("A", "E"): "12,34,56",
    ("A", "F"): "15,23,46",
    ("B", "C"): "15,26,34",
    ("B", "D"): "12,35,46",
    ("B", "E"): "16,23,45",
    ("B", "F"): "13,24,56",
    ("C", "D"): "14,23,56",
    ("C", "E"): "13,25,46",
    ("C", "F"): "12,36,45",
    ("D", "E"): "15,24,36",
    ("D", "F"): "16,25,34",
    ("E", "F"): "14,26,35",
}


@dataclass(frozen=True, order=True)
class Duad:
    """A 2-subset of the six letters, stored sorted."""

    pair: tuple[int, int]

    def __post_init__(self) -> None:
        a, b = self.pair
        if not (a < b and a in LETTERS and b in LETTERS):
            raise ValueError(f"{self.pair=} is not a sorted pair of letters 1..6")

    @classmethod
    def of(cls, a: int, b: int) -> "Duad":
        """Duad from two letters in any order."""
        return cls((min(a, b), max(a, b)))

    @classmethod
    def parse(cls, text: str) -> "Duad":
        """Parse ``"12"``."""
        a, b = (int(c) for c in text.strip())
        return cls.of(a, b)

    def __contains__(self, letter: int) -> bool:
        return letter in self.pair

    def __str__(self) -> str:
        return f"{self.pair[0]}{self.pair[1]}"


@dataclass(frozen=True, order=True)
class Syntheme:
    """Three disjoint duads covering the six letters, stored sorted."""

    duads: tuple[Duad, Duad, Duad]

    def __post_init__(self) -> None:
        letters = sorted(x for d in self.duads for x in d.pair)
        if letters != list(LETTERS) or tuple(sorted(self.duads)) != self.duads:
            raise ValueError(f"{self.duads=} is not a sorted perfect matching")

    @classmethod
    def of(cls, duads: Iterable[Duad]) -> "Syntheme":
        """Syntheme from three duads in any order."""
        return cls(tuple(sorted(duads)))

    @classmethod
    def parse(cls, text: str) -> "Syntheme":
        """Parse ``"(12,34,56)"`` or ``"12,34,56"``."""
        return cls.of(Duad.parse(part) for part in text.strip("() ").split(","))

    def __contains__(self, duad: Duad) -> bool:
        return duad in self.duads

    def __str__(self) -> str:
        return "(" + ",".join(str(d) for d in self.duads) + ")"


@dataclass(frozen=True)
class Total:
    """Five synthemes, pairwise without common duad, named by a letter A..F."""

    name: str
    synthemes: tuple[Syntheme, ...]

    def __post_init__(self) -> None:
        covered = [d for s in self.synthemes for d in s.duads]
        if len(self.synthemes) != 5 or len(set(covered)) != 15:
            raise ValueError(f"total {self.name} does not cover the 15 duads")


@dataclass(frozen=True, order=True)
class TenVector:
    """A splitting of the letters into two triples; the first holds letter 1."""

    triples: tuple[tuple[int, int, int], tuple[int, int, int]]

    def __post_init__(self) -> None:
        first, second = self.triples
        if sorted(first + second) != list(LETTERS) or 1 not in first:
            raise ValueError(f"{self.triples=} is not a normalised splitting")
        if tuple(sorted(first)) != first or tuple(sorted(second)) != second:
            raise ValueError(f"{self.triples=} triples must be sorted")

    @classmethod
    def of(cls, triple: Iterable[int]) -> "TenVector":
        """The splitting of one triple against its complement."""
        chosen = set(triple)
        rest = set(LETTERS) - chosen
        first, second = (chosen, rest) if 1 in chosen else (rest, chosen)
        return cls((tuple(sorted(first)), tuple(sorted(second))))

    @classmethod
    def parse(cls, text: str) -> "TenVector":
        """Parse ``"(123,456)"``."""
        return cls.of(int(c) for c in text.strip("() ").split(",")[0])

    def inside(self, duad: Duad) -> bool:
        """Whether both letters of the duad lie in one triple."""
        return any(set(duad.pair) <= set(t) for t in self.triples)

    def __str__(self) -> str:
        first, second = self.triples
        return "(" + "".join(map(str, first)) + "," + "".join(map(str, second)) + ")"


Vertex = Duad | Syntheme | TenVector


@dataclass(frozen=True)
class PermS6:
    """A permutation of the letters; ``images[k - 1]`` is the image of k."""

    images: tuple[int, ...]

    def __post_init__(self) -> None:
        if sorted(self.images) != list(LETTERS):
            raise ValueError(f"{self.images=} is not a permutation of 1..6")

    @classmethod
    def identity(cls) -> "PermS6":
        """The identity."""
        return cls(LETTERS)

    @classmethod
    def transposition(cls, a: int, b: int) -> "PermS6":
        """The swap of two letters."""
        images = list(LETTERS)
        images[a - 1], images[b - 1] = b, a
        return cls(tuple(images))

    def __call__(self, letter: int) -> int:
        return self.images[letter - 1]

    def __mul__(self, other: "PermS6") -> "PermS6":
        """Composition, ``(self * other)(k) = self(other(k))``."""
        return PermS6(tuple(self(other(k)) for k in LETTERS))

    def inverse(self) -> "PermS6":
        """Inverse permutation."""
        images = [0] * 6
        for k in LETTERS:
            images[self(k) - 1] = k
        return PermS6(tuple(images))

    def act(self, vertex: Vertex) -> Vertex:
        """Image of a duad, syntheme or tenvector."""
        if isinstance(vertex, Duad):
            return Duad.of(*(self(k) for k in vertex.pair))
        if isinstance(vertex, Syntheme):
            return Syntheme.of(self.act(d) for d in vertex.duads)
        return TenVector.of(self(k) for k in vertex.triples[0])


def all_permutations() -> tuple[PermS6, ...]:
    """The 720 elements of S6 in lexicographic order."""
    return tuple(PermS6(p) for p in itertools.permutations(LETTERS))


@functools.cache
def enumerate_duads() -> tuple[Duad, ...]:
    """The 15 duads in lexicographic order."""
    return tuple(Duad(p) for p in itertools.combinations(LETTERS, 2))


@functools.cache
def enumerate_synthemes() -> tuple[Syntheme, ...]:
    """The 15 synthemes in lexicographic order."""
    matchings = [
        Syntheme.of(triple)
        for triple in itertools.combinations(enumerate_duads(), 3)
        if len({x for d in triple for x in d.pair}) == 6
    ]
    return tuple(sorted(matchings))


@functools.cache
def enumerate_tenvectors() -> tuple[TenVector, ...]:
    """The 10 splittings into two triples, ``(123,456)`` first."""
    return tuple(
        sorted(
            TenVector.of((1, *rest)) for rest in itertools.combinations(LETTERS[1:], 2)
        )
    )


def baker_totals() -> tuple[Total, ...]:
    """The six totals as read off Baker's table."""
    totals = []
    for name in TOTAL_NAMES:
        entries = [
            Syntheme.parse(text) for pair, text in BAKER_TABLE.items() if name in pair
        ]
        totals.append(Total(name, tuple(sorted(entries))))
    return tuple(totals)


@functools.cache
def enumerate_totals() -> tuple[Total, ...]:
    """Find all totals by search and match them with Baker's table.

    Raises:
        CertificateError: If the search disagrees with the table, or two totals do
            not share exactly one syntheme.
    """
    found = {
        frozenset(group)
        for group in itertools.combinations(enumerate_synthemes(), 5)
        if len({d for s in group for d in s.duads}) == 15
    }
    table = baker_totals()
    if found != {frozenset(t.synthemes) for t in table}:
        raise CertificateError("Baker's table does not list the totals found by search")
    for first, second in itertools.combinations(table, 2):
        if len(set(first.synthemes) & set(second.synthemes)) != 1:
            raise CertificateError(
                f"totals {first.name}, {second.name} do not share one syntheme"
            )
    return table


def pairing(u: Vertex, v: Vertex) -> int:  # noqa: C901, PLR0911
    """Pairing of two vertices of the combinatorial graph.

    Duads pair 1 when they share a letter, synthemes pair 1 when they share no duad,
    a duad and a syntheme pair 2 on incidence, and tenvectors pair 2 with each other,
    with the duads inside a triple and with the synthemes whose duads all cross.
    """
    if u == v:
        return -2
    if isinstance(v, Duad) and not isinstance(u, Duad):
        u, v = v, u
    if isinstance(v, Syntheme) and isinstance(u, TenVector):
        u, v = v, u
    match u, v:
        case Duad(), Duad():
            return int(bool(set(u.pair) & set(v.pair)))
        case Syntheme(), Syntheme():
            return int(not set(u.duads) & set(v.duads))
        case Duad(), Syntheme():
            return 2 if u in v else 0
        case Duad(), TenVector():
            return 2 if v.inside(u) else 0
        case Syntheme(), TenVector():
            return 2 if not any(v.inside(d) for d in u.duads) else 0
        case TenVector(), TenVector():
            return 2
    raise TypeError(f"cannot pair {type(u).__name__} with {type(v).__name__}")


@functools.cache
def gamma_vertices() -> tuple[Vertex, ...]:
    """Duads, then synthemes, then tenvectors."""
    return (*enumerate_duads(), *enumerate_synthemes(), *enumerate_tenvectors())


def parse_vertex(label: str) -> Vertex:
    """Inverse of ``str`` on the 40 vertices."""
    text = label.strip()
    if not text.startswith("("):
        return Duad.parse(text)
    if text.count(",") == 2:
        return Syntheme.parse(text)
    return TenVector.parse(text)


@functools.cache
def combinatorial_gamma() -> IntersectionGraph:
    """The 40-vertex graph of duads, synthemes and tenvectors."""
    vertices = gamma_vertices()
    rows = [[pairing(u, v) for v in vertices] for u in vertices]
    return IntersectionGraph(
        tuple(str(v) for v in vertices), IntegerSymMatrix(torch.tensor(rows))
    )


def vertex_map(images: Sequence[Vertex]) -> VertexMap:
    """Index form of a map listing the image of every vertex in vertex order."""
    position = {v: i for i, v in enumerate(gamma_vertices())}
    return tuple(position[v] for v in images)


def s6_action(g: PermS6) -> VertexMap:
    """Permutation of the 40 vertex indices induced by a permutation of letters."""
    return vertex_map([g.act(v) for v in gamma_vertices()])


@functools.cache
def letter_total_duality() -> dict[int, str]:
    """Letters matched with totals through Baker's table.

    Letter 1 goes to A. For k != 1, the syntheme of A containing the duad 1k is shared
    by A and exactly one other total, and letter k goes to that total.
    """
    totals = {t.name: t for t in enumerate_totals()}
    duality = {1: "A"}
    for k in LETTERS[1:]:
        (syntheme,) = (s for s in totals["A"].synthemes if Duad.of(1, k) in s)
        (name,) = (
            n for n, t in totals.items() if n != "A" and syntheme in t.synthemes
        )
        duality[k] = name
    if sorted(duality.values()) != list(TOTAL_NAMES):
        raise CertificateError(f"{duality=} is not a bijection onto the totals")
    return duality


def shared_syntheme(first: str, second: str) -> Syntheme:
    """The syntheme common to two totals."""
    key = (first, second) if first < second else (second, first)
    return Syntheme.parse(BAKER_TABLE[key])


@functools.cache
def outer_automorphism() -> VertexMap:
    """The table-defined involution swapping duads with synthemes.

    A duad ij goes to the syntheme shared by the totals of i and j; a syntheme goes
    back to the duad of the two letters whose totals contain it. A tenvector goes to
    the unique tenvector with the same pairings against the images.

    Raises:
        CertificateError: If a tenvector image is not unique, or the map fails to be
            an involutive pairing-preserving permutation.
    """
    duality = letter_total_duality()
    letter_of = {name: k for k, name in duality.items()}
    totals = enumerate_totals()
    images: dict[Vertex, Vertex] = {}
    for duad in enumerate_duads():
        images[duad] = shared_syntheme(*(duality[k] for k in duad.pair))
    for syntheme in enumerate_synthemes():
        names = [t.name for t in totals if syntheme in t.synthemes]
        images[syntheme] = Duad.of(*(letter_of[n] for n in names))
    nodal = [*enumerate_duads(), *enumerate_synthemes()]
    for ten in enumerate_tenvectors():
        profile = [pairing(ten, x) for x in nodal]
        candidates = [
            other
            for other in enumerate_tenvectors()
            if [pairing(other, images[x]) for x in nodal] == profile
        ]
        if len(candidates) != 1:
            raise CertificateError(f"{ten} has {len(candidates)} candidate images")
        images[ten] = candidates[0]
    mapping = vertex_map([images[v] for v in gamma_vertices()])
    if sorted(mapping) != list(range(40)):
        raise CertificateError("outer automorphism is not a bijection")
    if any(mapping[mapping[i]] != i for i in range(30)):
        raise CertificateError(
            "outer automorphism is not an involution on duads and synthemes"
        )
    if not combinatorial_gamma().preserves(mapping):
        raise CertificateError("outer automorphism does not preserve the pairing")
    return mapping
