"""Parabolic subdiagrams and the finite-index criterion for reflection groups.

A connected parabolic subdiagram is an affine Dynkin diagram: its Gram is negative
semidefinite of corank one with a strictly positive kernel vector. Recognition is
decided by that definiteness test, and the Dynkin shape (cycles for type A, trees
with branch data for D and E) is matched independently; the two must agree.

The reflection group of a non-degenerate graph has finite index exactly when every
connected parabolic subdiagram is a component of a parabolic subdiagram of maximal
rank, which is 8 in a lattice of rank 10.

Example::

    G = IntersectionGraph.from_rows("abc", [[-2, 1, 1], [1, -2, 1], [1, 1, -2]])
    assert recognize_affine((0, 1, 2), G) == AffineType("A", 2)

Notes:
    Cycles are enumerated only as chordless cycles of the pairing-1 graph: a chord
    of either pairing value makes the cycle's Gram indefinite.
"""

# ruff: noqa: RUF002

import itertools
import math
from collections import Counter
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from typing import Any

import networkx as nx
import torch
from tqdm import tqdm

from enriqueslab.graphs import IntersectionGraph
from enriqueslab.math import IntegerSymMatrix, exact_rank, exact_signature, snf_kernel
from enriqueslab.sylvester import combinatorial_gamma
from enriqueslab.typing import AffineKind, CertificateError, PreconditionError


MAX_RANK = 8
AMBIENT_RANK = 10
E_ARMS = {(2, 2, 2): 6, (1, 3, 3): 7, (1, 2, 5): 8}

# type multisets of the rank-8 parabolic subdiagrams of the 40-vertex graph
GAMMA_MAXIMAL_TYPES: frozenset[tuple[str, ...]] = frozenset(
    {
        ("A~2", "A~2", "A~2", "A~2"),
        ("A~4", "A~4"),
        ("A~5", "A~2", "A~1"),
        ("A~3", "A~3", "A~1", "A~1"),
    }
)


@dataclass(frozen=True, order=True)
class AffineType:
    """An affine Dynkin type; it has ``rank + 1`` vertices.

    Attributes:
        kind (AffineKind): ``"A"``, ``"D"`` or ``"E"``.
        rank (int): n of the type.
    """

    kind: AffineKind
    rank: int

    def __post_init__(self) -> None:
        valid = {
            "A": self.rank >= 1,
            "D": self.rank >= 4,
            "E": self.rank in (6, 7, 8),
        }
        if not valid.get(self.kind, False):
            raise ValueError(f"{self.kind=} with {self.rank=} is not an affine type")

    @property
    def n_vertices(self) -> int:
        """Vertex count."""
        return self.rank + 1

    def __str__(self) -> str:
        return f"{self.kind}~{self.rank}"


Component = tuple[tuple[int, ...], AffineType]


@dataclass(frozen=True)
class ParabolicDiagram:
    """Pairwise orthogonal connected parabolic subdiagrams.

    Attributes:
        components (tuple[Component, ...]): ``(vertices, type)`` pairs, sorted.
    """

    components: tuple[Component, ...]

    @property
    def total_rank(self) -> int:
        """Sum of the component ranks."""
        return sum(t.rank for _, t in self.components)

    @property
    def vertices(self) -> tuple[int, ...]:
        """All vertices, sorted."""
        return tuple(sorted(v for vs, _ in self.components for v in vs))

    def types(self) -> tuple[str, ...]:
        """Type multiset, highest rank first."""
        return tuple(
            str(t) for t in sorted((t for _, t in self.components), reverse=True)
        )

    def describe(self, G: IntersectionGraph) -> list[dict[str, Any]]:
        """Components with vertex labels, for reports."""
        return [
            {"type": str(t), "vertices": [G.labels[v] for v in vs]}
            for vs, t in self.components
        ]


def kernel_vector(gram: IntegerSymMatrix) -> torch.Tensor | None:
    """Primitive kernel vector with positive entries, or None.

    None unless the kernel has rank one and its generator has no zero entry and a
    single sign.
    """
    kernel = snf_kernel(gram)
    if kernel.shape[0] != 1:
        return None
    k = kernel[0]
    if bool((k < 0).all()):
        k = -k
    return k if bool((k > 0).all()) else None


def _simple_graph(subset: Sequence[int], G: IntersectionGraph) -> nx.Graph:
    graph = nx.Graph()
    graph.add_nodes_from(subset)
    graph.add_edges_from(
        (u, v) for u, v in itertools.combinations(subset, 2) if G.value(u, v) == 1
    )
    return graph


def _arms(tree: nx.Graph, center: int) -> tuple[int, ...]:
    arms = []
    for start in tree.neighbors(center):
        length, previous, current = 1, center, start
        while tree.degree(current) == 2:
            previous, current = current, next(
                n for n in tree.neighbors(current) if n != previous
            )
            length += 1
        arms.append(length)
    return tuple(sorted(arms))


def classify_shape(  # noqa: PLR0911
    subset: Sequence[int], G: IntersectionGraph
) -> AffineType | None:
    """Affine type read off the diagram shape alone.

    A pair with pairing 2 is A~1 and a simple cycle on n vertices is A~(n-1). Trees
    are D~4 (one vertex of degree 4), D~n (two branch vertices each holding two
    leaves) or E~6, E~7, E~8 (one branch vertex with arms 2,2,2 or 1,3,3 or 1,2,5).
    """
    n = len(subset)
    doubles = [
        (u, v) for u, v in itertools.combinations(subset, 2) if G.value(u, v) == 2
    ]
    if doubles:
        return AffineType("A", 1) if n == 2 else None
    graph = _simple_graph(subset, G)
    if not nx.is_connected(graph):
        return None
    degrees = dict(graph.degree())
    if graph.number_of_edges() == n and n >= 3 and set(degrees.values()) == {2}:
        return AffineType("A", n - 1)
    if not nx.is_tree(graph) or n < 5:
        return None
    branches = [v for v, d in degrees.items() if d >= 3]
    if max(degrees.values()) == 4:
        return AffineType("D", 4) if n == 5 else None
    if len(branches) == 2:
        leaves = [sum(degrees[w] == 1 for w in graph.neighbors(b)) for b in branches]
        return AffineType("D", n - 1) if leaves == [2, 2] else None
    if len(branches) == 1 and (rank := E_ARMS.get(_arms(graph, branches[0]))):
        return AffineType("E", rank) if n == rank + 1 else None
    return None


def recognize_affine(subset: Sequence[int], G: IntersectionGraph) -> AffineType | None:
    """Affine type of a connected subset, by definiteness with a shape cross-check.

    Returns:
        AffineType | None: The type, or None when the sub-Gram is not negative
            semidefinite of corank one with a positive kernel vector.

    Raises:
        ValueError: If the subset is empty or not connected.
        CertificateError: If shape and definiteness disagree.
    """
    vertices = tuple(sorted(subset))
    if not vertices or not G.is_connected(vertices):
        raise ValueError(f"{vertices=} is not a connected vertex set")
    gram = G.pairing.restrict(vertices)
    n = len(vertices)
    affine = (
        exact_signature(gram) == (0, n - 1, 1) and kernel_vector(gram) is not None
    )
    shape = classify_shape(vertices, G)
    if affine != (shape is not None):
        labels = [G.labels[v] for v in vertices]
        raise CertificateError(f"{labels}: definiteness {affine} but shape {shape}")
    return shape


def _induced_trees(G: IntersectionGraph, max_size: int) -> set[frozenset[int]]:
    """Vertex sets of induced subtrees of the pairing-1 graph that could be D~ or E~."""
    adjacency = G.adjacency(1)
    doubles = G.adjacency(2)
    neighbours = [
        set(adjacency[i].nonzero().flatten().tolist()) for i in range(G.n_vertices)
    ]
    found: set[frozenset[int]] = set()
    seen: set[frozenset[int]] = set()

    def admissible(nodes: frozenset[int]) -> bool:
        degrees = [len(neighbours[v] & nodes) for v in nodes]
        if max(degrees) > 4 or (max(degrees) == 4 and len(nodes) > 5):
            return False
        return sum(d >= 3 for d in degrees) <= 2

    def grow(nodes: frozenset[int]) -> None:
        if nodes in seen:
            return
        seen.add(nodes)
        if len(nodes) >= 5:
            found.add(nodes)
        if len(nodes) == max_size:
            return
        frontier = set().union(*(neighbours[v] for v in nodes)) - nodes
        for w in sorted(frontier):
            if w < min(nodes) or len(neighbours[w] & nodes) != 1:
                continue
            if any(int(doubles[w, v]) for v in nodes):
                continue
            extended = nodes | {w}
            if admissible(extended):
                grow(extended)

    for v in range(G.n_vertices):
        grow(frozenset([v]))
    return found


def enumerate_connected_parabolics(
    G: IntersectionGraph, *, max_rank: int = MAX_RANK
) -> list[Component]:
    """All connected parabolic subdiagrams of rank at most ``max_rank``.

    Candidates are the pairing-2 pairs, the chordless cycles of the pairing-1 graph
    of length 3 to ``max_rank + 1`` and the induced subtrees with a D~ or E~ shape.
    Every candidate is certified by :func:`recognize_affine`.

    Raises:
        ValueError: If some pairing is 3 or more.
    """
    if bool((G.pairing.entries > 2).any()):
        raise ValueError("graph has a pairing of 3 or more")
    candidates: set[tuple[int, ...]] = {
        (u, v)
        for u, v in itertools.combinations(range(G.n_vertices), 2)
        if G.value(u, v) == 2
    }
    simple = _simple_graph(range(G.n_vertices), G)
    candidates.update(
        tuple(sorted(cycle))
        for cycle in nx.chordless_cycles(simple, length_bound=max_rank + 1)
        if len(cycle) >= 3
    )
    candidates.update(tuple(sorted(t)) for t in _induced_trees(G, max_rank + 1))
    found = []
    for subset in sorted(candidates):
        affine = recognize_affine(subset, G)
        if affine is not None and affine.rank <= max_rank:
            found.append((subset, affine))
    return found


def _compatibility(G: IntersectionGraph, components: Sequence[Component]) -> list[int]:
    """Bitmask per component of the later components orthogonal and disjoint to it."""
    members = torch.zeros((len(components), G.n_vertices), dtype=torch.int64)
    for i, (vertices, _) in enumerate(components):
        members[i, list(vertices)] = 1
    off = G.pairing.entries.clone().fill_diagonal_(0)
    touching = (members @ off @ members.T) + (members @ members.T)
    masks = []
    for i, row in enumerate((touching == 0).tolist()):
        masks.append(sum(1 << j for j in range(i + 1, len(components)) if row[j]))
    return masks


def maximal_parabolics(
    G: IntersectionGraph,
    components: Sequence[Component] | None = None,
    *,
    max_rank: int = MAX_RANK,
    expected_types: Iterable[tuple[str, ...]] | None = None,
    pbar: bool | dict[str, Any] = False,
) -> list[ParabolicDiagram]:
    """All parabolic subdiagrams of rank exactly ``max_rank``.

    Components are combined in index order, so every diagram is produced once. The
    search keeps the bitmask of components still compatible with everything chosen.

    Args:
        G (IntersectionGraph): Graph to search.
        components (Sequence[Component] | None): Connected parabolics; enumerated when
            omitted.
        max_rank (int): Target rank. Defaults to 8.
        expected_types (Iterable[tuple[str, ...]] | None): When given, the set of
            type multisets that must occur, no more and no fewer.
        pbar (bool | dict[str, Any], optional): Progress bar over starting components,
            or tqdm keyword arguments. Defaults to False.

    Returns:
        list[ParabolicDiagram]: Diagrams in search order.

    Raises:
        CertificateError: If the type census differs from ``expected_types``.
    """
    if components is None:
        components = enumerate_connected_parabolics(G, max_rank=max_rank)
    components = list(components)
    masks = _compatibility(G, components)
    ranks = [t.rank for _, t in components]
    diagrams: list[ParabolicDiagram] = []

    def extend(chosen: list[int], allowed: int, rank: int) -> None:
        if rank == max_rank:
            diagrams.append(ParabolicDiagram(tuple(components[i] for i in chosen)))
            return
        while allowed:
            j = (allowed & -allowed).bit_length() - 1
            allowed &= allowed - 1
            if rank + ranks[j] <= max_rank:
                extend([*chosen, j], allowed & masks[j], rank + ranks[j])

    pbar_kwargs = dict(pbar) if isinstance(pbar, dict) else {}
    pbar_kwargs.setdefault("desc", "Rank-8 assembly")
    pbar_kwargs.setdefault("disable", not pbar)
    for i in tqdm(range(len(components)), **pbar_kwargs):
        if ranks[i] <= max_rank:
            extend([i], masks[i], ranks[i])

    if expected_types is not None:
        expected = {tuple(t) for t in expected_types}
        if (census := set(parabolic_census(diagrams))) != expected:
            raise CertificateError(
                f"type census {sorted(census)} differs from {sorted(expected)}"
            )
    return diagrams


def parabolic_census(diagrams: Iterable[ParabolicDiagram]) -> dict[tuple[str, ...], int]:
    """Number of diagrams per type multiset."""
    return dict(sorted(Counter(d.types() for d in diagrams).items()))


@dataclass(frozen=True)
class VinbergCertificate:
    """Outcome of the finite-index criterion.

    Attributes:
        verdict (bool): Whether every connected parabolic completes to maximal rank.
        components (tuple[Component, ...]): The connected parabolics.
        completions (tuple[ParabolicDiagram | None, ...]): A completing diagram per
            component, None where there is none.
    """

    verdict: bool
    components: tuple[Component, ...]
    completions: tuple[ParabolicDiagram | None, ...]

    def missing(self) -> list[Component]:
        """Components without a completion."""
        pairs = zip(self.components, self.completions, strict=True)
        return [c for c, d in pairs if d is None]


def vinberg_check(
    G: IntersectionGraph,
    *,
    max_rank: int = MAX_RANK,
    ambient_rank: int = AMBIENT_RANK,
    check_span: bool = True,
    components: Sequence[Component] | None = None,
    diagrams: Sequence[ParabolicDiagram] | None = None,
) -> VinbergCertificate:
    """Decide whether every connected parabolic is a component of a maximal one.

    Args:
        G (IntersectionGraph): Graph of (-2)-vectors.
        max_rank (int): Maximal parabolic rank, ``ambient_rank - 2``. Defaults to 8.
        ambient_rank (int): Rank of the lattice the vectors live in. Defaults to 10.
        check_span (bool): Require the vectors to span the ambient lattice. Defaults
            to True.
        components (Sequence[Component] | None): Precomputed connected parabolics.
        diagrams (Sequence[ParabolicDiagram] | None): Precomputed maximal diagrams.

    Raises:
        PreconditionError: If a pairing is 3 or more, or the span is too small.
    """
    if bool((G.pairing.entries > 2).any()):
        raise PreconditionError("graph has a multiple edge of multiplicity 3 or more")
    if check_span and (rank := exact_rank(G.pairing.entries)) != ambient_rank:
        raise PreconditionError(f"vectors span rank {rank}, expected {ambient_rank}")
    if components is None:
        components = enumerate_connected_parabolics(G, max_rank=max_rank)
    if diagrams is None:
        diagrams = maximal_parabolics(G, components, max_rank=max_rank)
    completion: dict[Component, ParabolicDiagram] = {}
    for diagram in diagrams:
        for component in diagram.components:
            completion.setdefault(component, diagram)
    completions = tuple(completion.get(c) for c in components)
    return VinbergCertificate(
        all(d is not None for d in completions), tuple(components), completions
    )


@dataclass(frozen=True, eq=False)
class ReflectionVector:
    """A (-2)-vector of a lattice.

    Attributes:
        coords (torch.Tensor): Coordinates.
        gram (IntegerSymMatrix): Gram matrix of the lattice.
    """

    coords: torch.Tensor
    gram: IntegerSymMatrix

    def __post_init__(self) -> None:
        if (square := self.gram.pair(self.coords, self.coords)) != -2:
            raise ValueError(f"reflection vector has {square=}, expected -2")


def reflect(x: torch.Tensor, delta: ReflectionVector) -> torch.Tensor:
    """``s(x) = x + <x, delta> delta``."""
    return x + delta.gram.pair(x, delta.coords) * delta.coords


def fiber_class(
    diagram: ParabolicDiagram, vectors: torch.Tensor, gram: IntegerSymMatrix
) -> torch.Tensor:
    """Class ``F = 2 f`` of the elliptic fibration defined by a maximal diagram.

    Each component's kernel-weighted sum of vectors is a positive multiple of one
    primitive isotropic vector f.

    Raises:
        CertificateError: If the components point along different rays, or f is not
            isotropic.
    """
    ray = None
    for vertices, _ in diagram.components:
        weights = kernel_vector(gram.congruent(vectors[list(vertices)]))
        if weights is None:
            raise CertificateError(f"component {vertices} has no positive kernel vector")
        total = weights @ vectors[list(vertices)]
        primitive = total // math.gcd(*total.tolist())
        if ray is None:
            ray = primitive
        elif not torch.equal(ray, primitive):
            raise CertificateError(f"component {vertices} gives a different fibre ray")
    if ray is None or gram.pair(ray, ray) != 0:
        raise CertificateError("fibre class is not isotropic")
    return 2 * ray


def multisection_degree(
    F: torch.Tensor, delta: torch.Tensor, gram: IntegerSymMatrix
) -> int:
    """``<F, delta>``: the degree of delta over the base of the fibration."""
    return gram.pair(F, delta)


GammaParabolics = tuple[tuple[Component, ...], tuple[ParabolicDiagram, ...]]
_GAMMA_PARABOLICS: list[GammaParabolics] = []


def gamma_parabolics(*, pbar: bool | dict[str, Any] = False) -> GammaParabolics:
    """Connected and rank-8 parabolic subdiagrams of the combinatorial 40-vertex graph.

    The result is computed once; later calls ignore ``pbar``.

    Raises:
        CertificateError: If the rank-8 type census is not the expected one.
    """
    if not _GAMMA_PARABOLICS:
        G = combinatorial_gamma()
        components = enumerate_connected_parabolics(G)
        diagrams = maximal_parabolics(
            G, components, expected_types=GAMMA_MAXIMAL_TYPES, pbar=pbar
        )
        _GAMMA_PARABOLICS.append((tuple(components), tuple(diagrams)))
    return _GAMMA_PARABOLICS[0]


@dataclass(frozen=True)
class FibrationExample:
    """A rank-8 diagram of the 40-vertex graph given by vertex labels.

    Attributes:
        name (str): Short name.
        components (tuple[tuple[str, ...], ...]): Vertex labels per component.
        section (str): A vertex meeting the fibre class with degree 2.
    """

    name: str
    components: tuple[tuple[str, ...], ...]
    section: str


FIBRATION_EXAMPLES = (
    FibrationExample(
        "four I3",
        (
            ("12", "23", "13"),
            ("45", "46", "56"),
            ("(14,25,36)", "(15,26,34)", "(16,24,35)"),
            ("(14,26,35)", "(15,24,36)", "(16,25,34)"),
        ),
        "(12,35,46)",
    ),
    FibrationExample(
        "two I5",
        (
            ("12", "23", "34", "45", "15"),
            ("(13,25,46)", "(14,26,35)", "(13,24,56)", "(14,25,36)", "(16,24,35)"),
        ),
        "46",
    ),
    FibrationExample(
        "I6, IV and III",
        (
            (
                "(14,25,36)",
                "(15,26,34)",
                "(14,23,56)",
                "(15,24,36)",
                "(14,26,35)",
                "(15,23,46)",
            ),
            ("12", "13", "16"),
            ("45", "(145,236)"),
        ),
        "56",
    ),
    FibrationExample(
        "two I4 and two III",
        (
            ("24", "25", "34", "35"),
            ("(12,36,45)", "(14,23,56)", "(13,26,45)", "(15,23,46)"),
            ("16", "(16,23,45)"),
            ("(123,456)", "(145,236)"),
        ),
        "13",
    ),
)


def locate_example(
    G: IntersectionGraph, diagrams: Iterable[ParabolicDiagram], example: FibrationExample
) -> ParabolicDiagram:
    """The enumerated diagram whose components carry the example's labels.

    Raises:
        CertificateError: If no enumerated diagram matches.
    """
    wanted = {frozenset(G.indices(labels)) for labels in example.components}
    for diagram in diagrams:
        if {frozenset(vs) for vs, _ in diagram.components} == wanted:
            return diagram
    raise CertificateError(f"example {example.name!r} is not among the rank-8 diagrams")
