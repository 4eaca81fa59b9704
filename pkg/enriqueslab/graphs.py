"""Edge-weighted intersection graphs, isomorphism and automorphism search.

A graph is a symmetric pairing matrix with -2 on the diagonal and 0, 1 or 2 off it,
plus one unique label per vertex. The search is individualisation-refinement: colours
are refined jointly on both graphs with batched ``torch`` matrix products, then one
vertex of the first non-singleton cell is individualised on each side and the search
recurses. Every automorphism is reached by exactly one leaf, so enumerating leaves
gives the whole group.

Example::

    G = IntersectionGraph.from_rows(["a", "b"], [[-2, 2], [2, -2]])
    assert automorphism_group(G).order == 2
"""

import functools
import itertools
import json
import math
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass, field
from typing import Any

import networkx as nx
import torch
from tqdm import tqdm

from enriqueslab.math import IntegerSymMatrix
from enriqueslab.typing import SCHEMA


VertexMap = tuple[int, ...]
PAIRING_VALUES = (1, 2)


@dataclass(frozen=True, eq=False)
class IntersectionGraph:
    """Labelled vertices with an integral pairing.

    Attributes:
        labels (tuple[str, ...]): Unique vertex labels, in vertex order.
        pairing (IntegerSymMatrix): Pairing matrix, diagonal -2, off-diagonal in
            {0, 1, 2}.
    """

    labels: tuple[str, ...]
    pairing: IntegerSymMatrix

    def __post_init__(self) -> None:
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("vertex labels must be unique")
        if len(self.labels) != self.pairing.dimension:
            raise ValueError(
                f"{len(self.labels)=} does not match {self.pairing.dimension=}"
            )
        entries = self.pairing.entries
        if not bool((entries.diagonal() == -2).all()):
            raise ValueError("every vertex must have pairing -2 with itself")
        off = entries[~torch.eye(len(self.labels), dtype=torch.bool)]
        if bool(((off < 0) | (off > 2)).any()):
            raise ValueError("off-diagonal pairings must lie in {0, 1, 2}")

    @classmethod
    def from_rows(
        cls, labels: Sequence[str], rows: "Sequence[Sequence[int]] | torch.Tensor"
    ) -> "IntersectionGraph":
        """Build from labels and nested pairing rows."""
        return cls(tuple(labels), IntegerSymMatrix.from_rows(rows))

    @property
    def n_vertices(self) -> int:
        """Number of vertices."""
        return len(self.labels)

    @functools.cached_property
    def _index(self) -> dict[str, int]:
        return {label: i for i, label in enumerate(self.labels)}

    def index(self, label: str) -> int:
        """Vertex index of a label."""
        return self._index[label]

    def indices(self, labels: Iterable[str]) -> tuple[int, ...]:
        """Vertex indices of several labels, sorted."""
        return tuple(sorted(self._index[label] for label in labels))

    def value(self, i: int, j: int) -> int:
        """Pairing of two vertices."""
        return self.pairing[i, j]

    def adjacency(self, value: int) -> torch.Tensor:
        """0/1 int64 matrix of the pairs with the given off-diagonal pairing."""
        adjacency = (self.pairing.entries == value).to(torch.int64)
        return adjacency.fill_diagonal_(0)

    def neighbors(self, i: int) -> tuple[int, ...]:
        """Vertices with nonzero pairing against ``i``."""
        row = self.pairing.entries[i]
        return tuple(j for j in range(self.n_vertices) if j != i and int(row[j]))

    def is_connected(self, subset: Iterable[int]) -> bool:
        """Whether a vertex subset is connected through nonzero pairings."""
        nodes = set(subset)
        if not nodes:
            return False
        start = min(nodes)
        seen, frontier = {start}, [start]
        while frontier:
            i = frontier.pop()
            for j in self.neighbors(i):
                if j in nodes and j not in seen:
                    seen.add(j)
                    frontier.append(j)
        return seen == nodes

    def subgraph(self, indices: Sequence[int]) -> "IntersectionGraph":
        """Induced subgraph on ``indices`` in the given order."""
        return IntersectionGraph(
            tuple(self.labels[i] for i in indices), self.pairing.restrict(indices)
        )

    def permuted(self, order: Sequence[int]) -> "IntersectionGraph":
        """The same graph with vertices listed as ``order``."""
        return self.subgraph(order)

    def with_pairing(self, i: int, j: int, value: int) -> "IntersectionGraph":
        """Copy with one symmetric pairing replaced."""
        entries = self.pairing.entries.clone()
        entries[i, j] = entries[j, i] = value
        return IntersectionGraph(self.labels, IntegerSymMatrix(entries))

    def preserves(
        self, mapping: VertexMap, other: "IntersectionGraph | None" = None
    ) -> bool:
        """Whether ``mapping`` carries every pairing onto ``other``, default self."""
        target = self if other is None else other
        idx = torch.as_tensor(mapping, dtype=torch.long)
        return torch.equal(target.pairing.entries[idx][:, idx], self.pairing.entries)

    def to_networkx(self) -> nx.Graph:
        """Undirected ``networkx`` graph with the pairing as edge attribute ``weight``."""
        graph = nx.Graph()
        graph.add_nodes_from(range(self.n_vertices))
        for i, j in itertools.combinations(range(self.n_vertices), 2):
            if value := self.value(i, j):
                graph.add_edge(i, j, weight=value)
        return graph

    def to_dot(self, name: str = "Gamma") -> str:
        """DOT source; pairing 2 is drawn as two parallel edges.

        Only the first edge of a pair carries ``multiplicity=2``, so counting the
        attribute counts double edges.
        """
        lines = [f"graph {name} {{"]
        lines.extend(f'  {i} [label="{label}"];' for i, label in enumerate(self.labels))
        for i, j in itertools.combinations(range(self.n_vertices), 2):
            value = self.value(i, j)
            if value == 1:
                lines.append(f"  {i} -- {j};")
            elif value == 2:
                lines.extend([f"  {i} -- {j} [multiplicity=2];", f"  {i} -- {j};"])
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict[str, Any]:
        """JSON-ready mapping with labels and pairing rows."""
        return {
            "schema": SCHEMA,
            "kind": "intersection-graph",
            "labels": list(self.labels),
            "pairing": self.pairing.rows(),
        }

    def to_json(self) -> str:
        """Canonical JSON text of :meth:`to_dict`."""
        return json.dumps(self.to_dict(), sort_keys=True)


def initial_colours(pairings: torch.Tensor) -> torch.Tensor:
    """Colour classes by the multiset of pairing values in each row."""
    profile = torch.sort(pairings, dim=1).values
    return torch.unique(profile, dim=0, return_inverse=True)[1]


def refine(adjacencies: Sequence[torch.Tensor], colours: torch.Tensor) -> torch.Tensor:
    """Colour refinement to the coarsest equitable partition finer than ``colours``.

    Each round keys a vertex by its colour and by how many neighbours of each colour
    it sees through every pairing value. ``torch.unique`` sorts the keys, so colour
    ids depend only on the partition and never on vertex order.
    """
    n_colours = int(colours.max()) + 1 if len(colours) else 0
    while True:
        one_hot = torch.nn.functional.one_hot(colours, n_colours)
        key = torch.cat([colours[:, None], *(A @ one_hot for A in adjacencies)], dim=1)
        refined = torch.unique(key, dim=0, return_inverse=True)[1]
        n_refined = int(refined.max()) + 1 if len(refined) else 0
        if n_refined == n_colours:
            return refined
        colours, n_colours = refined, n_refined


@dataclass
class _Search:
    """Joint refinement state for a pair of graphs of equal size."""

    first: IntersectionGraph
    second: IntersectionGraph
    adjacencies: list[torch.Tensor] = field(init=False)

    def __post_init__(self) -> None:
        self.adjacencies = [
            torch.block_diag(self.first.adjacency(v), self.second.adjacency(v))
            for v in PAIRING_VALUES
        ]

    def start(self) -> torch.Tensor:
        pairings = torch.cat([self.first.pairing.entries, self.second.pairing.entries])
        return initial_colours(pairings)

    def balanced(self, colours: torch.Tensor) -> bool:
        n = self.first.n_vertices
        size = int(colours.max()) + 1
        left = torch.bincount(colours[:n], minlength=size)
        right = torch.bincount(colours[n:], minlength=size)
        return torch.equal(left, right)

    def leaves(self, colours: torch.Tensor) -> Iterator[VertexMap]:
        """Vertex bijections at every discrete leaf below ``colours``."""
        colours = refine(self.adjacencies, colours)
        if not self.balanced(colours):
            return
        n = self.first.n_vertices
        left, right = colours[:n].tolist(), colours[n:].tolist()
        sizes = torch.bincount(colours[:n]).tolist()
        cells = [c for c, size in enumerate(sizes) if size > 1]
        if not cells:
            position = {c: j for j, c in enumerate(right)}
            mapping = tuple(position[c] for c in left)
            if self.first.preserves(mapping, self.second):
                yield mapping
            return
        target = min(cells, key=lambda c: (sizes[c], c))
        u = left.index(target)
        fresh = int(colours.max()) + 1
        for w in (j for j, c in enumerate(right) if c == target):
            branch = colours.clone()
            branch[u] = branch[n + w] = fresh
            yield from self.leaves(branch)


def find_isomorphism(G1: IntersectionGraph, G2: IntersectionGraph) -> VertexMap | None:
    """First pairing-preserving bijection in canonical search order, or None.

    Returns:
        VertexMap | None: ``mapping[i]`` is the vertex of ``G2`` matched to vertex
            ``i`` of ``G1``.
    """
    if G1.n_vertices != G2.n_vertices:
        raise ValueError(f"{G1.n_vertices=} differs from {G2.n_vertices=}")
    if G1.n_vertices == 0:
        return ()
    search = _Search(G1, G2)
    return next(search.leaves(search.start()), None)


def compose(first: VertexMap, then: VertexMap) -> VertexMap:
    """The map ``i -> then[first[i]]``."""
    return tuple(then[j] for j in first)


def invert(mapping: VertexMap) -> VertexMap:
    """Inverse permutation."""
    inverse = [0] * len(mapping)
    for i, j in enumerate(mapping):
        inverse[j] = i
    return tuple(inverse)


def closure(generators: Iterable[VertexMap], n_vertices: int) -> frozenset[VertexMap]:
    """All elements of the permutation group generated by ``generators``."""
    identity = tuple(range(n_vertices))
    gens = list(generators)
    elements, frontier = {identity}, [identity]
    while frontier:
        g = frontier.pop()
        for s in gens:
            h = compose(g, s)
            if h not in elements:
                elements.add(h)
                frontier.append(h)
    return frozenset(elements)


@dataclass(frozen=True)
class AutomorphismGroup:
    """An automorphism group held as its full element list.

    Attributes:
        n_vertices (int): Degree of the permutation action.
        elements (tuple[VertexMap, ...]): Every automorphism, sorted.
        generators (tuple[VertexMap, ...]): A generating set drawn greedily from
            ``elements`` in sorted order.
    """

    n_vertices: int
    elements: tuple[VertexMap, ...]
    generators: tuple[VertexMap, ...]

    @property
    def order(self) -> int:
        """Group order."""
        return len(self.elements)

    def __contains__(self, mapping: object) -> bool:
        return mapping in self._members

    @functools.cached_property
    def _members(self) -> frozenset[VertexMap]:
        return frozenset(self.elements)


def generating_set(
    elements: Sequence[VertexMap], n_vertices: int
) -> tuple[VertexMap, ...]:
    """Greedy generators: take each element not yet in the span of those taken."""
    gens: list[VertexMap] = []
    span = closure(gens, n_vertices)
    for g in sorted(elements):
        if len(span) == len(elements):
            break
        if g not in span:
            gens.append(g)
            span = closure(gens, n_vertices)
    return tuple(gens)


def automorphism_group(
    G: IntersectionGraph, *, pbar: bool | dict[str, Any] = False
) -> AutomorphismGroup:
    """Enumerate every automorphism by exhaustive individualisation-refinement.

    Args:
        G (IntersectionGraph): Graph to analyse.
        pbar (bool | dict[str, Any], optional): Show a progress bar over found
            automorphisms, or pass tqdm keyword arguments. Defaults to False.

    Returns:
        AutomorphismGroup: All elements and a generating set.
    """
    if G.n_vertices == 0:
        return AutomorphismGroup(0, ((),), ())
    pbar_kwargs = dict(pbar) if isinstance(pbar, dict) else {}
    pbar_kwargs.setdefault("desc", "Automorphisms")
    pbar_kwargs.setdefault("disable", not pbar)
    search = _Search(G, G)
    elements = []
    with tqdm(**pbar_kwargs) as progress:
        for mapping in search.leaves(search.start()):
            elements.append(mapping)
            progress.update(1)
    elements.sort()
    return AutomorphismGroup(
        G.n_vertices, tuple(elements), generating_set(elements, G.n_vertices)
    )


def orbit_census(
    G: IntersectionGraph, group: "AutomorphismGroup | Iterable[VertexMap]"
) -> list[tuple[int, ...]]:
    """Vertex orbits under a group given by generators or elements.

    Returns:
        list[tuple[int, ...]]: Orbits as sorted index tuples, sorted by first vertex.
    """
    maps = group.generators if isinstance(group, AutomorphismGroup) else tuple(group)
    parent = list(range(G.n_vertices))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for mapping in maps:
        for i, j in enumerate(mapping):
            a, b = find(i), find(j)
            if a != b:
                parent[max(a, b)] = min(a, b)
    orbits: dict[int, list[int]] = {}
    for i in range(G.n_vertices):
        orbits.setdefault(find(i), []).append(i)
    return sorted(tuple(orbit) for orbit in orbits.values())


def count_automorphisms_brute_force(G: IntersectionGraph) -> int:
    """Count automorphisms by trying every colour-preserving permutation.

    Vertices may only move inside their initial colour class, so the search space is
    the product of the class factorials. Meant as an oracle for small graphs.
    """
    n = G.n_vertices
    colours = initial_colours(G.pairing.entries).tolist()
    classes = [[i for i in range(n) if colours[i] == c] for c in sorted(set(colours))]
    if math.prod(math.factorial(len(c)) for c in classes) > 10**7:
        raise ValueError(f"brute force over {n} vertices is too large")
    count = 0
    for images in itertools.product(*(itertools.permutations(c) for c in classes)):
        mapping = [0] * n
        for cls, image in zip(classes, images, strict=True):
            for i, j in zip(cls, image, strict=True):
                mapping[i] = j
        count += G.preserves(tuple(mapping))
    return count
