import json

import networkx as nx
import numpy as np
import pytest
from networkx.algorithms.isomorphism import GraphMatcher, numerical_edge_match

from enriqueslab import sylvester
from enriqueslab.graphs import (
    AutomorphismGroup,
    IntersectionGraph,
    automorphism_group,
    closure,
    compose,
    count_automorphisms_brute_force,
    find_isomorphism,
    invert,
    orbit_census,
)


def _from_networkx(graph: nx.Graph) -> IntersectionGraph:
    n = graph.number_of_nodes()
    rows = [[-2 if i == j else 0 for j in range(n)] for i in range(n)]
    for i, j, weight in graph.edges(data="weight", default=1):
        rows[i][j] = rows[j][i] = weight
    return IntersectionGraph.from_rows([f"v{i}" for i in range(n)], rows)


def _random_graph(rng: np.random.Generator, n: int) -> IntersectionGraph:
    upper = np.triu(rng.choice([0, 0, 1, 2], size=(n, n)), k=1)
    rows = upper + upper.T - 2 * np.eye(n, dtype=int)
    return IntersectionGraph.from_rows([f"v{i}" for i in range(n)], rows.tolist())


def _networkx_count(G: IntersectionGraph) -> int:
    graph = G.to_networkx()
    matcher = GraphMatcher(graph, graph, edge_match=numerical_edge_match("weight", 0))
    return sum(1 for _ in matcher.isomorphisms_iter())


class TestValidation:
    def test_duplicate_labels(self):
        with pytest.raises(ValueError, match="unique"):
            IntersectionGraph.from_rows(["a", "a"], [[-2, 0], [0, -2]])

    def test_diagonal(self):
        with pytest.raises(ValueError, match="pairing -2 with itself"):
            IntersectionGraph.from_rows(["a", "b"], [[-4, 0], [0, -2]])

    def test_off_diagonal_range(self):
        with pytest.raises(ValueError, match=r"\{0, 1, 2\}"):
            IntersectionGraph.from_rows(["a", "b"], [[-2, 3], [3, -2]])


class TestAutomorphisms:
    @pytest.mark.parametrize(
        ("graph", "expected"),
        [
            (nx.cycle_graph(5), 10),
            (nx.complete_graph(4), 24),
            (nx.path_graph(4), 2),
            (nx.petersen_graph(), 120),
        ],
    )
    def test_known_groups(self, graph: nx.Graph, expected: int):
        assert automorphism_group(_from_networkx(graph)).order == expected

    def test_double_edges_are_distinguished(self):
        triangle = nx.cycle_graph(3)
        triangle.edges[0, 1]["weight"] = 2
        assert automorphism_group(_from_networkx(triangle)).order == 2

    def test_against_networkx(self, rng: np.random.Generator):
        for _ in range(15):
            G = _random_graph(rng, 7)
            assert automorphism_group(G).order == _networkx_count(G)

    def test_against_brute_force(self, rng: np.random.Generator):
        for _ in range(10):
            G = _random_graph(rng, 6)
            assert automorphism_group(G).order == count_automorphisms_brute_force(G)

    def test_generators_span_the_group(self, rng: np.random.Generator):
        G = _from_networkx(nx.petersen_graph())
        group = automorphism_group(G)
        assert closure(group.generators, G.n_vertices) == frozenset(group.elements)
        assert all(G.preserves(g) for g in group.elements)

    def test_empty_graph(self):
        group = automorphism_group(IntersectionGraph.from_rows([], []))
        assert group == AutomorphismGroup(0, ((),), ())

    def test_brute_force_refuses_large_inputs(self):
        with pytest.raises(ValueError, match="too large"):
            count_automorphisms_brute_force(_from_networkx(nx.empty_graph(12)))


class TestIsomorphism:
    def test_relabelled_copy(self, rng: np.random.Generator):
        G = _random_graph(rng, 9)
        order = [int(i) for i in rng.permutation(9)]
        H = G.permuted(order)
        mapping = find_isomorphism(G, H)
        assert mapping is not None
        assert G.preserves(mapping, H)

    def test_non_isomorphic(self):
        path = _from_networkx(nx.path_graph(4))
        star = _from_networkx(nx.star_graph(3))
        assert find_isomorphism(path, star) is None

    def test_size_mismatch(self):
        with pytest.raises(ValueError, match="differs from"):
            find_isomorphism(
                _from_networkx(nx.path_graph(3)), _from_networkx(nx.path_graph(4))
            )

    def test_compose_and_invert(self):
        g, h = (1, 2, 0), (0, 2, 1)
        assert compose(g, invert(g)) == (0, 1, 2)
        assert compose(g, h) == (2, 1, 0)


class TestGamma:
    def test_automorphism_group_order(self, gamma_group: AutomorphismGroup):
        assert gamma_group.order == 1440

    def test_contains_letter_permutations(self, gamma_group: AutomorphismGroup):
        for g in sylvester.all_permutations():
            assert sylvester.s6_action(g) in gamma_group

    def test_contains_outer_automorphism(self, gamma_group: AutomorphismGroup):
        assert sylvester.outer_automorphism() in gamma_group

    def test_orbits(self, gamma: IntersectionGraph, gamma_group: AutomorphismGroup):
        orbits = orbit_census(gamma, gamma_group)
        assert sorted(len(o) for o in orbits) == [10, 30]
        letters = [sylvester.s6_action(g) for g in sylvester.all_permutations()]
        assert sorted(len(o) for o in orbit_census(gamma, letters)) == [10, 15, 15]


class TestExport:
    def test_dot_draws_double_edges_twice(self, gamma: IntersectionGraph):
        dot = gamma.to_dot()
        assert dot.startswith("graph Gamma {")
        assert dot.count("[label=") == 40
        single = int((gamma.adjacency(1).sum() // 2).item())
        double = int((gamma.adjacency(2).sum() // 2).item())
        assert dot.count(" -- ") == single + 2 * double
        assert dot.count("[multiplicity=2]") == double

    def test_json(self, gamma: IntersectionGraph):
        document = json.loads(gamma.to_json())
        assert document["kind"] == "intersection-graph"
        assert document["labels"] == list(gamma.labels)
        assert document["pairing"] == gamma.pairing.rows()

    def test_networkx_weights(self, gamma: IntersectionGraph):
        graph = gamma.to_networkx()
        assert graph.number_of_nodes() == 40
        assert {w for _, _, w in graph.edges(data="weight")} == {1, 2}
