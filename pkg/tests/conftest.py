import numpy as np
import pytest

from enriqueslab.graphs import AutomorphismGroup, IntersectionGraph, automorphism_group
from enriqueslab.lattice import (
    ContractionConfig,
    GammaVectors,
    NsY,
    NumX,
    build_ns_y,
    find_contraction_configs,
    gamma_vectors,
    lattice_gamma,
    orthogonal_complement,
)
from enriqueslab.sylvester import combinatorial_gamma
from enriqueslab.vinberg import Component, ParabolicDiagram, gamma_parabolics


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(seed=20241019)


@pytest.fixture(scope="session")
def ns() -> NsY:
    return build_ns_y()


@pytest.fixture(scope="session")
def configs() -> tuple[ContractionConfig, ...]:
    return find_contraction_configs()


@pytest.fixture(scope="session")
def cfg(configs: tuple[ContractionConfig, ...]) -> ContractionConfig:
    return configs[0]


@pytest.fixture(scope="session")
def numx(ns: NsY, cfg: ContractionConfig) -> NumX:
    return orthogonal_complement(ns, cfg)


@pytest.fixture(scope="session")
def vectors(numx: NumX, cfg: ContractionConfig) -> GammaVectors:
    return gamma_vectors(numx, cfg)


@pytest.fixture(scope="session")
def gamma() -> IntersectionGraph:
    return combinatorial_gamma()


@pytest.fixture(scope="session")
def gamma_from_lattice(numx: NumX, cfg: ContractionConfig) -> IntersectionGraph:
    return lattice_gamma(numx, cfg)


@pytest.fixture(scope="session")
def gamma_group(gamma: IntersectionGraph) -> AutomorphismGroup:
    return automorphism_group(gamma)


@pytest.fixture(scope="session")
def parabolics() -> tuple[tuple[Component, ...], tuple[ParabolicDiagram, ...]]:
    return gamma_parabolics()
