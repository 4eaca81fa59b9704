"""enriqueslab package base module."""

# ruff: noqa: F401

import os

from enriqueslab import (
    char2,
    cli,
    fields,
    graphs,
    io,
    lattice,
    math,
    plane,
    polynomials,
    runners,
    sylvester,
    vinberg,
)
from enriqueslab.fields import BinaryField, FieldElement, binary_field

# 40-vertex graph and its symmetries
from enriqueslab.graphs import IntersectionGraph, automorphism_group, find_isomorphism
from enriqueslab.io import (
    export,
    read_gamma_json,
    read_lattice_json,
    read_plane_json,
    read_vinberg_json,
)

# lattices
from enriqueslab.lattice import (
    build_ns_y,
    find_contraction_configs,
    lattice_gamma,
    orthogonal_complement,
)
from enriqueslab.polynomials import RationalFunction, SparsePoly, polynomial_ring

# high level runners
from enriqueslab.runners import RunConfig, VerificationReport, run
from enriqueslab.sylvester import combinatorial_gamma, outer_automorphism
from enriqueslab.typing import CertificateError, DegenerateLatticeError, PreconditionError
from enriqueslab.vinberg import maximal_parabolics, vinberg_check


PKG_DIR = os.path.dirname(__file__)
ROOT = os.path.dirname(PKG_DIR)
