"""Types and exceptions shared across enriqueslab."""

from typing import Literal


FieldOrder = Literal[2, 4, 16, 64]
Exponent = tuple[int, ...]
Family = Literal["A", "B"]
VertexKind = Literal["duad", "syntheme", "tenvector"]
AffineKind = Literal["A", "D", "E"]
CheckStatus = Literal["pass", "fail", "skipped"]
SuiteName = Literal["all", "plane", "lattice", "gamma", "vinberg", "char2"]
ExportKind = Literal[
    "gamma-dot", "gamma-json", "lattice-json", "plane-json", "vinberg-json"
]

SCHEMA = "enriqueslab/v1"


class CertificateError(RuntimeError):
    """A finite certificate contradicted the claim it was built to confirm."""


class PreconditionError(ValueError):
    """Input violates a precondition of a criterion, as opposed to failing it."""


class DegenerateLatticeError(ValueError):
    """Operation needs a non-degenerate Gram matrix."""
