"""Exact integer linear algebra for Gram matrices.

Everything here is exact. Matrices are held as ``torch.int64`` tensors, and the
algorithms convert to Python integers internally so intermediate growth can never
overflow. Determinant and rank go through sympy's ``DomainMatrix``; echelon forms and
unimodular transforms are computed here because sympy does not return the transform.

Example::

    U = IntegerSymMatrix.from_rows([[0, 1], [1, 0]])
    assert exact_signature(U) == (1, 1, 0)
    assert det_lattice(U) == -1
"""

# ruff: noqa: RUF002

from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction as Q

import torch
from sympy.polys.domains import QQ, ZZ
from sympy.polys.matrices import DomainMatrix

from enriqueslab.typing import DegenerateLatticeError


IntRows = list[list[int]]


def _as_rows(matrix: "torch.Tensor | Sequence[Sequence[int]]") -> IntRows:
    if isinstance(matrix, torch.Tensor):
        return [[int(x) for x in row] for row in matrix.tolist()]
    return [[int(x) for x in row] for row in matrix]


def to_tensor(rows: "Sequence[Sequence[int]]", n_cols: int | None = None) -> torch.Tensor:
    """Integer rows as an int64 tensor, keeping the column count of empty inputs."""
    if not rows:
        return torch.zeros((0, n_cols or 0), dtype=torch.int64)
    return torch.tensor([[int(x) for x in row] for row in rows], dtype=torch.int64)


@dataclass(frozen=True)
class IntegerSymMatrix:
    """A symmetric integer matrix, typically the Gram matrix of a lattice basis.

    Attributes:
        entries (torch.Tensor): Square symmetric ``int64`` tensor.
    """

    entries: torch.Tensor

    def __post_init__(self) -> None:
        entries = self.entries
        if entries.dim() != 2 or entries.shape[0] != entries.shape[1]:
            raise ValueError(f"Gram matrix must be square, got {tuple(entries.shape)}")
        if entries.dtype != torch.int64:
            raise TypeError(f"{entries.dtype=} must be torch.int64")
        if not torch.equal(entries, entries.T):
            raise ValueError("Gram matrix is not symmetric")

    @classmethod
    def from_rows(
        cls, rows: "Sequence[Sequence[int]] | torch.Tensor"
    ) -> "IntegerSymMatrix":
        """Build from nested integer rows."""
        return cls(to_tensor(_as_rows(rows)))

    @property
    def dimension(self) -> int:
        """Number of rows."""
        return int(self.entries.shape[0])

    def rows(self) -> IntRows:
        """Entries as Python integers."""
        return _as_rows(self.entries)

    def __getitem__(self, index: tuple[int, int]) -> int:
        return int(self.entries[index])

    def restrict(self, indices: Sequence[int]) -> "IntegerSymMatrix":
        """Principal submatrix on ``indices`` (in the given order)."""
        idx = torch.as_tensor(list(indices), dtype=torch.long)
        return IntegerSymMatrix(self.entries[idx][:, idx])

    def congruent(self, basis: torch.Tensor) -> "IntegerSymMatrix":
        """Gram matrix ``B M B^T`` of the vectors given as rows of ``basis``."""
        return IntegerSymMatrix(basis @ self.entries @ basis.T)

    def pair(self, u: torch.Tensor, v: torch.Tensor) -> int:
        """Bilinear form ``u M v``."""
        return int(u @ self.entries @ v)

    @property
    def is_even(self) -> bool:
        """Whether every diagonal entry is even."""
        return bool((self.entries.diagonal() % 2 == 0).all())

    def halved(self) -> "IntegerSymMatrix":
        """The matrix divided by 2.

        Raises:
            ValueError: If some entry is odd.
        """
        if bool((self.entries % 2 != 0).any()):
            raise ValueError("cannot halve a Gram matrix with odd entries")
        return IntegerSymMatrix(self.entries // 2)


def block_diagonal(*blocks: IntegerSymMatrix) -> IntegerSymMatrix:
    """Orthogonal direct sum."""
    return IntegerSymMatrix(torch.block_diag(*(b.entries for b in blocks)))


def _domain_matrix(rows: IntRows, domain: object) -> DomainMatrix:
    shape = (len(rows), len(rows[0]) if rows else 0)
    return DomainMatrix([[domain(x) for x in row] for row in rows], shape, domain)


def det_lattice(M: IntegerSymMatrix) -> int:
    """Exact determinant of a non-degenerate Gram matrix.

    Raises:
        DegenerateLatticeError: If the determinant is zero.
    """
    if M.dimension == 0:
        return 1
    det = int(_domain_matrix(M.rows(), ZZ).det())
    if det == 0:
        raise DegenerateLatticeError(
            f"Gram matrix of dimension {M.dimension} is degenerate"
        )
    return det


def exact_rank(matrix: "torch.Tensor | Sequence[Sequence[int]]") -> int:
    """Rank over the rationals."""
    rows = _as_rows(matrix)
    if not rows or not rows[0]:
        return 0
    return int(_domain_matrix(rows, QQ).rank())


def exact_signature(M: IntegerSymMatrix) -> tuple[int, int, int]:
    """Inertia ``(n_plus, n_minus, n_zero)`` by symmetric rational elimination.

    Each step takes a nonzero diagonal pivot of the remaining Schur complement. When
    the remaining diagonal is zero but an off-diagonal entry ``a_ij`` is not, the
    congruence ``e_i -> e_i + e_j`` puts ``2 a_ij`` on the diagonal first.
    """
    A = [[Q(x) for x in row] for row in M.rows()]
    active = list(range(M.dimension))
    n_plus = n_minus = 0
    while active:
        pivot = next((i for i in active if A[i][i] != 0), None)
        if pivot is None:
            pair = next(
                ((i, j) for i in active for j in active if i < j and A[i][j] != 0), None
            )
            if pair is None:
                break
            i, j = pair
            for k in active:
                A[i][k] += A[j][k]
            for k in active:
                A[k][i] += A[k][j]
            pivot = i
        d = A[pivot][pivot]
        if d > 0:
            n_plus += 1
        else:
            n_minus += 1
        active.remove(pivot)
        for r in active:
            factor = A[r][pivot] / d
            if factor:
                for c in active:
                    A[r][c] -= factor * A[pivot][c]
    return n_plus, n_minus, M.dimension - n_plus - n_minus


@dataclass(frozen=True)
class ColumnEchelon:
    """Result of :func:`column_echelon`: ``A V = H`` with ``V`` unimodular.

    Attributes:
        echelon (IntRows): ``H``; row ``r`` of the first ``rank`` pivot rows has its
            positive pivot in column ``pivots[r]`` and zeros to the right of it.
        transform (IntRows): ``V``.
        inverse (IntRows): ``V^-1``.
        pivots (tuple[tuple[int, int], ...]): ``(row, column)`` of every pivot.
    """

    echelon: IntRows
    transform: IntRows
    inverse: IntRows
    pivots: tuple[tuple[int, int], ...]

    @property
    def rank(self) -> int:
        """Number of pivots."""
        return len(self.pivots)


def column_echelon(  # noqa: C901
    matrix: "torch.Tensor | Sequence[Sequence[int]]", n_cols: int
) -> ColumnEchelon:
    """Lower column echelon form by unimodular column operations.

    Column operations are integer Euclid steps (swap, negate, subtract a multiple),
    mirrored on the transform and, as the inverse row operation, on its inverse.

    Args:
        matrix (torch.Tensor | Sequence[Sequence[int]]): ``m x n`` integer matrix.
        n_cols (int): ``n``, needed when ``m`` is zero.

    Returns:
        ColumnEchelon: Echelon form, transform, inverse transform and pivots.
    """
    A = _as_rows(matrix)
    V = [[int(i == j) for j in range(n_cols)] for i in range(n_cols)]
    V_inv = [row[:] for row in V]

    def swap(i: int, j: int) -> None:
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]
        V_inv[i], V_inv[j] = V_inv[j], V_inv[i]

    def subtract(j: int, i: int, q: int) -> None:  # column j -= q * column i
        for row in A:
            row[j] -= q * row[i]
        for row in V:
            row[j] -= q * row[i]
        V_inv[i] = [a + q * b for a, b in zip(V_inv[i], V_inv[j], strict=True)]

    def negate(i: int) -> None:
        for row in A:
            row[i] = -row[i]
        for row in V:
            row[i] = -row[i]
        V_inv[i] = [-a for a in V_inv[i]]

    col, pivots = 0, []
    for r, row in enumerate(A):
        if col == n_cols:
            break
        while True:
            nonzero = [j for j in range(col, n_cols) if row[j]]
            if not nonzero:
                break
            j = min(nonzero, key=lambda k: abs(row[k]))
            if j != col:
                swap(col, j)
            finished = True
            for k in range(col + 1, n_cols):
                if row[k]:
                    subtract(k, col, row[k] // row[col])
                    finished = finished and not row[k]
            if finished:
                break
        if row[col]:
            if row[col] < 0:
                negate(col)
            pivots.append((r, col))
            col += 1
    return ColumnEchelon(A, V, V_inv, tuple(pivots))


def hermite_normal_form(rows: "torch.Tensor | Sequence[Sequence[int]]") -> IntRows:
    """Row Hermite normal form with zero rows dropped.

    Pivots are positive and entries above a pivot are reduced into ``[0, pivot)``,
    so the result is canonical for the row lattice.
    """
    B = _as_rows(rows)
    if not B:
        return []
    m, n = len(B), len(B[0])
    top = 0
    for c in range(n):
        if top == m:
            break
        while True:
            nonzero = [i for i in range(top, m) if B[i][c]]
            if not nonzero:
                break
            i = min(nonzero, key=lambda k: abs(B[k][c]))
            B[top], B[i] = B[i], B[top]
            finished = True
            for k in range(top + 1, m):
                if B[k][c]:
                    q = B[k][c] // B[top][c]
                    B[k] = [a - q * b for a, b in zip(B[k], B[top], strict=True)]
                    finished = finished and not B[k][c]
            if finished:
                break
        if B[top][c]:
            if B[top][c] < 0:
                B[top] = [-a for a in B[top]]
            for k in range(top):
                q = B[k][c] // B[top][c]
                if q:
                    B[k] = [a - q * b for a, b in zip(B[k], B[top], strict=True)]
            top += 1
    return [row for row in B[:top] if any(row)]


def integer_kernel(
    matrix: "torch.Tensor | Sequence[Sequence[int]]", n_cols: int
) -> IntRows:
    """Basis of ``{x in Z^n : A x = 0}`` in Hermite normal form.

    The kernel columns of the echelon transform span the full integer kernel, so the
    basis is saturated.
    """
    echelon = column_echelon(matrix, n_cols)
    basis = [
        [echelon.transform[i][j] for i in range(n_cols)]
        for j in range(echelon.rank, n_cols)
    ]
    return hermite_normal_form(basis)


def snf_kernel(M: IntegerSymMatrix) -> torch.Tensor:
    """Integer null space of a symmetric matrix as the rows of an HNF basis.

    Args:
        M (IntegerSymMatrix): Symmetric matrix.

    Returns:
        torch.Tensor: ``k x n`` int64 tensor; empty (``0 x n``) when M is regular.
    """
    return to_tensor(integer_kernel(M.rows(), M.dimension), M.dimension)


def extend_to_unimodular(
    basis: "torch.Tensor | Sequence[Sequence[int]]", n_cols: int
) -> ColumnEchelon:
    """Complete a primitive basis to a basis of Z^n.

    For ``K`` with ``k`` independent rows, the echelon transform ``V`` satisfies
    ``K = [H | 0] V^-1`` with ``H`` unimodular exactly when ``K`` is primitive. Then the
    first ``k`` rows of ``V^-1`` span ``K`` and the remaining rows complete it, and
    ``(v V)[k:]`` are the coordinates of ``v`` modulo the span of ``K``.

    Raises:
        ValueError: If the rows are dependent or do not span a primitive sublattice.
    """
    echelon = column_echelon(basis, n_cols)
    k = len(_as_rows(basis))
    if echelon.rank != k:
        raise ValueError(f"basis rows are dependent: rank {echelon.rank} < {k}")
    if any(echelon.echelon[r][c] != 1 for r, c in echelon.pivots):
        raise ValueError("basis does not span a primitive sublattice")
    return echelon


def is_primitive(basis: "torch.Tensor | Sequence[Sequence[int]]", n_cols: int) -> bool:
    """Whether the rows span a primitive (saturated) sublattice of Z^n."""
    try:
        extend_to_unimodular(basis, n_cols)
    except ValueError:
        return False
    return True


def solve_in_basis(
    basis: "torch.Tensor | Sequence[Sequence[int]]",
    vector: "torch.Tensor | Sequence[int]",
) -> list[int]:
    """Integer coordinates ``y`` with ``y B = v`` for independent rows ``B``.

    Raises:
        ValueError: If ``v`` is not an integer combination of the rows.
    """
    rows = _as_rows(basis)
    if isinstance(vector, torch.Tensor):
        vector = vector.tolist()
    v = [int(x) for x in vector]
    n = len(v)
    if not rows:
        if any(v):
            raise ValueError("nonzero vector is not in the span of an empty basis")
        return []
    echelon = column_echelon(rows, n)
    if echelon.rank != len(rows):
        raise ValueError(f"basis rows are dependent: rank {echelon.rank} < {len(rows)}")
    w = [sum(v[i] * echelon.transform[i][j] for i in range(n)) for j in range(n)]
    k = echelon.rank
    if any(w[k:]):
        raise ValueError("vector is not in the span of the basis")
    H = echelon.echelon
    y = [0] * k
    for c in reversed(range(k)):
        rest = w[c] - sum(y[r] * H[r][c] for r in range(c + 1, k))
        if rest % H[c][c]:
            raise ValueError("vector is in the rational but not the integer span")
        y[c] = rest // H[c][c]
    return y
