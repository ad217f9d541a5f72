import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from sympy.polys.domains import QQ
from sympy.polys.matrices.sdm import SDM

from src.linalg.scalars import SparseVector
from src.linalg.spaces import LinearMap

logger = logging.getLogger(__name__)


def to_qq(value):
    value = Fraction(value)
    return QQ(value.numerator, value.denominator)


def from_qq(value) -> Fraction:
    return Fraction(int(value.numerator), int(value.denominator))


def sparse_matrix(rows: Sequence[SparseVector], n_cols: Optional[int] = None) -> SDM:
    """Rows keyed by integer column index as a sparse matrix over QQ"""
    if n_cols is None:
        n_cols = max((max(row) + 1 for row in rows if row), default=0)
    elems = {}
    for i, row in enumerate(rows):
        if row and (min(row) < 0 or max(row) >= n_cols):
            raise ValueError(f"Row {i} references a column outside 0..{n_cols - 1}")
        if row:
            elems[i] = {j: to_qq(c) for j, c in row.items()}
    return SDM(elems, (len(rows), n_cols), QQ)


def reduced_rows(rows: Sequence[SparseVector], n_cols: Optional[int] = None) -> Tuple[List[SparseVector], List[int]]:
    """Reduced row echelon rows and their pivot columns"""
    rref, pivots = sparse_matrix(rows, n_cols).rref()
    echelon = [SparseVector((j, from_qq(c)) for j, c in rref.get(i, {}).items()) for i in range(len(pivots))]
    return echelon, list(pivots)


def independent_columns(columns: Sequence[SparseVector], n_rows: int) -> List[int]:
    """Positions of the first maximal independent subfamily, scanning left to right"""
    if not columns:
        return []
    _, pivots = sparse_matrix(columns, n_rows).transpose().rref()
    return list(pivots)


@dataclass
class LinearSolution:
    solution: Optional[Dict[int, Fraction]] = None
    witness: Optional[Dict[int, Fraction]] = None

    @property
    def consistent(self) -> bool:
        return self.solution is not None


def _left_witness(matrix: SDM, rhs: Sequence) -> Dict[int, Fraction]:
    left_kernel, _ = matrix.transpose().nullspace()
    for row in left_kernel.values():
        y = {i: from_qq(c) for i, c in row.items()}
        if sum(c * Fraction(rhs[i]) for i, c in y.items()) != 0:
            return y
    raise ValueError("Inconsistent system without a left-kernel witness")


def solve_linear_system(rows: Sequence[SparseVector], rhs: Sequence, n_cols: Optional[int] = None) -> LinearSolution:
    """Solve A x = b exactly, or return y with y^T A = 0 and y^T b != 0.

    The solution sets every free column to zero.
    """
    if len(rows) != len(rhs):
        raise ValueError(f"Dimension mismatch: {len(rows)} equations, {len(rhs)} right-hand sides")
    matrix = sparse_matrix(rows, n_cols)
    n_cols = matrix.shape[1]
    augmented = SDM({i: dict(row) for i, row in matrix.items()}, (len(rows), n_cols + 1), QQ)
    for i, b in enumerate(rhs):
        if b:
            augmented.setdefault(i, {})[n_cols] = to_qq(b)
    rref, pivots = augmented.rref()
    if n_cols in pivots:
        logger.debug(f"Inconsistent system of {len(rows)} equations in {n_cols} unknowns")
        return LinearSolution(witness=_left_witness(matrix, rhs))
    solution = {}
    for i, j in enumerate(pivots):
        value = rref.get(i, {}).get(n_cols)
        if value:
            solution[j] = from_qq(value)
    return LinearSolution(solution=solution)


def rank_of(rows: Sequence[SparseVector]) -> int:
    return len(reduced_rows(rows)[1])


def kernel_basis(A: LinearMap) -> List[SparseVector]:
    """Basis of ker A, one vector per free column, in basis order"""
    kernel, _ = sparse_matrix(A.row_vectors(), A.source.dim).nullspace()
    names = A.source.names
    return [SparseVector((names[j], from_qq(c)) for j, c in kernel[i].items()) for i in sorted(kernel)]
