import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from src.linalg.scalars import SparseVector
from src.linalg.solver import independent_columns, kernel_basis, solve_linear_system
from src.linalg.spaces import BigradedSpace, ComplexSlice, LinearMap

logger = logging.getLogger(__name__)


def _indexed(space: BigradedSpace, vector: SparseVector) -> SparseVector:
    return SparseVector((space.index[k], v) for k, v in vector.items())


class ClassDecomposer:
    """Coordinates of cycles in a chosen homology basis at one bidegree"""

    def __init__(self, space: BigradedSpace, boundaries: List[SparseVector], representatives: List[SparseVector]):
        self.space = space
        self.representatives = representatives
        self._columns = [_indexed(space, v) for v in boundaries] + [_indexed(space, v) for v in representatives]
        self._n_boundaries = len(boundaries)
        pivots = set(independent_columns(self._columns, space.dim))
        for i in range(len(representatives)):
            if self._n_boundaries + i not in pivots:
                raise ValueError(f"Representative {i} is zero in homology")

    def coordinates(self, cycle: SparseVector) -> Optional[List]:
        """Coefficients on the representatives, or None when not in Z-span"""
        target = _indexed(self.space, cycle)
        rows = [SparseVector() for _ in range(self.space.dim)]
        for j, column in enumerate(self._columns):
            for r, c in column.items():
                rows[r].add_term(j, c)
        result = solve_linear_system(rows, [target[r] for r in range(self.space.dim)], len(self._columns))
        if not result.consistent:
            return None
        # representatives are independent modulo boundaries, so these entries are unique
        return [result.solution.get(self._n_boundaries + i, 0) for i in range(len(self.representatives))]

    def is_boundary(self, cycle: SparseVector) -> bool:
        coords = self.coordinates(cycle)
        return coords is not None and all(c == 0 for c in coords)


def _boundaries(slice_: ComplexSlice, p: int, w: int) -> List[SparseVector]:
    d_in = slice_.differential(p - 1)
    return [vec for col, vec in d_in.columns.items() if d_in.source.weight(col) == w]


@dataclass
class HomologyReport:
    dims: Dict[Tuple[int, int], int] = field(default_factory=dict)
    representatives: Dict[Tuple[int, int], List[SparseVector]] = field(default_factory=dict)
    decomposers: Dict[Tuple[int, int], ClassDecomposer] = field(default_factory=dict, repr=False)

    def dim(self, degree: int, weight: int) -> int:
        return self.dims.get((degree, weight), 0)

    def nonzero(self) -> Dict[Tuple[int, int], int]:
        return {k: v for k, v in sorted(self.dims.items()) if v}

    def total(self) -> int:
        return sum(self.dims.values())

    def coordinates(self, degree: int, weight: int, cycle: SparseVector):
        if (degree, weight) not in self.decomposers:
            return [] if not cycle else None
        return self.decomposers[(degree, weight)].coordinates(cycle)

    def recheck(self, slice_: ComplexSlice) -> List[str]:
        """Representatives must be cycles independent modulo boundaries"""
        issues = []
        for (p, w), reps in self.representatives.items():
            d = slice_.differential(p)
            for i, rep in enumerate(reps):
                if d.apply(rep):
                    issues.append(f"Representative {i} at ({p},{w}) is not a cycle")
            space = slice_.space(p)
            boundaries = [_indexed(space, v) for v in _boundaries(slice_, p, w)]
            pivots = set(independent_columns(boundaries + [_indexed(space, v) for v in reps], space.dim))
            for i in range(len(reps)):
                if len(boundaries) + i not in pivots:
                    issues.append(f"Representative {i} at ({p},{w}) depends on earlier classes and boundaries")
        return issues


def _weight_part(space: BigradedSpace, weight: int) -> List[str]:
    return [b.name for b in space.basis if b.weight == weight]


def homology_of_slice(slice_: ComplexSlice) -> HomologyReport:
    """Exact homology of a finite complex, split by (degree, weight)"""
    issues = slice_.check_square_zero()
    if issues:
        logger.error(f"Complex is not a complex: {issues[0]}")
        raise ValueError(f"d o d != 0: {issues[0]}")

    report = HomologyReport()
    for p in slice_.degrees():
        space = slice_.space(p)
        if space.dim == 0:
            continue
        for w in sorted({b.weight for b in space.basis}):
            names = _weight_part(space, w)
            sub = space.permuted(names)
            d_out = slice_.differential(p)
            restricted = LinearMap(
                sub, d_out.target,
                {n: d_out.columns[n] for n in names if n in d_out.columns},
                (1, 0),
            )
            cycles = kernel_basis(restricted)
            boundaries = _boundaries(slice_, p, w)
            columns = [_indexed(sub, v) for v in boundaries + cycles]
            pivots = independent_columns(columns, sub.dim)
            boundary_rank = sum(1 for j in pivots if j < len(boundaries))
            reps = [cycles[j - len(boundaries)] for j in pivots if j >= len(boundaries)]
            dim = len(cycles) - boundary_rank
            if dim != len(reps):
                raise ValueError(f"Inconsistent homology count at ({p},{w})")
            report.dims[(p, w)] = dim
            report.representatives[(p, w)] = reps
            report.decomposers[(p, w)] = ClassDecomposer(sub, boundaries, reps)
    logger.debug(f"Homology computed: {report.nonzero()}")
    return report


def supertrace(f: LinearMap, space: Optional[BigradedSpace] = None):
    """Sum over the basis of (-1)^degree times the diagonal entry"""
    space = space or f.source
    if f.source != space or f.target != space:
        raise ValueError("supertrace needs an endomorphism of the given space")
    if f.bidegree[0] != 0:
        raise ValueError(f"supertrace needs a degree-0 map, got bidegree {f.bidegree}")
    total = 0
    for element in space.basis:
        entry = f.entry(element.name, element.name)
        total += -entry if element.degree % 2 else entry
    return total
