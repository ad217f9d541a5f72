import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Tuple

from src.linalg.scalars import SparseVector

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BasisElement:
    name: str
    degree: int
    weight: int = 0
    # (target, source) for elementary maps of an endomorphism algebra
    entry: Optional[Tuple[str, str]] = None


class BigradedSpace:
    """Finite ordered basis, each element carrying (degree, weight)"""

    def __init__(self, basis: Iterable[BasisElement]):
        self.basis: Tuple[BasisElement, ...] = tuple(basis)
        self._by_name: Dict[str, BasisElement] = {}
        self.index: Dict[str, int] = {}
        for i, element in enumerate(self.basis):
            if element.name in self._by_name:
                raise ValueError(f"Duplicate basis name '{element.name}'")
            self._by_name[element.name] = element
            self.index[element.name] = i

    @classmethod
    def from_triples(cls, triples: Iterable[Tuple[str, int, int]]) -> 'BigradedSpace':
        return cls(BasisElement(n, d, w) for n, d, w in triples)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def names(self) -> List[str]:
        return [b.name for b in self.basis]

    def __contains__(self, name: str) -> bool:
        return name in self._by_name

    def __iter__(self):
        return iter(self.basis)

    def __len__(self) -> int:
        return len(self.basis)

    def __eq__(self, other) -> bool:
        return isinstance(other, BigradedSpace) and self.basis == other.basis

    def __hash__(self) -> int:
        return hash(self.basis)

    def element(self, name: str) -> BasisElement:
        try:
            return self._by_name[name]
        except KeyError:
            raise KeyError(f"Unknown basis element '{name}'") from None

    def degree(self, name: str) -> int:
        return self.element(name).degree

    def weight(self, name: str) -> int:
        return self.element(name).weight

    def part(self, degree: int, weight: Optional[int] = None) -> List[str]:
        """Names in a given degree (and weight), in basis order"""
        return [b.name for b in self.basis
                if b.degree == degree and (weight is None or b.weight == weight)]

    def reweighted(self, factor: int) -> 'BigradedSpace':
        return BigradedSpace(BasisElement(b.name, b.degree, factor * b.weight) for b in self.basis)

    def permuted(self, order: List[str]) -> 'BigradedSpace':
        return BigradedSpace(self.element(n) for n in order)

    def __repr__(self) -> str:
        return f"BigradedSpace(dim={self.dim})"


class LinearMap:
    """Sparse homogeneous linear map stored column by column"""

    def __init__(self, source: BigradedSpace, target: BigradedSpace,
                 columns: Optional[Dict[str, SparseVector]] = None,
                 bidegree: Tuple[int, int] = (0, 0)):
        self.source = source
        self.target = target
        self.bidegree = tuple(bidegree)
        self.columns: Dict[str, SparseVector] = {}
        for col, vector in (columns or {}).items():
            vector = SparseVector(vector)
            if vector:
                self.columns[col] = vector
        self._validate()

    def _validate(self):
        d_deg, d_w = self.bidegree
        for col, vector in self.columns.items():
            src = self.source.element(col)
            for row in vector:
                tgt = self.target.element(row)
                if tgt.degree - src.degree != d_deg or tgt.weight - src.weight != d_w:
                    raise ValueError(
                        f"Entry ({row}, {col}) breaks bidegree {self.bidegree}: "
                        f"({src.degree},{src.weight}) -> ({tgt.degree},{tgt.weight})"
                    )

    def entry(self, row: str, col: str):
        return self.columns.get(col, SparseVector())[row]

    def apply(self, vector: SparseVector) -> SparseVector:
        out = SparseVector()
        for col, coef in vector.items():
            if col in self.columns:
                out.iadd_coef(coef, self.columns[col])
        return out

    def compose(self, first: 'LinearMap') -> 'LinearMap':
        """self after first"""
        if first.target != self.source:
            raise ValueError("Composition of maps with mismatched spaces")
        columns = {col: self.apply(vec) for col, vec in first.columns.items()}
        bidegree = (self.bidegree[0] + first.bidegree[0], self.bidegree[1] + first.bidegree[1])
        return LinearMap(first.source, self.target, columns, bidegree)

    def is_zero(self) -> bool:
        return not self.columns

    def row_vectors(self) -> List[SparseVector]:
        """Rows as sparse vectors over source column indices"""
        rows: Dict[str, SparseVector] = {}
        for col, vector in self.columns.items():
            j = self.source.index[col]
            for row, coef in vector.items():
                rows.setdefault(row, SparseVector()).add_term(j, coef)
        return [rows[name] for name in self.target.names if name in rows]

    @classmethod
    def identity(cls, space: BigradedSpace) -> 'LinearMap':
        return cls(space, space, {n: SparseVector({n: 1}) for n in space.names})


@dataclass
class ComplexSlice:
    """Finite cochain complex: degree -> space, d_p : C^p -> C^{p+1}"""
    spaces: Dict[int, BigradedSpace]
    differentials: Dict[int, LinearMap] = field(default_factory=dict)

    def __post_init__(self):
        for p, d in self.differentials.items():
            if d.bidegree != (1, 0):
                raise ValueError(f"Differential in degree {p} has bidegree {d.bidegree}")

    def space(self, p: int) -> BigradedSpace:
        return self.spaces.get(p, BigradedSpace([]))

    def differential(self, p: int) -> LinearMap:
        if p in self.differentials:
            return self.differentials[p]
        return LinearMap(self.space(p), self.space(p + 1), {}, (1, 0))

    def degrees(self) -> List[int]:
        return sorted(self.spaces)

    def check_square_zero(self) -> List[str]:
        issues = []
        for p in self.degrees():
            composite = self.differential(p + 1).compose(self.differential(p))
            if not composite.is_zero():
                col = next(iter(composite.columns))
                issues.append(f"d^{p + 1} d^{p} != 0 on {col}: {dict(composite.columns[col])}")
        return issues
