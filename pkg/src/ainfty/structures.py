import logging
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

from src.ainfty.errors import AlgebraError
from src.linalg.scalars import SparseVector
from src.linalg.spaces import BigradedSpace

logger = logging.getLogger(__name__)

# Operation tables of finite A-infinity structures.
#
# Every structure stores its operations as sparse tables: a tuple of basis
# names maps to the SparseVector of the output. Absent keys are zero. Strict
# unit entries are filled in at construction unless fill_unit=False.

Key = Tuple[str, ...]
OpTable = Dict[Key, SparseVector]


def clean_table(table: Dict) -> OpTable:
    cleaned: OpTable = {}
    for key, out in table.items():
        out = SparseVector(out)
        if out:
            cleaned[tuple(key)] = out
    return cleaned


def copy_tables(tables: Dict) -> Dict:
    return {index: {key: SparseVector(out) for key, out in table.items()}
            for index, table in tables.items()}


def check_entry(label: str, key: Key, out: SparseVector,
                slot_spaces: Sequence[BigradedSpace], target: BigradedSpace, shift: int):
    """Output must sit in degree sum + shift and weight sum of the inputs"""
    if len(key) != len(slot_spaces):
        raise AlgebraError(f"{label}: key {key} has wrong length {len(key)}")
    try:
        degree = sum(space.degree(x) for space, x in zip(slot_spaces, key))
        weight = sum(space.weight(x) for space, x in zip(slot_spaces, key))
        for name in out:
            if target.degree(name) != degree + shift or target.weight(name) != weight:
                raise AlgebraError(
                    f"{label}{key} -> {name} is not homogeneous: expected "
                    f"({degree + shift},{weight}), got ({target.degree(name)},{target.weight(name)})"
                )
    except KeyError as e:
        raise AlgebraError(f"{label}{key}: {e}") from None


def apply_multilinear(lookup: Callable[[Key], Optional[SparseVector]],
                      vectors: Sequence[SparseVector]) -> SparseVector:
    """Extend a table multilinearly to sparse input vectors"""
    result = SparseVector()
    partial: List[Tuple[Key, object]] = [((), 1)]
    for vector in vectors:
        partial = [(key + (name,), coef * c) for key, coef in partial for name, c in vector.items()]
        if not partial:
            return result
    for key, coef in partial:
        out = lookup(key)
        if out:
            result.iadd_coef(coef, out)
    return result


class AInftyAlgebra:
    """Finite-dimensional bigraded A-infinity algebra with an optional strict unit"""

    def __init__(self, space: BigradedSpace, mu: Dict[int, Dict], unit: Optional[str] = None,
                 name: str = 'A', arity_bound: Optional[int] = None, fill_unit: bool = True):
        self.space = space
        self.unit = unit
        self.name = name
        self.mu: Dict[int, OpTable] = {n: clean_table(t) for n, t in mu.items()}
        if unit is not None and unit not in space:
            raise AlgebraError(f"Unit '{unit}' is not a basis element of {name}")
        if unit is not None and (space.degree(unit), space.weight(unit)) != (0, 0):
            raise AlgebraError(f"Unit '{unit}' must have bidegree (0,0)")
        for n, table in self.mu.items():
            if n < 1:
                raise AlgebraError(f"{name}: operation arity {n} < 1")
            for key, out in table.items():
                check_entry(f"{name}.mu{n}", key, out, [space] * n, space, 2 - n)
        if unit is not None and fill_unit:
            self._fill_unit()
        self.arity_bound = arity_bound if arity_bound is not None else max([2] + list(self.mu))

    def _fill_unit(self):
        table = self.mu.setdefault(2, {})
        for element in self.space:
            a = element.name
            table.setdefault((self.unit, a), SparseVector({a: 1}))
            table.setdefault((a, self.unit), SparseVector({a: -1 if element.degree % 2 else 1}))

    @property
    def reduced_names(self) -> List[str]:
        return [n for n in self.space.names if n != self.unit]

    @property
    def max_arity(self) -> int:
        return max([0] + [n for n, t in self.mu.items() if t])

    @property
    def is_minimal(self) -> bool:
        return not self.mu.get(1)

    def apply(self, n: int, args: Sequence[str]) -> SparseVector:
        return self.mu.get(n, {}).get(tuple(args)) or SparseVector()

    def apply_linear(self, n: int, vectors: Sequence[SparseVector]) -> SparseVector:
        table = self.mu.get(n, {})
        return apply_multilinear(table.get, vectors)

    def entries(self) -> Iterator[Tuple[int, Key, SparseVector]]:
        for n in sorted(self.mu):
            for key, out in self.mu[n].items():
                yield n, key, out

    def mutated(self, n: int, key: Sequence[str], out: Dict) -> 'AInftyAlgebra':
        """Copy with one table entry replaced"""
        mu = copy_tables(self.mu)
        mu.setdefault(n, {})[tuple(key)] = SparseVector(out)
        return AInftyAlgebra(self.space, mu, self.unit, self.name, self.arity_bound, fill_unit=False)

    def __repr__(self) -> str:
        return f"AInftyAlgebra({self.name}, dim={self.space.dim}, arities={sorted(self.mu)})"


class AInftyModule:
    """Right A-infinity module: mu[n] takes (m, a_1, ..., a_{n-1})"""

    def __init__(self, algebra: AInftyAlgebra, space: BigradedSpace, mu: Dict[int, Dict],
                 name: str = 'M', fill_unit: bool = True):
        self.algebra = algebra
        self.space = space
        self.name = name
        self.mu: Dict[int, OpTable] = {n: clean_table(t) for n, t in mu.items()}
        for n, table in self.mu.items():
            slots = [space] + [algebra.space] * (n - 1)
            for key, out in table.items():
                check_entry(f"{name}.mu{n}", key, out, slots, space, 2 - n)
        if algebra.unit is not None and fill_unit:
            table = self.mu.setdefault(2, {})
            for element in space:
                table.setdefault((element.name, algebra.unit),
                                 SparseVector({element.name: 1 if element.degree % 2 else -1}))

    def apply(self, n: int, args: Sequence[str]) -> SparseVector:
        return self.mu.get(n, {}).get(tuple(args)) or SparseVector()

    def entries(self) -> Iterator[Tuple[int, Key, SparseVector]]:
        for n in sorted(self.mu):
            for key, out in self.mu[n].items():
                yield n, key, out


class AInftyBimodule:
    """A-B bimodule: mu[(i, j)] takes (a_1..a_i, m, b_1..b_j)"""

    def __init__(self, left: AInftyAlgebra, right: AInftyAlgebra, space: BigradedSpace,
                 mu: Dict[Tuple[int, int], Dict], name: str = 'M', fill_unit: bool = True):
        self.left = left
        self.right = right
        self.space = space
        self.name = name
        self.mu: Dict[Tuple[int, int], OpTable] = {tuple(ij): clean_table(t) for ij, t in mu.items()}
        for (i, j), table in self.mu.items():
            slots = [left.space] * i + [space] + [right.space] * j
            for key, out in table.items():
                check_entry(f"{name}.mu{i},{j}", key, out, slots, space, 1 - i - j)
        if fill_unit:
            self._fill_unit()

    def _fill_unit(self):
        for element in self.space:
            m = element.name
            if self.left.unit is not None:
                self.mu.setdefault((1, 0), {}).setdefault((self.left.unit, m), SparseVector({m: 1}))
            if self.right.unit is not None:
                self.mu.setdefault((0, 1), {}).setdefault(
                    (m, self.right.unit), SparseVector({m: 1 if element.degree % 2 else -1}))

    def apply(self, i: int, j: int, args: Sequence[str]) -> SparseVector:
        return self.mu.get((i, j), {}).get(tuple(args)) or SparseVector()

    def entries(self) -> Iterator[Tuple[Tuple[int, int], Key, SparseVector]]:
        for ij in sorted(self.mu):
            for key, out in self.mu[ij].items():
                yield ij, key, out

    def mutated(self, ij: Tuple[int, int], key: Sequence[str], out: Dict) -> 'AInftyBimodule':
        mu = copy_tables(self.mu)
        mu.setdefault(tuple(ij), {})[tuple(key)] = SparseVector(out)
        return AInftyBimodule(self.left, self.right, self.space, mu, self.name, fill_unit=False)


class AInftyMorphism:
    """Morphism of table algebras: f[n] of degree 1 - n"""

    def __init__(self, source: AInftyAlgebra, target: AInftyAlgebra, f: Dict[int, Dict],
                 name: str = 'f', fill_unit: bool = True):
        self.source = source
        self.target = target
        self.name = name
        self.f: Dict[int, OpTable] = {n: clean_table(t) for n, t in f.items()}
        for n, table in self.f.items():
            for key, out in table.items():
                check_entry(f"{name}{n}", key, out, [source.space] * n, target.space, 1 - n)
        if fill_unit and source.unit is not None and target.unit is not None:
            self.f.setdefault(1, {}).setdefault((source.unit,), SparseVector({target.unit: 1}))

    def apply(self, n: int, args: Sequence[str]) -> SparseVector:
        return self.f.get(n, {}).get(tuple(args)) or SparseVector()

    @classmethod
    def identity(cls, algebra: AInftyAlgebra) -> 'AInftyMorphism':
        table = {(a,): {a: 1} for a in algebra.space.names}
        return cls(algebra, algebra, {1: table}, name='id')


class Bimorphism:
    """(A, B) -> C: f[(r, s)] takes (a_1..a_r, b_1..b_s), degree 1 - r - s, no (0, 0) part"""

    def __init__(self, first: AInftyAlgebra, second: AInftyAlgebra, target: AInftyAlgebra,
                 f: Dict[Tuple[int, int], Dict], name: str = 'f', fill_unit: bool = True):
        self.first = first
        self.second = second
        self.target = target
        self.name = name
        self.f: Dict[Tuple[int, int], OpTable] = {tuple(rs): clean_table(t) for rs, t in f.items()}
        if self.f.get((0, 0)):
            raise AlgebraError(f"{name}: a bimorphism has no (0,0) component")
        self.f.pop((0, 0), None)
        for (r, s), table in self.f.items():
            slots = [first.space] * r + [second.space] * s
            for key, out in table.items():
                check_entry(f"{name}{r},{s}", key, out, slots, target.space, 1 - r - s)
        if fill_unit and target.unit is not None:
            if first.unit is not None:
                self.f.setdefault((1, 0), {}).setdefault((first.unit,), SparseVector({target.unit: 1}))
            if second.unit is not None:
                self.f.setdefault((0, 1), {}).setdefault((second.unit,), SparseVector({target.unit: 1}))

    def apply(self, r: int, s: int, args: Sequence[str]) -> SparseVector:
        return self.f.get((r, s), {}).get(tuple(args)) or SparseVector()

    @property
    def is_strict(self) -> bool:
        return all(rs in ((1, 0), (0, 1)) for rs, t in self.f.items() if t)
