import hashlib
import json
import logging
from dataclasses import dataclass, field
from itertools import product
from typing import Dict, List, Optional, Tuple

from src.ainfty.checker import StructureReport, check_morphism
from src.ainfty.errors import AlgebraError, ObstructionError, RelationError, TruncationError
from src.ainfty.signs import parity_sign
from src.ainfty.structures import AInftyAlgebra, AInftyMorphism, Key
from src.catalog.algebras import power_name, truncated_poly
from src.config.settings import settings
from src.linalg.scalars import SparseVector, format_scalar
from src.linalg.solver import solve_linear_system
from src.obstruction.end_complex import EndComplex, end_complex_of_k

logger = logging.getLogger(__name__)

MODULUS = 6

Column = Tuple[str, Key, str]
Row = Tuple[str, Key, str]


@dataclass
class MorphismPrefix:
    """Components g_1..g_n of a weight-0 strictly unital morphism k[x]/x^6 -> End(k)"""
    source: AInftyAlgebra
    target: EndComplex
    components: Dict[int, Dict[Key, SparseVector]] = field(default_factory=dict)
    corrections: Dict[int, int] = field(default_factory=dict)

    @property
    def arity(self) -> int:
        return max(self.components) if self.components else 0

    def as_morphism(self) -> AInftyMorphism:
        return AInftyMorphism(self.source, self.target.algebra, self.components, name='g')

    def check(self, max_arity: Optional[int] = None) -> StructureReport:
        return check_morphism(self.as_morphism(), max_arity or self.arity)

    def to_dict(self) -> Dict:
        return {
            str(n): {','.join(key): {name: format_scalar(c) for name, c in sorted(out.items())}
                     for key, out in sorted(table.items())}
            for n, table in sorted(self.components.items())
        }

    def digest(self) -> str:
        payload = json.dumps(self.to_dict(), sort_keys=True, ensure_ascii=False)
        return hashlib.sha256(payload.encode('utf-8')).hexdigest()


def prescribe_g1(target: EndComplex, modulus: int = MODULUS) -> MorphismPrefix:
    """g_1(x^k) = eps^k, g_1(1) = identity"""
    source = truncated_poly(modulus)
    table = {}
    for k in range(1, modulus):
        image = target.power(target.epsilon, k)
        if image:
            table[(power_name('x', k),)] = image
    prefix = MorphismPrefix(source, target, {1: table})
    report = prefix.check(1)
    if not report.passed:
        raise RelationError(f"g_1 is not a chain map: {report.first_violation.describe()}")
    return prefix


def reduced_tuples(algebra: AInftyAlgebra, length: int, weight_bound: int) -> List[Key]:
    names = algebra.reduced_names
    space = algebra.space
    return [key for key in product(names, repeat=length)
            if sum(space.weight(a) for a in key) <= weight_bound]


@dataclass
class ObstructionSystem:
    """Linear equations for g_(n+1) and a cocycle correction of g_n"""
    prefix: MorphismPrefix
    arity: int
    columns: List[Column]
    equations: Dict[Row, SparseVector]
    rhs: Dict[Row, object]
    allow_correction: bool = True

    @property
    def size(self) -> Dict[str, int]:
        return {'unknowns': len(self.columns), 'equations': len(self.equations)}

    def perturbed(self, key: Key, vector: Dict) -> 'ObstructionSystem':
        """Same system with an extra term added to the relation at key"""
        rhs = dict(self.rhs)
        equations = dict(self.equations)
        for name, coef in SparseVector(vector).items():
            row = ('relation', tuple(key), name)
            rhs[row] = rhs.get(row, 0) - coef
            equations.setdefault(row, SparseVector())
        return ObstructionSystem(self.prefix, self.arity, self.columns, equations, rhs, self.allow_correction)

    def corrupted(self, key: Key, vector: Dict) -> 'ObstructionSystem':
        """Same system with the residual at key replaced by vector"""
        cleared = {row: b for row, b in self.rhs.items() if not (row[0] == 'relation' and row[1] == tuple(key))}
        base = ObstructionSystem(self.prefix, self.arity, self.columns, dict(self.equations), cleared,
                                 self.allow_correction)
        return base.perturbed(key, vector)

    def solve(self) -> MorphismPrefix:
        labels = sorted(self.equations, key=_row_order)
        rows = [self.equations[label] for label in labels]
        rhs = [self.rhs.get(label, 0) for label in labels]
        result = solve_linear_system(rows, rhs, len(self.columns))
        if not result.consistent:
            witness = {_render_row(labels[i]): format_scalar(c) for i, c in sorted(result.witness.items()) if c}
            logger.error(f"Obstruction at arity {self.arity} does not vanish: {len(witness)} witness rows")
            raise ObstructionError(f"No extension to arity {self.arity}", witness)
        components = {n: {k: SparseVector(v) for k, v in t.items()} for n, t in self.prefix.components.items()}
        new_table: Dict[Key, SparseVector] = {}
        used = 0
        for j, value in result.solution.items():
            if not value:
                continue
            kind, key, name = self.columns[j]
            if kind == 'g':
                new_table.setdefault(key, SparseVector()).add_term(name, value)
            else:
                used += 1
                components.setdefault(self.arity - 1, {}).setdefault(key, SparseVector()).add_term(name, value)
        components[self.arity] = new_table
        corrections = dict(self.prefix.corrections)
        if used:
            corrections[self.arity - 1] = used
            logger.info(f"Corrected g_{self.arity - 1} on {used} entries")
        return MorphismPrefix(self.prefix.source, self.prefix.target, components, corrections)


def _row_order(row: Row):
    kind, key, name = row
    return (kind != 'relation', len(key), key, name)


def _render_row(row: Row) -> str:
    kind, key, name = row
    return f"{kind}:{','.join(key)}:{name}"


def assemble_obstruction(prefix: MorphismPrefix, n: int, allow_correction: bool = True) -> ObstructionSystem:
    """Equations d g_(n+1)(a) + residual(a) + correction terms = 0 on every reduced tuple of length n + 1"""
    if prefix.arity != n:
        raise AlgebraError(f"Prefix has arity {prefix.arity}, expected {n}")
    source, target = prefix.source, prefix.target
    E = target.algebra
    bound = target.weight_bound
    if n + 1 > bound:
        raise TruncationError(f"Arity {n + 1} needs weight bound at least {n + 1}",
                              {'weight_bound': n + 1, 'length_bound': n + 1})
    report = check_morphism(prefix.as_morphism(), n + 1)
    residual: Dict[Key, SparseVector] = {}
    for violation in report.violations:
        if violation.kind != 'relation' or violation.arity <= n:
            raise RelationError(f"Prefix fails below arity {n + 1}: {violation.describe()}")
        if source.unit in violation.inputs:
            raise RelationError(f"Unit relation fails: {violation.describe()}")
        residual[violation.inputs] = SparseVector(violation.residual)

    columns: List[Column] = []
    equations: Dict[Row, SparseVector] = {}
    rhs: Dict[Row, object] = {}

    def add(row: Row, column: int, coef):
        equations.setdefault(row, SparseVector()).add_term(column, coef)

    space = source.space
    for key in reduced_tuples(source, n + 1, bound):
        w = sum(space.weight(a) for a in key)
        for name in E.space.part(-n, w):
            j = len(columns)
            columns.append(('g', key, name))
            for out, coef in E.apply(1, (name,)).items():
                add(('relation', key, out), j, coef)
        for out, coef in residual.get(key, SparseVector()).items():
            rhs[('relation', key, out)] = -coef
            equations.setdefault(('relation', key, out), SparseVector())

    if allow_correction and n >= 2:
        g1 = prefix.components[1]
        inner: Dict[str, List[Tuple[Key, object]]] = {}
        for _, key_in, out_in in source.entries():
            if source.unit in key_in:
                continue
            for name, coef in out_in.items():
                inner.setdefault(name, []).append((key_in, coef))
        for key in reduced_tuples(source, n, bound):
            w = sum(space.weight(a) for a in key)
            for name in E.space.part(1 - n, w):
                j = len(columns)
                columns.append(('h', key, name))
                for out, coef in E.apply(1, (name,)).items():
                    add(('cocycle', key, out), j, coef)
                for b in source.reduced_names:
                    for p, cp in g1.get((b,), SparseVector()).items():
                        for out, coef in E.apply(2, (p, name)).items():
                            add(('relation', (b,) + key, out), j, cp * coef)
                        for out, coef in E.apply(2, (name, p)).items():
                            add(('relation', key + (b,), out), j, cp * coef)
                shift = 0
                for pos, c in enumerate(key):
                    for key_in, coef in inner.get(c, ()):
                        full = key[:pos] + key_in + key[pos + 1:]
                        if len(full) == n + 1:
                            add(('relation', full, name), j, -parity_sign(shift) * coef)
                    shift += space.degree(c) + 1

    system = ObstructionSystem(prefix, n + 1, columns, equations, rhs, allow_correction)
    logger.info(f"Obstruction system for arity {n + 1}: {system.size}")
    return system


def solve_to_arity(N: int, weight_bound: Optional[int] = None, length_bound: Optional[int] = None,
                   allow_correction: bool = True, max_arity: Optional[int] = None) -> Tuple[MorphismPrefix, Dict]:
    """Build g_1..g_N step by step; every step is re-checked before the next"""
    weight_bound = weight_bound or settings.WEIGHT_BOUND
    length_bound = length_bound or settings.LENGTH_BOUND
    max_arity = max_arity or settings.SOLVER_ARITY
    if N < 1 or N > max_arity:
        raise ValueError(f"Target arity must lie in 1..{max_arity}, got {N}")
    target = end_complex_of_k(weight_bound, length_bound)
    if N > target.weight_bound:
        raise TruncationError(f"Arity {N} is vacuous below weight {N}",
                              {'weight_bound': N, 'length_bound': N})
    prefix = prescribe_g1(target)
    steps = []
    try:
        for n in range(1, N):
            system = assemble_obstruction(prefix, n, allow_correction)
            prefix = system.solve()
            steps.append({'arity': n + 1, **system.size})
        report = prefix.check(N)
        if not report.passed:
            raise RelationError(f"Solved prefix fails its own check: {report.first_violation.describe()}")
    except Exception as e:
        logger.error(f"Error solving to arity {N}: {str(e)}")
        raise
    certificate = {
        'weight_bound': weight_bound,
        'length_bound': length_bound,
        'certified_weight': target.weight_bound,
        'target_arity': N,
        'steps': steps,
        'corrections': {str(k): v for k, v in prefix.corrections.items()},
        'tuples_checked': report.tuples_checked,
        'gauge': f"g1(x) = {target.epsilon}",
        'hash': prefix.digest(),
    }
    logger.info(f"Solved morphism to arity {N}: hash {certificate['hash'][:12]}")
    return prefix, certificate
