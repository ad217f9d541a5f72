import logging
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Dict, Iterable, List, Optional, Tuple

from src.ainfty.signs import parity_sign
from src.ainfty.structures import (AInftyAlgebra, AInftyBimodule, AInftyModule,
                                   AInftyMorphism, Bimorphism, Key)
from src.linalg.scalars import SparseVector, format_scalar

logger = logging.getLogger(__name__)

# Relation checking by sparse composition.
#
# Instead of enumerating every input tuple, each outer table entry is paired
# with each inner entry that produces one of its inputs; the composite term is
# accumulated on the full input tuple it belongs to. Every tuple not touched
# has residual zero, so the check is complete up to the arity bound.
#
# Bimodules and modules are checked as the A-infinity relation of the
# triangular algebra they define: an operation mu_{i,j} enters with the sign
# (-1)^(l_1^i(a) + 1), and all slots carry a type tag A, M or B.

Typed = Tuple[str, str]


@dataclass
class Violation:
    kind: str
    inputs: Tuple[str, ...]
    residual: Dict[str, object]
    split: Optional[Tuple[int, ...]] = None

    @property
    def arity(self) -> int:
        return len(self.inputs)

    def describe(self) -> str:
        rendered = {k: format_scalar(v) for k, v in self.residual.items()}
        where = f" split {self.split}" if self.split is not None else ""
        return f"{self.kind} at {self.inputs}{where}: residual {rendered}"


@dataclass
class StructureReport:
    entity: str
    max_arity: int
    tuples_checked: int = 0
    violations: List[Violation] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    @property
    def first_violation(self) -> Optional[Violation]:
        return self.violations[0] if self.violations else None

    def summary(self) -> Dict:
        return {
            'entity': self.entity,
            'max_arity': self.max_arity,
            'tuples_checked': self.tuples_checked,
            'passed': self.passed,
            'violations': len(self.violations),
            'first_violation': self.first_violation.describe() if self.violations else None,
        }


def _typed_vector(tag: str, vector: SparseVector) -> SparseVector:
    return SparseVector(((tag, name), coef) for name, coef in vector.items())


def _composition_residuals(entries: List[Tuple[Tuple[Typed, ...], SparseVector]],
                           degree: Callable[[Typed], int], max_arity: int,
                           keep: Callable[[Tuple[Typed, ...]], bool]):
    producers: Dict[Typed, List[Tuple[Tuple[Typed, ...], object]]] = {}
    for key, out in entries:
        for name, coef in out.items():
            producers.setdefault(name, []).append((key, coef))
    residual: Dict[Tuple[Typed, ...], SparseVector] = {}
    for key_o, out_o in entries:
        prefix_shift = 0
        for pos, c in enumerate(key_o):
            for key_in, coef in producers.get(c, ()):
                full = key_o[:pos] + key_in + key_o[pos + 1:]
                if len(full) > max_arity or not keep(full):
                    continue
                residual.setdefault(full, SparseVector()).iadd_coef(parity_sign(prefix_shift) * coef, out_o)
            prefix_shift += degree(c) + 1
    return residual


def _sorted_violations(kind: str, residual: Dict, order: Callable) -> List[Violation]:
    found = [(key, vec) for key, vec in residual.items() if vec]
    found.sort(key=lambda kv: (len(kv[0]), order(kv[0])))
    return [Violation(kind, *_untyped(key, vec)) for key, vec in found]


def _untyped(key, vec):
    split = None
    if key and isinstance(key[0], tuple):
        tags = [t for t, _ in key]
        if 'M' in tags:
            i = tags.index('M')
            split = (i, len(tags) - i - 1)
        key = tuple(name for _, name in key)
        vec = {name: coef for (_, name), coef in vec.items()}
    return key, dict(vec), split


def algebra_entries(algebra: AInftyAlgebra, tag: str = 'A'):
    return [(tuple((tag, x) for x in key), _typed_vector(tag, out)) for _, key, out in algebra.entries()]


def bimodule_entries(bimodule: AInftyBimodule):
    """Bimodule operations as triangular-algebra operations with the gluing sign"""
    left = bimodule.left.space
    entries = []
    for (i, j), key, out in bimodule.entries():
        a_part = key[:i]
        exponent = sum(left.degree(x) for x in a_part) + i + 1
        typed = (tuple(('A', x) for x in a_part) + (('M', key[i]),)
                 + tuple(('B', x) for x in key[i + 1:]))
        entries.append((typed, _typed_vector('M', out).scaled(parity_sign(exponent))))
    return entries


def check_algebra(algebra: AInftyAlgebra, max_arity: int) -> StructureReport:
    """A-infinity relations up to max_arity plus strict unitality"""
    space = algebra.space
    report = StructureReport(f"algebra {algebra.name}", max_arity)
    residual = _composition_residuals(
        algebra_entries(algebra), lambda t: space.degree(t[1]), max_arity, lambda key: True)
    report.tuples_checked = len(residual)
    index = space.index
    report.violations = _sorted_violations('relation', residual, lambda k: [index[n] for _, n in k])
    report.violations.extend(unit_violations(algebra))
    logger.info(f"Checked {report.entity} to arity {max_arity}: "
                f"{report.tuples_checked} tuples, {len(report.violations)} violations")
    return report


def unit_violations(algebra: AInftyAlgebra) -> List[Violation]:
    unit = algebra.unit
    if unit is None:
        return []
    violations = []
    for element in algebra.space:
        a = element.name
        checks = [((unit, a), SparseVector({a: 1})),
                  ((a, unit), SparseVector({a: parity_sign(element.degree)}))]
        for key, expected in checks:
            got = algebra.apply(2, key)
            if got != expected:
                violations.append(Violation('unit', key, dict(got - expected)))
    if algebra.apply(1, (unit,)):
        violations.append(Violation('unit', (unit,), dict(algebra.apply(1, (unit,)))))
    for n, key, out in algebra.entries():
        if n >= 3 and unit in key:
            violations.append(Violation('unit', key, dict(out)))
    return violations


def check_bimodule(bimodule: AInftyBimodule, max_arity: int) -> StructureReport:
    """Bimodule relations: triangular-algebra relations on tuples with one module slot"""
    left, right, space = bimodule.left.space, bimodule.right.space, bimodule.space
    spaces = {'A': left, 'B': right, 'M': space}
    entries = algebra_entries(bimodule.left, 'A') + algebra_entries(bimodule.right, 'B') + bimodule_entries(bimodule)
    residual = _composition_residuals(
        entries, lambda t: spaces[t[0]].degree(t[1]), max_arity,
        lambda key: sum(1 for t, _ in key if t == 'M') == 1)
    report = StructureReport(f"bimodule {bimodule.name}", max_arity, len(residual))
    report.violations = _sorted_violations(
        'relation', residual, lambda k: [(t, spaces[t].index[n]) for t, n in k])
    report.violations.extend(_bimodule_unit_violations(bimodule))
    logger.info(f"Checked {report.entity} to arity {max_arity}: "
                f"{report.tuples_checked} tuples, {len(report.violations)} violations")
    return report


def _bimodule_unit_violations(bimodule: AInftyBimodule) -> List[Violation]:
    violations = []
    lu, ru = bimodule.left.unit, bimodule.right.unit
    for element in bimodule.space:
        m = element.name
        if lu is not None and bimodule.apply(1, 0, (lu, m)) != SparseVector({m: 1}):
            violations.append(Violation('unit', (lu, m), dict(bimodule.apply(1, 0, (lu, m))), (1, 0)))
        if ru is not None and bimodule.apply(0, 1, (m, ru)) != SparseVector({m: -parity_sign(element.degree)}):
            violations.append(Violation('unit', (m, ru), dict(bimodule.apply(0, 1, (m, ru))), (0, 1)))
    for (i, j), key, out in bimodule.entries():
        if i + j < 2:
            continue
        if (lu is not None and lu in key[:i]) or (ru is not None and ru in key[i + 1:]):
            violations.append(Violation('unit', key, dict(out), (i, j)))
    return violations


def check_module(module: AInftyModule, max_arity: int) -> StructureReport:
    """Right module relations, via the bimodule over the ground field"""
    from src.ainfty.constructions import module_as_bimodule
    report = check_bimodule(module_as_bimodule(module), max_arity)
    report.entity = f"module {module.name}"
    return report


def check_morphism(morphism: AInftyMorphism, max_arity: int) -> StructureReport:
    """sum mu^B(f.., f..) = sum (-1)^(l_1^i(a)) f(.., mu^A(..), ..)"""
    source, target = morphism.source, morphism.target
    producers: Dict[str, List[Tuple[Key, object]]] = {}
    for n, table in morphism.f.items():
        for key, out in table.items():
            for name, coef in out.items():
                producers.setdefault(name, []).append((key, coef))
    residual: Dict[Key, SparseVector] = {}
    for _, key_b, out_b in target.entries():
        choices = [producers.get(c, []) for c in key_b]
        for combo in product(*choices):
            full = tuple(x for key, _ in combo for x in key)
            if len(full) > max_arity:
                continue
            coef = 1
            for _, c in combo:
                coef *= c
            residual.setdefault(full, SparseVector()).iadd_coef(coef, out_b)
    inner = {}
    for _, key_a, out_a in source.entries():
        for name, coef in out_a.items():
            inner.setdefault(name, []).append((key_a, coef))
    for n, table in morphism.f.items():
        for key_f, out_f in table.items():
            shift = 0
            for pos, c in enumerate(key_f):
                for key_in, coef in inner.get(c, ()):
                    full = key_f[:pos] + key_in + key_f[pos + 1:]
                    if len(full) <= max_arity:
                        residual.setdefault(full, SparseVector()).iadd_coef(-parity_sign(shift) * coef, out_f)
                shift += source.space.degree(c) + 1
    report = StructureReport(f"morphism {morphism.name}", max_arity, len(residual))
    index = source.space.index
    report.violations = _sorted_violations('relation', residual, lambda k: [index[n] for n in k])
    su, tu = source.unit, target.unit
    if su is not None and tu is not None:
        if morphism.apply(1, (su,)) != SparseVector({tu: 1}):
            report.violations.append(Violation('unit', (su,), dict(morphism.apply(1, (su,)))))
        for n, key, out in ((n, k, o) for n, t in morphism.f.items() for k, o in t.items()):
            if n >= 2 and su in key:
                report.violations.append(Violation('unit', key, dict(out)))
    logger.info(f"Checked {report.entity} to arity {max_arity}: {len(report.violations)} violations")
    return report


def _ordered_splits(total: int, parts: int):
    """Ways to cut range(total) into `parts` consecutive (possibly empty) blocks"""
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _ordered_splits(total - first, parts - 1):
            yield (first,) + rest


def check_bimorphism(morphism: Bimorphism, max_arity: int) -> StructureReport:
    """Bimorphism relations evaluated on every basis tuple up to max_arity"""
    A, B, C = morphism.first, morphism.second, morphism.target
    residual: Dict[Tuple[int, int, Key], SparseVector] = {}
    components = [((r, s), key, out) for (r, s), table in morphism.f.items() for key, out in table.items()]

    def l_block(space, names):
        return sum(space.degree(x) + 1 for x in names)

    # left side: chains of components whose a-parts and b-parts concatenate
    frontier = [((), (), 1, [])]
    for _ in range(max_arity):
        grown = []
        for a_part, b_part, coef, blocks in frontier:
            for (r, s), key, out in components:
                if len(a_part) + len(b_part) + r + s > max_arity:
                    continue
                for name, c in out.items():
                    grown.append((a_part + key[:r], b_part + key[r:], coef * c,
                                  blocks + [(key[:r], key[r:], name)]))
        if not grown:
            break
        for a_part, b_part, coef, blocks in grown:
            args = tuple(name for _, _, name in blocks)
            out = C.apply(len(args), args)
            if not out:
                continue
            exponent = 0
            for q in range(len(blocks)):
                for p in range(q):
                    exponent += l_block(A.space, blocks[q][0]) * l_block(B.space, blocks[p][1])
            full = (len(a_part), len(b_part), a_part + b_part)
            residual.setdefault(full, SparseVector()).iadd_coef(parity_sign(exponent) * coef, out)
        frontier = grown

    for (r, s), key, out_f in components:
        a_part, b_part = key[:r], key[r:]
        for pos in range(r + s):
            on_a = pos < r
            algebra = A if on_a else B
            c = key[pos]
            for n, key_in, out_in in algebra.entries():
                coef = out_in[c]
                if not coef or r + s - 1 + n > max_arity:
                    continue
                if on_a:
                    new_a = a_part[:pos] + key_in + a_part[pos + 1:]
                    new_b = b_part
                    exponent = l_block(A.space, a_part[:pos])
                else:
                    j = pos - r
                    new_a = a_part
                    new_b = b_part[:j] + key_in + b_part[j + 1:]
                    exponent = l_block(A.space, a_part) + l_block(B.space, b_part[:j])
                full = (len(new_a), len(new_b), new_a + new_b)
                residual.setdefault(full, SparseVector()).iadd_coef(-parity_sign(exponent) * coef, out_f)

    report = StructureReport(f"bimorphism {morphism.name}", max_arity, len(residual))
    found = sorted(((k, v) for k, v in residual.items() if v), key=lambda kv: (len(kv[0][2]), kv[0]))
    report.violations = [Violation('relation', key, dict(vec), (r, s)) for (r, s, key), vec in found]
    logger.info(f"Checked {report.entity} to arity {max_arity}: {len(report.violations)} violations")
    return report


def check_structure(entity, max_arity: int) -> StructureReport:
    """Dispatch to the relation checker for the entity's kind"""
    try:
        if isinstance(entity, AInftyAlgebra):
            return check_algebra(entity, max_arity)
        if isinstance(entity, AInftyBimodule):
            return check_bimodule(entity, max_arity)
        if isinstance(entity, AInftyModule):
            return check_module(entity, max_arity)
        if isinstance(entity, AInftyMorphism):
            return check_morphism(entity, max_arity)
        if isinstance(entity, Bimorphism):
            return check_bimorphism(entity, max_arity)
        checker = getattr(entity, 'check', None)
        if checker is not None:
            return checker(max_arity)
        raise TypeError(f"No relation checker for {type(entity).__name__}")
    except Exception as e:
        logger.error(f"Error checking {entity!r}: {str(e)}")
        raise
