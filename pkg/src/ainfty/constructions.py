import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from src.ainfty.dg import from_dg
from src.ainfty.errors import AlgebraError, TruncationError
from src.ainfty.signs import parity_sign, reversal_sign, shifted_sum
from src.ainfty.structures import (AInftyAlgebra, AInftyBimodule, AInftyModule, Bimorphism,
                                   Key, copy_tables)
from src.linalg.scalars import SparseVector
from src.linalg.spaces import BasisElement, BigradedSpace

logger = logging.getLogger(__name__)

GROUND_UNIT = '1k'


def ground_field() -> AInftyAlgebra:
    space = BigradedSpace([BasisElement(GROUND_UNIT, 0, 0)])
    return AInftyAlgebra(space, {}, unit=GROUND_UNIT, name='k')


def module_as_bimodule(module: AInftyModule) -> AInftyBimodule:
    """k-A bimodule with mu_{0,l} = mu^M_{l+1}"""
    mu = {(0, n - 1): table for n, table in copy_tables(module.mu).items()}
    return AInftyBimodule(ground_field(), module.algebra, module.space, mu, name=module.name)


@dataclass
class OppositeAlgebra:
    algebra: AInftyAlgebra
    literal_unit_failure: Optional[str] = None
    normalization: str = 'literal'


def opposite(algebra: AInftyAlgebra) -> OppositeAlgebra:
    """Reverse every operation with the shifted Koszul sign.

    The literal rule mu_n(a_n, ..., a_1) (-1)^sigma is tried first; when it
    breaks strict unitality every arity n is rescaled by (-1)^(n+1), which
    preserves the quadratic relations and keeps mu_1.
    """
    space = algebra.space

    def build(extra: bool) -> AInftyAlgebra:
        mu = {}
        for n, key, out in algebra.entries():
            reverse = tuple(reversed(key))
            exponent = reversal_sign([space.degree(x) for x in reverse]) + ((n + 1) if extra else 0)
            mu.setdefault(n, {})[reverse] = out.scaled(parity_sign(exponent))
        return AInftyAlgebra(space, mu, algebra.unit, f"{algebra.name}^op", algebra.arity_bound, fill_unit=False)

    from src.ainfty.checker import unit_violations
    literal = build(extra=False)
    failures = unit_violations(literal)
    if not failures:
        return OppositeAlgebra(literal)
    failure = failures[0].describe()
    logger.warning(f"Literal opposite of {algebra.name} is not strictly unital: {failure}")
    return OppositeAlgebra(build(extra=True), literal_unit_failure=failure, normalization='(-1)^(n+1)')


def diagonal_bimodule(algebra: AInftyAlgebra) -> AInftyBimodule:
    """A as an A-A bimodule: mu_{i,j} = (-1)^(l_1^i(a)+1) mu_{i+j+1}"""
    space = algebra.space
    mu: Dict[Tuple[int, int], Dict] = {}
    for n, key, out in algebra.entries():
        for i in range(n):
            exponent = shifted_sum(space.degree(x) for x in key[:i]) + 1
            mu.setdefault((i, n - 1 - i), {})[key] = out.scaled(parity_sign(exponent))
    return AInftyBimodule(algebra, algebra, space, mu, name=f"{algebra.name}_diag")


def _unique_names(parts: Sequence[Tuple[str, BigradedSpace]]) -> Dict[Tuple[str, str], str]:
    counts: Dict[str, int] = {}
    for _, space in parts:
        for name in space.names:
            counts[name] = counts.get(name, 0) + 1
    return {(label, name): (name if counts[name] == 1 else f"{name}@{label}")
            for label, space in parts for name in space.names}


def glue(bimodule: AInftyBimodule, name: str = 'C') -> AInftyAlgebra:
    """Triangular algebra (B 0; M A) on A + B + M.

    A-B-M components become mu^C = mu^A, mu^B and (-1)^(l_1^i(a)+1) mu_{i,j}.
    With both algebras unital the glued unit is 1_A + 1_B; 1_B stays a basis
    element (an idempotent) and 1_A is replaced by the glued unit.
    """
    A, B = bimodule.left, bimodule.right
    parts = [('A', A.space), ('B', B.space), ('M', bimodule.space)]
    rename = _unique_names(parts)
    from src.ainfty.checker import algebra_entries, bimodule_entries

    typed_entries = algebra_entries(A, 'A') + algebra_entries(B, 'B') + bimodule_entries(bimodule)
    naive: Dict[int, Dict[Key, SparseVector]] = {}
    for key, out in typed_entries:
        new_key = tuple(rename[t] for t in key)
        naive.setdefault(len(key), {})[new_key] = SparseVector((rename[t], c) for t, c in out.items())

    elements = []
    unit_a = rename[('A', A.unit)] if A.unit is not None else None
    unit_b = rename[('B', B.unit)] if B.unit is not None else None
    glued_unit = None
    if unit_a is not None and unit_b is not None:
        taken = set(rename.values())
        glued_unit = '1' if '1' not in taken or '1' in (unit_a,) else '1@C'
        elements.append(BasisElement(glued_unit, 0, 0))
    for label, space in parts:
        for element in space:
            new = rename[(label, element.name)]
            if glued_unit is not None and new == unit_a:
                continue
            elements.append(BasisElement(new, element.degree, element.weight))
    glued_space = BigradedSpace(elements)

    if glued_unit is None:
        return AInftyAlgebra(glued_space, naive, unit=None, name=name)
    mu = _rebase_units(naive, unit_a, unit_b, glued_unit)
    algebra = AInftyAlgebra(glued_space, mu, unit=glued_unit, name=name, fill_unit=False)
    logger.info(f"Glued {name}: dim {glued_space.dim}, arities {sorted(mu)}")
    return algebra


def _rebase_units(naive: Dict[int, Dict[Key, SparseVector]], unit_a: str, unit_b: str, unit: str):
    """Rewrite tables in the basis where 1_A is replaced by 1_A + 1_B"""

    def new_inputs(x: str) -> List[str]:
        if x == unit_a:
            return [unit]
        if x == unit_b:
            return [unit, unit_b]
        return [x]

    def new_output(out: SparseVector) -> SparseVector:
        result = SparseVector()
        for x, c in out.items():
            if x == unit_a:
                result.add_term(unit, c)
                result.add_term(unit_b, -c)
            else:
                result.add_term(x, c)
        return result

    mu: Dict[int, Dict[Key, SparseVector]] = {}
    for n, table in naive.items():
        for key, out in table.items():
            converted = new_output(out)
            keys = [()]
            for x in key:
                keys = [k + (y,) for k in keys for y in new_inputs(x)]
            for k in keys:
                mu.setdefault(n, {}).setdefault(k, SparseVector()).iadd_coef(1, converted)
    return {n: {k: v for k, v in t.items() if v} for n, t in mu.items()}


def bimodule_from_module_and_morphism(module: AInftyModule, left: AInftyAlgebra,
                                      components: Dict[int, Dict[Key, SparseVector]],
                                      name: str = 'V', required_arity: int = 0,
                                      known_arity: Optional[int] = None) -> AInftyBimodule:
    """mu_{0,l} = mu^M_{l+1}; mu_{n,l}(a.., m, b..) = f_n(a..)(m, b..).

    Cochain components are sparse vectors keyed by (m, (b_1..b_l), output).
    known_arity defaults to the largest key present; empty tables count as solved.
    """
    available = known_arity if known_arity is not None else max([0, *components])
    if available < required_arity:
        raise TruncationError(f"Morphism known to arity {available}, need {required_arity}",
                              {'arity': required_arity})
    mu: Dict[Tuple[int, int], Dict] = {(0, n - 1): t for n, t in copy_tables(module.mu).items()}
    for n, table in components.items():
        for a_key, cochain in table.items():
            for (m, b_key, out), coef in cochain.items():
                entry = mu.setdefault((n, len(b_key)), {}).setdefault(tuple(a_key) + (m,) + tuple(b_key), SparseVector())
                entry.add_term(out, coef)
    return AInftyBimodule(left, module.algebra, module.space, mu, name=name)


def end_algebra(space: BigradedSpace, differential: Optional[Dict[str, Dict]] = None, name: str = 'End') -> AInftyAlgebra:
    """End_k(M) as a DG algebra on elementary maps E[out|in]"""
    differential = {k: SparseVector(v) for k, v in (differential or {}).items()}
    names = space.names
    elements = [BasisElement(f"E[{i}|{j}]", space.degree(i) - space.degree(j), space.weight(i) - space.weight(j),
                             entry=(i, j))
                for i in names for j in names]
    end_space = BigradedSpace(elements)
    product = {(f"E[{i}|{j}]", f"E[{j}|{l}]"): {f"E[{i}|{l}]": 1} for i in names for j in names for l in names}
    d_end: Dict[str, SparseVector] = {}
    for i in names:
        for j in names:
            phi = SparseVector()
            # d_M after E[i|j]
            for out, c in differential.get(i, SparseVector()).items():
                phi.add_term(f"E[{out}|{j}]", c)
            # E[i|j] after d_M: columns of d_M hitting j
            sign = parity_sign(space.degree(i) - space.degree(j))
            for source in names:
                c = differential.get(source, SparseVector())[j]
                if c:
                    phi.add_term(f"E[{i}|{source}]", -sign * c)
            if phi:
                d_end[f"E[{i}|{j}]"] = phi
    unit = SparseVector({f"E[{i}|{i}]": 1 for i in names})
    algebra = from_dg(end_space, d_end, product, unit=None, name=name)
    algebra.identity = unit
    algebra.module_space = space
    return algebra


def bimodule_sign(right_space: BigradedSpace, module_space: BigradedSpace, m: str, b_key: Sequence[str]) -> int:
    """l = l_1^s(b)|m| + sum_{p<q} (|b_p|+1)(|b_q|+1)"""
    degrees = [right_space.degree(x) for x in b_key]
    return shifted_sum(degrees) * module_space.degree(m) + reversal_sign(degrees)


def bimodule_from_bimorphism(morphism: Bimorphism, module_space: BigradedSpace,
                             differential: Dict[str, Dict], right: AInftyAlgebra,
                             name: str = 'M') -> AInftyBimodule:
    """mu_{r,s}(a.., m, b_1..b_s) = (-1)^l f_{r,s}(a.., b_s..b_1)(m), mu_{0,0} = d"""
    mu: Dict[Tuple[int, int], Dict] = {(0, 0): {(m,): SparseVector(v) for m, v in differential.items()}}
    for (r, s), table in morphism.f.items():
        for key, out in table.items():
            a_key, b_key = key[:r], tuple(reversed(key[r:]))
            for basis_map, coef in out.items():
                target, source = morphism.target.space.element(basis_map).entry
                sign = parity_sign(bimodule_sign(right.space, module_space, source, b_key))
                entry = mu.setdefault((r, s), {}).setdefault(a_key + (source,) + b_key, SparseVector())
                entry.add_term(target, sign * coef)
    return AInftyBimodule(morphism.first, right, module_space, mu, name=name, fill_unit=False)


def bimorphism_from_bimodule(bimodule: AInftyBimodule, right_opposite: AInftyAlgebra,
                             target: AInftyAlgebra, name: str = 'f') -> Bimorphism:
    """Inverse of bimodule_from_bimorphism; mu_{0,0} is absorbed into End(M)"""
    f: Dict[Tuple[int, int], Dict] = {}
    space = bimodule.space
    elementary = {e.entry: e.name for e in target.space.basis if e.entry}
    for (r, s), key, out in bimodule.entries():
        if (r, s) == (0, 0):
            continue
        a_key, m, b_key = key[:r], key[r], key[r + 1:]
        sign = parity_sign(bimodule_sign(bimodule.right.space, space, m, b_key))
        entry = f.setdefault((r, s), {}).setdefault(a_key + tuple(reversed(b_key)), SparseVector())
        for i, coef in out.items():
            entry.add_term(elementary[(i, m)], sign * coef)
    return Bimorphism(bimodule.left, right_opposite, target, f, name=name, fill_unit=False)
