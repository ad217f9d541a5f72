import logging
from typing import Dict, Optional, Sequence, Tuple

from src.ainfty.errors import AlgebraError, RelationError
from src.ainfty.structures import AInftyAlgebra, AInftyBimodule, AInftyModule
from src.linalg.scalars import SparseVector
from src.linalg.spaces import BigradedSpace

logger = logging.getLogger(__name__)

Pair = Tuple[str, str]


def _vec_map(table: Dict, vector: SparseVector) -> SparseVector:
    out = SparseVector()
    for name, coef in vector.items():
        if name in table:
            out.iadd_coef(coef, table[name])
    return out


def _bilinear(table: Dict[Pair, SparseVector], left: SparseVector, right: SparseVector) -> SparseVector:
    out = SparseVector()
    for a, ca in left.items():
        for b, cb in right.items():
            value = table.get((a, b))
            if value:
                out.iadd_coef(ca * cb, value)
    return out


def _check_square_zero(label: str, space: BigradedSpace, d: Dict[str, SparseVector]):
    for name in space.names:
        dd = _vec_map(d, d.get(name, SparseVector()))
        if dd:
            raise RelationError(f"{label}: d(d({name})) = {dict(dd)} != 0")


def from_dg(space: BigradedSpace, differential: Dict[str, Dict], product: Dict[Pair, Dict],
            unit: Optional[str] = None, name: str = 'A', check: bool = True,
            leibniz_on: Optional[Sequence[str]] = None) -> AInftyAlgebra:
    """A-infinity structure of a DG algebra: mu1 = -d, mu2(a, b) = (-1)^|a| ab"""
    d = {k: SparseVector(v) for k, v in differential.items() if SparseVector(v)}
    prod = {tuple(k): SparseVector(v) for k, v in product.items() if SparseVector(v)}
    if unit is not None:
        for a in space.names:
            prod.setdefault((unit, a), SparseVector({a: 1}))
            prod.setdefault((a, unit), SparseVector({a: 1}))
    if check:
        _check_square_zero(name, space, d)
        _check_leibniz(name, space, d, prod, leibniz_on)
    mu1 = {(a,): v.scaled(-1) for a, v in d.items()}
    mu2 = {k: v.scaled(-1 if space.degree(k[0]) % 2 else 1) for k, v in prod.items()}
    logger.debug(f"DG algebra {name}: {len(mu1)} differential and {len(mu2)} product entries")
    return AInftyAlgebra(space, {1: mu1, 2: mu2}, unit=unit, name=name)


def _check_leibniz(name: str, space: BigradedSpace, d: Dict[str, SparseVector], prod: Dict[Pair, SparseVector],
                   generators: Optional[Sequence[str]] = None):
    names = space.names
    wanted = set(generators) if generators is not None else None
    for a in names:
        da = d.get(a, SparseVector())
        for b in names:
            if wanted is not None and a not in wanted and b not in wanted:
                continue
            db = d.get(b, SparseVector())
            ab = prod.get((a, b), SparseVector())
            if not (ab or da or db):
                continue
            lhs = _vec_map(d, ab)
            rhs = _bilinear(prod, da, SparseVector({b: 1}))
            rhs.iadd_coef(-1 if space.degree(a) % 2 else 1, _bilinear(prod, SparseVector({a: 1}), db))
            if lhs != rhs:
                raise RelationError(f"{name}: Leibniz fails on ({a}, {b}): {dict(lhs)} != {dict(rhs)}")


def dg_data(algebra: AInftyAlgebra) -> Tuple[Dict[str, SparseVector], Dict[Pair, SparseVector]]:
    """Recover (d, product) from an algebra with no operations above arity 2"""
    if algebra.max_arity > 2:
        raise AlgebraError(f"{algebra.name} has operations of arity {algebra.max_arity}, not a DG algebra")
    space = algebra.space
    d = {key[0]: out.scaled(-1) for key, out in algebra.mu.get(1, {}).items()}
    prod = {key: out.scaled(-1 if space.degree(key[0]) % 2 else 1)
            for key, out in algebra.mu.get(2, {}).items()}
    return d, prod


def module_from_dg(algebra: AInftyAlgebra, space: BigradedSpace, differential: Dict[str, Dict],
                   action: Dict[Pair, Dict], name: str = 'M') -> AInftyModule:
    """Right DG module: mu1 = d, mu2(m, a) = (-1)^(|m|+1) ma"""
    d_alg, _ = dg_data(algebra)
    d = {k: SparseVector(v) for k, v in differential.items() if SparseVector(v)}
    act = {tuple(k): SparseVector(v) for k, v in action.items() if SparseVector(v)}
    if algebra.unit is not None:
        for m in space.names:
            act.setdefault((m, algebra.unit), SparseVector({m: 1}))
    _check_square_zero(name, space, d)
    for m in space.names:
        for a in algebra.space.names:
            lhs = _vec_map(d, act.get((m, a), SparseVector()))
            rhs = _bilinear(act, d.get(m, SparseVector()), SparseVector({a: 1}))
            rhs.iadd_coef(-1 if space.degree(m) % 2 else 1,
                          _bilinear(act, SparseVector({m: 1}), d_alg.get(a, SparseVector())))
            if lhs != rhs:
                raise RelationError(f"{name}: Leibniz fails on ({m}, {a})")
    mu1 = {(m,): v for m, v in d.items()}
    mu2 = {k: v.scaled(1 if space.degree(k[0]) % 2 else -1) for k, v in act.items()}
    return AInftyModule(algebra, space, {1: mu1, 2: mu2}, name=name)


def bimodule_from_dg(left: AInftyAlgebra, right: AInftyAlgebra, space: BigradedSpace,
                     differential: Dict[str, Dict], left_action: Dict[Pair, Dict],
                     right_action: Dict[Pair, Dict], name: str = 'M') -> AInftyBimodule:
    """DG bimodule: mu00 = d, mu10(a, m) = am, mu01(m, b) = (-1)^(|m|+1) mb"""
    d = {k: SparseVector(v) for k, v in differential.items() if SparseVector(v)}
    _check_square_zero(name, space, d)
    mu00 = {(m,): v for m, v in d.items()}
    mu10 = {tuple(k): SparseVector(v) for k, v in left_action.items()}
    mu01 = {tuple(k): SparseVector(v).scaled(1 if space.degree(k[0]) % 2 else -1)
            for k, v in right_action.items()}
    return AInftyBimodule(left, right, space, {(0, 0): mu00, (1, 0): mu10, (0, 1): mu01}, name=name)
