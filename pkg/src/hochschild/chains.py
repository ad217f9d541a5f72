import logging
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from src.ainfty.errors import AlgebraError
from src.ainfty.signs import l_value, parity_sign
from src.ainfty.structures import AInftyAlgebra
from src.linalg.scalars import SparseVector
from src.linalg.spaces import BasisElement, BigradedSpace, ComplexSlice, LinearMap

logger = logging.getLogger(__name__)

# Hochschild chains (a_0; a_1, ..., a_n) with a_1..a_n reduced.
#
# degree = |a_0| + sum(|a_i| - 1), weight = sum of weights. Degrees are
# cohomological: homological HH_n sits in degree -n.

ChainKey = Tuple[str, ...]


class HochschildChain(SparseVector):
    """Combination of chain tuples; tuples with a unit in a tail slot are never stored"""

    def __init__(self, data=(), unit: Optional[str] = None):
        super().__init__()
        if isinstance(data, dict):
            data = data.items()
        for key, coef in data:
            key = tuple(key)
            if unit is not None and unit in key[1:]:
                continue
            self.add_term(key, coef)


def chain_name(key: ChainKey) -> str:
    if len(key) == 1:
        return f"({key[0]})"
    return f"({key[0]}; {', '.join(key[1:])})"


def chain_degree(algebra: AInftyAlgebra, key: ChainKey) -> int:
    space = algebra.space
    return space.degree(key[0]) + sum(space.degree(a) - 1 for a in key[1:])


def chain_weight(algebra: AInftyAlgebra, key: ChainKey) -> int:
    return sum(algebra.space.weight(a) for a in key)


def _degrees(algebra: AInftyAlgebra, key: ChainKey) -> List[int]:
    return [algebra.space.degree(a) for a in key]


def hochschild_b(algebra: AInftyAlgebra, chain: Dict) -> HochschildChain:
    """Interior contractions plus contractions wrapping around a_0"""
    unit = algebra.unit
    limit = algebra.max_arity
    result = HochschildChain(unit=unit)
    for key, coef in chain.items():
        key = tuple(key)
        n = len(key) - 1
        degrees = _degrees(algebra, key)
        for i in range(n + 1):
            exponent = l_value(0, i - 1, degrees) + 1
            for j in range(i, min(n, i + limit - 1) + 1):
                out = algebra.apply(j - i + 1, key[i:j + 1])
                for x, c in out.items():
                    if i > 0 and x == unit:
                        continue
                    result.add_term(key[:i] + (x,) + key[j + 1:], parity_sign(exponent) * coef * c)
        for q in range(1, n + 1):
            exponent = l_value(0, q - 1, degrees) * l_value(q, n, degrees) + 1
            for p in range(q):
                arity = n + p + 2 - q
                if arity > limit:
                    continue
                out = algebra.apply(arity, key[q:] + key[:p + 1])
                for x, c in out.items():
                    result.add_term((x,) + key[p + 1:q], parity_sign(exponent) * coef * c)
    return result


def connes_B(algebra: AInftyAlgebra, chain: Dict) -> HochschildChain:
    """Insert the unit in front of every cyclic rotation"""
    unit = algebra.unit
    if unit is None:
        raise AlgebraError(f"Connes B needs a strictly unital algebra, {algebra.name} has no unit")
    result = HochschildChain(unit=unit)
    for key, coef in chain.items():
        key = tuple(key)
        n = len(key) - 1
        degrees = _degrees(algebra, key)
        for i in range(n + 1):
            rotated = key[i:] + key[:i]
            if unit in rotated:
                continue
            exponent = l_value(0, i - 1, degrees) * l_value(i, n, degrees) + 1
            result.add_term((unit,) + rotated, parity_sign(exponent) * coef)
    return result


def weighted_tuples(names: Sequence[str], weights: Dict[str, int], total: int) -> List[Tuple[str, ...]]:
    """All tuples of the given names whose weights add up to total (weights > 0)"""

    @lru_cache(maxsize=None)
    def build(remaining: int) -> Tuple[Tuple[str, ...], ...]:
        if remaining == 0:
            return ((),)
        found = []
        for a in names:
            w = weights[a]
            if w <= remaining:
                found.extend((a,) + rest for rest in build(remaining - w))
        return tuple(found)

    return list(build(total))


def slice_keys(algebra: AInftyAlgebra, weight: int) -> List[ChainKey]:
    """Every chain tuple of one weight, in deterministic order"""
    space = algebra.space
    reduced = [a for a in space.names if a != algebra.unit]
    weights = {a: space.weight(a) for a in space.names}
    bad = [a for a in reduced if weights[a] <= 0]
    if bad:
        raise AlgebraError(f"Reduced elements {bad} of {algebra.name} have nonpositive weight; slices would be infinite")
    keys = []
    for a0 in space.names:
        rest = weight - weights[a0]
        if rest < 0:
            continue
        keys.extend((a0,) + tail for tail in weighted_tuples(reduced, weights, rest))
    return sorted(keys, key=lambda k: (len(k), [space.index[a] for a in k]))


def hochschild_slice(algebra: AInftyAlgebra, weight: int,
                     degree_range: Optional[Tuple[int, int]] = None) -> Tuple[ComplexSlice, Dict[str, ChainKey]]:
    """Weight-w part of (C(A), b), optionally restricted to a degree window"""
    keys = slice_keys(algebra, weight)
    by_degree: Dict[int, List[ChainKey]] = {}
    for key in keys:
        p = chain_degree(algebra, key)
        if degree_range is None or degree_range[0] <= p <= degree_range[1]:
            by_degree.setdefault(p, []).append(key)
    spaces = {p: BigradedSpace(BasisElement(chain_name(k), p, weight) for k in ks) for p, ks in by_degree.items()}
    lookup = {chain_name(k): k for ks in by_degree.values() for k in ks}
    differentials = {}
    for p, ks in by_degree.items():
        target = spaces.get(p + 1)
        if target is None:
            continue
        columns = {}
        for key in ks:
            image = hochschild_b(algebra, {key: 1})
            columns[chain_name(key)] = SparseVector((chain_name(k), c) for k, c in image.items())
        differentials[p] = LinearMap(spaces[p], target, columns, (1, 0))
    logger.debug(f"Hochschild slice of {algebra.name} at weight {weight}: {len(lookup)} chains")
    return ComplexSlice(spaces, differentials), lookup


def named_chain(chain: Dict) -> SparseVector:
    return SparseVector((chain_name(tuple(k)), c) for k, c in chain.items())
