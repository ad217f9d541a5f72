import logging
from fractions import Fraction
from typing import Dict, Optional

from src.ainfty.errors import AlgebraError, TruncationError
from src.ainfty.signs import l_value, parity_sign, reversal_sign
from src.ainfty.structures import AInftyAlgebra, AInftyBimodule
from src.linalg.scalars import SparseVector
from src.linalg.spaces import BigradedSpace

logger = logging.getLogger(__name__)

PairingValue = Fraction


def trace_functional(chain: Dict, end: AInftyAlgebra) -> Fraction:
    """Supertrace of a_0 on length-0 terms over End(V) with |a_0| = 0; zero otherwise"""
    total = Fraction(0)
    for key, coef in chain.items():
        if len(key) != 1:
            continue
        element = end.space.element(key[0])
        if element.entry is None:
            raise AlgebraError(f"{key[0]} is not an elementary map of {end.name}")
        target, source = element.entry
        if target == source:
            total += parity_sign(end.module_space.degree(source)) * coef
    return total


def _supertrace_of(images: Dict[str, SparseVector], space: BigradedSpace) -> Fraction:
    return sum((parity_sign(space.degree(v)) * images.get(v, SparseVector())[v] for v in space.names), Fraction(0))


def pairing_psi(bimodule: AInftyBimodule, c1: Dict, c2: Dict, max_arity: Optional[int] = None) -> PairingValue:
    """Supertrace of the double cyclic sum of mu_{n+1,m+1} over both chains.

    With max_arity set, chains needing operations of total arity above it are
    refused instead of read as zero.
    """
    A, B, M = bimodule.left.space, bimodule.right.space, bimodule.space
    total = Fraction(0)
    for key_a, ca in c1.items():
        for key_b, cb in c2.items():
            n, m = len(key_a) - 1, len(key_b) - 1
            if max_arity is not None and n + m + 3 > max_arity:
                raise TruncationError(f"Chains of lengths {n}, {m} need mu_{{{n + 1},{m + 1}}} beyond arity {max_arity}",
                                      {'arity': n + m + 3})
            if (n + 1, m + 1) not in bimodule.mu:
                continue
            da = [A.degree(x) for x in key_a]
            db = [B.degree(y) for y in key_b]
            l_b = l_value(0, m, db)
            images: Dict[str, SparseVector] = {}
            for v in M.names:
                image = SparseVector()
                for i in range(n + 1):
                    a_rot = tuple(key_a[i:]) + tuple(key_a[:i])
                    a_sign = l_value(0, n, da) + l_value(0, i - 1, da) * l_value(i, n, da)
                    for j in range(m + 1):
                        b_seq = tuple(reversed(key_b[:j + 1])) + tuple(reversed(key_b[j + 1:]))
                        sigma = a_sign + reversal_sign(db[:j + 1]) + reversal_sign(db[j + 1:])
                        out = bimodule.apply(n + 1, m + 1, a_rot + (v,) + b_seq)
                        image.iadd_coef(parity_sign(sigma), out)
                images[v] = image.scaled(parity_sign(l_b * M.degree(v)))
            total += ca * cb * _supertrace_of(images, M)
    return total


def pairing_mu3(algebra: AInftyAlgebra, a: str, b: str) -> PairingValue:
    """(-1)^(|a|+1) str(v -> (-1)^((|b|+1)|v|) mu3(a, v, b)) for closed a, b with |a| + |b| = 1"""
    space = algebra.space
    if space.degree(a) + space.degree(b) != 1:
        raise AlgebraError(f"pairing_mu3 needs |a| + |b| = 1, got {space.degree(a)} + {space.degree(b)}")
    for x in (a, b):
        if algebra.apply(1, (x,)):
            raise AlgebraError(f"pairing_mu3 needs closed inputs, mu1({x}) != 0")
    images = {}
    for v in space.names:
        sign = parity_sign((space.degree(b) + 1) * space.degree(v))
        images[v] = algebra.apply(3, (a, v, b)).scaled(sign)
    value = parity_sign(space.degree(a) + 1) * _supertrace_of(images, space)
    logger.debug(f"pairing_mu3({a}, {b}) over {algebra.name} = {value}")
    return value
