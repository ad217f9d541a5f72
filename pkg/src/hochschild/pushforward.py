import logging
from itertools import combinations
from typing import Dict, List, Optional

from src.ainfty.dg import dg_data
from src.ainfty.errors import AlgebraError, TruncationError
from src.ainfty.signs import block_l, l_value, parity_sign
from src.ainfty.structures import AInftyAlgebra, Bimorphism
from src.catalog.algebras import tensor_name
from src.hochschild.chains import ChainKey, HochschildChain, chain_degree, hochschild_b, slice_keys
from src.linalg.scalars import SparseVector

logger = logging.getLogger(__name__)


def eilenberg_zilber(first: AInftyAlgebra, second: AInftyAlgebra, c1: Dict, c2: Dict) -> HochschildChain:
    """Shuffle map C(A) (x) C(B) -> C(A (x) B).

    Tails are shuffled with the Koszul sign of the shifted degrees; b_0 moving
    past a_1..a_p contributes |b_0| times their shifted degrees.
    """
    ua, ub = first.unit, second.unit
    if ua is None or ub is None:
        raise AlgebraError("Eilenberg-Zilber needs unital factors")
    A, B = first.space, second.space
    result = HochschildChain(unit=tensor_name(ua, ub))
    for key_a, ca in c1.items():
        for key_b, cb in c2.items():
            a0, a_tail = key_a[0], tuple(key_a[1:])
            b0, b_tail = key_b[0], tuple(key_b[1:])
            sa = [A.degree(x) + 1 for x in a_tail]
            sb = [B.degree(y) + 1 for y in b_tail]
            prefactor = B.degree(b0) * sum(sa)
            head = tensor_name(a0, b0)
            total = len(a_tail) + len(b_tail)
            for positions in combinations(range(total), len(a_tail)):
                merged: List[str] = [''] * total
                slots = set(positions)
                exponent = prefactor
                ai = bi = 0
                for t in range(total):
                    if t in slots:
                        merged[t] = tensor_name(a_tail[ai], ub)
                        # every b already placed sits before this a
                        exponent += sa[ai] * sum(sb[:bi])
                        ai += 1
                    else:
                        merged[t] = tensor_name(ua, b_tail[bi])
                        bi += 1
                result.add_term((head,) + tuple(merged), parity_sign(exponent) * ca * cb)
    return result


def dg_image_table(morphism: Bimorphism) -> Dict[str, SparseVector]:
    """F(a (x) b) = f10(a) f01(b) in the DG product of the target"""
    A, B, C = morphism.first, morphism.second, morphism.target
    _, product = dg_data(C)
    table = {}
    for a in A.space.names:
        fa = morphism.apply(1, 0, (a,))
        for b in B.space.names:
            fb = morphism.apply(0, 1, (b,))
            image = SparseVector()
            for x, cx in fa.items():
                for y, cy in fb.items():
                    image.iadd_coef(cx * cy, product.get((x, y), SparseVector()))
            if image:
                table[tensor_name(a, b)] = image
    return table


def induced_map(table: Dict[str, SparseVector], chain: Dict, unit: Optional[str]) -> HochschildChain:
    """Apply an algebra map entrywise to chains"""
    result = HochschildChain(unit=unit)
    for key, coef in chain.items():
        partial = [((), coef)]
        for x in key:
            image = table.get(x, SparseVector())
            partial = [(k + (y,), c * cy) for k, c in partial for y, cy in image.items()]
            if not partial:
                break
        for k, c in partial:
            result.add_term(k, c)
    return result


def _sequences(k: int, top: int):
    """Non-decreasing (k+1)-tuples in 0..top"""
    def grow(prefix):
        if len(prefix) == k + 1:
            yield tuple(prefix)
            return
        low = prefix[-1] if prefix else 0
        for v in range(low, top + 1):
            yield from grow(prefix + [v])
    return grow([])


def _general_pushforward(morphism: Bimorphism, key_a: ChainKey, key_b: ChainKey) -> HochschildChain:
    """Double-cyclic sum for one pair of basis chains.

    Block s applies f to a_{I(s)+1..I(s+1)} and b_{J(s-1)+1..J(s)}, where I and J
    extend the index sequences periodically: I(s + k + 1) = I(s) + n + 1 and
    J(s + k + 1) = J(s) + m + 1. Block k always holds a_0 and block 0 holds b_0.
    """
    A, B, C = morphism.first, morphism.second, morphism.target
    n, m = len(key_a) - 1, len(key_b) - 1
    da = [A.space.degree(x) for x in key_a]
    db = [B.space.degree(y) for y in key_b]
    result = HochschildChain(unit=C.unit)

    # interior blocks hold at least one tail element each
    for k in range(1, n + m + 2):
        for i in _sequences(k, n):
            for j in _sequences(k, m):

                def I(t):
                    return i[t % (k + 1)] + (n + 1) * (t // (k + 1))

                def J(t):
                    return j[t % (k + 1)] + (m + 1) * (t // (k + 1))

                blocks = [(tuple(key_a[t % (n + 1)] for t in range(I(s) + 1, I(s + 1) + 1)),
                           tuple(key_b[t % (m + 1)] for t in range(J(s - 1) + 1, J(s) + 1)))
                          for s in range(k + 1)]
                if any(not (ap or bp) for ap, bp in blocks[1:k]):
                    continue
                values = [morphism.apply(len(ap), len(bp), ap + bp) for ap, bp in blocks]
                if any(not v for v in values):
                    continue

                for q in range(1, k + 1):
                    exponent = (l_value(0, n, da)
                                + l_value(i[q] + 1, n, da) * l_value(0, i[q], da)
                                + l_value(j[q - 1] + 1, m, db) * l_value(0, j[q - 1], db) + 1)
                    for s in range(1, k + 1):
                        exponent += (block_l(I(q + s) + 1, I(q + s + 1), da)
                                     * block_l(J(q - 1) + 1, J(q + s - 1), db))
                    for p in range(q):
                        order = list(range(q, k + 1)) + list(range(p + 1))
                        arity = len(order)
                        if arity > C.max_arity:
                            continue
                        head = C.apply_linear(arity, [values[s] for s in order])
                        if not head:
                            continue
                        partial = [((x,), c) for x, c in head.items()]
                        for s in range(p + 1, q):
                            partial = [(kk + (y,), c * cy) for kk, c in partial for y, cy in values[s].items()]
                        for kk, c in partial:
                            result.add_term(kk, parity_sign(exponent) * c)
    return result


def double_cyclic_pushforward(morphism: Bimorphism, c1: Dict, c2: Dict) -> HochschildChain:
    """The general formula, valid for any bimorphism"""
    result = HochschildChain(unit=morphism.target.unit)
    for key_a, ca in c1.items():
        for key_b, cb in c2.items():
            result.iadd_coef(ca * cb, _general_pushforward(morphism, tuple(key_a), tuple(key_b)))
    return result


def pushforward_bimorphism(morphism: Bimorphism, c1: Dict, c2: Dict,
                           max_length: Optional[int] = None) -> HochschildChain:
    """Map C(A) (x) C(B) -> C(C) induced by a bimorphism.

    Strict bimorphisms between DG algebras go through the shuffle map and the
    induced algebra map, which the double-cyclic sum reduces to in that case.
    """
    lengths = [len(k) - 1 for k in c1] + [len(k) - 1 for k in c2]
    if max_length is not None and lengths and max(lengths) > max_length:
        raise TruncationError(f"Chain length {max(lengths)} exceeds the configured bound {max_length}",
                              {'length': max(lengths)})
    A, B, C = morphism.first, morphism.second, morphism.target
    if morphism.is_strict and max(A.max_arity, B.max_arity, C.max_arity) <= 2:
        table = dg_image_table(morphism)
        return induced_map(table, eilenberg_zilber(A, B, c1, c2), C.unit)
    return double_cyclic_pushforward(morphism, c1, c2)


def canonical_bimorphism(first: AInftyAlgebra, second: AInftyAlgebra, target: AInftyAlgebra) -> Bimorphism:
    """f10(a) = a (x) 1, f01(b) = 1 (x) b into the tensor product"""
    f10 = {(a,): {tensor_name(a, second.unit): 1} for a in first.space.names}
    f01 = {(b,): {tensor_name(first.unit, b): 1} for b in second.space.names}
    return Bimorphism(first, second, target, {(1, 0): f10, (0, 1): f01}, name='inclusion')


def chain_map_defects(morphism: Bimorphism, max_weight: int) -> List[str]:
    """b f(x (x) y) = f(bx (x) y) + (-1)^|x| f(x (x) by) on basis chains of weight <= max_weight"""
    A, B, C = morphism.first, morphism.second, morphism.target
    defects = []
    for w1 in range(max_weight + 1):
        for w2 in range(max_weight + 1 - w1):
            for ka in slice_keys(A, w1):
                for kb in slice_keys(B, w2):
                    x, y = {ka: 1}, {kb: 1}
                    lhs = hochschild_b(C, pushforward_bimorphism(morphism, x, y))
                    rhs = pushforward_bimorphism(morphism, hochschild_b(A, x), y)
                    rhs.iadd_coef(parity_sign(chain_degree(A, ka)),
                                  pushforward_bimorphism(morphism, x, hochschild_b(B, y)))
                    if lhs != rhs:
                        defects.append(f"{ka} (x) {kb}: {dict(lhs - rhs)}")
    logger.info(f"Chain-map audit of {morphism.name} to weight {max_weight}: {len(defects)} defects")
    return defects
