import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from src.ainfty.dg import from_dg, module_from_dg
from src.ainfty.errors import TruncationError
from src.ainfty.hom_complex import CochainKey, HomComplex, cochain_name
from src.ainfty.structures import AInftyAlgebra
from src.catalog.algebras import make_algebra
from src.linalg.homology import HomologyReport, homology_of_slice
from src.linalg.scalars import SparseVector
from src.linalg.spaces import BasisElement, BigradedSpace

logger = logging.getLogger(__name__)

GROUND = 'z'


@dataclass
class EndComplex:
    """End of k over k[y]/y^3 as a DG algebra, cut at weight_bound"""
    hom: HomComplex
    algebra: AInftyAlgebra
    weight_bound: int
    length_bound: int
    keys: Dict[str, CochainKey] = field(default_factory=dict)

    @property
    def identity(self) -> str:
        return cochain_name((GROUND, (), GROUND))

    @property
    def epsilon(self) -> str:
        """Degree-0 weight-1 cocycle dual to (z; y)"""
        return cochain_name((GROUND, ('y',), GROUND))

    def power(self, name: str, k: int) -> SparseVector:
        """k-fold DG product, the identity for k = 0"""
        out = SparseVector({self.identity: 1})
        for _ in range(k):
            out = self.product(out, SparseVector({name: 1}))
        return out

    def product(self, left: SparseVector, right: SparseVector) -> SparseVector:
        keys = self.keys
        phi = SparseVector((keys[n], c) for n, c in left.items())
        psi = SparseVector((keys[n], c) for n, c in right.items())
        composed = self.hom.compose(phi, psi)
        return SparseVector((cochain_name(k), c) for k, c in composed.items()
                            if self.hom.weight(k) <= self.weight_bound)

    def differential(self, vector: SparseVector) -> SparseVector:
        phi = SparseVector((self.keys[n], c) for n, c in vector.items())
        return SparseVector((cochain_name(k), c) for k, c in self.hom.differential(phi).items())

    def cohomology(self) -> HomologyReport:
        report = HomologyReport()
        for w in range(self.weight_bound + 1):
            slice_report = homology_of_slice(self.hom.slice(w))
            report.dims.update(slice_report.dims)
            report.representatives.update(slice_report.representatives)
            report.decomposers.update(slice_report.decomposers)
        return report

    def is_exact(self, vector: SparseVector, report: Optional[HomologyReport] = None) -> bool:
        if not vector:
            return True
        report = report or self.cohomology()
        name = next(iter(vector))
        key = (self.algebra.space.degree(name), self.algebra.space.weight(name))
        decomposer = report.decomposers.get(key)
        return decomposer is None or decomposer.is_boundary(vector)


def ground_module():
    """k as a right module over k[y]/y^3, y acting by zero"""
    space = BigradedSpace.from_triples([(GROUND, 0, 0)])
    return module_from_dg(make_algebra('y_cube'), space, {}, {}, name='k')


def end_complex_of_k(weight_bound: int, length_bound: int) -> EndComplex:
    """Truncated End(k); exact in every weight up to min(weight_bound, length_bound)"""
    if weight_bound < 1 or length_bound < 1:
        raise TruncationError("End complex needs positive bounds",
                              {'weight_bound': max(weight_bound, 1), 'length_bound': max(length_bound, 1)})
    # every reduced letter has weight >= 1, so arity <= weight and the cut below loses nothing
    bound = min(weight_bound, length_bound)
    k = ground_module()
    hom = HomComplex(k, k, max_weight=bound, max_arity=bound)
    keys: Dict[str, CochainKey] = {}
    elements: List[BasisElement] = []
    for w in range(bound + 1):
        for key in hom.basis(w):
            name = cochain_name(key)
            keys[name] = key
            elements.append(BasisElement(name, hom.degree(key), w))
    space = BigradedSpace(elements)
    differential = {}
    for name, key in keys.items():
        image = hom.differential(SparseVector({key: 1}))
        if image:
            differential[name] = {cochain_name(k): c for k, c in image.items()}
    product = {}
    by_weight: Dict[int, List[Tuple[str, CochainKey]]] = {}
    for name, key in keys.items():
        if key[1]:
            by_weight.setdefault(hom.weight(key), []).append((name, key))
    for w1, left in by_weight.items():
        for w2, right in by_weight.items():
            if w1 + w2 > bound:
                continue
            for n1, k1 in left:
                for n2, k2 in right:
                    composed = hom.compose(SparseVector({k1: 1}), SparseVector({k2: 1}))
                    product[(n1, n2)] = {cochain_name(k): c for k, c in composed.items()}
    letters = [n for n in (cochain_name((GROUND, (a,), GROUND)) for a in hom.reduced) if n in keys]
    algebra = from_dg(space, differential, product, unit=cochain_name((GROUND, (), GROUND)),
                      name=f"End(k)_{bound}", leibniz_on=letters)
    logger.info(f"Built End(k) to weight {bound}: {space.dim} cochains, {len(product)} products")
    return EndComplex(hom, algebra, bound, length_bound, keys)
