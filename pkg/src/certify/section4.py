import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from src.ainfty.errors import RelationError, TruncationError
from src.ainfty.signs import parity_sign
from src.ainfty.structures import AInftyAlgebra, Bimorphism
from src.catalog.algebras import make_algebra
from src.certify.certificate import Certificate
from src.config.settings import settings
from src.hochschild.chains import (ChainKey, HochschildChain, chain_degree, chain_weight, chain_name,
                                   connes_B, hochschild_b, hochschild_slice, named_chain)
from src.hochschild.pushforward import canonical_bimorphism, chain_map_defects, pushforward_bimorphism
from src.linalg.homology import HomologyReport, homology_of_slice
from src.linalg.scalars import SparseVector
from src.linalg.solver import rank_of, solve_linear_system

logger = logging.getLogger(__name__)

Bidegree = Tuple[int, int]
# (bidegree in the first factor, class index, bidegree in the second factor, class index)
ClassPair = Tuple[Bidegree, int, Bidegree, int]

# Chains of k[eps] entering the cycle
UNIT_CHAIN = {('1',): 1}
EPS_CHAIN = {('eps',): 1}
UNIT_EPS_CHAIN = {('1', 'eps'): 1}


@dataclass
class SliceHomology:
    """Hochschild homology of one algebra, weight by weight up to max_weight"""
    algebra: AInftyAlgebra
    max_weight: int
    report: HomologyReport
    lookup: Dict[str, ChainKey]

    def dims(self) -> Dict[Bidegree, int]:
        return self.report.nonzero()

    def representatives(self, degree: int, weight: int) -> List[HochschildChain]:
        return [HochschildChain(((self.lookup[n], c) for n, c in rep.items()), unit=self.algebra.unit)
                for rep in self.report.representatives.get((degree, weight), [])]

    def coordinates(self, chain: Dict, bidegree: Bidegree) -> List:
        """Class coordinates of a cycle known to sit in the given bidegree"""
        dim = self.report.dim(*bidegree)
        if not chain:
            return [0] * dim
        for key in chain:
            if (chain_degree(self.algebra, key), chain_weight(self.algebra, key)) != bidegree:
                raise RelationError(f"Chain {chain_name(key)} is not in bidegree {bidegree}")
        coords = self.report.coordinates(*bidegree, named_chain(chain))
        if coords is None:
            raise RelationError(f"Chain in bidegree {bidegree} of {self.algebra.name} is not a cycle")
        return coords


def slice_homology(algebra: AInftyAlgebra, max_weight: int) -> SliceHomology:
    report = HomologyReport()
    lookup: Dict[str, ChainKey] = {}
    for w in range(max_weight + 1):
        slice_, names = hochschild_slice(algebra, w)
        part = homology_of_slice(slice_)
        report.dims.update(part.dims)
        report.representatives.update(part.representatives)
        report.decomposers.update(part.decomposers)
        lookup.update(names)
    logger.info(f"HH of {algebra.name} to weight {max_weight}: {report.nonzero()}")
    return SliceHomology(algebra, max_weight, report, lookup)


@dataclass
class KunnethBasis:
    """Shuffle images of class pairs in one bidegree of the product"""
    bidegree: Bidegree
    pairs: List[ClassPair] = field(default_factory=list)
    images: List[List] = field(default_factory=list)

    @property
    def rank(self) -> int:
        rows = [SparseVector((i, c) for i, c in enumerate(image)) for image in self.images]
        return rank_of(rows)

    def decompose(self, coords: List) -> Dict[ClassPair, object]:
        """Write product-class coordinates in the pair basis"""
        rows = [SparseVector((j, image[r]) for j, image in enumerate(self.images)) for r in range(len(coords))]
        result = solve_linear_system(rows, list(coords), len(self.pairs))
        if not result.consistent:
            raise RelationError(f"Class in bidegree {self.bidegree} is outside the Kunneth span")
        return {self.pairs[j]: c for j, c in result.solution.items() if c}


@dataclass
class KunnethData:
    first: SliceHomology
    second: SliceHomology
    product: SliceHomology
    morphism: Bimorphism

    def push(self, c1: Dict, c2: Dict) -> HochschildChain:
        return pushforward_bimorphism(self.morphism, c1, c2)

    def basis(self, degree: int, weight: int) -> KunnethBasis:
        basis = KunnethBasis((degree, weight))
        for (d1, w1), n1 in self.first.dims().items():
            d2, w2 = degree - d1, weight - w1
            n2 = self.second.report.dim(d2, w2)
            if not n2:
                continue
            reps1 = self.first.representatives(d1, w1)
            reps2 = self.second.representatives(d2, w2)
            for i in range(n1):
                for j in range(n2):
                    image = self.push(reps1[i], reps2[j])
                    basis.pairs.append(((d1, w1), i, (d2, w2), j))
                    basis.images.append(self.product.coordinates(image, (degree, weight)))
        return basis

    def dimension_mismatches(self) -> Dict[str, Dict[str, int]]:
        expected: Dict[Bidegree, int] = {}
        for (d1, w1), n1 in self.first.dims().items():
            for (d2, w2), n2 in self.second.dims().items():
                if w1 + w2 <= self.product.max_weight:
                    key = (d1 + d2, w1 + w2)
                    expected[key] = expected.get(key, 0) + n1 * n2
        actual = self.product.dims()
        return {str(k): {'expected': expected.get(k, 0), 'actual': actual.get(k, 0)}
                for k in sorted(set(expected) | set(actual)) if expected.get(k, 0) != actual.get(k, 0)}


def kunneth_data(max_weight: int) -> KunnethData:
    first = make_algebra('lambda1')
    second = make_algebra('dual_numbers')
    product = make_algebra('tensor(lambda1,dual_numbers)')
    return KunnethData(slice_homology(first, max_weight), slice_homology(second, max_weight),
                       slice_homology(product, max_weight), canonical_bimorphism(first, second, product))


@dataclass
class CycleComponent:
    label: str
    sign: int
    first: HochschildChain
    second: Dict
    image: HochschildChain


@dataclass
class Section4Cycle:
    components: List[CycleComponent]
    total: HochschildChain

    def to_dict(self) -> Dict:
        return {
            c.label: {chain_name(k): v for k, v in sorted(c.image.items())}
            for c in self.components
        }


def _single_class(data: SliceHomology, degree: int, weight: int) -> HochschildChain:
    reps = data.representatives(degree, weight)
    if len(reps) != 1:
        raise RelationError(f"HH of {data.algebra.name} at ({degree},{weight}) has dimension {len(reps)}, expected 1")
    return reps[0]


def section4_cycle(data: Optional[KunnethData] = None) -> Section4Cycle:
    """EZ(r1 (x) (1)) - EZ(r2 (x) (eps)) + EZ(r3 (x) (1; eps)) in degree 0"""
    data = data or kunneth_data(3)
    r1 = _single_class(data.first, 0, 1)
    r2 = _single_class(data.first, 0, 2)
    r3 = _single_class(data.first, 1, 1)
    components = []
    total = HochschildChain(unit=data.product.algebra.unit)
    for label, sign, r, s in (('dx/x (x) 1', 1, r1, UNIT_CHAIN),
                              ('dx/x^2 (x) eps', -1, r2, EPS_CHAIN),
                              ('1/x (x) d eps', 1, r3, UNIT_EPS_CHAIN)):
        image = data.push(r, s)
        components.append(CycleComponent(label, sign, r, s, image))
        total.iadd_coef(sign, image)
    return Section4Cycle(components, total)


def _bidegree_of(algebra: AInftyAlgebra, chain: Dict) -> Bidegree:
    key = next(iter(chain))
    return chain_degree(algebra, key), chain_weight(algebra, key)


def apply_id_tensor_B(data: KunnethData, component: CycleComponent) -> HochschildChain:
    """Decompose into class pairs, apply Connes B to the second factor, push back"""
    product = data.product
    result = HochschildChain(unit=product.algebra.unit)
    if not component.image:
        return result
    bidegree = _bidegree_of(product.algebra, component.image)
    basis = data.basis(*bidegree)
    coords = product.coordinates(component.image, bidegree)
    for ((d1, w1), i, (d2, w2), j), coef in basis.decompose(coords).items():
        r = data.first.representatives(d1, w1)[i]
        s = data.second.representatives(d2, w2)[j]
        # B has odd degree and passes the first factor
        result.iadd_coef(component.sign * coef * parity_sign(d1), data.push(r, connes_B(data.second.algebra, s)))
    return result


def verify_section4(max_weight: Optional[int] = None) -> Certificate:
    """Kunneth for lambda1 (x) k[eps], the weight-(1,3,2) cycle and its image under id (x) B"""
    max_weight = max_weight or settings.SECTION4_MAX_WEIGHT
    if max_weight < 3:
        raise TruncationError(f"The cycle reaches weight 3; max_weight {max_weight} is too small", {'weight': 3})
    certificate = Certificate('verify-section4', {'max_weight': max_weight})
    try:
        data = kunneth_data(max_weight)
        product = data.product

        mismatches = data.dimension_mismatches()
        certificate.add('kunneth_dimensions', "dim HH(T) is the convolution of the factor dimensions",
                        not mismatches, bound={'weight': max_weight},
                        value={str(k): v for k, v in product.dims().items()}, witness=mismatches or None)

        deficient = {}
        for (d, w), dim in product.dims().items():
            basis = data.basis(d, w)
            if basis.rank != dim or len(basis.pairs) != dim:
                deficient[str((d, w))] = {'dim': dim, 'pairs': len(basis.pairs), 'rank': basis.rank}
        certificate.add('shuffle_images_basis', "Shuffle images of class pairs form a basis of HH(T)",
                        not deficient, bound={'weight': max_weight}, witness=deficient or None)

        audit_weight = min(max_weight, 2)
        defects = chain_map_defects(data.morphism, audit_weight)
        certificate.add('shuffle_chain_map', "The shuffle pushforward commutes with b", not defects,
                        bound={'weight': audit_weight}, witness=defects[:3] or None)

        cycle = section4_cycle(data)
        classes = {}
        for component in cycle.components:
            if hochschild_b(product.algebra, component.image):
                classes[component.label] = None
                continue
            bidegree = _bidegree_of(product.algebra, component.image) if component.image else None
            classes[component.label] = product.coordinates(component.image, bidegree) if bidegree else []
        nonzero = all(coords and any(coords) for coords in classes.values())
        certificate.add('components_nonzero', "Each component of the cycle is a nonzero class", nonzero,
                        value={k: ({'bidegree': str(_bidegree_of(product.algebra, c.image)), 'coordinates': v}
                                   if c.image else None)
                               for (k, v), c in zip(classes.items(), cycle.components)})
        weights = [_bidegree_of(product.algebra, c.image)[1] for c in cycle.components if c.image]
        certificate.add('component_weights', "Components sit in weights 1, 3, 2", weights == [1, 3, 2],
                        value=weights)
        certificate.add('cycle_closed', "b(c) = 0", not hochschild_b(product.algebra, cycle.total))

        images = {c.label: apply_id_tensor_B(data, c) for c in cycle.components}
        vanishing = [label for label, image in images.items() if not image]
        certificate.add('id_B_vanishing', "id (x) B kills the weight-1 and weight-2 components",
                        vanishing == [cycle.components[0].label, cycle.components[2].label], value=vanishing)

        total = HochschildChain(unit=product.algebra.unit)
        for image in images.values():
            total.iadd_coef(1, image)
        coords = product.coordinates(total, (-1, 3)) if total else []
        certificate.add('id_B_nonzero', "(id (x) B)(c) is a nonzero class at weight 3",
                        bool(coords) and any(coords), bound={'weight': 3}, value=coords)

        pairs = data.basis(-1, 3).decompose(coords) if coords else {}
        expected_pair = ((0, 2), 0, (-1, 1), 0)
        certificate.add('id_B_kunneth_factor', "The image lies in HH_0(lambda1) (x) HH_1(k[eps]) at weight 3",
                        list(pairs) == [expected_pair],
                        value={f"{p[0]}x{p[2]}": c for p, c in pairs.items()})
    except Exception as e:
        logger.error(f"Error verifying the product cycle: {str(e)}")
        raise
    logger.info(f"Product-cycle certificate: {certificate.verdict}")
    return certificate
