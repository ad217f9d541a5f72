import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from src.ainfty.dg import module_from_dg
from src.ainfty.errors import RelationError
from src.ainfty.structures import AInftyModule
from src.catalog.algebras import make_algebra, power_name
from src.ext_cohomology.reports import BigradedCohomologyReport
from src.linalg.homology import homology_of_slice
from src.linalg.scalars import SparseVector
from src.linalg.spaces import BasisElement, BigradedSpace, ComplexSlice, LinearMap

logger = logging.getLogger(__name__)

# Semifree resolution of k over k[y]/y^3 and its Ext algebra.
#
# P has generators e_n (n <= N) with |e_n| = floor(n/2) and weight 3k for
# e_2k, 3k + 1 for e_2k+1; d(e_2k+1) = e_2k y and d(e_2k+2) = e_2k+1 y^2.


def generator_weight(n: int) -> int:
    return 3 * (n // 2) + n % 2


def element_name(n: int, j: int) -> str:
    return f"e{n}" if j == 0 else f"e{n}{power_name('y', j)}"


@dataclass
class ResolutionP:
    truncation: int
    space: BigradedSpace
    differential: LinearMap
    augmentation: str = 'e0'

    def element(self, n: int, j: int = 0) -> str:
        return element_name(n, j)

    def slice(self) -> ComplexSlice:
        by_degree: Dict[int, List[str]] = {}
        for b in self.space:
            by_degree.setdefault(b.degree, []).append(b.name)
        spaces = {p: self.space.permuted(names) for p, names in by_degree.items()}
        maps = {}
        for p, names in by_degree.items():
            target = spaces.get(p + 1, BigradedSpace([]))
            cols = {n: self.differential.columns[n] for n in names if n in self.differential.columns}
            maps[p] = LinearMap(spaces[p], target, cols, (1, 0))
        return ComplexSlice(spaces, maps)

    def as_module(self) -> AInftyModule:
        """P as a right DG module over k[y]/y^3"""
        algebra = make_algebra('y_cube')
        action = {}
        for b in self.space:
            n, j = _parse(b.name)
            for i in range(1, 3):
                if i + j < 3:
                    action[(b.name, power_name('y', i))] = {element_name(n, i + j): 1}
        d = {col: vec for col, vec in self.differential.columns.items()}
        return module_from_dg(algebra, self.space, d, action, name=f"P_{self.truncation}")


def _parse(name: str) -> Tuple[int, int]:
    body = name[1:]
    if 'y' not in body:
        return int(body), 0
    n, power = body.split('y', 1)
    return int(n), (1 if power == '' else int(power[1:]))


def build_resolution_P(N: int) -> ResolutionP:
    if N < 2:
        raise ValueError(f"Resolution truncation must be at least 2, got {N}")
    elements = [BasisElement(element_name(n, j), n // 2 + j, generator_weight(n) + j)
                for n in range(N + 1) for j in range(3)]
    space = BigradedSpace(elements)
    columns = {}
    for n in range(1, N + 1):
        step = 1 if n % 2 else 2
        for j in range(3):
            if j + step < 3:
                columns[element_name(n, j)] = SparseVector({element_name(n - 1, j + step): 1})
    d = LinearMap(space, space, columns, (1, 0))
    if not d.compose(d).is_zero():
        raise RelationError("d^2 != 0 on the resolution")
    logger.info(f"Built resolution P to e{N}: {space.dim} basis elements")
    return ResolutionP(N, space, d)


def resolution_report(P: ResolutionP) -> BigradedCohomologyReport:
    """Homology of P is k in bidegree (0,0) below the truncation weight"""
    homology = homology_of_slice(P.slice())
    exact_below = generator_weight(P.truncation + 1)
    report = BigradedCohomologyReport(f"H(P_{P.truncation})")
    report.dims = {k: v for k, v in homology.dims.items() if k[1] < exact_below}
    stray = {k: v for k, v in report.dims.items() if v and k != (0, 0)}
    report.verdicts['augmentation_class'] = report.dim(0, 0) == 1
    report.verdicts['acyclic_below_truncation'] = not stray
    report.notes.append(f"checked weights < {exact_below}")
    return report


def lift(P: ResolutionP, n: int) -> LinearMap:
    """Chosen lift of v_n to an endomorphism of P"""
    N = P.truncation
    k = n // 2
    columns = {}
    for m in range(N + 1):
        if n % 2 == 0:
            if m < n:
                continue
            image = (element_name(m - n, 0), -1 if (m * k) % 2 else 1)
        else:
            if m % 2 == 1 and m >= n:
                image = (element_name(m - n, 0), 1)
            elif m % 2 == 0 and m >= n + 1:
                image = (element_name(m - n, 1), -1 if k % 2 else 1)
            else:
                continue
        base, sign = image
        target_n, target_j = _parse(base)
        for j in range(3):
            if target_j + j < 3:
                columns[element_name(m, j)] = SparseVector({element_name(target_n, target_j + j): sign})
    return LinearMap(P.space, P.space, columns, (-k, -generator_weight(n)))


def _supercommutator_with_d(P: ResolutionP, phi: LinearMap) -> LinearMap:
    d = P.differential
    left = d.compose(phi)
    right = phi.compose(d)
    sign = -1 if phi.bidegree[0] % 2 else 1
    columns = {}
    for col in set(left.columns) | set(right.columns):
        vec = left.columns.get(col, SparseVector()) - right.columns.get(col, SparseVector()).scaled(sign)
        if vec:
            columns[col] = vec
    return LinearMap(P.space, P.space, columns, left.bidegree)


def _sum(maps: List[Tuple[int, LinearMap]]) -> Dict[str, SparseVector]:
    total: Dict[str, SparseVector] = {}
    for coef, f in maps:
        for col, vec in f.columns.items():
            total.setdefault(col, SparseVector()).iadd_coef(coef, vec)
    return {c: v for c, v in total.items() if v}


@dataclass
class ExtAlgebra:
    report: BigradedCohomologyReport
    lifts: Dict[int, LinearMap] = field(default_factory=dict)
    resolution: Optional[ResolutionP] = None

    def product_coordinates(self, a: int, b: int) -> Dict[int, int]:
        """v_a v_b = sum c_n v_n, read off through the augmentation"""
        composite = self.lifts[a].compose(self.lifts[b])
        coords = {}
        for n in range(self.resolution.truncation + 1):
            c = composite.columns.get(element_name(n, 0), SparseVector())['e0']
            if c:
                coords[n] = c
        return coords


def ext_algebra(N: int) -> ExtAlgebra:
    """Ext over k[y]/y^3 from Hom(P, k), with verified lifts"""
    P = build_resolution_P(N)
    report = BigradedCohomologyReport(f"Ext_{N}")
    # Hom(P, k) has zero differential when d(P) lies in P y
    bare = {element_name(n, 0) for n in range(N + 1)}
    hits_generator = any(bare & set(vec) for vec in P.differential.columns.values())
    report.verdicts['dual_complex_has_zero_differential'] = not hits_generator
    for n in range(N + 1):
        key = (n // 2, generator_weight(n))
        report.dims[key] = report.dims.get(key, 0) + 1

    lifts = {n: lift(P, n) for n in range(N + 1)}
    failures = [n for n, phi in lifts.items() if not _supercommutator_with_d(P, phi).is_zero()]
    report.verdicts['lifts_supercommute_with_d'] = not failures
    anti = _sum([(1, lifts[1].compose(lifts[2])), (1, lifts[2].compose(lifts[1]))])
    report.verdicts['v1v2_plus_v2v1_zero'] = not anti
    power_ok = True
    for k in range(N // 2 + 1):
        if 2 * k + 1 > N:
            break
        composite = lifts[1]
        for _ in range(k):
            composite = composite.compose(lifts[2])
        diff = _sum([(1, composite), (-(-1) ** k, lifts[2 * k + 1])])
        power_ok = power_ok and not diff
    report.verdicts['v1_v2k_equals_signed_v2k1'] = power_ok
    ext = ExtAlgebra(report, lifts, P)
    degree_zero = sorted(n for n in range(N + 1) if n // 2 == 0)
    report.notes.append(f"Ext^0 basis: {['v%d' % n for n in degree_zero]}")
    report.verdicts['ext0_is_dual_numbers'] = degree_zero == [0, 1] and not ext.product_coordinates(1, 1)
    if not report.passed:
        logger.error(f"Ext identities failed: {report.failed()}")
        raise RelationError(f"Ext algebra identities failed: {report.failed()}")
    logger.info(f"Ext algebra to v{N} verified")
    return ext
