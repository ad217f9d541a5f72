import logging
from typing import Dict, Optional, Union

from src.ainfty.checker import check_structure, unit_violations
from src.ainfty.constructions import opposite
from src.ainfty.errors import ObstructionError
from src.ainfty.structures import AInftyAlgebra
from src.catalog.algebras import make_algebra
from src.certify.certificate import Certificate
from src.config.settings import settings
from src.ext_cohomology.cohomology_c import cohomology_of_C, compare_with_ext
from src.ext_cohomology.periodic import PERIODIC_MODELS, compare_periodic_with_bar, verify_obstruction_vanishing
from src.ext_cohomology.reports import BigradedCohomologyReport
from src.ext_cohomology.resolution import ext_algebra
from src.hochschild.chains import connes_B, hochschild_b, hochschild_slice, slice_keys
from src.linalg.homology import homology_of_slice
from src.obstruction.solver import assemble_obstruction, solve_to_arity

logger = logging.getLogger(__name__)

# Weight-3 cochain of degree -1 in End(k); nothing there is a coboundary
CORRUPTION_KEY = ('x', 'x', 'x')
CORRUPTION = {"z|y,y^2|z": 1, "z|y^2,y|z": -1}


def _add_report(certificate: Certificate, report: BigradedCohomologyReport, bound: Dict):
    for name, ok in report.verdicts.items():
        certificate.add(name, f"{report.label}: {name.replace('_', ' ')}", ok, bound=bound)
    certificate.notes.extend(report.notes)
    if report.dims:
        logger.debug(f"{report.label} dimensions by weight and degree:\n{report.to_frame().to_string()}")


def check_ainfty(algebra: Union[str, AInftyAlgebra], max_arity: Optional[int] = None) -> Certificate:
    """Relations, strict unit, opposite and a sign-flip mutation for one algebra"""
    max_arity = max_arity or settings.CHECK_ARITY
    if isinstance(algebra, str):
        algebra = make_algebra(algebra)
    certificate = Certificate('check-ainfty', {'algebra': algebra.name, 'max_arity': max_arity})
    bound = {'arity': max_arity}

    report = check_structure(algebra, max_arity)
    first = report.first_violation
    certificate.add('relations', f"{algebra.name} satisfies the A-infinity relations to arity {max_arity}",
                    report.passed, bound=bound, value=report.tuples_checked,
                    witness=first.describe() if first else None)

    op = opposite(algebra)
    op_report = check_structure(op.algebra, max_arity)
    certificate.add('opposite', "The opposite algebra satisfies the relations", op_report.passed,
                    bound=bound, value=op.normalization, witness=op.literal_unit_failure)

    if algebra.unit is not None and algebra.reduced_names:
        a = algebra.reduced_names[0]
        mutated = algebra.mutated(2, (algebra.unit, a), algebra.apply(2, (algebra.unit, a)).scaled(-1))
        detected = bool(unit_violations(mutated)) or not check_structure(mutated, min(max_arity, 3)).passed
        certificate.add('mutation_detected', f"Flipping the sign of mu2(1, {a}) is detected", detected)
    return certificate


def _mixed_complex_defects(algebra, weight: int) -> Dict[str, int]:
    counts = {'b2': 0, 'B2': 0, 'bB+Bb': 0}
    for key in slice_keys(algebra, weight):
        chain = {key: 1}
        if hochschild_b(algebra, hochschild_b(algebra, chain)):
            counts['b2'] += 1
        B = connes_B(algebra, chain)
        if connes_B(algebra, B):
            counts['B2'] += 1
        anti = hochschild_b(algebra, B)
        anti.iadd_coef(1, connes_B(algebra, hochschild_b(algebra, chain)))
        if anti:
            counts['bB+Bb'] += 1
    return counts


def hochschild(key: str, max_weight: Optional[int] = None) -> Certificate:
    """Mixed-complex identities and HH dimensions weight by weight"""
    max_weight = max_weight or settings.SECTION4_MAX_WEIGHT
    certificate = Certificate('hochschild', {'algebra': key, 'max_weight': max_weight})
    algebra = make_algebra(key)
    bound = {'weight': max_weight}
    defects = {'b2': 0, 'B2': 0, 'bB+Bb': 0}
    dims: Dict = {}
    for w in range(max_weight + 1):
        for name, count in _mixed_complex_defects(algebra, w).items():
            defects[name] += count
        slice_, _ = hochschild_slice(algebra, w)
        dims.update(homology_of_slice(slice_).nonzero())
    certificate.add('b_squared_zero', "b^2 = 0 on every basis chain", defects['b2'] == 0,
                    bound=bound, witness=defects['b2'] or None)
    certificate.add('B_squared_zero', "B^2 = 0 on every basis chain", defects['B2'] == 0,
                    bound=bound, witness=defects['B2'] or None)
    certificate.add('bB_anticommute', "bB + Bb = 0 on every basis chain", defects['bB+Bb'] == 0,
                    bound=bound, witness=defects['bB+Bb'] or None)
    rendered = {f"{d},{w}": n for (d, w), n in sorted(dims.items())}
    if key == 'lambda1':
        expected = {(0, 0): 1}
        expected.update({(d, w): 1 for w in range(1, max_weight + 1) for d in (0, 1)})
        certificate.add('lambda1_profile', "One class in degrees 0 and 1 at every positive weight",
                        dims == expected, bound=bound, value=rendered)
    if key == 'dual_numbers':
        degree_minus_one = {w: n for (d, w), n in dims.items() if d == -1}
        certificate.add('hh1_in_weight_one', "HH_1(k[eps]) is one-dimensional and sits in weight 1",
                        degree_minus_one == {1: 1}, bound=bound, value=rendered)
    if key in PERIODIC_MODELS or key.startswith('truncated_poly'):
        _add_report(certificate, compare_periodic_with_bar(key, max_weight), bound)
    certificate.notes.append(f"HH dimensions: {rendered}")
    return certificate


def ext(depth: Optional[int] = None, weight_bound: Optional[int] = None,
        periodic_depth: Optional[int] = None) -> Certificate:
    """Ext over k[y]/y^3, cohomology of C and the obstruction groups over k[x]/x^6"""
    depth = depth or settings.RESOLUTION_DEPTH
    weight_bound = weight_bound or settings.WEIGHT_BOUND
    periodic_depth = periodic_depth or settings.PERIODIC_DEPTH
    certificate = Certificate('ext', {'depth': depth, 'weight_bound': weight_bound,
                                      'periodic_depth': periodic_depth})
    ext_result = ext_algebra(depth)
    _add_report(certificate, ext_result.report, {'depth': depth})
    c_report = cohomology_of_C(weight_bound)
    _add_report(certificate, c_report, {'weight': weight_bound})
    dictionary = compare_with_ext(ext_result.report.dims, c_report.dims, min(weight_bound, 3 * (depth // 2)))
    certificate.add('ext_matches_C', "Ext and H(C) agree under a grading dictionary", dictionary is not None,
                    value=list(dictionary) if dictionary else None)
    _add_report(certificate, verify_obstruction_vanishing(periodic_depth), {'depth': periodic_depth})
    return certificate


def solve_morphism(arity: Optional[int] = None, weight_bound: Optional[int] = None,
                   length_bound: Optional[int] = None) -> Certificate:
    """Solve g to the given arity and confirm a corrupted system is rejected"""
    arity = arity or settings.SOLVER_ARITY
    weight_bound = weight_bound or settings.WEIGHT_BOUND
    length_bound = length_bound or settings.LENGTH_BOUND
    certificate = Certificate('solve-morphism', {'arity': arity, 'weight_bound': weight_bound,
                                                 'length_bound': length_bound})
    prefix, solver = solve_to_arity(arity, weight_bound, length_bound)
    report = prefix.check(arity)
    certificate.add('morphism_relations', f"g_1..g_{arity} satisfy the morphism relations", report.passed,
                    bound={'arity': arity, 'weight': solver['certified_weight']},
                    value=solver['hash'], witness={'steps': solver['steps'], 'corrections': solver['corrections'],
                                                   'gauge': solver['gauge']})
    certificate.add('weight_zero', "Every component preserves weight", _weight_zero(prefix))

    short, _ = solve_to_arity(2, weight_bound, length_bound)
    system = assemble_obstruction(short, 2, allow_correction=False).corrupted(CORRUPTION_KEY, CORRUPTION)
    witness = None
    try:
        system.solve()
    except ObstructionError as e:
        witness = e.witness
    certificate.add('corruption_rejected', "A non-exact perturbation of the arity-3 equations is rejected",
                    bool(witness), witness=witness)
    return certificate


def _weight_zero(prefix) -> bool:
    space = prefix.source.space
    target = prefix.target.algebra.space
    return all(target.weight(name) == sum(space.weight(a) for a in key)
               for table in prefix.components.values() for key, image in table.items() for name in image)
