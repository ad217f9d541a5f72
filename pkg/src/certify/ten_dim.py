import logging
from typing import Dict, Optional, Tuple

from src.ainfty.checker import check_structure, unit_violations
from src.ainfty.constructions import bimodule_from_module_and_morphism, diagonal_bimodule, glue
from src.ainfty.errors import TruncationError
from src.ainfty.structures import AInftyAlgebra, copy_tables
from src.certify.certificate import Certificate
from src.catalog.algebras import power_name
from src.config.settings import settings
from src.hochschild.pairings import pairing_mu3, pairing_psi
from src.linalg.homology import supertrace
from src.linalg.scalars import SparseVector
from src.linalg.spaces import LinearMap
from src.obstruction.solver import MODULUS, MorphismPrefix, solve_to_arity

logger = logging.getLogger(__name__)

# The glued algebra (k[y]/y^3 0; V k[x]/x^6) with V = k. Inputs from
# k[x]/x^6 carry weight -w so that the weight-0 morphism g makes every
# bimodule operation weight-homogeneous.


def required_morphism_arity(max_arity: int) -> int:
    """Components g_n needed to know the glued algebra to arity max_arity"""
    return max(3, max_arity // 2)


def build_tenDim(prefix: MorphismPrefix, max_arity: Optional[int] = None) -> AInftyAlgebra:
    """Glue k[x]/x^6 and k[y]/y^3 along the bimodule induced by g"""
    max_arity = max_arity or settings.CERTIFY_ARITY
    needed = required_morphism_arity(max_arity)
    if prefix.arity < needed:
        raise TruncationError(f"Glued algebra to arity {max_arity} needs g up to arity {needed}",
                              {'arity': needed})
    if prefix.target.weight_bound < max_arity - 2:
        raise TruncationError(f"Glued algebra to arity {max_arity} needs End(k) to weight {max_arity - 2}",
                              {'weight_bound': max_arity - 2, 'length_bound': max_arity - 2})
    source = prefix.source
    left = AInftyAlgebra(source.space.reweighted(-1), copy_tables(source.mu), unit=source.unit,
                         name=f"k[x]/x^{MODULUS}", arity_bound=source.arity_bound, fill_unit=False)
    keys = prefix.target.keys
    components = {
        n: {a_key: SparseVector((keys[name], c) for name, c in image.items())
            for a_key, image in table.items()}
        for n, table in prefix.components.items()
    }
    module = prefix.target.hom.source
    bimodule = bimodule_from_module_and_morphism(module, left, components, name='V', required_arity=needed,
                                                 known_arity=prefix.arity)
    algebra = glue(bimodule, name='tenDim')
    logger.info(f"Built tenDim from g_1..g_{prefix.arity}: dim {algebra.space.dim}")
    return algebra


def mu3_trace(algebra: AInftyAlgebra, a: str = 'x', b: str = 'y'):
    """Supertrace of v -> mu3(a, v, b)"""
    space = algebra.space
    columns = {v: algebra.apply(3, (a, v, b)) for v in space.names}
    return supertrace(LinearMap(space, space, columns, (0, 0)))


def product_defects(algebra: AInftyAlgebra, modulus: int = MODULUS) -> Dict[str, Dict]:
    """mu2 restricted to the x-powers against truncated multiplication"""
    defects = {}
    for i in range(1, modulus):
        for j in range(1, modulus):
            expected = SparseVector({power_name('x', i + j): 1}) if i + j < modulus else SparseVector()
            got = algebra.apply(2, (power_name('x', i), power_name('x', j)))
            if got != expected:
                defects[f"{power_name('x', i)}*{power_name('x', j)}"] = dict(got)
    return defects


def certify_tenDim(max_arity: Optional[int] = None, weight_bound: Optional[int] = None,
                   length_bound: Optional[int] = None) -> Tuple[Certificate, AInftyAlgebra]:
    """Solve for g, glue, and certify the resulting algebra to max_arity"""
    max_arity = max_arity or settings.CERTIFY_ARITY
    weight_bound = weight_bound or settings.WEIGHT_BOUND
    length_bound = length_bound or settings.LENGTH_BOUND
    needed = required_morphism_arity(max_arity)
    certificate = Certificate('certify-10dim', {
        'max_arity': max_arity, 'weight_bound': weight_bound,
        'length_bound': length_bound, 'morphism_arity': needed,
    })
    try:
        prefix, solver = solve_to_arity(needed, weight_bound, length_bound, max_arity=max(needed, settings.SOLVER_ARITY))
        extends = prefix.check(needed)
        witness = {'corrections': solver['corrections']}
        if extends.first_violation:
            witness['violation'] = extends.first_violation.describe()
        certificate.add('morphism_extends', f"g_1..g_{needed} satisfy the morphism relations",
                        extends.passed, bound={'arity': needed, 'weight': solver['certified_weight']},
                        value=solver['hash'], witness=witness)
        algebra = build_tenDim(prefix, max_arity)
        bound = {'arity': max_arity}

        certificate.add('dimension', "The glued algebra has dimension 10", algebra.space.dim == 10,
                        value=algebra.space.dim)
        certificate.add('minimal', "mu_1 vanishes", algebra.is_minimal)

        report = check_structure(algebra, max_arity)
        first = report.first_violation
        certificate.add('ainfty_relations', f"A-infinity relations hold to arity {max_arity}", report.passed,
                        bound=bound, value=report.tuples_checked,
                        witness=first.describe() if first else None)

        units = unit_violations(algebra)
        certificate.add('strict_unit', f"'{algebra.unit}' is a strict unit", not units,
                        witness=units[0].describe() if units else None)

        defects = product_defects(algebra)
        certificate.add('restricts_to_truncated_poly', "mu_2 on x-powers is truncated multiplication",
                        not defects, witness=defects or None)

        trace = mu3_trace(algebra)
        certificate.add('mu3_supertrace', "str(v -> mu3(x, v, y)) = +-1", abs(trace) == 1,
                        value=trace, witness={'sign': 1 if trace > 0 else -1 if trace else 0})

        value = pairing_mu3(algebra, 'x', 'y')
        certificate.add('pairing_nonzero', "The mu3 pairing of x and y is nonzero", value != 0, value=value)

        psi = pairing_psi(diagonal_bimodule(algebra), {('x',): 1}, {('y',): 1}, max_arity=max_arity)
        certificate.add('pairing_agrees', "pairing_psi on the diagonal bimodule agrees with the mu3 pairing",
                        psi == value, value=psi, witness={'mu3_pairing': value})
    except TruncationError as e:
        logger.error(f"Truncation too small for tenDim: {str(e)}")
        raise
    except Exception as e:
        logger.error(f"Error certifying tenDim: {str(e)}")
        raise
    logger.info(f"tenDim certificate: {certificate.verdict}")
    return certificate, algebra
