import pytest
import sys
import os

sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))
from src.ainfty.checker import check_structure, unit_violations
from src.ainfty.constructions import (bimodule_from_bimorphism, bimorphism_from_bimodule, diagonal_bimodule,
                                      end_algebra, glue, opposite)
from src.ainfty.dg import bimodule_from_dg, module_from_dg
from src.ainfty.hom_complex import HomComplex
from src.ainfty.signs import block_l, l_value, parity_sign, reversal_sign, sign_l
from src.ainfty.structures import Bimorphism
from src.catalog.algebras import CatalogKey, make_algebra, monomials, word_name
from src.ext_cohomology.resolution import build_resolution_P
from src.linalg.scalars import SparseVector
from src.linalg.spaces import BigradedSpace
from src.orchestration.pipelines import check_ainfty

CATALOG = ['lambda1', 'dual_numbers', 'y_cube', 'truncated_poly(6)', 'tensor(lambda1,dual_numbers)', 'free_C(4)']


@pytest.fixture(scope='module')
def truncated():
    return make_algebra('truncated_poly(6)')


def test_l_value_branches():
    """Linear, empty and cyclic branches of l_p^q"""
    degrees = [0, 1, 2]
    assert l_value(0, 1, degrees) == 0 + 1 + 2
    assert l_value(1, 0, degrees) == 1 + 2 + 0 + 2 - 1 + 0
    assert l_value(2, 0, degrees) == 2 + 0 + 2 - 2 + 0
    assert l_value(1, 0, [1, 0]) == 0 + 1 + 1 - 1 + 0
    assert l_value(0, -1, degrees) == 0
    assert l_value(3, 2, degrees) == 0
    assert l_value(1, 0, [5], start=1) == 0
    assert parity_sign(3) == -1


def test_reversal_sign():
    """Two shifted-odd elements swap with a sign"""
    assert reversal_sign([0, 0]) == 1
    assert reversal_sign([1, 1]) == 0


def test_catalog_key_parsing():
    """Catalog strings parse into validated keys"""
    key = CatalogKey.parse('tensor(lambda1,dual_numbers)')
    assert [f.name for f in key.factors] == ['lambda1', 'dual_numbers']
    assert CatalogKey.parse('truncated_poly(6)').n == 6
    assert str(CatalogKey.parse('free_C(4)')) == 'free_C(4)'


@pytest.mark.parametrize("text", ['bogus', 'truncated_poly(1)', 'tensor(lambda1)', 'lambda1(3)'])
def test_catalog_key_rejects(text):
    """Unknown names and bad parameters are rejected"""
    with pytest.raises(ValueError):
        CatalogKey.parse(text)


def test_monomials_of_C():
    """Words in t1 (weight 1) and t2 (weight 2) up to weight 3"""
    words = [word_name(w) for w in monomials(3)]
    assert words == ['1', 't1', 't1t1', 't2', 't1t1t1', 't1t2', 't2t1']


@pytest.mark.parametrize("key", CATALOG)
def test_catalog_algebras_satisfy_relations(key):
    """Every catalog algebra is a strictly unital A-infinity algebra"""
    algebra = make_algebra(key)
    report = check_structure(algebra, 5)
    assert report.passed, report.first_violation.describe() if report.first_violation else ''
    assert unit_violations(algebra) == []


def test_truncated_poly_dimensions(truncated):
    """k[x]/x^6 has basis 1, x, ..., x^5 in degree 0"""
    assert truncated.space.names == ['1', 'x', 'x^2', 'x^3', 'x^4', 'x^5']
    assert dict(truncated.apply(2, ('x^2', 'x^3'))) == {'x^5': 1}
    assert not truncated.apply(2, ('x^3', 'x^3'))


def test_sign_flip_is_detected(truncated):
    """Flipping mu2(x, x) breaks associativity"""
    mutated = truncated.mutated(2, ('x', 'x'), {'x^2': -1})
    assert not check_structure(mutated, 3).passed


def test_unit_flip_is_detected(truncated):
    """Flipping mu2(1, x) breaks strict unitality"""
    mutated = truncated.mutated(2, ('1', 'x'), {'x': -1})
    assert unit_violations(mutated)


def test_opposite_satisfies_relations():
    """The opposite algebra is again an A-infinity algebra"""
    for key in ('lambda1', 'dual_numbers', 'y_cube'):
        op = opposite(make_algebra(key))
        assert check_structure(op.algebra, 4).passed


def test_diagonal_bimodule_relations():
    """A as a bimodule over itself"""
    bimodule = diagonal_bimodule(make_algebra('y_cube'))
    assert check_structure(bimodule, 4).passed


def test_glue_of_diagonal_bimodule():
    """Gluing keeps one unit and renames clashing basis names"""
    algebra = make_algebra('lambda1')
    glued = glue(diagonal_bimodule(algebra), name='G')
    assert glued.unit == '1'
    assert glued.space.dim == 6
    assert 'xi@M' in glued.space.names
    assert check_structure(glued, 4).passed


def test_check_ainfty_pipeline():
    """check-ainfty on lambda1 passes every check"""
    certificate = check_ainfty('lambda1', 6)
    assert certificate.passed
    assert {c.name for c in certificate.checks} == {'relations', 'opposite', 'mutation_detected'}


def test_sign_l_is_parity_of_l_value():
    """sign_l reduces l_p^q mod 2 on both branches"""
    degrees = [1, 0, 1]
    assert sign_l(0, 1, degrees) == (1 + 0 + 2) % 2
    assert sign_l(2, 0, degrees) == l_value(2, 0, degrees) % 2
    assert sign_l(1, 0, degrees) == 1
    assert sign_l(1, 0, [1, 1]) == 0


def test_block_l_reads_positions_cyclically():
    """Lifted ranges past a_n wrap to a_0 and empty ranges vanish"""
    degrees = [0, 1, 2]
    assert block_l(2, 1, degrees) == 0
    assert block_l(4, 3, degrees) == 0
    assert block_l(2, 3, degrees) == (2 + 1) + (0 + 1)
    assert block_l(2, 3, degrees) % 2 == l_value(2, 0, degrees) % 2
    assert block_l(1, 3, degrees) % 2 == sign_l(1, 0, degrees)


def test_dg_bimodule_relations():
    """k[eps] acting on itself from both sides"""
    dual = make_algebra('dual_numbers')
    bimodule = bimodule_from_dg(dual, dual, dual.space, {},
                                {('eps', '1'): {'eps': 1}}, {('1', 'eps'): {'eps': 1}}, name='k[eps]')
    assert check_structure(bimodule, 3).passed


def test_resolution_is_a_module():
    """P is a right A-infinity module over k[y]/y^3"""
    module = build_resolution_P(4).as_module()
    assert check_structure(module, 3).passed


def test_bimorphism_bimodule_round_trip():
    """bimorphism_from_bimodule inverts bimodule_from_bimorphism"""
    dual = make_algebra('dual_numbers')
    point = BigradedSpace.from_triples([('m', 0, 0)])
    target = end_algebra(point)
    morphism = Bimorphism(dual, dual, target, {(1, 0): {('1',): {'E[m|m]': 1}},
                                                (0, 1): {('1',): {'E[m|m]': 1}}}, fill_unit=False)
    bimodule = bimodule_from_bimorphism(morphism, point, {}, dual)
    assert dict(bimodule.apply(1, 0, ('1', 'm'))) == {'m': 1}
    back = bimorphism_from_bimodule(bimodule, dual, target)
    assert {rs: {k: dict(v) for k, v in t.items()} for rs, t in back.f.items() if t} == \
        {rs: {k: dict(v) for k, v in t.items()} for rs, t in morphism.f.items() if t}


def _tables(bimodule):
    return {ij: {k: dict(v) for k, v in t.items()} for ij, t in bimodule.mu.items() if t}


def test_dg_bimodule_round_trip_through_end():
    """k[eps] on itself survives bimodule -> bimorphism into End -> bimodule"""
    dual = make_algebra('dual_numbers')
    bimodule = bimodule_from_dg(dual, dual, dual.space, {},
                                {('eps', '1'): {'eps': 1}}, {('1', 'eps'): {'eps': 1}}, name='k[eps]')
    target = end_algebra(dual.space)
    morphism = bimorphism_from_bimodule(bimodule, opposite(dual).algebra, target)
    assert dict(morphism.apply(1, 0, ('eps',))) == {'E[eps|1]': 1}
    assert dict(morphism.apply(0, 1, ('eps',))) == {'E[eps|1]': -1}
    rebuilt = bimodule_from_bimorphism(morphism, dual.space, {}, dual)
    assert _tables(rebuilt) == _tables(bimodule)


@pytest.fixture
def regular_module():
    dual = make_algebra('dual_numbers')
    space = BigradedSpace.from_triples([('u', 0, 0), ('e', 0, 1)])
    return module_from_dg(dual, space, {}, {('u', 'eps'): {'e': 1}}, name='k[eps]')


def test_hom_complex_differential(regular_module):
    """d of the elementary maps u -> u and e -> e, and of their sum"""
    hom = HomComplex(regular_module, regular_module, max_weight=2, max_arity=2)
    on_u = SparseVector({('u', (), 'u'): 1})
    on_e = SparseVector({('e', (), 'e'): 1})
    assert dict(hom.differential(on_u)) == {('u', ('eps',), 'e'): -1}
    assert dict(hom.differential(on_e)) == {('u', ('eps',), 'e'): 1}
    assert not hom.differential(hom.identity())


def test_hom_complex_compose(regular_module):
    """Composition concatenates arguments and respects the arity cut"""
    hom = HomComplex(regular_module, regular_module, max_weight=2, max_arity=2)
    psi = SparseVector({('u', ('eps',), 'e'): 1})
    phi = SparseVector({('e', (), 'u'): 2})
    assert dict(hom.compose(phi, psi)) == {('u', ('eps',), 'u'): 2}
    assert dict(hom.compose(psi, phi)) == {('e', ('eps',), 'e'): 2}
    assert not hom.compose(psi, psi)
    assert hom.compose(hom.identity(), psi) == psi
    short = HomComplex(regular_module, regular_module, max_weight=2, max_arity=1)
    loop = SparseVector({('u', ('eps',), 'u'): 1})
    assert not short.compose(loop, loop)
