import pytest
import sys
import os

sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))
from src.ainfty.constructions import diagonal_bimodule, end_algebra
from src.ainfty.dg import bimodule_from_dg
from src.ainfty.errors import AlgebraError, TruncationError
from src.catalog.algebras import make_algebra
from src.hochschild.chains import HochschildChain, chain_degree, connes_B, hochschild_b, slice_keys
from src.hochschild.pairings import pairing_mu3, pairing_psi, trace_functional
from src.hochschild.pushforward import (canonical_bimorphism, chain_map_defects, dg_image_table,
                                       double_cyclic_pushforward, eilenberg_zilber, induced_map)
from src.linalg.spaces import BigradedSpace
from src.orchestration.pipelines import _mixed_complex_defects, hochschild


@pytest.fixture(scope='module')
def lambda1():
    return make_algebra('lambda1')


@pytest.fixture(scope='module')
def dual_numbers():
    return make_algebra('dual_numbers')


@pytest.mark.parametrize("key", ['lambda1', 'dual_numbers', 'truncated_poly(6)', 'tensor(lambda1,dual_numbers)'])
def test_mixed_complex_identities(key):
    """b^2 = 0, B^2 = 0 and bB + Bb = 0 on every basis chain"""
    algebra = make_algebra(key)
    for w in range(4):
        assert _mixed_complex_defects(algebra, w) == {'b2': 0, 'B2': 0, 'bB+Bb': 0}


def test_unit_in_tail_is_dropped():
    """Chains with the unit in a tail slot are zero in the normalized complex"""
    chain = HochschildChain({('xi', '1'): 1, ('1', 'xi'): 2}, unit='1')
    assert dict(chain) == {('1', 'xi'): 2}


def test_connes_B_on_short_chains(dual_numbers):
    """B(1) = 0 and B(eps) = -(1; eps)"""
    assert not connes_B(dual_numbers, {('1',): 1})
    assert dict(connes_B(dual_numbers, {('eps',): 1})) == {('1', 'eps'): -1}


def test_chain_degree_convention(lambda1, dual_numbers):
    """Cohomological degree |a_0| + sum(|a_i| - 1)"""
    assert chain_degree(lambda1, ('1', 'xi', 'xi')) == 0
    assert chain_degree(lambda1, ('xi',)) == 1
    assert chain_degree(dual_numbers, ('1', 'eps')) == -1


def test_b_vanishes_on_lambda1(lambda1):
    """Lambda1 has no products between reduced elements, so b = 0 on reduced chains"""
    assert not hochschild_b(lambda1, {('1', 'xi', 'xi'): 1})
    assert not hochschild_b(lambda1, {('xi', 'xi'): 1})


def test_lambda1_profile():
    """One class in degrees 0 and 1 at every positive weight"""
    certificate = hochschild('lambda1', 4)
    assert certificate.passed


def test_dual_numbers_hh1():
    """HH_1(k[eps]) is one-dimensional and sits in weight 1"""
    certificate = hochschild('dual_numbers', 4)
    assert certificate.passed
    assert 'hh1_in_weight_one' in [c.name for c in certificate.checks]


def test_shuffle_is_chain_map(lambda1, dual_numbers):
    """The shuffle pushforward commutes with b up to weight 2"""
    tensor = make_algebra('tensor(lambda1,dual_numbers)')
    morphism = canonical_bimorphism(lambda1, dual_numbers, tensor)
    assert chain_map_defects(morphism, 2) == []


def test_shuffle_of_length_zero_chains(lambda1, dual_numbers):
    """EZ((a) (x) (b)) = (a (x) b)"""
    chain = eilenberg_zilber(lambda1, dual_numbers, {('xi',): 1}, {('eps',): 1})
    assert dict(chain) == {('xi⊗eps',): 1}


def test_pairing_mu3_requires_total_degree_one(lambda1):
    """pairing_mu3 rejects inputs with |a| + |b| != 1"""
    with pytest.raises(AlgebraError):
        pairing_mu3(lambda1, 'xi', 'xi')


def test_pairing_mu3_vanishes_without_mu3(lambda1):
    """A DG algebra has no mu3, so the pairing is zero"""
    assert pairing_mu3(lambda1, '1', 'xi') == 0


def test_connes_B_needs_unit():
    """B is only defined for strictly unital algebras"""
    from src.ainfty.structures import AInftyAlgebra
    from src.linalg.spaces import BigradedSpace
    bare = AInftyAlgebra(BigradedSpace.from_triples([('a', 0, 1)]), {}, name='bare')
    with pytest.raises(AlgebraError):
        connes_B(bare, {('a',): 1})


def test_trace_functional_on_elementary_maps():
    """Supertrace of the length-0 part; off-diagonal maps and longer chains do not contribute"""
    space = BigradedSpace.from_triples([('a', 0, 0), ('b', 1, 0), ('c', 0, 0)])
    end = end_algebra(space)
    chain = {('E[a|a]',): 1, ('E[b|b]',): 2, ('E[a|b]',): 5, ('E[a|a]', 'E[a|a]'): 7}
    assert trace_functional(chain, end) == -1
    identity = {(name,): c for name, c in end.identity.items()}
    assert trace_functional(identity, end) == 1


def test_pairing_psi_reports_arity_exhaustion(lambda1):
    """Chains that need operations beyond the known arity are refused"""
    bimodule = diagonal_bimodule(lambda1)
    assert pairing_psi(bimodule, {('1',): 1}, {('xi',): 1}, max_arity=3) == 0
    with pytest.raises(TruncationError):
        pairing_psi(bimodule, {('1', 'xi'): 1}, {('xi',): 1}, max_arity=3)


def test_double_cyclic_sum_reduces_to_shuffle(lambda1, dual_numbers):
    """For a DG map the general pushforward is the shuffle map followed by the induced map"""
    tensor = make_algebra('tensor(lambda1,dual_numbers)')
    morphism = canonical_bimorphism(lambda1, dual_numbers, tensor)
    table = dg_image_table(morphism)
    assert dict(double_cyclic_pushforward(morphism, {('1',): 1}, {('1',): 1})) == {(tensor.unit,): 1}
    for w1 in range(3):
        for w2 in range(2):
            for ka in slice_keys(lambda1, w1):
                for kb in slice_keys(dual_numbers, w2):
                    x, y = {ka: 1}, {kb: 1}
                    expected = induced_map(table, eilenberg_zilber(lambda1, dual_numbers, x, y), tensor.unit)
                    assert dict(double_cyclic_pushforward(morphism, x, y)) == dict(expected), (ka, kb)


def test_pairing_psi_vanishes_on_strict_bimodules(dual_numbers):
    """Without operations of total arity three or more, chains of positive length pair to zero"""
    bimodule = bimodule_from_dg(dual_numbers, dual_numbers, dual_numbers.space, {},
                                {('eps', '1'): {'eps': 1}}, {('1', 'eps'): {'eps': 1}})
    assert pairing_psi(bimodule, {('1', 'eps'): 1}, {('eps',): 1}) == 0
    assert pairing_psi(bimodule, {('eps',): 1}, {('1', 'eps'): 1}) == 0
