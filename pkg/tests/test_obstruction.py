import pytest
import sys
import os

sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))
from src.ainfty.errors import ObstructionError, TruncationError
from src.obstruction.end_complex import end_complex_of_k
from src.obstruction.solver import assemble_obstruction, prescribe_g1, reduced_tuples, solve_to_arity
from src.orchestration.pipelines import CORRUPTION, CORRUPTION_KEY


@pytest.fixture(scope='module')
def end4():
    return end_complex_of_k(4, 4)


@pytest.fixture(scope='module')
def solved():
    return solve_to_arity(3, 6, 6)


def test_end_complex_cohomology(end4):
    """Ext over k[y]/y^3: classes at weights 0, 1, 3, 4 up to weight 4"""
    assert end4.cohomology().nonzero() == {(0, 0): 1, (0, 1): 1, (-1, 3): 1, (-1, 4): 1}


def test_end_complex_interior_is_min_of_bounds():
    """The certified weight is min(weight_bound, length_bound)"""
    assert end_complex_of_k(6, 3).weight_bound == 3


def test_end_complex_rejects_zero_bound():
    """Bounds must be positive"""
    with pytest.raises(TruncationError):
        end_complex_of_k(0, 4)


def test_epsilon_is_a_cocycle(end4):
    """eps = (z; y) is closed and not exact"""
    eps = {end4.epsilon: 1}
    assert not end4.differential(eps)
    assert not end4.is_exact(eps)


def test_identity_cochain_is_closed(end4):
    """The identity of End(k) is a cocycle and matches the named unit"""
    identity = end4.hom.identity()
    assert not end4.hom.differential(identity)
    assert end4.hom.named(identity) == {end4.identity: 1}


def test_prescribed_g1(end4):
    """g1 is a chain map sending x to eps"""
    prefix = prescribe_g1(end4)
    assert prefix.arity == 1
    assert dict(prefix.components[1][('x',)]) == {end4.epsilon: 1}
    assert prefix.check(1).passed


def test_reduced_tuples_respect_weight(end4):
    """Tuples of reduced elements up to a total weight"""
    prefix = prescribe_g1(end4)
    tuples = reduced_tuples(prefix.source, 2, 3)
    assert ('x', 'x') in tuples
    assert ('x', 'x^2') in tuples
    assert ('x^2', 'x^2') not in tuples


def test_solve_to_arity_three(solved):
    """g_1..g_3 satisfy the morphism relations and the certificate records the run"""
    prefix, certificate = solved
    assert prefix.arity == 3
    assert prefix.check(3).passed
    assert certificate['target_arity'] == 3
    assert certificate['certified_weight'] == 6
    assert certificate['hash'] == prefix.digest()


def test_solve_is_deterministic(solved):
    """Two runs produce the same morphism"""
    prefix, _ = solved
    again, _ = solve_to_arity(3, 6, 6)
    assert again.digest() == prefix.digest()


def test_corrupted_system_is_rejected():
    """A non-exact perturbation of the arity-3 equations yields a witness"""
    prefix, _ = solve_to_arity(2, 6, 6)
    system = assemble_obstruction(prefix, 2, allow_correction=False).corrupted(CORRUPTION_KEY, CORRUPTION)
    with pytest.raises(ObstructionError) as info:
        system.solve()
    assert info.value.witness


def test_solve_rejects_bad_arity():
    """Target arity outside 1..max_arity is a precondition error"""
    with pytest.raises(ValueError):
        solve_to_arity(0, 6, 6)


def test_solve_rejects_vacuous_truncation():
    """Arity beyond the certified weight needs larger bounds"""
    with pytest.raises(TruncationError) as info:
        solve_to_arity(5, 4, 4)
    assert info.value.required['weight_bound'] == 5
