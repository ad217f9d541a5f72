import pytest
import sys
import os

sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))
from src.ainfty.constructions import diagonal_bimodule
from src.ainfty.errors import TruncationError
from src.ainfty.signs import parity_sign
from src.certify.section4 import kunneth_data, section4_cycle, verify_section4
from src.certify.ten_dim import build_tenDim, certify_tenDim, mu3_trace, required_morphism_arity
from src.hochschild.chains import hochschild_b
from src.hochschild.pairings import pairing_psi
from src.obstruction.solver import solve_to_arity


@pytest.fixture(scope='module')
def ten_dim():
    return certify_tenDim(6, 8, 8)


@pytest.fixture(scope='module')
def product_data():
    return kunneth_data(3)


def test_required_morphism_arity():
    """Arity N of the glued algebra needs g up to max(3, N // 2)"""
    assert required_morphism_arity(6) == 3
    assert required_morphism_arity(8) == 4


def test_ten_dim_certificate_passes(ten_dim):
    """The glued algebra is a 10-dimensional minimal strictly unital A-infinity algebra"""
    certificate, algebra = ten_dim
    assert certificate.passed, certificate.failed()
    assert algebra.space.dim == 10
    assert algebra.is_minimal


def test_ten_dim_mu3_trace(ten_dim):
    """str(v -> mu3(x, v, y)) is +-1 and the pairing agrees with the diagonal-bimodule pairing"""
    certificate, algebra = ten_dim
    assert abs(mu3_trace(algebra)) == 1
    checks = {c.name: c for c in certificate.checks}
    assert checks['pairing_nonzero'].value != 0
    assert checks['pairing_agrees'].passed


def test_ten_dim_basis(ten_dim):
    """Both generators survive the gluing next to a degree-0 unit"""
    _, algebra = ten_dim
    assert {'x', 'x^5', 'y', 'y^2'}.issubset(set(algebra.space.names))
    assert algebra.unit in algebra.space
    assert algebra.space.degree(algebra.unit) == 0


def test_build_ten_dim_needs_enough_components():
    """A prefix of arity 2 cannot produce the glued algebra to arity 8"""
    prefix, _ = solve_to_arity(2, 8, 8)
    with pytest.raises(TruncationError):
        build_tenDim(prefix, 8)


def test_section4_cycle_components(product_data):
    """Components sit in weights 1, 3, 2 and the total is a cycle"""
    cycle = section4_cycle(product_data)
    assert [c.sign for c in cycle.components] == [1, -1, 1]
    assert all(c.image for c in cycle.components)
    assert not hochschild_b(product_data.product.algebra, cycle.total)


def test_kunneth_basis_is_full(product_data):
    """Shuffle images of class pairs span HH(T) at weight 3, degree -1"""
    basis = product_data.basis(-1, 3)
    assert basis.pairs
    assert basis.rank == len(basis.pairs) == product_data.product.report.dim(-1, 3)


def test_verify_section4_passes():
    """Kunneth, nonzero components and a nonzero image under id (x) B"""
    certificate = verify_section4(3)
    assert certificate.passed, certificate.failed()


def test_verify_section4_rejects_small_weight():
    """The cycle needs weight 3"""
    with pytest.raises(TruncationError):
        verify_section4(2)


def test_morphism_check_is_recorded(ten_dim):
    """The solved prefix is re-checked rather than assumed"""
    certificate, _ = ten_dim
    checks = {c.name: c for c in certificate.checks}
    assert checks['morphism_extends'].passed
    assert 'violation' not in checks['morphism_extends'].witness


def test_pairing_psi_matches_direct_expansion(ten_dim):
    """On length-0 chains psi is the signed supertrace of mu_{1,1}"""
    _, algebra = ten_dim
    bimodule = diagonal_bimodule(algebra)
    space = algebra.space
    for a in space.names:
        for b in space.names:
            expected = 0
            for v in space.names:
                exponent = space.degree(v) + (space.degree(b) + 1) * space.degree(v) + space.degree(a) + 1
                expected += parity_sign(exponent) * bimodule.apply(1, 1, (a, v, b))[v]
            assert pairing_psi(bimodule, {(a,): 1}, {(b,): 1}) == expected, (a, b)
    assert pairing_psi(bimodule, {('x',): 1}, {('y',): 1}) == -mu3_trace(algebra)


def test_build_ten_dim_at_minimal_weight_bound():
    """Components solved as zero at the smallest accepted weight bound still count as known"""
    prefix, _ = solve_to_arity(4, 6, 8)
    assert prefix.arity == 4
    algebra = build_tenDim(prefix, 8)
    assert algebra.space.dim == 10
    assert algebra.is_minimal
