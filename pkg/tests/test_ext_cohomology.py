import pytest
import sys
import os

sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))
from src.ext_cohomology.cohomology_c import cohomology_of_C, compare_with_ext, expected_dims
from src.ext_cohomology.periodic import (PERIODIC_MODELS, build_periodic_resolution, cohomology_coefficients,
                                         compare_periodic_with_bar, hochschild_cohomology_bigraded,
                                         closed_form_dims, periodic_hochschild_homology, twist,
                                         verify_obstruction_vanishing)
from src.ext_cohomology.resolution import (build_resolution_P, ext_algebra, generator_weight, lift,
                                           resolution_report)


@pytest.fixture(scope='module')
def resolution():
    return build_resolution_P(8)


@pytest.fixture(scope='module')
def ext8():
    return ext_algebra(8)


def test_resolution_differential_examples(resolution):
    """d(e2) = e1 y^2 and d(e3) = e2 y"""
    assert dict(resolution.differential.columns['e2']) == {'e1y^2': 1}
    assert dict(resolution.differential.columns['e3']) == {'e2y': 1}
    assert 'e0' not in resolution.differential.columns


def test_generator_weights():
    """w(e_n) = 3 floor(n/2) + n mod 2"""
    assert [generator_weight(n) for n in range(6)] == [0, 1, 3, 4, 6, 7]


def test_resolution_is_acyclic_below_truncation(resolution):
    """H(P) is k in bidegree (0,0) below the first missing generator"""
    report = resolution_report(resolution)
    assert report.passed
    assert report.nonzero() == {(0, 0): 1}


def test_resolution_rejects_short_truncation():
    """The resolution needs at least e0, e1, e2"""
    with pytest.raises(ValueError):
        build_resolution_P(1)


def test_lift_examples(resolution):
    """v2(e4) = e2 and v1(e2) = e1 y"""
    assert dict(lift(resolution, 2).columns['e4']) == {'e2': 1}
    assert dict(lift(resolution, 1).columns['e2']) == {'e1y': 1}


def test_ext_identities(ext8):
    """Lifts commute with d up to sign and satisfy the Ext relations"""
    report = ext8.report
    assert report.passed
    for name in ('lifts_supercommute_with_d', 'v1v2_plus_v2v1_zero',
                 'v1_v2k_equals_signed_v2k1', 'ext0_is_dual_numbers'):
        assert report.verdicts[name]


def test_ext_dimensions(ext8):
    """One Ext class per generator e_n"""
    assert ext8.report.dim(0, 0) == 1
    assert ext8.report.dim(0, 1) == 1
    assert ext8.report.dim(1, 3) == 1
    assert ext8.report.dim(4, 12) == 1


def test_cohomology_of_C_matches_monomials():
    """H(C) has one class u2^a u1^delta per weight 3a + delta"""
    report = cohomology_of_C(6)
    assert report.passed
    assert report.nonzero() == expected_dims(6)
    assert report.nonzero() == {(0, 0): 1, (0, 1): 1, (-1, 3): 1, (-1, 4): 1, (-2, 6): 1}


def test_dimension_table():
    """Pivoted table keeps every class: weights as rows, degrees as columns"""
    frame = cohomology_of_C(6).to_frame()
    assert int(frame.values.sum()) == 5
    assert int(frame.loc[3, -1]) == 1


def test_ext_and_C_dictionary(ext8):
    """Ext and H(C) agree after negating the degree"""
    c_report = cohomology_of_C(6)
    assert compare_with_ext(ext8.report.dims, c_report.dims, 6) == (-1, 1)


def test_twist_convention():
    """t_p = n floor(p/2) + p mod 2"""
    assert [twist(6, p) for p in range(5)] == [0, 1, 6, 7, 12]


def test_periodic_resolution_is_exact():
    """d^2 = 0 and the rank count closes on every step"""
    resolution = build_periodic_resolution(6, 4)
    report = resolution.verify()
    assert report.passed


def test_periodic_resolution_rejects_small_modulus():
    """k[x]/x^n needs n >= 2"""
    with pytest.raises(ValueError):
        build_periodic_resolution(1, 4)


def test_coefficients_reject_positive_degree():
    """H(C) lives in nonpositive degrees"""
    with pytest.raises(ValueError):
        cohomology_coefficients(1)


def test_hochschild_cohomology_closed_form():
    """HH^p(k[x]/x^6, H^0(C)) and HH^p(k[x]/x^6, H^-1(C)) follow the closed form"""
    for degree in (0, -1):
        report = hochschild_cohomology_bigraded(cohomology_coefficients(degree), 6, 4)
        for p in range(5):
            actual = {w: d for (q, w), d in report.dims.items() if q == p and d}
            assert actual == closed_form_dims(degree, p)


def test_obstruction_groups_vanish():
    """The weight-0 column of the obstruction groups is zero"""
    report = verify_obstruction_vanishing(depth=5)
    assert report.passed


def test_periodic_homology_of_lambda1():
    """Lambda1 has classes in degrees 0 and 1 at every positive weight"""
    n, generator_degree = PERIODIC_MODELS['lambda1']
    dims = periodic_hochschild_homology(n, 3, generator_degree)
    assert dims == {(0, 0): 1, (0, 1): 1, (1, 1): 1, (0, 2): 1, (1, 2): 1, (0, 3): 1, (1, 3): 1}


@pytest.mark.parametrize("key", ['truncated_poly(6)', 'dual_numbers', 'lambda1'])
def test_periodic_matches_bar(key):
    """Periodic resolution and bar slices give the same HH dimensions"""
    assert compare_periodic_with_bar(key, 4).passed
