import pytest
import sys
import os
from fractions import Fraction

import sympy

sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))
from src.catalog.algebras import make_algebra
from src.hochschild.chains import hochschild_slice
from src.linalg.scalars import SparseVector, format_scalar, parse_scalar
from src.linalg.solver import rank_of, solve_linear_system
from src.linalg.spaces import BigradedSpace, ComplexSlice, LinearMap
from src.linalg.homology import homology_of_slice, supertrace


@pytest.fixture
def matrices():
    return [
        [[1, 2, 3], [2, 4, 6], [1, 0, 1]],
        [[0, 0], [0, 0]],
        [[1, 1, 0, 0], [0, 1, 1, 0], [0, 0, 1, 1], [1, 0, 0, -1]],
        [[Fraction(1, 2), Fraction(1, 3)], [3, 2]],
        [[2, -1, 0], [-1, 2, -1], [0, -1, 2]],
    ]


def _rows(matrix):
    return [SparseVector((j, c) for j, c in enumerate(row)) for row in matrix]


def test_parse_scalar_canonical():
    """Coefficients are parsed exactly and rendered as p/q"""
    assert parse_scalar("3/6") == Fraction(1, 2)
    assert parse_scalar("-4") == Fraction(-4)
    assert format_scalar(Fraction(-2, 4)) == "-1/2"
    assert format_scalar(Fraction(3)) == "3/1"


@pytest.mark.parametrize("text", ["1/0", "0.5", "abc", 0.5])
def test_parse_scalar_rejects(text):
    """Zero denominators, floats and garbage are rejected"""
    with pytest.raises(ValueError):
        parse_scalar(text)


def test_sparse_vector_drops_zeros():
    """Cancelling terms disappear from the vector"""
    v = SparseVector({'a': 1, 'b': 2})
    v.add_term('a', -1)
    assert dict(v) == {'b': Fraction(2)}
    assert (v - v).is_zero()
    assert v['missing'] == 0


def test_rank_matches_sympy(matrices):
    """Exact elimination agrees with an independent rank computation"""
    for matrix in matrices:
        assert rank_of(_rows(matrix)) == sympy.Matrix(matrix).rank()


def test_solve_consistent_system():
    """A solvable system returns a solution that satisfies every equation"""
    rows = _rows([[1, 1], [1, -1]])
    result = solve_linear_system(rows, [3, 1], 2)
    assert result.consistent
    assert result.solution == {0: 2, 1: 1}


def test_solve_inconsistent_system_has_witness():
    """An inconsistent system returns y with y^T A = 0 and y^T b != 0"""
    rows = _rows([[1, 1], [2, 2]])
    rhs = [1, 3]
    result = solve_linear_system(rows, rhs, 2)
    assert not result.consistent
    y = result.witness
    for j in range(2):
        assert sum(y.get(i, 0) * rows[i][j] for i in range(2)) == 0
    assert sum(y.get(i, 0) * rhs[i] for i in range(2)) != 0


def test_solve_dimension_mismatch():
    """Equation and right-hand side counts must agree"""
    with pytest.raises(ValueError):
        solve_linear_system(_rows([[1]]), [1, 2])


def test_homology_of_short_complex():
    """k --1--> k has no homology; a zero map keeps both classes"""
    source = BigradedSpace.from_triples([('a', 0, 1)])
    target = BigradedSpace.from_triples([('b', 1, 1)])
    iso = ComplexSlice({0: source, 1: target}, {0: LinearMap(source, target, {'a': {'b': 2}}, (1, 0))})
    assert homology_of_slice(iso).nonzero() == {}
    zero = ComplexSlice({0: source, 1: target})
    assert homology_of_slice(zero).nonzero() == {(0, 1): 1, (1, 1): 1}


def test_representatives_are_cycles():
    """Class representatives of a Hochschild slice are cycles"""
    slice_, _ = hochschild_slice(make_algebra('lambda1'), 2)
    report = homology_of_slice(slice_)
    assert report.total() > 0
    assert report.recheck(slice_) == []


def test_recheck_flags_dependent_representatives():
    """A repeated class or a boundary passed off as a class is reported"""
    source = BigradedSpace.from_triples([('a', 0, 1)])
    target = BigradedSpace.from_triples([('b', 1, 1)])
    zero = ComplexSlice({0: source, 1: target})
    report = homology_of_slice(zero)
    assert report.recheck(zero) == []
    report.representatives[(0, 1)].append(SparseVector({'a': 2}))
    assert len(report.recheck(zero)) == 1

    iso = ComplexSlice({0: source, 1: target}, {0: LinearMap(source, target, {'a': {'b': 2}}, (1, 0))})
    report = homology_of_slice(iso)
    report.representatives[(1, 1)] = [SparseVector({'b': 1})]
    issues = report.recheck(iso)
    assert len(issues) == 1 and '(1,1)' in issues[0]


def test_bidegree_is_enforced():
    """Entries that break the declared bidegree are rejected"""
    source = BigradedSpace.from_triples([('a', 0, 1)])
    target = BigradedSpace.from_triples([('b', 1, 2)])
    with pytest.raises(ValueError):
        LinearMap(source, target, {'a': {'b': 1}}, (1, 0))


def test_supertrace_signs_odd_elements():
    """Odd basis elements enter the trace with a minus sign"""
    space = BigradedSpace.from_triples([('e', 0, 0), ('o', 1, 0)])
    f = LinearMap(space, space, {'e': {'e': 3}, 'o': {'o': 5}})
    assert supertrace(f) == -2


def test_supertrace_rejects_degree_shift():
    """Only degree-0 endomorphisms have a supertrace"""
    space = BigradedSpace.from_triples([('e', 0, 0), ('o', 1, 0)])
    f = LinearMap(space, space, {'e': {'o': 1}}, (1, 0))
    with pytest.raises(ValueError):
        supertrace(f)
