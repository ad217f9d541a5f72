import json
import pytest
import sys
import os
from fractions import Fraction
from pydantic import ValidationError

sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))
from src.catalog.algebras import make_algebra
from src.hochschild.chains import HochschildChain
from src.models.documents import (AlgebraDocument, CertificateDocument, ChainDocument, CheckRecord,
                                  TableEntry, dump_document, load_algebra_document)
from src.storage.artifact_store import ArtifactStore


@pytest.fixture
def y_cube():
    return make_algebra('y_cube')


@pytest.fixture
def valid_algebra_data():
    return {
        'name': 'dual',
        'basis': [{'name': '1', 'degree': 0, 'weight': 0},
                  {'name': 'e', 'degree': 0, 'weight': 1}],
        'unit': '1',
        'tables': [
            {'arity': 2, 'inputs': ['1', '1'], 'output': {'1': '1'}},
            {'arity': 2, 'inputs': ['1', 'e'], 'output': {'e': '2/2'}},
            {'arity': 2, 'inputs': ['e', '1'], 'output': {'e': '1', '1': '0'}},
        ],
    }


def test_algebra_document_round_trip(y_cube):
    """Tables survive serialization exactly"""
    document = AlgebraDocument.from_algebra(y_cube)
    restored = load_algebra_document(dump_document(document)).to_algebra()
    assert restored.space.names == y_cube.space.names
    assert restored.unit == y_cube.unit
    assert {n: dict(t) for n, t in restored.mu.items() if t} == {n: dict(t) for n, t in y_cube.mu.items() if t}


def test_coefficients_are_canonicalized(valid_algebra_data):
    """'2/2' becomes '1/1' and zero terms disappear"""
    document = AlgebraDocument(**valid_algebra_data)
    assert document.tables[1].output == {'e': '1/1'}
    assert document.tables[2].output == {'e': '1/1'}


def test_zero_denominator_rejected(valid_algebra_data):
    """A '1/0' coefficient fails validation"""
    valid_algebra_data['tables'][0]['output'] = {'1': '1/0'}
    with pytest.raises(ValidationError):
        AlgebraDocument(**valid_algebra_data)


def test_float_coefficient_rejected():
    """Coefficients must be exact strings"""
    with pytest.raises(ValidationError):
        TableEntry(arity=1, inputs=['e'], output={'e': 0.5})


def test_float_grading_rejected(valid_algebra_data):
    """Gradings are integers"""
    valid_algebra_data['basis'][1]['weight'] = 1.0
    with pytest.raises(ValidationError):
        AlgebraDocument(**valid_algebra_data)


def test_unknown_names_rejected(valid_algebra_data):
    """Table entries may only mention basis names"""
    valid_algebra_data['tables'].append({'arity': 2, 'inputs': ['e', 'f'], 'output': {}})
    with pytest.raises(ValidationError):
        AlgebraDocument(**valid_algebra_data)


def test_arity_mismatch_rejected():
    """Number of inputs must equal the arity"""
    with pytest.raises(ValidationError):
        TableEntry(arity=3, inputs=['e'], output={})


def test_schema_version_checked(valid_algebra_data):
    """Unknown schema versions are refused"""
    valid_algebra_data['schema_version'] = '0.1'
    with pytest.raises(ValidationError):
        AlgebraDocument(**valid_algebra_data)


def test_chain_document_round_trip(y_cube):
    """Chains keep exact coefficients"""
    chain = HochschildChain({('y', 'y^2'): Fraction(1, 2), ('y^2',): -3}, unit=y_cube.unit)
    document = ChainDocument.from_chain(y_cube, chain)
    assert document.terms[0].coefficient == '-3/1'
    assert dict(ChainDocument.model_validate_json(dump_document(document)).to_chain()) == dict(chain)


def test_certificate_verdict_must_match_checks():
    """A PASS verdict over a failed check is refused"""
    check = {'name': 'c', 'statement': 's', 'verdict': 'FAIL'}
    with pytest.raises(ValidationError):
        CertificateDocument(pipeline='p', checks=[check], verdict='PASS')
    document = CertificateDocument(pipeline='p', checks=[check], verdict='FAIL')
    assert document.verdict == 'FAIL'


def test_empty_certificate_fails():
    """No checks means no PASS"""
    with pytest.raises(ValidationError):
        CertificateDocument(pipeline='p', verdict='PASS')


def test_check_record_rejects_floats():
    """Floats never appear in a check"""
    with pytest.raises(ValidationError):
        CheckRecord(name='c', statement='s', verdict='PASS', value={'trace': 1.0})


def test_artifact_store_writes_canonical_json(tmp_path):
    """Documents land under certificates/ with a trailing newline"""
    store = ArtifactStore(str(tmp_path))
    document = CertificateDocument(pipeline='p', checks=[{'name': 'c', 'statement': 's', 'verdict': 'PASS'}],
                                   verdict='PASS')
    path = store.save_document(document, 'p')
    assert path == tmp_path / 'certificates' / 'p.json'
    text = store.read_text('certificates/p.json')
    assert text.endswith('\n')
    assert json.loads(text)['verdict'] == 'PASS'
    assert [p.name for p in (tmp_path / 'certificates').iterdir()] == ['p.json']
