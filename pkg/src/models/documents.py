import json
import logging
from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.ainfty.structures import AInftyAlgebra
from src.config.settings import settings
from src.hochschild.chains import HochschildChain
from src.linalg.scalars import SparseVector, format_scalar, parse_scalar
from src.linalg.spaces import BasisElement, BigradedSpace

logger = logging.getLogger(__name__)


def _canonical_coefficient(v: Any) -> str:
    if not isinstance(v, str):
        raise ValueError(f"Coefficients must be \"p/q\" strings, got {v!r}")
    return format_scalar(parse_scalar(v))


class BasisEntry(BaseModel):
    """One basis element with its bidegree"""
    model_config = ConfigDict(extra='forbid')

    name: str = Field(..., min_length=1)
    degree: int
    weight: int

    @field_validator('degree', 'weight', mode='before')
    @classmethod
    def validate_grading(cls, v: Any) -> int:
        """Gradings are integers, never floats or strings"""
        if isinstance(v, bool) or not isinstance(v, int):
            raise ValueError(f"Gradings must be integers, got {v!r}")
        return v


class TableEntry(BaseModel):
    """mu_n(inputs) = sum of coefficient * output"""
    model_config = ConfigDict(extra='forbid')

    arity: int = Field(..., ge=1)
    inputs: List[str]
    output: Dict[str, str]

    @field_validator('output')
    @classmethod
    def validate_output(cls, v: Dict[str, Any]) -> Dict[str, str]:
        """Exact coefficients only; zero terms are dropped"""
        cleaned = {name: _canonical_coefficient(c) for name, c in v.items()}
        return {name: c for name, c in cleaned.items() if c != '0/1'}

    @model_validator(mode='after')
    def validate_arity(self) -> 'TableEntry':
        if len(self.inputs) != self.arity:
            raise ValueError(f"Entry of arity {self.arity} has {len(self.inputs)} inputs")
        return self


class AlgebraDocument(BaseModel):
    """Serialized A-infinity algebra"""
    model_config = ConfigDict(extra='forbid')

    schema_version: str = settings.SCHEMA_VERSION
    name: str
    basis: List[BasisEntry]
    unit: Optional[str] = None
    arity_bound: Optional[int] = Field(None, ge=1)
    tables: List[TableEntry] = Field(default_factory=list)
    provenance: str = ''

    @field_validator('schema_version')
    @classmethod
    def validate_schema_version(cls, v: str) -> str:
        if v != settings.SCHEMA_VERSION:
            raise ValueError(f"Unsupported schema version {v}, expected {settings.SCHEMA_VERSION}")
        return v

    @model_validator(mode='after')
    def validate_names(self) -> 'AlgebraDocument':
        names = [b.name for b in self.basis]
        if len(set(names)) != len(names):
            raise ValueError("Duplicate basis names")
        known = set(names)
        if self.unit is not None and self.unit not in known:
            raise ValueError(f"Unit '{self.unit}' is not a basis element")
        for entry in self.tables:
            unknown = [n for n in list(entry.inputs) + list(entry.output) if n not in known]
            if unknown:
                raise ValueError(f"Unknown basis names in table entry: {unknown}")
        return self

    @classmethod
    def from_algebra(cls, algebra: AInftyAlgebra, provenance: str = '') -> 'AlgebraDocument':
        space = algebra.space
        order = space.index
        tables = []
        for n in sorted(algebra.mu):
            for key in sorted(algebra.mu[n], key=lambda k: [order[a] for a in k]):
                out = algebra.mu[n][key]
                tables.append(TableEntry(arity=n, inputs=list(key), output={
                    name: format_scalar(out[name]) for name in sorted(out, key=order.get)}))
        return cls(
            name=algebra.name,
            basis=[BasisEntry(name=b.name, degree=b.degree, weight=b.weight) for b in space],
            unit=algebra.unit,
            arity_bound=algebra.arity_bound,
            tables=tables,
            provenance=provenance,
        )

    def to_algebra(self) -> AInftyAlgebra:
        space = BigradedSpace(BasisElement(b.name, b.degree, b.weight) for b in self.basis)
        mu: Dict[int, Dict] = {}
        for entry in self.tables:
            mu.setdefault(entry.arity, {})[tuple(entry.inputs)] = SparseVector(
                (name, parse_scalar(c)) for name, c in entry.output.items())
        return AInftyAlgebra(space, mu, unit=self.unit, name=self.name,
                             arity_bound=self.arity_bound, fill_unit=False)


class ChainTerm(BaseModel):
    model_config = ConfigDict(extra='forbid')

    key: List[str] = Field(..., min_length=1)
    coefficient: str

    @field_validator('coefficient', mode='before')
    @classmethod
    def validate_coefficient(cls, v: Any) -> str:
        return _canonical_coefficient(v)


class ChainDocument(BaseModel):
    """Hochschild chain (a_0; a_1, ..., a_n) combination over a named algebra"""
    model_config = ConfigDict(extra='forbid')

    schema_version: str = settings.SCHEMA_VERSION
    algebra: str
    unit: Optional[str] = None
    terms: List[ChainTerm] = Field(default_factory=list)

    @classmethod
    def from_chain(cls, algebra: AInftyAlgebra, chain: Dict) -> 'ChainDocument':
        order = algebra.space.index
        keys = sorted(chain, key=lambda k: (len(k), [order[a] for a in k]))
        return cls(algebra=algebra.name, unit=algebra.unit,
                   terms=[ChainTerm(key=list(k), coefficient=format_scalar(chain[k])) for k in keys if chain[k]])

    def to_chain(self) -> HochschildChain:
        return HochschildChain(((tuple(t.key), parse_scalar(t.coefficient)) for t in self.terms), unit=self.unit)


class CheckRecord(BaseModel):
    """One named check of a certificate"""
    model_config = ConfigDict(extra='forbid')

    name: str = Field(..., min_length=1)
    statement: str
    bound: Dict[str, int] = Field(default_factory=dict)
    verdict: Literal['PASS', 'FAIL']
    value: Any = None
    witness: Any = None

    @field_validator('value', 'witness')
    @classmethod
    def validate_exact(cls, v: Any) -> Any:
        """Floats never appear in certificates"""
        if _contains_float(v):
            raise ValueError("Certificates carry exact values only")
        return v


def _contains_float(v: Any) -> bool:
    if isinstance(v, float):
        return True
    if isinstance(v, dict):
        return any(_contains_float(x) for x in v.values())
    if isinstance(v, (list, tuple)):
        return any(_contains_float(x) for x in v)
    return False


class CertificateDocument(BaseModel):
    """Outcome of one pipeline; PASS iff every check passed"""
    model_config = ConfigDict(extra='forbid')

    schema_version: str = settings.SCHEMA_VERSION
    pipeline: str
    parameters: Dict[str, Any] = Field(default_factory=dict)
    bounds: Dict[str, int] = Field(default_factory=dict)
    checks: List[CheckRecord] = Field(default_factory=list)
    notes: List[str] = Field(default_factory=list)
    verdict: Literal['PASS', 'FAIL']

    @model_validator(mode='after')
    def validate_verdict(self) -> 'CertificateDocument':
        expected = 'PASS' if self.checks and all(c.verdict == 'PASS' for c in self.checks) else 'FAIL'
        if self.verdict != expected:
            raise ValueError(f"Verdict {self.verdict} disagrees with the checks ({expected})")
        return self


def dump_document(document: BaseModel) -> str:
    """Canonical JSON text: field order as declared, two-space indent, trailing newline"""
    return json.dumps(document.model_dump(mode='json'), indent=2, ensure_ascii=False) + '\n'


def load_algebra_document(text: str) -> AlgebraDocument:
    try:
        return AlgebraDocument.model_validate_json(text)
    except Exception as e:
        logger.error(f"Error parsing algebra document: {str(e)}")
        raise
