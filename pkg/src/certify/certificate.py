import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional

from src.config.settings import settings
from src.linalg.scalars import format_scalar

logger = logging.getLogger(__name__)


@dataclass
class Check:
    name: str
    statement: str
    passed: bool
    bound: Optional[Dict[str, Any]] = None
    value: Any = None
    witness: Any = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            'name': self.name,
            'statement': self.statement,
            'bound': self.bound or {},
            'verdict': 'PASS' if self.passed else 'FAIL',
            'value': _render(self.value),
            'witness': _render(self.witness),
        }


def _render(value: Any) -> Any:
    """Exact scalars become "p/q" strings; containers are rendered recursively"""
    if value is None or isinstance(value, (bool, str, int)):
        return value
    if isinstance(value, dict):
        return {str(k): _render(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_render(v) for v in value]
    if isinstance(value, Fraction):
        return format_scalar(value)
    return str(value)


@dataclass
class Certificate:
    pipeline: str
    parameters: Dict[str, Any] = field(default_factory=dict)
    checks: List[Check] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(c.passed for c in self.checks)

    @property
    def verdict(self) -> str:
        return 'PASS' if self.passed else 'FAIL'

    def add(self, name: str, statement: str, passed: bool, **details) -> Check:
        check = Check(name, statement, bool(passed), **details)
        self.checks.append(check)
        level = logging.INFO if check.passed else logging.WARNING
        logger.log(level, f"[{self.pipeline}] {name}: {'PASS' if check.passed else 'FAIL'}")
        return check

    def failed(self) -> List[str]:
        return [c.name for c in self.checks if not c.passed]

    def to_dict(self) -> Dict[str, Any]:
        return {
            'schema_version': settings.SCHEMA_VERSION,
            'pipeline': self.pipeline,
            'parameters': _render(self.parameters),
            'bounds': settings.bounds(),
            'checks': [c.to_dict() for c in self.checks],
            'notes': list(self.notes),
            'verdict': self.verdict,
        }
