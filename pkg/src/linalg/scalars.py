import re
from fractions import Fraction
from typing import Any, Iterable, Tuple, Union

# Exact rational scalars and sparse vectors over them.
#
# A SparseVector is a dictionary key -> Fraction whose absent keys are zero;
# zero values are removed as soon as they appear. It is the coefficient
# container for every formal combination in the package: elements of graded
# spaces, operation outputs, Hochschild chains and cochains.

Scalar = Fraction

_COEFF_PATTERN = re.compile(r'^\s*(-?\d+)\s*(?:/\s*(\d+)\s*)?$')


def parse_scalar(text: Union[str, int, Fraction]) -> Fraction:
    """Parse an exact "p/q" coefficient string"""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, bool) or isinstance(text, float):
        raise ValueError(f"Coefficients must be exact, got {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    match = _COEFF_PATTERN.match(str(text))
    if not match:
        raise ValueError(f"Malformed coefficient {text!r}")
    numerator = int(match.group(1))
    denominator = int(match.group(2)) if match.group(2) is not None else 1
    if denominator == 0:
        raise ValueError(f"Zero denominator in coefficient {text!r}")
    return Fraction(numerator, denominator)


def format_scalar(value: Fraction) -> str:
    """Render a scalar as a canonical "p/q" string"""
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def sign(parity: int) -> int:
    return -1 if parity % 2 else 1


class SparseVector(dict):
    def __init__(self, data: Any = ()):
        super().__init__()
        if isinstance(data, dict):
            data = data.items()
        self.__iadd__(data)

    def __getitem__(self, key):
        return self.get(key, Fraction(0))

    def iadd_coef(self, coef, other: 'SparseVector') -> 'SparseVector':
        # self += coef * other
        if coef == 0:
            return self
        for k, x in other.items():
            x2 = self.get(k, 0) + coef * x
            if x2 == 0:
                self.pop(k, None)
            else:
                self[k] = x2
        return self

    def add_term(self, key, coef) -> 'SparseVector':
        if coef == 0:
            return self
        x2 = self.get(key, 0) + coef
        if x2 == 0:
            self.pop(key, None)
        else:
            self[key] = Fraction(x2)
        return self

    def __iadd__(self, other: Iterable[Tuple[Any, Any]]):
        if isinstance(other, dict):
            other = other.items()
        for k, x in other:
            self.add_term(k, Fraction(x))
        return self

    def __add__(self, other):
        res = SparseVector(self)
        res.__iadd__(other)
        return res

    def __sub__(self, other):
        res = SparseVector(self)
        res.iadd_coef(-1, other)
        return res

    def __neg__(self):
        return self.scaled(-1)

    def scaled(self, coef) -> 'SparseVector':
        if coef == 0:
            return SparseVector()
        return SparseVector((k, coef * x) for k, x in self.items())

    def is_zero(self) -> bool:
        return len(self) == 0
