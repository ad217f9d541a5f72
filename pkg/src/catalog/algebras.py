import logging
import re
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator

from src.ainfty.dg import dg_data, from_dg
from src.ainfty.errors import AlgebraError
from src.ainfty.structures import AInftyAlgebra
from src.linalg.scalars import SparseVector
from src.linalg.spaces import BasisElement, BigradedSpace

logger = logging.getLogger(__name__)

UNIT = '1'
SIMPLE_KEYS = ('lambda1', 'dual_numbers', 'y_cube')
_KEY_PATTERN = re.compile(r'^\s*(\w+)\s*(?:\((.*)\))?\s*$')


class CatalogKey(BaseModel):
    """Name of a catalog algebra with its parameters"""
    model_config = ConfigDict(extra='forbid', frozen=True)

    name: str
    n: Optional[int] = Field(None, ge=2)
    weight_bound: Optional[int] = Field(None, ge=1)
    factors: Tuple['CatalogKey', ...] = ()

    @field_validator('name')
    @classmethod
    def validate_name(cls, v: str) -> str:
        """Only catalog names are accepted"""
        if v not in SIMPLE_KEYS + ('truncated_poly', 'free_C', 'tensor'):
            raise ValueError(f"Unknown catalog algebra '{v}'")
        return v

    @classmethod
    def parse(cls, text: str) -> 'CatalogKey':
        """Parse strings such as truncated_poly(6), free_C(4), tensor(lambda1,dual_numbers)"""
        match = _KEY_PATTERN.match(text)
        if not match:
            raise ValueError(f"Malformed catalog key {text!r}")
        name, args = match.group(1), match.group(2)
        if name == 'tensor':
            parts = _split_top_level(args or '')
            if len(parts) != 2:
                raise ValueError(f"tensor(...) needs two factors, got {text!r}")
            return cls(name=name, factors=tuple(cls.parse(p) for p in parts))
        if name == 'truncated_poly':
            return cls(name=name, n=int(args))
        if name == 'free_C':
            return cls(name=name, weight_bound=int(args))
        if args:
            raise ValueError(f"'{name}' takes no parameters")
        return cls(name=name)

    def __str__(self) -> str:
        if self.name == 'tensor':
            return f"tensor({self.factors[0]},{self.factors[1]})"
        if self.name == 'truncated_poly':
            return f"truncated_poly({self.n})"
        if self.name == 'free_C':
            return f"free_C({self.weight_bound})"
        return self.name


CatalogKey.model_rebuild()


def _split_top_level(text: str) -> List[str]:
    parts, depth, current = [], 0, ''
    for ch in text:
        if ch == ',' and depth == 0:
            parts.append(current)
            current = ''
            continue
        depth += ch == '('
        depth -= ch == ')'
        current += ch
    if current.strip():
        parts.append(current)
    return [p.strip() for p in parts]


def make_algebra(key) -> AInftyAlgebra:
    """Build a catalog algebra from a CatalogKey or its string form"""
    if isinstance(key, str):
        key = CatalogKey.parse(key)
    try:
        if key.name == 'lambda1':
            return lambda1()
        if key.name == 'dual_numbers':
            return truncated_poly(2, variable='eps', name='dual_numbers')
        if key.name == 'y_cube':
            return truncated_poly(3, variable='y', degree=1, name='y_cube')
        if key.name == 'truncated_poly':
            if key.n is None:
                raise ValueError("truncated_poly needs n")
            return truncated_poly(key.n)
        if key.name == 'free_C':
            if key.weight_bound is None:
                raise ValueError("free_C needs a weight bound")
            return free_C(key.weight_bound)
        return tensor_dg(make_algebra(key.factors[0]), make_algebra(key.factors[1]))
    except Exception as e:
        logger.error(f"Error building catalog algebra {key}: {str(e)}")
        raise


def lambda1() -> AInftyAlgebra:
    """k<xi>/xi^2 with |xi| = 1, w(xi) = 1"""
    space = BigradedSpace.from_triples([(UNIT, 0, 0), ('xi', 1, 1)])
    return from_dg(space, {}, {}, unit=UNIT, name='lambda1')


def power_name(variable: str, k: int) -> str:
    if k == 0:
        return UNIT
    return variable if k == 1 else f"{variable}^{k}"


def truncated_poly(n: int, variable: str = 'x', degree: int = 0, name: Optional[str] = None) -> AInftyAlgebra:
    """k[x]/x^n with w(x^k) = k and |x^k| = k |x|"""
    if n < 2:
        raise ValueError(f"truncated_poly needs n >= 2, got {n}")
    space = BigradedSpace.from_triples((power_name(variable, k), k * degree, k) for k in range(n))
    product = {}
    for i in range(1, n):
        for j in range(1, n - i):
            product[(power_name(variable, i), power_name(variable, j))] = {power_name(variable, i + j): 1}
    return from_dg(space, {}, product, unit=UNIT, name=name or f"k[{variable}]/{variable}^{n}")


def word_name(word: Tuple[int, ...]) -> str:
    return ''.join(f"t{g}" for g in word) if word else UNIT


_GENERATORS = {1: (0, 1), 2: (-1, 2)}


def monomials(weight_bound: int) -> List[Tuple[int, ...]]:
    """Words in t1 (weight 1) and t2 (weight 2) up to the bound, by weight then lexicographically"""
    by_weight: Dict[int, List[Tuple[int, ...]]] = {0: [()]}
    for w in range(1, weight_bound + 1):
        words = []
        for g, (_, gw) in _GENERATORS.items():
            if gw <= w:
                words.extend(word + (g,) for word in by_weight[w - gw])
        by_weight[w] = sorted(words)
    return [word for w in range(weight_bound + 1) for word in by_weight[w]]


def free_C(weight_bound: int) -> AInftyAlgebra:
    """Free algebra on t1 (|t1|=0, w=1), t2 (|t2|=-1, w=2) with d t2 = t1^2, cut at weight_bound"""
    if weight_bound < 1:
        raise ValueError(f"free_C needs weight_bound >= 1, got {weight_bound}")
    words = monomials(weight_bound)
    weight = {word: sum(_GENERATORS[g][1] for g in word) for word in words}
    space = BigradedSpace(BasisElement(word_name(word), -word.count(2), weight[word]) for word in words)
    differential = {}
    for word in words:
        image = SparseVector()
        for pos, g in enumerate(word):
            if g == 2:
                sign = -1 if word[:pos].count(2) % 2 else 1
                image.add_term(word_name(word[:pos] + (1, 1) + word[pos + 1:]), sign)
        if image:
            differential[word_name(word)] = image
    product = {}
    for u in words:
        if not u:
            continue
        for v in words:
            if v and weight[u] + weight[v] <= weight_bound:
                product[(word_name(u), word_name(v))] = {word_name(u + v): 1}
    algebra = from_dg(space, differential, product, unit=UNIT, name=f"C_{weight_bound}",
                      leibniz_on=['t1', 't2'])
    logger.info(f"Built free_C({weight_bound}): {space.dim} monomials")
    return algebra


def tensor_name(a: str, b: str) -> str:
    return f"{a}⊗{b}"


def tensor_dg(first: AInftyAlgebra, second: AInftyAlgebra) -> AInftyAlgebra:
    """Tensor product of DG algebras with the Koszul sign"""
    if first.max_arity > 2 or second.max_arity > 2:
        raise AlgebraError("tensor_dg only accepts DG algebras (no operations above arity 2)")
    d1, p1 = dg_data(first)
    d2, p2 = dg_data(second)
    A, B = first.space, second.space
    elements = [BasisElement(tensor_name(a.name, b.name), a.degree + b.degree, a.weight + b.weight)
                for a in A for b in B]
    space = BigradedSpace(elements)
    differential = {}
    for a in A.names:
        for b in B.names:
            image = SparseVector()
            for x, c in d1.get(a, {}).items():
                image.add_term(tensor_name(x, b), c)
            sign = -1 if A.degree(a) % 2 else 1
            for y, c in d2.get(b, {}).items():
                image.add_term(tensor_name(a, y), sign * c)
            if image:
                differential[tensor_name(a, b)] = image
    product = {}
    for (a, a2), out_a in p1.items():
        for (b, b2), out_b in p2.items():
            sign = -1 if (B.degree(b) * A.degree(a2)) % 2 else 1
            value = SparseVector()
            for x, cx in out_a.items():
                for y, cy in out_b.items():
                    value.add_term(tensor_name(x, y), sign * cx * cy)
            if value:
                product[(tensor_name(a, b), tensor_name(a2, b2))] = value
    unit = None
    if first.unit is not None and second.unit is not None:
        unit = tensor_name(first.unit, second.unit)
    return from_dg(space, differential, product, unit=unit, name=f"{first.name}⊗{second.name}")
