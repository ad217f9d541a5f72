import logging
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from src.ainfty.signs import parity_sign, shifted_sum
from src.ainfty.structures import AInftyModule
from src.linalg.scalars import SparseVector
from src.linalg.spaces import BasisElement, BigradedSpace, ComplexSlice, LinearMap

logger = logging.getLogger(__name__)

# Hom^infinity between right A-infinity modules, truncated.
#
# A cochain is a SparseVector keyed by (m, (a_1..a_n), out): the component
# phi_n sends (m, a_1..a_n) to out with that coefficient. Arguments are
# reduced (no unit). Cochain weight is w(m) + sum w(a) - w(out); a basis
# cochain of arity n has degree |out| - |m| - sum |a| + n.
#
# d(phi)_n(m, a) = sum mu^N(phi_i(m, a_1..a_i), ..)
#                - sum (-1)^|phi| phi(mu^M(m, a_1..a_i), ..)
#                - sum (-1)^(|phi| + |m| + l_1^(i-1)(a)) phi(m, .., mu^A(a_i..a_j), ..)
# (phi psi)_n(m, a) = sum phi(psi_i(m, a_1..a_i), a_(i+1)..)

CochainKey = Tuple[str, Tuple[str, ...], str]


def cochain_name(key: CochainKey) -> str:
    m, args, out = key
    return f"{m}|{','.join(args)}|{out}"


class HomComplex:
    def __init__(self, source: AInftyModule, target: AInftyModule, max_weight: int, max_arity: int):
        if source.algebra is not target.algebra:
            raise ValueError("Hom complex needs modules over the same algebra")
        self.source = source
        self.target = target
        self.algebra = source.algebra
        self.max_weight = max_weight
        self.max_arity = max_arity
        self.reduced = [n for n in self.algebra.reduced_names]
        alg = self.algebra.space
        self._weights = {a: alg.weight(a) for a in self.reduced}
        if any(w <= 0 for w in self._weights.values()):
            raise ValueError("Truncated Hom complexes need positively weighted reduced elements")
        self._inner = self._producers()
        self._mu_n_by_first = self._by_first(target)
        self._mu_m_by_output = self._by_output(source)

    def _producers(self):
        found: Dict[str, List[Tuple[Tuple[str, ...], object]]] = {}
        unit = self.algebra.unit
        for _, key, out in self.algebra.entries():
            if unit is not None and unit in key:
                continue
            for name, coef in out.items():
                found.setdefault(name, []).append((key, coef))
        return found

    def _by_first(self, module: AInftyModule):
        found: Dict[str, List] = {}
        unit = self.algebra.unit
        for _, key, out in module.entries():
            if unit is not None and unit in key[1:]:
                continue
            found.setdefault(key[0], []).append((key[1:], out))
        return found

    def _by_output(self, module: AInftyModule):
        found: Dict[str, List] = {}
        unit = self.algebra.unit
        for _, key, out in module.entries():
            if unit is not None and unit in key[1:]:
                continue
            for name, coef in out.items():
                found.setdefault(name, []).append((key, coef))
        return found

    def degree(self, key: CochainKey) -> int:
        m, args, out = key
        alg = self.algebra.space
        return (self.target.space.degree(out) - self.source.space.degree(m)
                - sum(alg.degree(a) for a in args) + len(args))

    def weight(self, key: CochainKey) -> int:
        m, args, out = key
        return (self.source.space.weight(m) + sum(self._weights[a] for a in args)
                - self.target.space.weight(out))

    def _tuples(self, weight: int, length: int) -> List[Tuple[str, ...]]:
        @lru_cache(maxsize=None)
        def build(remaining: int, slots: int) -> Tuple[Tuple[str, ...], ...]:
            if slots == 0:
                return ((),) if remaining == 0 else ()
            result = []
            for a in self.reduced:
                w = self._weights[a]
                if w <= remaining:
                    result.extend((a,) + rest for rest in build(remaining - w, slots - 1))
            return tuple(result)
        return list(build(weight, length))

    def basis(self, weight: int, degree: Optional[int] = None) -> List[CochainKey]:
        """Basis cochains of one weight (and degree), arity at most max_arity"""
        keys = []
        for m in self.source.space.names:
            for out in self.target.space.names:
                arg_weight = weight - self.source.space.weight(m) + self.target.space.weight(out)
                if arg_weight < 0:
                    continue
                for n in range(self.max_arity + 1):
                    for args in self._tuples(arg_weight, n):
                        key = (m, args, out)
                        if degree is None or self.degree(key) == degree:
                            keys.append(key)
        return keys

    def identity(self) -> SparseVector:
        if self.source.space != self.target.space:
            raise ValueError("Identity needs equal source and target")
        return SparseVector(((m, (), m), 1) for m in self.source.space.names)

    def _d_basis(self, key: CochainKey) -> SparseVector:
        m0, args0, out0 = key
        phi_degree = self.degree(key)
        result = SparseVector()
        limit = self.max_arity
        for rest, out in self._mu_n_by_first.get(out0, ()):
            if len(args0) + len(rest) > limit:
                continue
            for name, coef in out.items():
                result.add_term((m0, args0 + rest, name), coef)
        sign2 = -parity_sign(phi_degree)
        for key_m, coef in self._mu_m_by_output.get(m0, ()):
            if len(key_m) - 1 + len(args0) > limit:
                continue
            result.add_term((key_m[0], key_m[1:] + args0, out0), sign2 * coef)
        alg = self.algebra.space
        m_degree = self.source.space.degree(m0)
        for pos, c in enumerate(args0):
            prefix = shifted_sum(alg.degree(a) for a in args0[:pos])
            sign3 = -parity_sign(phi_degree + m_degree + prefix)
            for key_a, coef in self._inner.get(c, ()):
                if len(args0) - 1 + len(key_a) > limit:
                    continue
                result.add_term((m0, args0[:pos] + key_a + args0[pos + 1:], out0), sign3 * coef)
        return result

    def differential(self, cochain: SparseVector) -> SparseVector:
        result = SparseVector()
        for key, coef in cochain.items():
            result.iadd_coef(coef, self._d_basis(key))
        return result

    def compose(self, phi: SparseVector, psi: SparseVector) -> SparseVector:
        """phi after psi, truncated at max_arity"""
        by_input: Dict[str, List] = {}
        for (m1, args1, out1), c1 in phi.items():
            by_input.setdefault(m1, []).append((args1, out1, c1))
        result = SparseVector()
        for (m2, args2, out2), c2 in psi.items():
            for args1, out1, c1 in by_input.get(out2, ()):
                if len(args2) + len(args1) <= self.max_arity:
                    result.add_term((m2, args2 + args1, out1), c1 * c2)
        return result

    def cochain_degree(self, cochain: SparseVector) -> Optional[int]:
        degrees = {self.degree(k) for k in cochain}
        if len(degrees) > 1:
            raise ValueError(f"Cochain is not homogeneous: degrees {sorted(degrees)}")
        return degrees.pop() if degrees else None

    def mu1(self, phi: SparseVector) -> SparseVector:
        return self.differential(phi).scaled(-1)

    def mu2(self, phi: SparseVector, psi: SparseVector) -> SparseVector:
        degree = self.cochain_degree(phi)
        if degree is None:
            return SparseVector()
        return self.compose(phi, psi).scaled(parity_sign(degree))

    def slice(self, weight: int) -> ComplexSlice:
        """The weight-w part as a finite cochain complex"""
        keys = self.basis(weight)
        by_degree: Dict[int, List[CochainKey]] = {}
        for key in keys:
            by_degree.setdefault(self.degree(key), []).append(key)
        spaces = {p: BigradedSpace(BasisElement(cochain_name(k), p, weight) for k in ks)
                  for p, ks in by_degree.items()}
        differentials = {}
        for p, ks in by_degree.items():
            target = spaces.get(p + 1, BigradedSpace([]))
            columns = {}
            for key in ks:
                image = self._d_basis(key)
                columns[cochain_name(key)] = SparseVector((cochain_name(k), c) for k, c in image.items())
            differentials[p] = LinearMap(spaces[p], target, columns, (1, 0))
        logger.debug(f"Hom slice weight {weight}: {len(keys)} cochains in degrees {sorted(spaces)}")
        return ComplexSlice(spaces, differentials)

    def named(self, cochain: SparseVector) -> SparseVector:
        return SparseVector((cochain_name(k), c) for k, c in cochain.items())
