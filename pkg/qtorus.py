import logging
import random
import time
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from reporting import VerificationReport, build_report
from scalars import Scalar, s
from torus import (PENTAGON_GRADING, SW_GRADING, ConeGrading, LatticeVector, PBWAlgebra, TorusElement,
                   bracket, dilog_element, order_key, quadratic_refinement, random_element, sw_middle_factors)

logger = logging.getLogger(__name__)

QTKey = Tuple[int, int]


class QTElement:
    """Σ c_{ij} ŷ^i x̂^j in normal order (ŷ before x̂), truncated by the torus weight."""

    __slots__ = ('torus', 'terms')

    def __init__(self, torus: 'QuantumTorus', terms: Dict[QTKey, object]):
        self.torus = torus
        clean: Dict[QTKey, Scalar] = {}
        for key, c in terms.items():
            key = (int(key[0]), int(key[1]))
            if not torus.keeps(key):
                continue
            c = c if isinstance(c, Scalar) else Scalar.const(c)
            clean[key] = clean.get(key, Scalar.zero()) + c
        self.terms = {k: c for k, c in clean.items() if c}

    def __add__(self, other: 'QTElement') -> 'QTElement':
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, Scalar.zero()) + c
        return QTElement(self.torus, out)

    def __neg__(self) -> 'QTElement':
        return QTElement(self.torus, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: 'QTElement') -> 'QTElement':
        return self + (-other)

    def scale(self, factor) -> 'QTElement':
        factor = factor if isinstance(factor, Scalar) else Scalar.const(factor)
        return QTElement(self.torus, {k: factor * c for k, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, QTElement):
            return self.torus.multiply(self, other)
        return self.scale(other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, QTElement):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, i: int, j: int) -> Scalar:
        return self.terms.get((i, j), Scalar.zero())

    def render(self) -> str:
        if not self.terms:
            return '0'
        return ' + '.join(f"({self.terms[k]})*y^{k[0]}x^{k[1]}" for k in sorted(self.terms))

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"QTElement({self.render()!r})"


class QuantumTorus:
    """ŷx̂ = q x̂ŷ with an optional cone grading; ``grading=None`` means no truncation."""

    def __init__(self, grading: Optional[ConeGrading] = None, max_weight: Optional[int] = None):
        if (grading is None) != (max_weight is None):
            raise ValueError("grading and max_weight go together")
        self.grading = grading
        self.max_weight = max_weight

    def weight(self, key: QTKey) -> int:
        if key == (0, 0):
            return 0
        return self.grading.weight(key)

    def keeps(self, key: QTKey) -> bool:
        return self.grading is None or self.weight(key) <= self.max_weight

    def unit(self) -> QTElement:
        return QTElement(self, {(0, 0): Scalar.one()})

    def zero(self) -> QTElement:
        return QTElement(self, {})

    def monomial(self, i: int, j: int, coeff=None) -> QTElement:
        return QTElement(self, {(i, j): Scalar.one() if coeff is None else coeff})

    def multiply(self, x: QTElement, y: QTElement) -> QTElement:
        """(ŷ^i x̂^j)(ŷ^k x̂^l) = q^{-jk} ŷ^{i+k} x̂^{j+l}."""
        out: Dict[QTKey, Scalar] = {}
        for (i, j), c1 in x.terms.items():
            for (k, l), c2 in y.terms.items():
                key = (i + k, j + l)
                if not self.keeps(key):
                    continue
                out[key] = out.get(key, Scalar.zero()) + c1 * c2 * Scalar.s_power(-2 * j * k)
        return QTElement(self, out)

    def product(self, factors: Sequence[QTElement]) -> QTElement:
        result = self.unit()
        for f in factors:
            result = self.multiply(result, f)
        return result

    def power(self, x: QTElement, n: int) -> QTElement:
        result = self.unit()
        for _ in range(n):
            result = self.multiply(result, x)
        return result

    def specialize_P(self, x: LatticeVector) -> QTElement:
        """P_{i,j} ↦ q^{-ij/2} ŷ^i x̂^j."""
        i, j = x
        return self.monomial(i, j, Scalar.s_power(-i * j))

    def specialize(self, element: TorusElement) -> QTElement:
        """Image of a torus element, P-monomials mapped multiplicatively in PBW order."""
        total = self.zero()
        for mono, c in element.terms.items():
            image = self.product([self.specialize_P(x) for x in mono])
            total = total + image.scale(c)
        return total

    def pochhammer_inverse(self, u: QTElement, n_max: Optional[int] = None) -> QTElement:
        """(u;q)_∞^{-1} = Σ_n u^n / Π_{k≤n}(1 - q^k) for a single monomial u."""
        n_max = self._terms_needed(u) if n_max is None else n_max
        result = self.unit()
        term = self.unit()
        for n in range(1, n_max + 1):
            term = self.multiply(term, u).scale(Scalar.const(1 / (1 - s ** (2 * n))))
            if term.is_zero():
                break
            result = result + term
        return result

    def pochhammer(self, u: QTElement, n_max: Optional[int] = None) -> QTElement:
        """(u;q)_∞ = Σ_n (-1)^n q^{n(n-1)/2} u^n / Π_{k≤n}(1 - q^k)."""
        n_max = self._terms_needed(u) if n_max is None else n_max
        result = self.unit()
        term = self.unit()
        for n in range(1, n_max + 1):
            factor = Scalar.const(-s ** (2 * (n - 1)) / (1 - s ** (2 * n)))
            term = self.multiply(term, u).scale(factor)
            if term.is_zero():
                break
            result = result + term
        return result

    def phi(self, xi: QTElement, n_max: Optional[int] = None) -> QTElement:
        """Φ(ξ) = (q^{1/2}ξ; q)_∞^{-1}."""
        return self.pochhammer_inverse(xi.scale(Scalar.s_power(1)), n_max)

    def _terms_needed(self, u: QTElement) -> int:
        if self.grading is None:
            raise ValueError("An infinite product needs a weight bound")
        if u.is_zero():
            return 0
        w = min(self.weight(k) for k in u.terms)
        if w <= 0:
            raise ValueError(f"Series variable {u} has no positive weight")
        return self.max_weight // w

    def inverse_series(self, x: QTElement) -> QTElement:
        """1/x for x = 1 + (positive weight), as a geometric series."""
        rest = x - self.unit()
        if (0, 0) in rest.terms:
            raise ValueError("Inverse series needs constant term 1")
        result = self.unit()
        term = self.unit()
        for _ in range(self.max_weight):
            term = self.multiply(term, -rest)
            if term.is_zero():
                break
            result = result + term
        return result


def specialize_P(x: LatticeVector, torus: Optional[QuantumTorus] = None) -> QTElement:
    return (torus or QuantumTorus()).specialize_P(x)


def qt_multiply(x: QTElement, y: QTElement) -> QTElement:
    return x.torus.multiply(x, y)


def gl1_dilog(torus: QuantumTorus, x: LatticeVector, xi=None) -> QTElement:
    """(ξ q^{1/2-ij/2} ŷ^i x̂^j ; q)_∞^{-1} truncated at the torus weight."""
    i, j = x
    xi = Scalar.one() if xi is None else (xi if isinstance(xi, Scalar) else Scalar.const(xi))
    if not xi:
        return torus.unit()
    u = torus.monomial(i, j, xi * Scalar.s_power(1 - i * j))
    return torus.pochhammer_inverse(u)


def _qt_residuals(lhs: QTElement, rhs: QTElement) -> List[Tuple[str, Scalar]]:
    diff = lhs - rhs
    keys = set(lhs.terms) | set(rhs.terms)
    return [(f"({k[0]},{k[1]})", diff.coefficient(*k)) for k in sorted(keys, key=order_key)]


def verify_dilog_images(max_weight: int, grading: ConeGrading = PENTAGON_GRADING,
                        vectors: Iterable[LatticeVector] = ((1, 0), (0, 1), (1, 1)), xi=None) -> VerificationReport:
    """gl1_dilog agrees with the specialized skein dilogarithm."""
    started = time.perf_counter()
    algebra = PBWAlgebra(grading, max_weight)
    torus = QuantumTorus(grading, max_weight)
    residuals = []
    for x in vectors:
        image = torus.specialize(dilog_element(algebra, x, xi))
        residuals.append((f"Psi{x}".replace(' ', ''), image - gl1_dilog(torus, x, xi)))
    return build_report('gl1 dilogarithm image', max_weight, residuals, started)


def verify_gl1_pentagon(max_weight: int, twisted: bool = False) -> VerificationReport:
    started = time.perf_counter()
    torus = QuantumTorus(PENTAGON_GRADING, max_weight)
    if twisted:
        psi = lambda x: gl1_dilog(torus, x, quadratic_refinement(x))
        lhs = torus.product([psi((1, 0)), psi((0, 1))])
        rhs = torus.product([psi((0, 1)), psi((1, 1)), psi((1, 0))])
    else:
        lhs = torus.product([gl1_dilog(torus, (1, 0)), gl1_dilog(torus, (0, 1))])
        rhs = torus.product([gl1_dilog(torus, (0, 1)), gl1_dilog(torus, (1, 1), -1), gl1_dilog(torus, (1, 0))])
    name = 'gl1 twisted pentagon' if twisted else 'gl1 pentagon'
    return build_report(name, max_weight, _qt_residuals(lhs, rhs), started)


def gl1_middle_factor(torus: QuantumTorus) -> QTElement:
    """Φ(q^{1/2}x̂²)^{-1} Φ(q^{-1/2}x̂²)^{-1} = (q x̂²; q)_∞ (x̂²; q)_∞."""
    x2 = torus.monomial(0, 2)
    return torus.multiply(torus.pochhammer(x2.scale(Scalar.s_power(2))), torus.pochhammer(x2))


def verify_gl1_sw(max_weight: int) -> VerificationReport:
    """gl(1) SW identity plus the comparison of the middle factors with Φ."""
    started = time.perf_counter()
    torus = QuantumTorus(SW_GRADING, max_weight)
    psi = lambda x: gl1_dilog(torus, x)
    lhs = torus.product([psi((1, 1)), psi((-1, 1))])
    odd = list(range(1, max_weight + 1, 2))
    middle = gl1_middle_factor(torus)
    rhs = torus.product([psi((-1, j)) for j in odd] + [middle] + [psi((1, j)) for j in reversed(odd)])
    residuals = _qt_residuals(lhs, rhs)

    algebra = PBWAlgebra(SW_GRADING, max_weight)
    a10_inv, a01_inv = sw_middle_factors(algebra)
    image = torus.multiply(torus.specialize(a10_inv), torus.specialize(a01_inv))
    residuals.extend((f"middle {label}", value) for label, value in _qt_residuals(image, middle))
    phi_side = torus.multiply(torus.inverse_series(torus.phi(torus.monomial(0, 2, Scalar.s_power(1)))),
                              torus.inverse_series(torus.phi(torus.monomial(0, 2, Scalar.s_power(-1)))))
    residuals.extend((f"phi {label}", value) for label, value in _qt_residuals(phi_side, middle))
    return build_report('gl1 sw wall-crossing', max_weight, residuals, started)


DEFAULT_PAIRS = [((1, 0), (0, 1)), ((0, 1), (0, 2)), ((1, 1), (-1, 1)), ((2, 1), (1, 3)),
                 ((-1, 2), (3, -1)), ((1, 0), (-1, 0))]


def gl1_homomorphism_check(samples: Optional[Sequence[Tuple[LatticeVector, LatticeVector]]] = None,
                           seed: int = 0, extra: int = 0) -> VerificationReport:
    """[φ(P_x), φ(P_y)] = {det}φ(P_{x+y}) in the untruncated quantum torus."""
    started = time.perf_counter()
    torus = QuantumTorus()
    pairs = list(samples or DEFAULT_PAIRS)
    rng = random.Random(seed)
    for _ in range(extra):
        x = (rng.randint(-3, 3), rng.randint(1, 3))
        y = (rng.randint(-3, 3), rng.randint(-3, 3))
        if y != (0, 0):
            pairs.append((x, y))
    residuals = []
    for x, y in pairs:
        px, py = torus.specialize_P(x), torus.specialize_P(y)
        lhs = torus.multiply(px, py) - torus.multiply(py, px)
        coeff, target = bracket(x, y)
        rhs = torus.specialize_P(target).scale(coeff) if target is not None else torus.zero()
        residuals.append((f"[P{x},P{y}]".replace(' ', ''), lhs - rhs))
    return build_report('gl1 homomorphism', len(pairs), residuals, started)


def verify_intertwining(seed: int = 0, cases: int = 10, max_weight: int = 6) -> VerificationReport:
    """specialize(x*y) = specialize(x)*specialize(y) on random PBW elements."""
    started = time.perf_counter()
    rng = random.Random(seed)
    algebra = PBWAlgebra(PENTAGON_GRADING, max_weight)
    torus = QuantumTorus(PENTAGON_GRADING, max_weight)
    vectors = [(1, 0), (0, 1), (1, 1), (2, 1), (1, 2)]
    residuals = []
    for k in range(cases):
        x = random_element(algebra, rng, vectors)
        y = random_element(algebra, rng, vectors)
        lhs = torus.specialize(x * y)
        rhs = torus.multiply(torus.specialize(x), torus.specialize(y))
        residuals.append((f"case {k}", lhs - rhs))
    return build_report('gl1 intertwining', max_weight, residuals, started)


def functional_equation_check(max_weight: int = 8) -> VerificationReport:
    """F(u) = (1-u)^{-1} F(qu) for F = (u;q)_∞^{-1}, with u = x̂."""
    started = time.perf_counter()
    torus = QuantumTorus(SW_GRADING, max_weight)
    u = torus.monomial(0, 1)
    lhs = torus.multiply(torus.unit() - u, torus.pochhammer_inverse(u))
    rhs = torus.pochhammer_inverse(u.scale(Scalar.s_power(2)))
    return build_report('pochhammer functional equation', max_weight, _qt_residuals(lhs, rhs), started)


def gl1_report(max_weight: int, which: str = 'all') -> List[VerificationReport]:
    checks = {
        'pentagon': lambda: verify_gl1_pentagon(max_weight),
        'twisted': lambda: verify_gl1_pentagon(max_weight, twisted=True),
        'sw': lambda: verify_gl1_sw(max_weight),
        'dilog': lambda: verify_dilog_images(min(max_weight, 4)),
        'homomorphism': lambda: gl1_homomorphism_check(),
        'functional': lambda: functional_equation_check(max_weight),
    }
    names = list(checks) if which == 'all' else [which]
    for name in names:
        if name not in checks:
            raise ValueError(f"Unsupported gl1 check: {name}. Choose from {['all'] + list(checks.keys())}")
    logger.info("Running gl(1) checks %s to weight %d", names, max_weight)
    return [checks[name]() for name in names]
