import itertools
import logging
import random
import time
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from reporting import VerificationReport, build_report
from scalars import QField, Scalar, quantum_bracket, s
from symfun import SCHUR, Partition, SymSeries, multiply as sym_multiply, partitions_of
from annulus import apply_meridian, power_sum_element

logger = logging.getLogger(__name__)

LatticeVector = Tuple[int, int]
PBWMonomial = Tuple[LatticeVector, ...]


def det(x: LatticeVector, y: LatticeVector) -> int:
    return x[0] * y[1] - x[1] * y[0]


def add(x: LatticeVector, y: LatticeVector) -> LatticeVector:
    return (x[0] + y[0], x[1] + y[1])


def scale(x: LatticeVector, d: int) -> LatticeVector:
    return (d * x[0], d * x[1])


def check_vector(x: LatticeVector) -> LatticeVector:
    x = (int(x[0]), int(x[1]))
    if x == (0, 0):
        raise ValueError("Lattice vectors must be nonzero")
    return x


def bracket(x: LatticeVector, y: LatticeVector) -> Tuple[Scalar, Optional[LatticeVector]]:
    """[P_x, P_y] = {det(x,y)} P_{x+y}; collinear pairs give (0, None)."""
    d = det(check_vector(x), check_vector(y))
    if d == 0:
        return Scalar.zero(), None
    return quantum_bracket(d), add(x, y)


@lru_cache(maxsize=None)
def _bracket_value(d: int):
    return s ** d - s ** (-d)


@lru_cache(maxsize=None)
def order_key(x: LatticeVector) -> Tuple[Fraction, int]:
    """Angle in [0, 2π) (as an exact diamond angle), then squared length.

    The unit class (0,0) has no angle and sorts before every other class.
    """
    i, j = x
    if i == 0 and j == 0:
        return Fraction(-1), 0
    t = Fraction(i, abs(i) + abs(j))
    angle = 1 - t if (j > 0 or (j == 0 and i > 0)) else 3 + t
    return angle, i * i + j * j


def sort_monomial(vectors: Iterable[LatticeVector]) -> PBWMonomial:
    return tuple(sorted(vectors, key=order_key))


def quadratic_refinement(x: LatticeVector) -> int:
    """σ(i,j) = (-1)^{ij+i+j}."""
    i, j = x
    return -1 if (i * j + i + j) % 2 else 1


@dataclass(frozen=True)
class ConeGrading:
    """Linear weight w(i,j) = u·i + v·j used to truncate completions."""
    name: str
    u: int
    v: int

    def weight(self, x: LatticeVector) -> int:
        w = self.u * x[0] + self.v * x[1]
        if w <= 0:
            raise ValueError(f"Weight functional {self.name} is not positive on class {x}")
        return w


PENTAGON_GRADING = ConeGrading('pentagon', 1, 1)
SW_GRADING = ConeGrading('sw', 0, 1)


class PBWAlgebra:
    """Enveloping algebra of the sine bracket with PBW normal order and weight truncation.

    ``strategy`` chooses which descent to straighten first; every strategy must
    give the same normal form.
    """

    STRATEGIES = ('leftmost', 'rightmost', 'random')

    def __init__(self, grading: ConeGrading, max_weight: int, strategy: str = 'leftmost', seed: int = 0):
        if max_weight < 0:
            raise ValueError("max_weight must be non-negative")
        if strategy not in self.STRATEGIES:
            raise ValueError(f"Unsupported strategy: {strategy}. Choose from {list(self.STRATEGIES)}")
        self.grading = grading
        self.max_weight = max_weight
        self.strategy = strategy
        self._rng = random.Random(seed)
        self._cache: Dict[PBWMonomial, Dict[PBWMonomial, object]] = {}

    def weight(self, monomial: Iterable[LatticeVector]) -> int:
        return sum(self.grading.weight(x) for x in monomial)

    def _descent(self, word: PBWMonomial) -> Optional[int]:
        positions = [p for p in range(len(word) - 1) if order_key(word[p]) > order_key(word[p + 1])]
        if not positions:
            return None
        if self.strategy == 'leftmost':
            return positions[0]
        if self.strategy == 'rightmost':
            return positions[-1]
        return self._rng.choice(positions)

    def normal_order(self, word: Sequence[LatticeVector]) -> Dict[PBWMonomial, object]:
        """Straighten a word of generators into sorted monomials with Q(s) coefficients."""
        word = tuple(word)
        cached = self._cache.get(word)
        if cached is not None:
            return cached
        p = self._descent(word)
        if p is None:
            result = {word: QField(1)}
        else:
            x, y = word[p], word[p + 1]
            result = dict(self.normal_order(word[:p] + (y, x) + word[p + 2:]))
            d = det(x, y)
            if d:
                merged = word[:p] + (add(x, y),) + word[p + 2:]
                factor = _bracket_value(d)
                for mono, c in self.normal_order(merged).items():
                    result[mono] = result.get(mono, 0) + factor * c
                result = {m: c for m, c in result.items() if c}
        if self.strategy != 'random':
            self._cache[word] = result
        return result

    # element constructors
    def unit(self) -> 'TorusElement':
        return TorusElement(self, {(): Scalar.one()})

    def zero(self) -> 'TorusElement':
        return TorusElement(self, {})

    def element_for(self, x: LatticeVector, coeff=None) -> 'TorusElement':
        coeff = Scalar.one() if coeff is None else coeff
        return TorusElement(self, {(check_vector(x),): coeff})

    def monomial(self, vectors: Iterable[LatticeVector], coeff=None) -> 'TorusElement':
        """Product of generators in the given order, normal ordered."""
        coeff = Scalar.one() if coeff is None else coeff
        word = tuple(check_vector(x) for x in vectors)
        if self.weight(word) > self.max_weight:
            return self.zero()
        return TorusElement(self, {m: coeff * c for m, c in self.normal_order(word).items()})

    def multiply(self, x: 'TorusElement', y: 'TorusElement') -> 'TorusElement':
        if x.algebra is not self or y.algebra is not self:
            raise ValueError("Elements belong to different completions")
        out: Dict[PBWMonomial, Scalar] = {}
        for m1, c1 in x.terms.items():
            w1 = self.weight(m1)
            for m2, c2 in y.terms.items():
                if w1 + self.weight(m2) > self.max_weight:
                    continue
                c = c1 * c2
                for mono, k in self.normal_order(m1 + m2).items():
                    out[mono] = out.get(mono, Scalar.zero()) + c * k
        return TorusElement(self, out)

    def product(self, factors: Sequence['TorusElement']) -> 'TorusElement':
        result = self.unit()
        for f in factors:
            result = self.multiply(result, f)
        return result

    def power(self, x: 'TorusElement', k: int) -> 'TorusElement':
        if k < 0:
            raise ValueError(f"Negative power {k} of a torus element")
        result = self.unit()
        for _ in range(k):
            result = self.multiply(result, x)
        return result

    def residuals(self, lhs: 'TorusElement', rhs: 'TorusElement') -> List[Tuple[str, 'TorusElement']]:
        return class_residuals(lhs, rhs)

    def exp(self, log: 'TorusElement') -> 'TorusElement':
        """Truncated exponential of an element of positive weight."""
        if () in log.terms:
            raise ValueError("Exponential needs an element without constant term")
        result = self.unit()
        term = self.unit()
        for k in range(1, self.max_weight + 1):
            term = self.multiply(term, log).scale(Fraction(1, k))
            if term.is_zero():
                break
            result = result + term
        return result


class TorusElement:
    """Normal-ordered combination of PBW monomials with Scalar coefficients."""

    __slots__ = ('algebra', 'terms')

    def __init__(self, algebra: PBWAlgebra, terms: Dict[PBWMonomial, object]):
        self.algebra = algebra
        clean: Dict[PBWMonomial, Scalar] = {}
        for mono, c in terms.items():
            mono = tuple(mono)
            if algebra.weight(mono) > algebra.max_weight:
                continue
            if mono != sort_monomial(mono):
                raise ValueError(f"Monomial {mono} is not in PBW order")
            c = c if isinstance(c, Scalar) else Scalar.const(c)
            if c:
                clean[mono] = clean.get(mono, Scalar.zero()) + c
        self.terms = {m: c for m, c in clean.items() if c}

    def __add__(self, other: 'TorusElement') -> 'TorusElement':
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, Scalar.zero()) + c
        return TorusElement(self.algebra, out)

    def __neg__(self) -> 'TorusElement':
        return TorusElement(self.algebra, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: 'TorusElement') -> 'TorusElement':
        return self + (-other)

    def scale(self, factor) -> 'TorusElement':
        factor = factor if isinstance(factor, Scalar) else Scalar.const(factor)
        return TorusElement(self.algebra, {m: factor * c for m, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, TorusElement):
            return self.algebra.multiply(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TorusElement):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, vectors: Iterable[LatticeVector]) -> Scalar:
        return self.terms.get(sort_monomial(vectors), Scalar.zero())

    def weight_part(self, w: int) -> 'TorusElement':
        return TorusElement(self.algebra, {m: c for m, c in self.terms.items() if self.algebra.weight(m) == w})

    def by_class(self) -> Dict[LatticeVector, 'TorusElement']:
        groups: Dict[LatticeVector, Dict[PBWMonomial, Scalar]] = {}
        for m, c in self.terms.items():
            cls = (sum(x[0] for x in m), sum(x[1] for x in m))
            groups.setdefault(cls, {})[m] = c
        return {cls: TorusElement(self.algebra, terms) for cls, terms in groups.items()}

    def render(self) -> str:
        if not self.terms:
            return '0'
        parts = []
        for m in sorted(self.terms, key=lambda m: (self.algebra.weight(m), [order_key(x) for x in m])):
            mono = '*'.join(f"P{x}".replace(' ', '') for x in m) or '1'
            parts.append(f"({self.terms[m]})*{mono}")
        return ' + '.join(parts)

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"TorusElement({self.render()!r})"


# ---------------------------------------------------------------------- dilogarithms
def dilog_element(algebra: PBWAlgebra, x: LatticeVector, xi=None) -> TorusElement:
    """Ψ_x[ξ] = exp(-Σ_d ξ^d P_{dx} / (d{d})) truncated at the algebra weight."""
    x = check_vector(x)
    xi = Scalar.one() if xi is None else (xi if isinstance(xi, Scalar) else Scalar.const(xi))
    w = algebra.grading.weight(x)
    log_terms = {}
    for d in range(1, algebra.max_weight // w + 1):
        log_terms[(scale(x, d),)] = -(xi ** d) / (quantum_bracket(d) * d)
    return algebra.exp(TorusElement(algebra, log_terms))


def twisted_dilog_element(algebra: PBWAlgebra, x: LatticeVector) -> TorusElement:
    return dilog_element(algebra, x, Scalar.const(quadratic_refinement(x)))


def a10_a01_elements(algebra: Optional[PBWAlgebra] = None) -> Tuple[TorusElement, TorusElement]:
    """A_{10}, A_{01} in class (0,2) via P_{0,2} and P_{0,1}^2."""
    algebra = algebra or PBWAlgebra(SW_GRADING, 2)
    half = Fraction(1, 2)
    p02 = algebra.element_for((0, 2))
    p01_sq = algebra.monomial([(0, 1), (0, 1)])
    sym = p02.scale(Scalar.const(s + 1 / s) * half)
    anti = p01_sq.scale(Scalar.z() * half)
    return sym + anti, sym - anti


def middle_ratio(d: int) -> Scalar:
    """(q^{d/2} + q^{-d/2}) / (q^{d/2} - q^{-d/2})."""
    return Scalar.const((s ** d + s ** (-d)) / (s ** d - s ** (-d)))


def sw_middle_factors(algebra: PBWAlgebra) -> Tuple[TorusElement, TorusElement]:
    """(Ψ_{A10}^{-1}, Ψ_{A01}^{-1}) as truncated exponentials."""
    logs = []
    for sign in (1, -1):
        terms = {}
        for d in range(1, algebra.max_weight // 2 + 1):
            factor = Fraction(1, 2 * d)
            terms[((0, 2 * d),)] = middle_ratio(d) * factor
            terms[((0, d), (0, d))] = Scalar.const(factor * sign)
        logs.append(TorusElement(algebra, terms))
    return algebra.exp(logs[0]), algebra.exp(logs[1])


def class_residuals(lhs: TorusElement, rhs: TorusElement) -> List[Tuple[str, TorusElement]]:
    """Residual LHS - RHS per total homology class, over every class present on either side."""
    classes = set(lhs.by_class()) | set(rhs.by_class())
    residual = (lhs - rhs).by_class()
    algebra = lhs.algebra
    return [(f"({c[0]},{c[1]})", residual.get(c, algebra.zero())) for c in sorted(classes, key=order_key)]


def pentagon_sides(max_weight: int, twisted: bool = False) -> Tuple[TorusElement, TorusElement]:
    algebra = PBWAlgebra(PENTAGON_GRADING, max_weight)
    if twisted:
        psi = lambda x: twisted_dilog_element(algebra, x)
        lhs = algebra.product([psi((1, 0)), psi((0, 1))])
        rhs = algebra.product([psi((0, 1)), psi((1, 1)), psi((1, 0))])
    else:
        psi = lambda x, xi=None: dilog_element(algebra, x, xi)
        lhs = algebra.product([psi((1, 0)), psi((0, 1))])
        rhs = algebra.product([psi((0, 1)), psi((1, 1), Scalar.const(-1)), psi((1, 0))])
    return lhs, rhs


def verify_pentagon(max_weight: int, twisted: bool = False) -> VerificationReport:
    """Ψ_(1,0)Ψ_(0,1) = Ψ_(0,1)Ψ_(1,1)[-1]Ψ_(1,0) to the given weight (w = i + j)."""
    started = time.perf_counter()
    lhs, rhs = pentagon_sides(max_weight, twisted)
    name = 'twisted pentagon' if twisted else 'pentagon'
    return build_report(name, max_weight, class_residuals(lhs, rhs), started)


def sw_sides(max_weight: int) -> Tuple[TorusElement, TorusElement]:
    algebra = PBWAlgebra(SW_GRADING, max_weight)
    psi = lambda x: dilog_element(algebra, x)
    lhs = algebra.product([psi((1, 1)), psi((-1, 1))])
    odd = list(range(1, max_weight + 1, 2))
    left = [psi((-1, j)) for j in odd]
    right = [psi((1, j)) for j in reversed(odd)]
    middle = list(sw_middle_factors(algebra))
    rhs = algebra.product(left + middle + right)
    return lhs, rhs


def verify_sw(max_weight: int) -> VerificationReport:
    """Ψ_(1,1)Ψ_(-1,1) = Ψ_(-1,1)Ψ_(-1,3)⋯(middle)⋯Ψ_(1,3)Ψ_(1,1), w = j."""
    started = time.perf_counter()
    lhs, rhs = sw_sides(max_weight)
    return build_report('sw wall-crossing', max_weight, class_residuals(lhs, rhs), started)


# ---------------------------------------------------------------------- structural checks
def _bracket_poly(d: int) -> Counter:
    return Counter({d: 1, -d: -1}) if d else Counter()


def _poly_product(p: Counter, q: Counter) -> Counter:
    out: Counter = Counter()
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            out[e1 + e2] += c1 * c2
    return out


def jacobi_residual(x: LatticeVector, y: LatticeVector, zz: LatticeVector) -> Counter:
    """{det(x,y)}{det(x+y,z)} + cyclic, as a Laurent polynomial in s."""
    total: Counter = Counter()
    for a, b, c in ((x, y, zz), (y, zz, x), (zz, x, y)):
        total.update(_poly_product(_bracket_poly(det(a, b)), _bracket_poly(det(add(a, b), c))))
    return Counter({e: v for e, v in total.items() if v})


def verify_jacobi(bound: int = 3) -> VerificationReport:
    started = time.perf_counter()
    vectors = [(i, j) for i in range(-bound, bound + 1) for j in range(-bound, bound + 1) if (i, j) != (0, 0)]
    failures = []
    for x, y, zz in itertools.product(vectors, repeat=3):
        if jacobi_residual(x, y, zz):
            failures.append((f"{x},{y},{zz}", Scalar.one()))
    residuals = failures or [(f"|entries|<={bound}", Scalar.zero())]
    return build_report('sine bracket jacobi', bound, residuals, started, triples=len(vectors) ** 3)


def random_element(algebra: PBWAlgebra, rng: random.Random, vectors: Sequence[LatticeVector],
                   terms: int = 3) -> TorusElement:
    total = algebra.zero()
    for _ in range(terms):
        length = rng.randint(0, 2)
        word = [rng.choice(vectors) for _ in range(length)]
        coeff = Scalar.const(rng.randint(-3, 3)) * Scalar.s_power(rng.randint(-2, 2))
        total = total + algebra.monomial(word, coeff)
    return total


def verify_associativity(seed: int = 0, cases: int = 10, max_weight: int = 6) -> VerificationReport:
    started = time.perf_counter()
    rng = random.Random(seed)
    algebra = PBWAlgebra(PENTAGON_GRADING, max_weight)
    vectors = [(1, 0), (0, 1), (1, 1), (2, 1), (1, 2), (2, 0), (0, 2)]
    residuals = []
    for k in range(cases):
        x, y, zz = (random_element(algebra, rng, vectors) for _ in range(3))
        residuals.append((f"case {k}", (x * y) * zz - x * (y * zz)))
    return build_report('pbw associativity', max_weight, residuals, started)


def verify_confluence(seed: int = 0, cases: int = 20, length: int = 5) -> VerificationReport:
    started = time.perf_counter()
    rng = random.Random(seed)
    # SW weight is j, so every class in the pool has j > 0
    vectors = [(0, 1), (1, 1), (-1, 1), (2, 1), (1, 2), (0, 2), (-1, 2)]
    reference = PBWAlgebra(SW_GRADING, 4 * length, 'leftmost')
    others = [PBWAlgebra(SW_GRADING, 4 * length, 'rightmost'),
              PBWAlgebra(SW_GRADING, 4 * length, 'random', seed)]
    residuals = []
    for k in range(cases):
        word = [rng.choice(vectors) for _ in range(rng.randint(2, length))]
        base = reference.monomial(word)
        for other in others:
            alt = other.monomial(word)
            diff = TorusElement(reference, base.terms) - TorusElement(reference, alt.terms)
            residuals.append((f"case {k} {other.strategy}", diff))
    return build_report('pbw confluence', length, residuals, started)


def verify_quadratic_refinement(bound: int = 4) -> VerificationReport:
    """σ(i,j)σ(k,l) = σ(i+k,j+l)(-1)^{jk-il} exhaustively."""
    started = time.perf_counter()
    failures = []
    rng = range(-bound, bound + 1)
    for i, j, k, l in itertools.product(rng, repeat=4):
        lhs = quadratic_refinement((i, j)) * quadratic_refinement((k, l))
        rhs = quadratic_refinement((i + k, j + l)) * (-1) ** ((j * k - i * l) % 2)
        if lhs != rhs:
            failures.append((f"({i},{j}),({k},{l})", Scalar.one()))
    return build_report('quadratic refinement cocycle', bound, failures or [('all', Scalar.zero())], started)


# ---------------------------------------------------------------------- Fock module
class FockModule:
    """Operators P_{i,j} (j ≥ 0) on degree-truncated symmetric functions.

    P_{0,d} multiplies by p_d, P_{±1,0} are the meridian operators, and the
    remaining generators come from commutator ladders.
    """

    def __init__(self, max_degree: int):
        self.max_degree = max_degree
        self._cache: Dict[Tuple[LatticeVector, Partition], SymSeries] = {}

    def constructible(self, x: LatticeVector) -> bool:
        i, j = x
        return j >= 1 or (j == 0 and abs(i) == 1)

    def apply(self, x: LatticeVector, v: SymSeries) -> SymSeries:
        total = SymSeries.zero(SCHUR, self.max_degree)
        for lam, c in v.coeffs.items():
            total = total + self.apply_basis(x, lam).scale(c)
        return total

    def _commutator(self, x: LatticeVector, y: LatticeVector, v: SymSeries) -> SymSeries:
        return self.apply(x, self.apply(y, v)) - self.apply(y, self.apply(x, v))

    def apply_basis(self, x: LatticeVector, lam: Partition) -> SymSeries:
        key = (x, lam)
        if key in self._cache:
            return self._cache[key]
        if not self.constructible(x):
            raise ValueError(f"P{x} is not built on the positive Fock module")
        v = SymSeries.basis_element(lam, SCHUR, self.max_degree)
        i, j = x
        if j == 0:
            result = apply_meridian(v, i)
        elif i == 0:
            p = power_sum_element(j, self.max_degree).with_max_degree(self.max_degree)
            result = sym_multiply(p, v)
        elif j == 1:
            step = (1, 0) if i > 0 else (-1, 0)
            result = self._commutator(step, (i - step[0], 1), v).scale(quantum_bracket(step[0]).inverse())
        else:
            result = self._commutator((0, 1), (i, j - 1), v).scale(quantum_bracket(-i).inverse())
        self._cache[key] = result
        return result

    def check_pair(self, x: LatticeVector, y: LatticeVector) -> List[Tuple[str, SymSeries]]:
        """[P_x,P_y] - {det}P_{x+y} on every basis vector where the result is exact."""
        coeff, target = bracket(x, y)
        rises = x[1] + y[1]
        out = []
        for degree in range(self.max_degree - rises + 1):
            for lam in partitions_of(degree):
                v = SymSeries.basis_element(lam, SCHUR, self.max_degree)
                lhs = self._commutator(x, y, v)
                rhs = self.apply(target, v).scale(coeff) if target is not None else SymSeries.zero(SCHUR, self.max_degree)
                out.append((f"[P{x},P{y}] on s{lam}".replace(' ', ''), lhs - rhs))
        return out


FOCK_PAIRS = [((1, 1), (-1, 1)), ((0, 1), (0, 2)), ((1, 0), (0, 1)), ((1, 0), (-1, 1)),
              ((-1, 0), (1, 1)), ((1, 0), (1, 1)), ((2, 1), (-1, 1)), ((1, 1), (0, 1))]


def fock_crosscheck(max_degree: int = 6, samples: Optional[Sequence[Tuple[LatticeVector, LatticeVector]]] = None,
                    seed: int = 0, extra: int = 0) -> VerificationReport:
    """The sine-bracket relation checked as operators on Λ up to ``max_degree``."""
    started = time.perf_counter()
    module = FockModule(max_degree)
    pairs = list(samples or FOCK_PAIRS)
    rng = random.Random(seed)
    pool = [(i, j) for i in range(-2, 3) for j in range(0, 3) if module.constructible((i, j))]
    while extra > 0:
        x, y = rng.choice(pool), rng.choice(pool)
        target = add(x, y)
        if target != (0, 0) and (module.constructible(target) or det(x, y) == 0) and x[1] + y[1] <= max_degree:
            pairs.append((x, y))
            extra -= 1
    residuals = []
    for x, y in pairs:
        residuals.extend(module.check_pair(x, y))
    return build_report('fock cross-check', max_degree, residuals, started, pairs=len(pairs))
