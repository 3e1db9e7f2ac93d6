import itertools
import logging
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Tuple

from sympy.utilities.iterables import partitions as _sympy_partitions

from scalars import Scalar

logger = logging.getLogger(__name__)

SCHUR = 'schur'
POWER = 'power'
BASES = (SCHUR, POWER)


@dataclass(frozen=True, order=True)
class Partition:
    """Weakly decreasing tuple of positive integers.

    Also used as the key of a power-sum monomial p_ρ, where it is read as the
    multiset of cycle lengths.
    """
    parts: Tuple[int, ...] = ()

    def __post_init__(self):
        parts = tuple(self.parts)
        if any(not isinstance(p, int) or p <= 0 for p in parts):
            raise ValueError(f"Partition parts must be positive integers, got {parts}")
        if any(parts[k] < parts[k + 1] for k in range(len(parts) - 1)):
            raise ValueError(f"Partition parts must be weakly decreasing, got {parts}")
        object.__setattr__(self, 'parts', parts)

    @classmethod
    def of(cls, *parts: int) -> 'Partition':
        return cls(tuple(sorted(parts, reverse=True)))

    @classmethod
    def parse(cls, text: str) -> 'Partition':
        body = text.strip().strip('()[]')
        if not body:
            return cls()
        try:
            return cls.of(*(int(p) for p in body.replace(' ', '').split(',') if p))
        except ValueError as exc:
            raise ValueError(f"Cannot parse partition {text!r}") from exc

    @property
    def size(self) -> int:
        return sum(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self) -> Iterator[int]:
        return iter(self.parts)

    def __getitem__(self, k: int) -> int:
        return self.parts[k]

    def cells(self) -> List[Tuple[int, int]]:
        return [(r, c) for r, length in enumerate(self.parts) for c in range(length)]

    def conjugate(self) -> 'Partition':
        if not self.parts:
            return self
        return Partition(tuple(sum(1 for p in self.parts if p > c) for c in range(self.parts[0])))

    def contains(self, other: 'Partition') -> bool:
        return len(other) <= len(self) and all(o <= p for o, p in zip(other.parts, self.parts))

    def merge(self, other: 'Partition') -> 'Partition':
        """Multiset union, i.e. the key of p_ρ·p_σ."""
        return Partition.of(*(self.parts + other.parts))

    def multiplicities(self) -> Counter:
        return Counter(self.parts)

    def z_factor(self) -> int:
        """z_ρ = Π i^{m_i} m_i!, the centralizer order of the cycle type."""
        value = 1
        for part, mult in self.multiplicities().items():
            value *= part ** mult * factorial(mult)
        return value

    def __str__(self) -> str:
        return '(' + ','.join(str(p) for p in self.parts) + ')'


EMPTY = Partition()


def partitions_of(n: int) -> List[Partition]:
    """All partitions of n, largest first in reverse-lexicographic order."""
    if n < 0:
        return []
    if n == 0:
        return [EMPTY]
    out = []
    for mult in _sympy_partitions(n):
        parts: List[int] = []
        for part, count in mult.items():
            parts.extend([part] * count)
        out.append(Partition.of(*parts))
    return sorted(out, reverse=True)


def partitions_up_to(n: int) -> List[Partition]:
    return [p for k in range(n + 1) for p in partitions_of(k)]


def hooks_contents(lam: Partition) -> List[Tuple[int, int]]:
    """(content, hook) for every cell of the Young diagram, row by row."""
    conj = lam.conjugate()
    return [(c - r, (lam[r] - c) + (conj[c] - r) - 1) for r, c in lam.cells()]


# ---------------------------------------------------------------------- characters
def _beta_set(lam: Partition, length: int) -> Tuple[int, ...]:
    parts = list(lam.parts) + [0] * (length - len(lam))
    return tuple(parts[i] + (length - 1 - i) for i in range(length))


def _from_beta(beta: Iterable[int]) -> Partition:
    ordered = sorted(beta, reverse=True)
    length = len(ordered)
    return Partition.of(*(b - (length - 1 - i) for i, b in enumerate(ordered) if b - (length - 1 - i) > 0))


@lru_cache(maxsize=None)
def character(lam: Partition, rho: Partition) -> int:
    """χ^λ(ρ) by the Murnaghan–Nakayama rule on beta-sets."""
    if lam.size != rho.size:
        return 0
    if rho.size == 0:
        return 1
    r = rho[0]
    rest = Partition(rho.parts[1:])
    beta = _beta_set(lam, len(lam) + r)
    present = set(beta)
    total = 0
    for b in beta:
        if b - r < 0 or (b - r) in present:
            continue
        height = sum(1 for x in beta if b - r < x < b)
        new_beta = [x for x in beta if x != b] + [b - r]
        total += (-1) ** height * character(_from_beta(new_beta), rest)
    return total


# ---------------------------------------------------------------------- LR coefficients
def _horizontal_strips(shape: Tuple[int, ...], size: int) -> Iterator[Tuple[int, ...]]:
    """Shapes obtained by adding a horizontal strip of the given size."""
    rows = list(shape) + [0]

    def extend(k: int, remaining: int, acc: List[int]) -> Iterator[Tuple[int, ...]]:
        if k == len(rows):
            if remaining == 0:
                yield tuple(x for x in acc if x > 0)
            return
        cap = remaining if k == 0 else min(remaining, rows[k - 1] - rows[k])
        for add in range(cap, -1, -1):
            yield from extend(k + 1, remaining - add, acc + [rows[k] + add])

    yield from extend(0, size, [])


def _is_lattice(filling: Mapping[Tuple[int, int], int], upto: int) -> bool:
    counts = Counter()
    for r in sorted({r for r, _ in filling}):
        for c in sorted((c for rr, c in filling if rr == r), reverse=True):
            label = filling[(r, c)]
            counts[label] += 1
            if label > 1 and label <= upto and counts[label] > counts[label - 1]:
                return False
    return True


@lru_cache(maxsize=None)
def lr_coefficients(mu: Partition, nu: Partition) -> Dict[Partition, int]:
    """c^λ_{μν} for all λ, by enumerating LR tableaux of shape λ/μ and content ν."""
    results: Counter = Counter()

    def place(k: int, shape: Tuple[int, ...], filling: Dict[Tuple[int, int], int]):
        if k == len(nu):
            results[Partition(shape)] += 1
            return
        for new_shape in _horizontal_strips(shape, nu[k]):
            new_filling = dict(filling)
            for r, length in enumerate(new_shape):
                old = shape[r] if r < len(shape) else 0
                for c in range(old, length):
                    new_filling[(r, c)] = k + 1
            if _is_lattice(new_filling, k + 1):
                place(k + 1, new_shape, new_filling)

    place(0, mu.parts, {})
    return dict(sorted(results.items(), reverse=True))


def _pieri(coeffs: Mapping[Tuple[int, ...], int], k: int) -> Dict[Tuple[int, ...], int]:
    out: Counter = Counter()
    for shape, c in coeffs.items():
        for new_shape in _horizontal_strips(shape, k):
            out[new_shape] += c
    return out


@lru_cache(maxsize=None)
def lr_coefficients_pieri(mu: Partition, nu: Partition) -> Dict[Partition, int]:
    """Same coefficients via Jacobi–Trudi for s_ν and repeated Pieri rules."""
    total: Counter = Counter()
    n = len(nu)
    for perm in itertools.permutations(range(n)):
        degrees = [nu[i] - i + perm[i] for i in range(n)]
        if any(d < 0 for d in degrees):
            continue
        sign = _permutation_sign(perm)
        current: Dict[Tuple[int, ...], int] = {mu.parts: 1}
        for d in degrees:
            if d:
                current = _pieri(current, d)
        for shape, c in current.items():
            total[Partition(shape)] += sign * c
    return {lam: c for lam, c in sorted(total.items(), reverse=True) if c}


def _permutation_sign(perm: Tuple[int, ...]) -> int:
    sign = 1
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                sign = -sign
    return sign


def schur_monomial_expansion(lam: Partition, nvars: int) -> Counter:
    """Exponent vector -> count over semistandard tableaux with entries ≤ nvars."""
    cells = lam.cells()
    out: Counter = Counter()

    def fill(k: int, tableau: Dict[Tuple[int, int], int]):
        if k == len(cells):
            exps = [0] * nvars
            for v in tableau.values():
                exps[v - 1] += 1
            out[tuple(exps)] += 1
            return
        r, c = cells[k]
        low = 1
        if c > 0:
            low = max(low, tableau[(r, c - 1)])
        if r > 0:
            low = max(low, tableau[(r - 1, c)] + 1)
        for v in range(low, nvars + 1):
            tableau[(r, c)] = v
            fill(k + 1, tableau)
        tableau.pop((r, c), None)

    fill(0, {})
    return out


# ---------------------------------------------------------------------- series
class SymSeries:
    """Truncated symmetric function in the Schur or power-sum basis."""

    __slots__ = ('basis', 'coeffs', 'max_degree')

    def __init__(self, basis: str, coeffs: Optional[Mapping[Partition, Scalar]] = None, max_degree: int = 10):
        if basis not in BASES:
            raise ValueError(f"Unsupported basis: {basis}. Choose from {list(BASES)}")
        if max_degree < 0:
            raise ValueError("max_degree must be non-negative")
        self.basis = basis
        self.max_degree = max_degree
        clean: Dict[Partition, Scalar] = {}
        for key, value in (coeffs or {}).items():
            if not isinstance(key, Partition):
                key = Partition.of(*key)
            value = value if isinstance(value, Scalar) else Scalar.const(value)
            if key.size <= max_degree and value:
                clean[key] = clean.get(key, Scalar.zero()) + value
        self.coeffs = {k: v for k, v in clean.items() if v}

    # constructors
    @classmethod
    def unit(cls, basis: str = SCHUR, max_degree: int = 10) -> 'SymSeries':
        return cls(basis, {EMPTY: Scalar.one()}, max_degree)

    @classmethod
    def basis_element(cls, key, basis: str = SCHUR, max_degree: int = 10) -> 'SymSeries':
        key = key if isinstance(key, Partition) else Partition.of(*key)
        return cls(basis, {key: Scalar.one()}, max(max_degree, key.size))

    @classmethod
    def zero(cls, basis: str = SCHUR, max_degree: int = 10) -> 'SymSeries':
        return cls(basis, {}, max_degree)

    # access
    def coefficient(self, key) -> Scalar:
        key = key if isinstance(key, Partition) else Partition.of(*key)
        return self.coeffs.get(key, Scalar.zero())

    def is_zero(self) -> bool:
        return not self.coeffs

    def degree_part(self, d: int) -> 'SymSeries':
        return SymSeries(self.basis, {k: v for k, v in self.coeffs.items() if k.size == d}, self.max_degree)

    def truncate(self, n: int) -> 'SymSeries':
        return SymSeries(self.basis, self.coeffs, min(n, self.max_degree))

    def with_max_degree(self, n: int) -> 'SymSeries':
        """Re-read a polynomial under another truncation bound."""
        return SymSeries(self.basis, self.coeffs, n)

    def map_coefficients(self, func) -> 'SymSeries':
        return SymSeries(self.basis, {k: func(v) for k, v in self.coeffs.items()}, self.max_degree)

    # arithmetic
    def _check(self, other: 'SymSeries') -> None:
        if not isinstance(other, SymSeries):
            raise TypeError(f"Expected SymSeries, got {type(other).__name__}")
        if other.basis != self.basis:
            raise ValueError(f"Basis mismatch: {self.basis} vs {other.basis}")

    def __add__(self, other: 'SymSeries') -> 'SymSeries':
        self._check(other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, Scalar.zero()) + v
        return SymSeries(self.basis, out, min(self.max_degree, other.max_degree))

    def __neg__(self) -> 'SymSeries':
        return self.map_coefficients(lambda v: -v)

    def __sub__(self, other: 'SymSeries') -> 'SymSeries':
        return self + (-other)

    def scale(self, factor) -> 'SymSeries':
        factor = factor if isinstance(factor, Scalar) else Scalar.const(factor)
        return self.map_coefficients(lambda v: factor * v)

    def __mul__(self, other):
        if isinstance(other, SymSeries):
            return multiply(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SymSeries):
            return NotImplemented
        if other.basis != self.basis:
            other = other.to_basis(self.basis)
        n = min(self.max_degree, other.max_degree)
        return self.truncate(n).coeffs == other.truncate(n).coeffs

    def __hash__(self):
        return hash((self.basis, frozenset(self.coeffs.items())))

    # conversions
    def to_basis(self, basis: str) -> 'SymSeries':
        if basis == self.basis:
            return self
        return schur_to_powersum(self) if basis == POWER else powersum_to_schur(self)

    def to_powersum(self) -> 'SymSeries':
        return self.to_basis(POWER)

    def to_schur(self) -> 'SymSeries':
        return self.to_basis(SCHUR)

    def render(self) -> str:
        tag = 's' if self.basis == SCHUR else 'p'
        if not self.coeffs:
            return f"0 [{self.basis}]"
        terms = []
        for key in sorted(self.coeffs, key=lambda k: (k.size, tuple(-p for p in k.parts))):
            terms.append(f"({self.coeffs[key]})*{tag}{key}")
        return ' + '.join(terms) + f" [{self.basis}]"

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"SymSeries({self.render()!r}, N={self.max_degree})"


def schur_to_powersum(x: SymSeries) -> SymSeries:
    """s_λ = Σ_ρ χ^λ(ρ)/z_ρ · p_ρ."""
    if x.basis != SCHUR:
        raise ValueError("Expected a Schur-basis series")
    out: Dict[Partition, Scalar] = {}
    for lam, coeff in x.coeffs.items():
        for rho in partitions_of(lam.size):
            chi = character(lam, rho)
            if chi:
                out[rho] = out.get(rho, Scalar.zero()) + coeff * Fraction(chi, rho.z_factor())
    return SymSeries(POWER, out, x.max_degree)


def powersum_to_schur(x: SymSeries) -> SymSeries:
    """p_ρ = Σ_λ χ^λ(ρ) s_λ."""
    if x.basis != POWER:
        raise ValueError("Expected a power-sum series")
    out: Dict[Partition, Scalar] = {}
    for rho, coeff in x.coeffs.items():
        for lam in partitions_of(rho.size):
            chi = character(lam, rho)
            if chi:
                out[lam] = out.get(lam, Scalar.zero()) + coeff * chi
    return SymSeries(SCHUR, out, x.max_degree)


def multiply(x: SymSeries, y: SymSeries) -> SymSeries:
    """Product truncated at the common degree; Schur products go through LR."""
    x._check(y)
    n = min(x.max_degree, y.max_degree)
    out: Dict[Partition, Scalar] = {}
    for k1, c1 in x.coeffs.items():
        for k2, c2 in y.coeffs.items():
            if k1.size + k2.size > n:
                continue
            c = c1 * c2
            if x.basis == POWER:
                key = k1.merge(k2)
                out[key] = out.get(key, Scalar.zero()) + c
                continue
            for lam, mult in lr_coefficients(k1, k2).items():
                out[lam] = out.get(lam, Scalar.zero()) + c * mult
    return SymSeries(x.basis, out, n)


def power_sum(d: int, max_degree: int = 10, basis: str = POWER) -> SymSeries:
    if d < 1:
        raise ValueError(f"Power sum index must be positive, got {d}")
    p = SymSeries(POWER, {Partition.of(d): Scalar.one()}, max(max_degree, d))
    return p.to_basis(basis)


def series_exp(log: SymSeries) -> SymSeries:
    """Truncated exponential of a series without constant term (power basis)."""
    if log.basis != POWER:
        log = log.to_powersum()
    if EMPTY in log.coeffs:
        raise ValueError("Exponential needs a series without constant term")
    result = SymSeries.unit(POWER, log.max_degree)
    term = SymSeries.unit(POWER, log.max_degree)
    for k in range(1, log.max_degree + 1):
        term = multiply(term, log).scale(Fraction(1, k))
        if term.is_zero():
            break
        result = result + term
    return result


# ---------------------------------------------------------------------- tensors
class SymTensor:
    """Element of Λ⊗Λ in a fixed basis, keyed by pairs of partitions."""

    __slots__ = ('basis', 'coeffs', 'max_degree')

    def __init__(self, basis: str, coeffs: Optional[Mapping[Tuple[Partition, Partition], Scalar]] = None,
                 max_degree: int = 10):
        if basis not in BASES:
            raise ValueError(f"Unsupported basis: {basis}. Choose from {list(BASES)}")
        self.basis = basis
        self.max_degree = max_degree
        clean: Dict[Tuple[Partition, Partition], Scalar] = {}
        for key, value in (coeffs or {}).items():
            value = value if isinstance(value, Scalar) else Scalar.const(value)
            if key[0].size + key[1].size <= max_degree:
                clean[key] = clean.get(key, Scalar.zero()) + value
        self.coeffs = {k: v for k, v in clean.items() if v}

    @classmethod
    def pure(cls, left: SymSeries, right: SymSeries, weight: Optional[Scalar] = None) -> 'SymTensor':
        if left.basis != right.basis:
            right = right.to_basis(left.basis)
        weight = weight if weight is not None else Scalar.one()
        out: Dict[Tuple[Partition, Partition], Scalar] = {}
        for k1, c1 in left.coeffs.items():
            for k2, c2 in right.coeffs.items():
                out[(k1, k2)] = out.get((k1, k2), Scalar.zero()) + weight * c1 * c2
        return cls(left.basis, out, left.max_degree + right.max_degree)

    def __add__(self, other: 'SymTensor') -> 'SymTensor':
        if other.basis != self.basis:
            raise ValueError(f"Basis mismatch: {self.basis} vs {other.basis}")
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, Scalar.zero()) + v
        return SymTensor(self.basis, out, min(self.max_degree, other.max_degree))

    def __neg__(self) -> 'SymTensor':
        return SymTensor(self.basis, {k: -v for k, v in self.coeffs.items()}, self.max_degree)

    def __sub__(self, other: 'SymTensor') -> 'SymTensor':
        return self + (-other)

    def scale(self, factor) -> 'SymTensor':
        factor = factor if isinstance(factor, Scalar) else Scalar.const(factor)
        return SymTensor(self.basis, {k: factor * v for k, v in self.coeffs.items()}, self.max_degree)

    def multiply(self, other: 'SymTensor') -> 'SymTensor':
        """Componentwise product (x⊗y)(u⊗v) = xu⊗yv."""
        if other.basis != self.basis:
            raise ValueError(f"Basis mismatch: {self.basis} vs {other.basis}")
        n = min(self.max_degree, other.max_degree)
        total = SymTensor(self.basis, {}, n)
        for (a1, b1), c1 in self.coeffs.items():
            for (a2, b2), c2 in other.coeffs.items():
                if a1.size + b1.size + a2.size + b2.size > n:
                    continue
                left = multiply(SymSeries.basis_element(a1, self.basis, n), SymSeries.basis_element(a2, self.basis, n))
                right = multiply(SymSeries.basis_element(b1, self.basis, n), SymSeries.basis_element(b2, self.basis, n))
                total = total + SymTensor.pure(left, right, c1 * c2)
        return SymTensor(self.basis, total.coeffs, n)

    def to_basis(self, basis: str) -> 'SymTensor':
        if basis == self.basis:
            return self
        total = SymTensor(basis, {}, self.max_degree)
        for (k1, k2), c in self.coeffs.items():
            left = SymSeries.basis_element(k1, self.basis, k1.size).to_basis(basis)
            right = SymSeries.basis_element(k2, self.basis, k2.size).to_basis(basis)
            total = total + SymTensor.pure(left, right, c)
        return SymTensor(basis, total.coeffs, self.max_degree)

    def apply_map(self, left, right=None) -> 'SymTensor':
        """(f⊗g) applied termwise; f and g map a basis element (as a SymSeries) to a SymSeries."""
        right = right or left
        total = SymTensor(self.basis, {}, self.max_degree)
        for (k1, k2), c in self.coeffs.items():
            x = left(SymSeries.basis_element(k1, self.basis, self.max_degree))
            y = right(SymSeries.basis_element(k2, self.basis, self.max_degree))
            total = total + SymTensor.pure(x.to_basis(self.basis), y.to_basis(self.basis), c)
        return SymTensor(self.basis, total.coeffs, self.max_degree)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other) -> bool:
        if not isinstance(other, SymTensor):
            return NotImplemented
        if other.basis != self.basis:
            other = other.to_basis(self.basis)
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.basis, frozenset(self.coeffs.items())))

    def render(self) -> str:
        tag = 's' if self.basis == SCHUR else 'p'
        if not self.coeffs:
            return '0'
        keys = sorted(self.coeffs, key=lambda k: (k[0].size + k[1].size, k[0].parts, k[1].parts))
        return ' + '.join(f"({self.coeffs[k]})*{tag}{k[0]}⊗{tag}{k[1]}" for k in keys)

    def __str__(self) -> str:
        return self.render()


def coproduct(x: SymSeries) -> SymTensor:
    """Δs_λ = Σ c^λ_{μν} s_μ⊗s_ν; in the power basis every p_n is primitive."""
    out: Dict[Tuple[Partition, Partition], Scalar] = {}
    if x.basis == POWER:
        for rho, coeff in x.coeffs.items():
            for (left, right), mult in _power_coproduct(rho).items():
                out[(left, right)] = out.get((left, right), Scalar.zero()) + coeff * mult
        return SymTensor(POWER, out, x.max_degree)
    for lam, coeff in x.coeffs.items():
        for (mu, nu), mult in _schur_coproduct(lam).items():
            out[(mu, nu)] = out.get((mu, nu), Scalar.zero()) + coeff * mult
    return SymTensor(SCHUR, out, x.max_degree)


@lru_cache(maxsize=None)
def _schur_coproduct(lam: Partition) -> Dict[Tuple[Partition, Partition], int]:
    out: Dict[Tuple[Partition, Partition], int] = {}
    for k in range(lam.size + 1):
        for mu in partitions_of(k):
            if not lam.contains(mu):
                continue
            for nu in partitions_of(lam.size - k):
                c = lr_coefficients(mu, nu).get(lam, 0)
                if c:
                    out[(mu, nu)] = c
    return out


@lru_cache(maxsize=None)
def _power_coproduct(rho: Partition) -> Dict[Tuple[Partition, Partition], int]:
    out: Counter = Counter()
    for choice in itertools.product((0, 1), repeat=len(rho)):
        left = Partition.of(*(p for p, side in zip(rho.parts, choice) if side == 0))
        right = Partition.of(*(p for p, side in zip(rho.parts, choice) if side == 1))
        out[(left, right)] += 1
    return dict(out)


def counit(x: SymSeries) -> Scalar:
    return x.coefficient(EMPTY)


epsilon = counit
