import logging
import time
from collections import OrderedDict
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

import numpy as np

from reporting import VerificationReport, build_report
from scalars import QField, Scalar, framing_monomial, quantum_bracket, quantum_integer, s
from symfun import (
    POWER,
    SCHUR,
    Partition,
    SymSeries,
    SymTensor,
    coproduct,
    lr_coefficients,
    multiply,
    partitions_of,
    hooks_contents,
    power_sum,
)

logger = logging.getLogger(__name__)

# Elements of the positive annulus skein are Schur-basis series: Σ ψ_λ W_λ.
AnnulusElement = SymSeries

DEFAULT_STRAND_BOUND = 6


class StrandBoundError(ValueError):
    """Raised when a braid has more strands than the Hecke oracle allows."""


@dataclass(frozen=True)
class BraidWord:
    """Braid on ``strands`` strands; ``word`` lists ±i for σ_i^{±1}, bottom to top."""
    strands: int
    word: Tuple[int, ...] = ()

    def __post_init__(self):
        if self.strands < 1:
            raise ValueError(f"A braid needs at least one strand, got {self.strands}")
        word = tuple(self.word)
        for g in word:
            if g == 0 or abs(g) > self.strands - 1:
                raise ValueError(f"Generator {g} out of range for {self.strands} strands")
        object.__setattr__(self, 'word', word)

    @classmethod
    def parse(cls, text: str, strands: Optional[int] = None) -> 'BraidWord':
        """Parse ``s1 s2 -s3``; the strand count defaults to the largest index + 1."""
        word: List[int] = []
        for token in text.replace(',', ' ').split():
            sign = -1 if token.startswith('-') else 1
            body = token.lstrip('+-')
            if not body.startswith('s') or not body[1:].isdigit():
                raise ValueError(f"Bad braid generator {token!r}; use s<i> or -s<i>")
            word.append(sign * int(body[1:]))
        if strands is None:
            strands = max((abs(g) for g in word), default=0) + 1
        return cls(strands, tuple(word))

    def render(self) -> str:
        if not self.word:
            return f"id[{self.strands}]"
        return ' '.join(('-' if g < 0 else '') + f"s{abs(g)}" for g in self.word)

    def conjugate(self, k: int = 1) -> 'BraidWord':
        """Cyclic rotation of the word by k letters (a conjugate braid)."""
        if not self.word:
            return self
        k %= len(self.word)
        return BraidWord(self.strands, self.word[k:] + self.word[:k])

    def __len__(self) -> int:
        return len(self.word)

    def __str__(self) -> str:
        return self.render()


def aij_braid(i: int, j: int) -> BraidWord:
    """σ_1⋯σ_i σ_{i+1}^{-1}⋯σ_{i+j}^{-1} on i+j+1 strands."""
    if i < 0 or j < 0:
        raise ValueError(f"A_{{i,j}} needs i, j >= 0, got ({i}, {j})")
    return BraidWord(i + j + 1, tuple(range(1, i + 1)) + tuple(-k for k in range(i + 1, i + j + 1)))


# ---------------------------------------------------------------------- meridian
def content_polynomial(lam: Partition, invert: bool = False) -> Scalar:
    """C_λ(q) = Σ_□ q^{c(□)}; with ``invert`` the same sum at q^{-1}."""
    sign = -1 if invert else 1
    return Scalar.const(sum((s ** (2 * sign * c) for c, _ in hooks_contents(lam)), QField(0)))


def meridian_eigenvalue(lam: Partition, orientation: int) -> Scalar:
    unknot = (Scalar.var('a') - Scalar.var('a', -1)) / Scalar.z()
    if orientation == 1:
        return unknot + Scalar.z() * Scalar.var('a') * content_polynomial(lam)
    if orientation == -1:
        return unknot - Scalar.z() * Scalar.var('a', -1) * content_polynomial(lam, invert=True)
    raise ValueError(f"Unsupported orientation: {orientation}. Choose from [1, -1]")


def apply_meridian(x: AnnulusElement, orientation: int) -> AnnulusElement:
    if x.basis != SCHUR:
        x = x.to_schur()
    return SymSeries(SCHUR, {lam: meridian_eigenvalue(lam, orientation) * c for lam, c in x.coeffs.items()},
                     x.max_degree)


def power_sum_element(d: int, max_degree: Optional[int] = None) -> AnnulusElement:
    return power_sum(d, max_degree if max_degree is not None else d, basis=SCHUR)


def core_power(n: int) -> AnnulusElement:
    """p_1^n, n parallel copies of the core."""
    return SymSeries(POWER, {Partition.of(*([1] * n)): Scalar.one()}, n).to_schur()


# ---------------------------------------------------------------------- A_{i,j}
@lru_cache(maxsize=None)
def _aij_antidiagonal(n: int) -> Tuple[SymSeries, ...]:
    """(A_{0,n-1}, A_{1,n-2}, ..., A_{n-1,0}) solved from the recursion."""
    if n == 1:
        return (power_sum_element(1, 1),)
    z = Scalar.z()
    defects = []
    for m in range(n - 1):
        left = aij(m, 0).with_max_degree(n)
        right = aij(0, n - 2 - m).with_max_degree(n)
        defects.append(multiply(left, right).scale(z))
    total = power_sum_element(n, n).scale(quantum_integer(n))
    for m, d in enumerate(defects):
        total = total - d.scale(n - 1 - m)
    current = total.scale(Fraction(1, n))
    row = [current]
    for m in range(n - 1):
        current = current + defects[m]
        row.append(current)
    logger.debug("Solved A_{i,j} antidiagonal n=%d", n)
    return tuple(row)


def aij(i: int, j: int) -> AnnulusElement:
    """A_{i,j}, the unique family with A_{0,0} = p_1 obeying the difference and sum equations."""
    if i < 0 or j < 0:
        raise ValueError(f"A_{{i,j}} needs i, j >= 0, got ({i}, {j})")
    return _aij_antidiagonal(i + j + 1)[i]


def aij_coproduct_formula(i: int, j: int) -> SymTensor:
    """Explicit Δ(A_{i,j}) in Schur⊗Schur, term by term."""
    n = i + j + 1
    z = Scalar.z()
    unit = SymSeries.unit(SCHUR, n)
    A = lambda p, r: aij(p, r).with_max_degree(n)
    total = SymTensor.pure(A(i, j), unit) + SymTensor.pure(unit, A(i, j))
    for k in range(i):
        total = total + SymTensor.pure(A(k, 0), A(i - 1 - k, j), z)
    for l in range(j):
        total = total - SymTensor.pure(A(0, l), A(i, j - 1 - l), z)
    for k in range(i):
        for l in range(j):
            total = total - SymTensor.pure(multiply(A(k, 0), A(0, l)), A(i - 1 - k, j - 1 - l), z * z)
    return SymTensor(SCHUR, total.coeffs, n)


# ---------------------------------------------------------------------- Hecke oracle
def standard_tableaux(lam: Partition) -> List[Dict[int, Tuple[int, int]]]:
    """Standard Young tableaux as maps entry -> (row, column)."""
    n = lam.size
    results: List[Dict[int, Tuple[int, int]]] = []

    def grow(k: int, rows: List[int], cells: Dict[int, Tuple[int, int]]):
        if k > n:
            results.append(dict(cells))
            return
        for r in range(len(lam)):
            c = rows[r]
            if c < lam[r] and (r == 0 or rows[r - 1] > c):
                rows[r] += 1
                cells[k] = (r, c)
                grow(k + 1, rows, cells)
                del cells[k]
                rows[r] -= 1

    grow(1, [0] * len(lam), {})
    return results


class HeckeOracle:
    """Traces of braids in the seminormal irreducible Hecke representations.

    Generators satisfy T - T^{-1} = z, with eigenvalues s and -1/s.
    """

    def __init__(self, strand_bound: int = DEFAULT_STRAND_BOUND, cache_size: int = 1 << 15):
        if not isinstance(strand_bound, int) or strand_bound < 1:
            raise ValueError(f"strand_bound must be a positive integer, got {strand_bound!r}")
        self.strand_bound = strand_bound
        self.cache_size = cache_size
        self._matrices: Dict[Partition, List[Tuple[np.ndarray, np.ndarray]]] = {}
        # (λ, word) -> representing matrix; prefixes are reused by longer words
        self._products: 'OrderedDict[Tuple[Partition, Tuple[int, ...]], np.ndarray]' = OrderedDict()
        self._characters: Dict[Tuple[Partition, Tuple[int, ...]], object] = {}

    def _generators(self, lam: Partition) -> List[Tuple[np.ndarray, np.ndarray]]:
        if lam in self._matrices:
            return self._matrices[lam]
        tableaux = standard_tableaux(lam)
        index = {tuple(sorted(t.items())): k for k, t in enumerate(tableaux)}
        dim = len(tableaux)
        z = s - 1 / s
        gens = []
        for i in range(1, lam.size):
            M = np.empty((dim, dim), dtype=object)
            for row in range(dim):
                for col in range(dim):
                    M[row, col] = QField(0)
            for col, t in enumerate(tableaux):
                (r1, c1), (r2, c2) = t[i], t[i + 1]
                r = (c2 - r2) - (c1 - r1)
                if r == 1:
                    M[col, col] = s
                    continue
                if r == -1:
                    M[col, col] = -1 / s
                    continue
                bracket = s ** r - s ** (-r)
                M[col, col] = z * s ** r / bracket
                swapped = dict(t)
                swapped[i], swapped[i + 1] = t[i + 1], t[i]
                row = index[tuple(sorted(swapped.items()))]
                M[row, col] = QField(1) if r > 0 else 1 - z ** 2 / bracket ** 2
            inverse = M.copy()
            for k in range(dim):
                inverse[k, k] = M[k, k] - z
            gens.append((M, inverse))
        self._matrices[lam] = gens
        logger.debug("Built seminormal representation %s of dimension %d", lam, dim)
        return gens

    def _product(self, lam: Partition, word: Tuple[int, ...]) -> np.ndarray:
        key = (lam, word)
        cached = self._products.get(key)
        if cached is not None:
            self._products.move_to_end(key)
            return cached
        if not word:
            product = np.identity(len(standard_tableaux(lam)), dtype=object)
        else:
            M, inverse = self._generators(lam)[abs(word[-1]) - 1]
            product = self._product(lam, word[:-1]).dot(M if word[-1] > 0 else inverse)
        self._products[key] = product
        if len(self._products) > self.cache_size:
            self._products.popitem(last=False)
        return product

    def character(self, lam: Partition, braid: BraidWord):
        """Trace of the braid in the representation λ (a Q(s) value)."""
        key = (lam, braid.word)
        if key not in self._characters:
            product = self._product(lam, braid.word)
            if len(self._characters) > self.cache_size:
                self._characters.clear()
            self._characters[key] = sum((product[k, k] for k in range(product.shape[0])), QField(0))
        return self._characters[key]

    def closure(self, braid: BraidWord) -> AnnulusElement:
        """Σ_λ χ_λ(β) W_λ for the annular closure."""
        n = braid.strands
        if n > self.strand_bound:
            raise StrandBoundError(f"Braid has {n} strands; the oracle bound is {self.strand_bound}")
        coeffs = {lam: Scalar.const(self.character(lam, braid)) for lam in partitions_of(n)}
        return SymSeries(SCHUR, coeffs, n)

    def planar_closure_value(self, braid: BraidWord, avar: str = 'a') -> Scalar:
        """Framed HOMFLYPT value of the closure drawn in the plane."""
        closure = self.closure(braid)
        return sum((c * framed_unknot_value(lam, avar) for lam, c in closure.coeffs.items()), Scalar.zero())


_DEFAULT_ORACLE = HeckeOracle()


def hecke_closure(braid: BraidWord, strand_bound: Optional[int] = None) -> AnnulusElement:
    oracle = _DEFAULT_ORACLE if strand_bound is None else HeckeOracle(strand_bound)
    return oracle.closure(braid)


def planar_closure_value(braid: BraidWord, avar: str = 'a') -> Scalar:
    return _DEFAULT_ORACLE.planar_closure_value(braid, avar)


# ---------------------------------------------------------------------- unknots
def framed_unknot_value(lam: Partition, avar: str = 'a') -> Scalar:
    """Π_□ (A s^c - A^{-1} s^{-c}) / {h} with A the named framing variable."""
    A = framing_monomial(avar)
    value = Scalar.one()
    for c, h in hooks_contents(lam):
        value = value * (A * Scalar.s_power(c) - A.inverse() * Scalar.s_power(-c)) / quantum_bracket(h)
    return value


def colored_unknot_identity(lam: Partition) -> Tuple[Scalar, Scalar]:
    """Both sides of Q_λ(a1 a2) = Σ c^λ_{μν} a2^{|μ|} a1^{-|ν|} Q_μ(a1) Q_ν(a2)."""
    lhs = framed_unknot_value(lam, 'a1a2')
    rhs = Scalar.zero()
    for k in range(lam.size + 1):
        for mu in partitions_of(k):
            for nu in partitions_of(lam.size - k):
                c = lr_coefficients(mu, nu).get(lam, 0)
                if not c:
                    continue
                rhs = rhs + (Scalar.var('a2', mu.size) * Scalar.var('a1', -nu.size)
                             * framed_unknot_value(mu, 'a1') * framed_unknot_value(nu, 'a2') * c)
    return lhs, rhs


def coproduct_of_closure(braid: BraidWord) -> SymTensor:
    return coproduct(hecke_closure(braid))


# ---------------------------------------------------------------------- verifiers
def verify_primitivity(max_n: int) -> VerificationReport:
    """Δp_n = p_n⊗1 + 1⊗p_n, computed through the Schur coproduct."""
    started = time.perf_counter()
    residuals = []
    for n in range(1, max_n + 1):
        p = power_sum_element(n, n)
        unit = SymSeries.unit(SCHUR, n)
        residuals.append((f"p_{n}", coproduct(p) - (SymTensor.pure(p, unit) + SymTensor.pure(unit, p))))
    return build_report('power sums primitive', max_n, residuals, started)


def verify_aij_coproduct(max_sum: int) -> VerificationReport:
    """Δ(A_{i,j}) against the explicit formula for i + j ≤ max_sum."""
    started = time.perf_counter()
    residuals = [(f"A({i},{j})", coproduct(aij(i, j)) - aij_coproduct_formula(i, j))
                 for n in range(max_sum + 1) for i in range(n + 1) for j in [n - i]]
    return build_report('A_ij coproduct formula', max_sum, residuals, started)


def sigma1_closure_expected() -> AnnulusElement:
    """q^{1/2} s_2 - q^{-1/2} s_11."""
    return SymSeries(SCHUR, {Partition.of(2): Scalar.s_power(1), Partition.of(1, 1): -Scalar.s_power(-1)}, 2)


def verify_aij_hecke(max_sum: int, strand_bound: Optional[int] = None) -> VerificationReport:
    """The recursive A_{i,j} equals the Hecke closure of its braid, plus the σ_1 closure value."""
    started = time.perf_counter()
    residuals = [(f"A({i},{j})", aij(i, j) - hecke_closure(aij_braid(i, j), strand_bound))
                 for n in range(max_sum + 1) for i in range(n + 1) for j in [n - i]]
    residuals.append(('closure s1', hecke_closure(BraidWord(2, (1,))) - sigma1_closure_expected()))
    return build_report('A_ij vs Hecke', max_sum, residuals, started)


def verify_colored_unknot(max_size: int) -> VerificationReport:
    started = time.perf_counter()
    residuals = []
    for n in range(max_size + 1):
        for lam in partitions_of(n):
            lhs, rhs = colored_unknot_identity(lam)
            residuals.append((str(lam), lhs - rhs))
    return build_report('colored unknot identity', max_size, residuals, started)
