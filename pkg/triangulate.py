import itertools
import logging
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

import numpy as np
import pandas as pd
import sympy

from reporting import VerificationReport, build_report

logger = logging.getLogger(__name__)

QUAD_TYPES = ('theta', "theta'", "theta''")
TAUT_TOTAL = {False: 2, True: 1}   # π-multiples around an internal / boundary edge


class TriangulationFormatError(ValueError):
    """Malformed .tri text or negative incidence counts."""


class InconsistentSystemError(ValueError):
    """The generalized angle equations have no solution."""


@dataclass
class IdealTriangulation:
    """Incidence counts m[e, δ, type]: how many of δ's two edge slots of that quad type abut edge class e."""
    incidence: np.ndarray
    boundary: Set[int] = field(default_factory=set)
    cusps: int = 1
    name: str = ''

    def __post_init__(self):
        self.incidence = np.asarray(self.incidence, dtype=int)
        if self.incidence.size == 0:
            self.incidence = self.incidence.reshape(0, 0, 3)
        if self.incidence.ndim != 3 or self.incidence.shape[2] != 3:
            raise TriangulationFormatError(f"Incidence must have shape (edges, tets, 3), got {self.incidence.shape}")
        if (self.incidence < 0).any():
            raise TriangulationFormatError("Incidence counts must be non-negative")

    @property
    def tets(self) -> int:
        return self.incidence.shape[1]

    @property
    def edges(self) -> int:
        return self.incidence.shape[0]

    def slot_errors(self) -> List[str]:
        """Tetrahedra whose quad types do not each contribute exactly two slots."""
        totals = self.incidence.sum(axis=0)
        return [f"tet {d} {QUAD_TYPES[k]} has {totals[d, k]} slots"
                for d in range(self.tets) for k in range(3) if totals[d, k] != 2]

    @property
    def consistent(self) -> bool:
        return not self.slot_errors()


def figure_eight() -> IdealTriangulation:
    """Two tetrahedra; the edge equation is 2θ + θ'' + 2η + η'' = 2π."""
    incidence = np.array([
        [[2, 0, 1], [2, 0, 1]],
        [[0, 2, 1], [0, 2, 1]],
    ])
    return IdealTriangulation(incidence, set(), 1, 'figure-eight')


class TriangulationLoader:
    """Reads the line-oriented .tri format.

    ``tets <t> edges <e>`` comes first, then ``edge <k>: tet <d> theta <m> theta' <m'> theta'' <m''>``
    lines, optional ``boundary <k>`` flags and ``cusps <b>``. ``#`` starts a comment.
    """

    def parse(self, text: str, name: str = '') -> IdealTriangulation:
        incidence = None
        boundary: Set[int] = set()
        cusps = 1
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split('#', 1)[0].strip()
            if not line:
                continue
            tokens = line.replace(':', ' ').split()
            try:
                if tokens[0] == 'tets':
                    if len(tokens) != 4 or tokens[2] != 'edges':
                        raise TriangulationFormatError("header must be 'tets <t> edges <e>'")
                    incidence = np.zeros((int(tokens[3]), int(tokens[1]), 3), dtype=int)
                elif tokens[0] == 'edge':
                    if incidence is None:
                        raise TriangulationFormatError("edge line before the 'tets ... edges ...' header")
                    e, d = int(tokens[1]), int(tokens[3])
                    if tokens[2] != 'tet' or tokens[4::2] != list(QUAD_TYPES):
                        raise TriangulationFormatError("expected: edge <k>: tet <d> theta <m> theta' <m'> theta'' <m''>")
                    if not (0 <= e < incidence.shape[0] and 0 <= d < incidence.shape[1]):
                        raise TriangulationFormatError(f"edge {e} / tet {d} out of range")
                    incidence[e, d] = [int(x) for x in tokens[5::2]]
                elif tokens[0] == 'boundary':
                    boundary.add(int(tokens[1]))
                elif tokens[0] == 'cusps':
                    cusps = int(tokens[1])
                else:
                    raise TriangulationFormatError(f"unknown keyword {tokens[0]!r}")
            except (IndexError, ValueError) as exc:
                raise TriangulationFormatError(f"line {lineno}: {exc}") from exc
        if incidence is None:
            raise TriangulationFormatError("missing 'tets <t> edges <e>' header")
        return IdealTriangulation(incidence, boundary, cusps, name)

    def load(self, path) -> IdealTriangulation:
        path = Path(path)
        try:
            triangulation = self.parse(path.read_text(), path.stem)
        except TriangulationFormatError as exc:
            logger.error("Invalid triangulation %s: %s", path, exc)
            raise
        logger.info("Loaded %s: %d tetrahedra, %d edge classes", path, triangulation.tets, triangulation.edges)
        return triangulation

    def to_text(self, T: IdealTriangulation) -> str:
        lines = [f"tets {T.tets} edges {T.edges}"]
        for e in range(T.edges):
            for d in range(T.tets):
                m = T.incidence[e, d]
                if m.any():
                    lines.append(f"edge {e}: tet {d} theta {m[0]} theta' {m[1]} theta'' {m[2]}")
        lines.extend(f"boundary {e}" for e in sorted(T.boundary))
        lines.append(f"cusps {T.cusps}")
        return '\n'.join(lines) + '\n'


# ---------------------------------------------------------------------- angle structures
def enumerate_taut(T: IdealTriangulation, admissible: Optional[Sequence[Iterable[int]]] = None) -> List[Tuple[int, ...]]:
    """All choices of the π quad type per tetrahedron with edge sums 2π (π on boundary edges)."""
    if not T.consistent:
        logger.warning("Incidence violates slot conservation: %s", '; '.join(T.slot_errors()))
        return []
    found = []
    for choice in itertools.product(range(3), repeat=T.tets):
        ok = all(sum(T.incidence[e, d, k] for d, k in enumerate(choice)) == TAUT_TOTAL[e in T.boundary]
                 for e in range(T.edges))
        if ok:
            found.append(choice)
    logger.debug("%d taut structures among %d candidates", len(found), 3 ** T.tets)
    return lackenby_filter(found, admissible) if admissible is not None else found


def lackenby_filter(structures: Sequence[Tuple[int, ...]],
                    admissible: Optional[Sequence[Iterable[int]]] = None) -> List[Tuple[int, ...]]:
    """Keep structures whose π quad type per tetrahedron is allowed by the transverse orientation.

    ``admissible[d]`` lists the quad types whose π-edges separate the two inward
    and the two outward co-oriented faces of tetrahedron d.
    """
    if admissible is None:
        logger.warning("No transverse-orientation data given; the taut filter keeps every structure")
        return list(structures)
    allowed = [set(a) for a in admissible]
    return [c for c in structures if all(k in allowed[d] for d, k in enumerate(c))]


def taut_angles(choice: Sequence[int]) -> List[Fraction]:
    """Angle vector (in units of π), ordered tet by tet as (θ, θ', θ'')."""
    return [Fraction(int(k == c)) for c in choice for k in range(3)]


@dataclass
class AngleSolution:
    """Exact solution space: particular solution plus a kernel basis (angles in units of π)."""
    particular: List[Fraction]
    kernel: List[List[Fraction]]
    matrix: sympy.Matrix
    rhs: sympy.Matrix

    @property
    def dimension(self) -> int:
        return len(self.kernel)

    def satisfies(self, angles: Sequence[Fraction]) -> bool:
        x = sympy.Matrix([sympy.Rational(a.numerator, a.denominator) for a in map(Fraction, angles)])
        return self.matrix * x == self.rhs


def angle_system(T: IdealTriangulation) -> Tuple[sympy.Matrix, sympy.Matrix]:
    rows, rhs = [], []
    for d in range(T.tets):
        rows.append([1 if dd == d else 0 for dd in range(T.tets) for _ in range(3)])
        rhs.append(1)
    for e in range(T.edges):
        rows.append([int(T.incidence[e, d, k]) for d in range(T.tets) for k in range(3)])
        rhs.append(TAUT_TOTAL[e in T.boundary])
    return sympy.Matrix(len(rows), 3 * T.tets, lambda i, j: rows[i][j]), sympy.Matrix(rhs)


def _to_fraction(value) -> Fraction:
    value = sympy.nsimplify(value)
    return Fraction(int(value.p), int(value.q))


def generalized_angle_solver(T: IdealTriangulation) -> AngleSolution:
    A, b = angle_system(T)
    if A.cols == 0:
        return AngleSolution([], [], A, b)
    try:
        solution, params = A.gauss_jordan_solve(b)
    except ValueError as exc:
        logger.error("Generalized angle equations of %s are inconsistent", T.name or 'triangulation')
        raise InconsistentSystemError(f"No generalized angle structure: {exc}") from exc
    particular = solution.subs({p: 0 for p in params})
    kernel = [[_to_fraction(x) for x in v] for v in A.nullspace()]
    return AngleSolution([_to_fraction(x) for x in particular], kernel, A, b)


# ---------------------------------------------------------------------- markings and gluing
@dataclass(frozen=True)
class Marking:
    """Marked quad type per tetrahedron; sign -1 reverses a tetrahedron's orientation."""
    types: Tuple[int, ...]
    signs: Optional[Tuple[int, ...]] = None

    def __post_init__(self):
        if any(k not in (0, 1, 2) for k in self.types):
            raise ValueError(f"Quad types must be 0, 1 or 2, got {self.types}")
        if self.signs is not None and len(self.signs) != len(self.types):
            raise ValueError("One sign per tetrahedron")

    def sign(self, d: int) -> int:
        return 1 if self.signs is None else self.signs[d]

    def render(self) -> str:
        return '(' + ', '.join(QUAD_TYPES[k] for k in self.types) + ')'

    @classmethod
    def parse(cls, text: str) -> 'Marking':
        names = {n: k for k, n in enumerate(QUAD_TYPES)}
        parts = [p.strip() for p in text.strip('() ').split(',') if p.strip()]
        try:
            return cls(tuple(names[p] for p in parts))
        except KeyError as exc:
            raise ValueError(f"Unknown quad type in marking {text!r}; use {list(QUAD_TYPES)}") from exc


def slot_sign(slot: int, marked: int) -> int:
    """0 on the marked type, +1 if the marked type follows the slot type in (θ, θ', θ''), else -1."""
    if slot == marked:
        return 0
    return 1 if (slot + 1) % 3 == marked else -1


def all_markings(T: IdealTriangulation) -> List[Marking]:
    return [Marking(types) for types in itertools.product(range(3), repeat=T.tets)]


def gluing_matrix(T: IdealTriangulation, marking: Marking) -> np.ndarray:
    """ε[e, δ]: coefficient of z_δ in the marked edge equation at e."""
    if len(marking.types) != T.tets:
        raise ValueError(f"Marking has {len(marking.types)} entries for {T.tets} tetrahedra")
    signs = np.array([[slot_sign(k, m) for k in range(3)] for m in marking.types])
    G = (T.incidence * signs[np.newaxis, :, :]).sum(axis=2)
    return G * np.array([marking.sign(d) for d in range(T.tets)])[np.newaxis, :]


def edge_equation(T: IdealTriangulation, e: int) -> str:
    """Unmarked edge equation in x-variables, e.g. 2x_1^0 + x_1^2 + ... = 0."""
    terms = []
    for d in range(T.tets):
        for k in range(3):
            m = int(T.incidence[e, d, k])
            if m:
                terms.append(f"{m if m > 1 else ''}x_{d + 1}^{QUAD_TYPES[k]}")
    return ' + '.join(terms) + ' = 0'


# ---------------------------------------------------------------------- exact LP
def _phase_one(A: Sequence[Sequence[Fraction]], b: Sequence[Fraction], n: int) -> Optional[List[Fraction]]:
    """Some x >= 0 with Ax = b, or None. Phase-one simplex over Fractions with Bland's rule."""
    m = len(A)
    tableau = np.empty((m, n + m + 1), dtype=object)
    for i in range(m):
        flip = -1 if b[i] < 0 else 1
        tableau[i, :n] = [Fraction(flip * A[i][j]) for j in range(n)]
        tableau[i, n:n + m] = [Fraction(int(i == k)) for k in range(m)]
        tableau[i, -1] = Fraction(flip * b[i])
    basis = list(range(n, n + m))
    cost = np.array([Fraction(0)] * n + [Fraction(1)] * m + [Fraction(0)], dtype=object)
    reduced = cost - sum((tableau[i] for i in range(m)), np.array([Fraction(0)] * (n + m + 1), dtype=object))
    while True:
        entering = next((j for j in range(n + m) if reduced[j] < 0), None)
        if entering is None:
            break
        candidates = [(tableau[i, -1] / tableau[i, entering], basis[i], i) for i in range(m) if tableau[i, entering] > 0]
        _, _, row = min(candidates)
        tableau[row] = tableau[row] / tableau[row, entering]
        for i in range(m):
            if i != row and tableau[i, entering] != 0:
                tableau[i] = tableau[i] - tableau[i, entering] * tableau[row]
        reduced = reduced - reduced[entering] * tableau[row]
        basis[row] = entering
    if -reduced[-1] > 0:
        return None
    x = [Fraction(0)] * n
    for i, var in enumerate(basis):
        if var < n:
            x[var] = tableau[i, -1]
    return x


def positive_solution(G: np.ndarray) -> Optional[List[Fraction]]:
    """z with z_i >= 1 and Gz = 0, substituting z = 1 + y."""
    rows, cols = G.shape
    if cols == 0:
        return []
    b = [-Fraction(int(G[i].sum())) for i in range(rows)]
    y = _phase_one([[int(x) for x in G[i]] for i in range(rows)], b, cols)
    return None if y is None else [v + 1 for v in y]


def stiemke_certificate(G: np.ndarray) -> Optional[List[Fraction]]:
    """p with pG >= 0 and Σ(pG) = 1, found as p = p⁺ - p⁻ with a slack vector."""
    rows, cols = G.shape
    A: List[List[Fraction]] = []
    for d in range(cols):
        A.append([int(G[e, d]) for e in range(rows)] + [-int(G[e, d]) for e in range(rows)]
                 + [-int(d == k) for k in range(cols)])
    A.append([0] * (2 * rows) + [1] * cols)
    b = [Fraction(0)] * cols + [Fraction(1)]
    x = _phase_one(A, b, 2 * rows + cols)
    return None if x is None else [x[e] - x[rows + e] for e in range(rows)]


def verify_witness(G: np.ndarray, z: Sequence[Fraction]) -> bool:
    return all(v > 0 for v in z) and all(sum(int(G[e, d]) * z[d] for d in range(G.shape[1])) == 0
                                         for e in range(G.shape[0]))


def verify_certificate(G: np.ndarray, p: Sequence[Fraction]) -> bool:
    combo = [sum(p[e] * int(G[e, d]) for e in range(G.shape[0])) for d in range(G.shape[1])]
    return all(v >= 0 for v in combo) and any(v != 0 for v in combo)


@dataclass
class EffectivityResult:
    marking: Marking
    effective: bool
    gluing: np.ndarray
    witness: Optional[List[Fraction]] = None
    certificate: Optional[List[Fraction]] = None

    @property
    def verified(self) -> bool:
        if self.effective:
            return self.certificate is None and verify_witness(self.gluing, self.witness)
        return self.witness is None and verify_certificate(self.gluing, self.certificate)


def is_effective(T: IdealTriangulation, marking: Marking) -> EffectivityResult:
    G = gluing_matrix(T, marking)
    witness = positive_solution(G)
    if witness is not None:
        return EffectivityResult(marking, True, G, witness=witness)
    certificate = stiemke_certificate(G)
    if certificate is None:
        # the two alternatives are exhaustive
        raise RuntimeError(f"Neither a witness nor a certificate for {marking.render()}")
    return EffectivityResult(marking, False, G, certificate=certificate)


def _render_vector(v: Optional[Sequence[Fraction]]) -> str:
    return '' if v is None else '(' + ', '.join(str(x) for x in v) + ')'


class EffectivityChecker:
    """Decides effectivity for every marking of a triangulation and tabulates the results."""

    def __init__(self, triangulation: IdealTriangulation):
        self.triangulation = triangulation
        self._results: Dict[Marking, EffectivityResult] = {}

    def check(self, marking: Marking) -> EffectivityResult:
        if marking not in self._results:
            self._results[marking] = is_effective(self.triangulation, marking)
        return self._results[marking]

    def check_all(self) -> List[EffectivityResult]:
        return [self.check(m) for m in all_markings(self.triangulation)]

    def effective_markings(self) -> List[Marking]:
        return [r.marking for r in self.check_all() if r.effective]

    def marking_table(self) -> pd.DataFrame:
        rows = [{
            'marking': r.marking.render(),
            'effective': r.effective,
            'witness': _render_vector(r.witness),
            'certificate': _render_vector(r.certificate),
            'verified': r.verified,
        } for r in self.check_all()]
        return pd.DataFrame(rows, columns=['marking', 'effective', 'witness', 'certificate', 'verified'])

    def report(self) -> VerificationReport:
        """Residual 0 per marking when its witness or certificate checks, plus the rank and taut checks."""
        started = time.perf_counter()
        T = self.triangulation
        residuals: List[Tuple[str, int]] = []
        for result in self.check_all():
            residuals.append((result.marking.render(), 0 if result.verified else 1))
            rank = sympy.Matrix(result.gluing.tolist()).rank() if result.gluing.size else 0
            residuals.append((f"rank {result.marking.render()}", max(0, rank - (T.tets - T.cusps))))
        if T.consistent:
            solution = generalized_angle_solver(T)
            for choice in enumerate_taut(T):
                residuals.append((f"taut {choice}", 0 if solution.satisfies(taut_angles(choice)) else 1))
        return build_report(f"effectivity {T.name}".strip(), f"t={T.tets}", residuals, started,
                            effective=[m.render() for m in self.effective_markings()])
