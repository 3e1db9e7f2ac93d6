import logging
from fractions import Fraction
from functools import reduce
from typing import Dict, Iterable, List, Mapping, Optional, Tuple, Union

import sympy
from sympy import QQ
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations
from sympy.polys.fields import FracElement, field

logger = logging.getLogger(__name__)

# The coefficient field Q(s), with s = q^(1/2).
QField, s = field("s", QQ)

VARIABLES: Tuple[str, ...] = ('a', 'a1', 'a2', 'xi')

# Exponents are stored doubled so that half-integer framing powers fit the lattice.
Monomial = Tuple[int, int, int, int]
UNIT_MONOMIAL: Monomial = (0, 0, 0, 0)

Number = Union[int, Fraction]


class ScalarParseError(ValueError):
    """Raised when scalar text does not follow the rendering grammar."""


class SpecializationError(ZeroDivisionError):
    """Raised when a substitution makes a denominator vanish."""


def _ground(value) -> 'QField':
    """Convert ints, Fractions, sympy rationals and field elements into Q(s)."""
    if isinstance(value, bool):
        raise TypeError("Booleans are not scalars")
    if isinstance(value, int):
        return QField(value)
    if isinstance(value, Fraction):
        return QField(value.numerator) / QField(value.denominator)
    if isinstance(value, sympy.Rational):
        return QField(int(value.p)) / QField(int(value.q))
    if isinstance(value, FracElement) and value.field == QField:
        return value
    raise TypeError(f"Cannot use {type(value).__name__} as a coefficient")


def _add_monomials(m1: Monomial, m2: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(m1, m2))


class Scalar:
    """Laurent polynomial in a, a1, a2, xi with coefficients in Q(s).

    Terms are kept in a dict ``monomial -> coefficient`` with zero coefficients
    dropped, so the dict itself is the canonical form and ``==`` is semantic
    equality.
    """

    __slots__ = ('_terms', '_hash')

    def __init__(self, terms: Optional[Mapping[Monomial, object]] = None):
        clean: Dict[Monomial, object] = {}
        for mono, coeff in (terms or {}).items():
            if len(mono) != len(VARIABLES):
                raise ValueError(f"Monomial {mono} must have {len(VARIABLES)} exponents")
            value = _ground(coeff)
            if value:
                clean[tuple(mono)] = value
        self._terms = clean
        self._hash = None

    # ------------------------------------------------------------------ constructors
    @classmethod
    def zero(cls) -> 'Scalar':
        return cls()

    @classmethod
    def one(cls) -> 'Scalar':
        return cls({UNIT_MONOMIAL: 1})

    @classmethod
    def const(cls, value) -> 'Scalar':
        return cls({UNIT_MONOMIAL: value})

    @classmethod
    def var(cls, name: str, exponent: Number = 1) -> 'Scalar':
        """Monomial ``name^exponent``; a-variables accept half-integers."""
        if name == 's':
            exponent = Fraction(exponent)
            if exponent.denominator != 1:
                raise ValueError("s only takes integer exponents")
            return cls.const(s ** int(exponent))
        if name == 'q':
            return cls.var('s', 2 * Fraction(exponent))
        if name not in VARIABLES:
            raise ValueError(f"Unsupported variable: {name}. Choose from {list(VARIABLES)}")
        doubled = 2 * Fraction(exponent)
        if doubled.denominator != 1:
            raise ValueError(f"Exponent {exponent} of {name} is not a multiple of 1/2")
        if name == 'xi' and doubled.numerator % 2:
            raise ValueError("xi only takes integer exponents")
        mono = [0, 0, 0, 0]
        mono[VARIABLES.index(name)] = int(doubled)
        return cls({tuple(mono): 1})

    @classmethod
    def s_power(cls, n: int) -> 'Scalar':
        return cls.const(s ** n)

    @classmethod
    def z(cls) -> 'Scalar':
        return cls.const(s - 1 / s)

    @classmethod
    def from_field(cls, value) -> 'Scalar':
        return cls.const(value)

    # ------------------------------------------------------------------ access
    @property
    def terms(self) -> Dict[Monomial, object]:
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items())

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def is_constant(self) -> bool:
        """True if no variable other than s occurs."""
        return all(mono == UNIT_MONOMIAL for mono in self._terms)

    def constant_value(self):
        """The Q(s) value of a variable-free scalar."""
        if not self.is_constant():
            raise ValueError(f"{self} depends on {self.variables()}")
        return self._terms.get(UNIT_MONOMIAL, QField(0))

    def variables(self) -> Tuple[str, ...]:
        used = set()
        for mono in self._terms:
            used.update(name for name, e in zip(VARIABLES, mono) if e)
        return tuple(name for name in VARIABLES if name in used)

    def coefficient_field_values(self) -> List[object]:
        """The Q(s) coefficients, in monomial order."""
        return [coeff for _, coeff in self.items()]

    def degree_in(self, name: str) -> Optional[Fraction]:
        """Common degree in ``name`` if homogeneous, else None."""
        idx = VARIABLES.index(name)
        degrees = {Fraction(mono[idx], 2) for mono in self._terms}
        if len(degrees) > 1:
            return None
        return degrees.pop() if degrees else Fraction(0)

    def coefficient(self, **exponents: Number):
        """Q(s) coefficient of the monomial given by keyword exponents."""
        mono = [0, 0, 0, 0]
        for name, e in exponents.items():
            mono[VARIABLES.index(name)] = int(2 * Fraction(e))
        return self._terms.get(tuple(mono), QField(0))

    # ------------------------------------------------------------------ arithmetic
    @staticmethod
    def _coerce(other) -> 'Scalar':
        if isinstance(other, Scalar):
            return other
        return Scalar.const(other)

    def __add__(self, other) -> 'Scalar':
        other = self._coerce(other)
        out = dict(self._terms)
        for mono, coeff in other._terms.items():
            out[mono] = out.get(mono, 0) + coeff
        return Scalar(out)

    __radd__ = __add__

    def __neg__(self) -> 'Scalar':
        return Scalar({m: -c for m, c in self._terms.items()})

    def __sub__(self, other) -> 'Scalar':
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> 'Scalar':
        return self._coerce(other) - self

    def __mul__(self, other) -> 'Scalar':
        other = self._coerce(other)
        out: Dict[Monomial, object] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                mono = _add_monomials(m1, m2)
                out[mono] = out.get(mono, 0) + c1 * c2
        return Scalar(out)

    __rmul__ = __mul__

    def inverse(self) -> 'Scalar':
        """Inverse of a single-term scalar."""
        if not self.is_monomial():
            raise ZeroDivisionError(f"Only single-term scalars are invertible, got {self}")
        (mono, coeff), = self._terms.items()
        return Scalar({tuple(-e for e in mono): 1 / coeff})

    def __truediv__(self, other) -> 'Scalar':
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other) -> 'Scalar':
        return self._coerce(other) * self.inverse()

    def __pow__(self, exponent: int) -> 'Scalar':
        if not isinstance(exponent, int):
            return self.root_power(Fraction(exponent))
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = Scalar.one()
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def root_power(self, exponent: Fraction) -> 'Scalar':
        """Fractional power of a pure variable monomial with unit coefficient."""
        if exponent.denominator == 1:
            return self ** int(exponent)
        if not self.is_monomial():
            raise ValueError(f"Fractional power of non-monomial {self}")
        (mono, coeff), = self._terms.items()
        if coeff != 1:
            raise ValueError(f"Fractional power of {self} leaves the coefficient field")
        doubled = [Fraction(e) * exponent for e in mono]
        if any(d.denominator != 1 for d in doubled):
            raise ValueError(f"{self}^{exponent} is not on the half-integer lattice")
        if doubled[3] % 2:
            raise ValueError(f"{self}^{exponent} gives a fractional power of xi")
        return Scalar({tuple(int(d) for d in doubled): 1})

    def __eq__(self, other) -> bool:
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # ------------------------------------------------------------------ substitution
    def map_coefficients(self, func) -> 'Scalar':
        return Scalar({m: func(c) for m, c in self._terms.items()})

    def bar(self) -> 'Scalar':
        """Replace s by 1/s in every coefficient."""
        return self.map_coefficients(lambda c: _substitute_s_field(c, 1 / s))

    def specialize(self, bindings: Mapping[str, object]) -> 'Scalar':
        """Substitute variables (and optionally s) by scalars.

        Args:
            bindings: map from a, a1, a2, xi or s to Scalar (or number) values.

        Returns:
            The evaluated scalar.

        Raises:
            SpecializationError: if a coefficient denominator vanishes.
            ValueError: for unknown variable names or unreachable fractional powers.
        """
        unknown = set(bindings) - set(VARIABLES) - {'s'}
        if unknown:
            raise ValueError(f"Unsupported bindings: {sorted(unknown)}. Choose from {list(VARIABLES) + ['s']}")
        values = {name: self._coerce(v) for name, v in bindings.items()}
        total = Scalar.zero()
        for mono, coeff in self._terms.items():
            term = _substitute_s(coeff, values['s']) if 's' in values else Scalar.const(coeff)
            for name, doubled in zip(VARIABLES, mono):
                if not doubled:
                    continue
                if name in values:
                    term = term * values[name].root_power(Fraction(doubled, 2))
                else:
                    term = term * Scalar.var(name, Fraction(doubled, 2))
            total = total + term
        return total

    def evaluate_float(self, s_value: float, **values: float) -> complex:
        """Numeric value at `s = s_value` and the given framing values."""
        total = 0j
        for mono, coeff in self._terms.items():
            num = coeff.numer.as_expr().subs(sympy.Symbol('s'), s_value)
            den = coeff.denom.as_expr().subs(sympy.Symbol('s'), s_value)
            value = complex(num) / complex(den)
            for name, doubled in zip(VARIABLES, mono):
                if doubled:
                    value *= complex(values.get(name, 1.0)) ** (doubled / 2)
            total += value
        return total

    # ------------------------------------------------------------------ text
    def to_expr(self) -> sympy.Expr:
        symbols = [sympy.Symbol(name) for name in VARIABLES]
        expr = sympy.Integer(0)
        for mono, coeff in self.items():
            term = coeff.as_expr()
            for sym, doubled in zip(symbols, mono):
                if doubled:
                    term *= sym ** sympy.Rational(doubled, 2)
            expr += term
        return expr

    def render(self) -> str:
        if not self._terms:
            return '0'
        parts = []
        for mono, coeff in self.items():
            factors = []
            for name, doubled in zip(VARIABLES, mono):
                if not doubled:
                    continue
                exp = Fraction(doubled, 2)
                if exp == 1:
                    factors.append(name)
                elif exp.denominator == 1:
                    factors.append(f"{name}^{exp.numerator}")
                else:
                    factors.append(f"{name}^({exp})")
            coeff_text = _render_field(coeff)
            if not factors:
                parts.append(coeff_text)
            elif coeff == 1:
                parts.append('*'.join(factors))
            elif coeff == -1:
                parts.append('-' + '*'.join(factors))
            else:
                parts.append(f"({coeff_text})*" + '*'.join(factors))
        return ' + '.join(parts).replace('+ -', '- ')

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"Scalar({self.render()!r})"

    @classmethod
    def parse(cls, text: str) -> 'Scalar':
        return parse_scalar(text)


def _render_field(value) -> str:
    text = str(sympy.factor_terms(value.as_expr()))
    return text.replace('**', '^')


def _eval_poly(poly, point: Scalar) -> Scalar:
    """Evaluate a univariate polynomial in s at a Scalar by Horner's rule."""
    coeffs = {exp[0]: c for exp, c in poly.terms()}
    if not coeffs:
        return Scalar.zero()
    result = Scalar.zero()
    for k in range(max(coeffs), -1, -1):
        c = coeffs.get(k, 0)
        result = result * point + Scalar.const(Fraction(int(c.numerator), int(c.denominator)) if c else 0)
    return result


def _substitute_s(coeff, point: Scalar) -> Scalar:
    numer = _eval_poly(coeff.numer, point)
    denom = _eval_poly(coeff.denom, point)
    if denom.is_zero():
        raise SpecializationError(
            f"Denominator {_render_field(QField(coeff.denom))} vanishes at s = {point}")
    try:
        return numer / denom
    except ZeroDivisionError as exc:
        raise SpecializationError(
            f"Denominator {_render_field(QField(coeff.denom))} becomes {denom}, which is not invertible") from exc


def _substitute_s_field(coeff, value):
    point = Scalar.const(value)
    return _substitute_s(coeff, point).constant_value()


# ---------------------------------------------------------------------- named scalars
def quantum_bracket(n: int) -> Scalar:
    """{n} = s^n - s^-n."""
    return Scalar.const(s ** n - s ** (-n))


def quantum_integer(n: int) -> Scalar:
    """[n] = {n}/{1}; [0] = 0 and [-n] = -[n]."""
    return Scalar.const((s ** n - s ** (-n)) / (s - 1 / s))


def z_scalar() -> Scalar:
    return Scalar.z()


def unknot_value(avar: str = 'a') -> Scalar:
    """(A - A^-1)/z for the named framing variable (or product 'a1a2')."""
    A = framing_monomial(avar)
    return (A - A.inverse()) / Scalar.z()


def framing_monomial(avar: str) -> Scalar:
    """Scalar for a framing variable name; 'a1a2' means the product."""
    if avar == 'a1a2':
        return Scalar.var('a1') * Scalar.var('a2')
    return Scalar.var(avar)


def sum_scalars(values: Iterable[Scalar]) -> Scalar:
    return reduce(lambda x, y: x + y, values, Scalar.zero())


# ---------------------------------------------------------------------- parsing
_TRANSFORMS = standard_transformations + (convert_xor,)


def parse_scalar(text: str) -> Scalar:
    """Parse the rendering grammar (and q, z shorthands) into a Scalar.

    Raises:
        ScalarParseError: on syntax errors or unsupported constructs.
    """
    if not isinstance(text, str) or not text.strip():
        raise ScalarParseError("Empty scalar text")
    sym_s = sympy.Symbol('s')
    local = {name: sympy.Symbol(name) for name in VARIABLES}
    local.update({'s': sym_s, 'q': sym_s ** 2, 'z': sym_s - 1 / sym_s})
    try:
        expr = parse_expr(text, local_dict=local, transformations=_TRANSFORMS, evaluate=True)
    except Exception as exc:  # sympy raises SyntaxError, TokenError, TypeError ...
        logger.error("Failed to parse scalar %r: %s", text, exc)
        raise ScalarParseError(f"Cannot parse scalar {text!r}: {exc}") from exc
    return _from_expr(expr, text)


def _from_expr(expr, text: str) -> Scalar:
    if expr.is_Integer or expr.is_Rational:
        return Scalar.const(Fraction(int(expr.p), int(expr.q)))
    if expr.is_Symbol:
        if expr.name == 's':
            return Scalar.const(s)
        if expr.name in VARIABLES:
            return Scalar.var(expr.name)
        raise ScalarParseError(f"Unknown symbol {expr.name} in {text!r}")
    if expr.is_Add:
        return sum_scalars(_from_expr(arg, text) for arg in expr.args)
    if expr.is_Mul:
        return reduce(lambda x, y: x * y, (_from_expr(arg, text) for arg in expr.args), Scalar.one())
    if expr.is_Pow:
        base, exponent = expr.args
        if not exponent.is_Rational:
            raise ScalarParseError(f"Non-rational exponent {exponent} in {text!r}")
        value = _from_expr(base, text)
        try:
            if exponent.is_Integer:
                return value ** int(exponent)
            return value.root_power(Fraction(int(exponent.p), int(exponent.q)))
        except (ValueError, ZeroDivisionError) as exc:
            raise ScalarParseError(f"Cannot raise {base} to {exponent} in {text!r}: {exc}") from exc
    raise ScalarParseError(f"Unsupported construct {expr} in {text!r}")
