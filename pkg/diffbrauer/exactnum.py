"""
Exact arithmetic kernel.

Rationals, univariate polynomials over Q, rational functions in Q(x) with the derivation d/dx and matrices
over the two supported differential base rings. Polynomial and matrix arithmetic is delegated to the exact
domains of sympy; this module only fixes canonical representations and the JSON-facing value types.

:copyright: (c) 2026 by the diffbrauer authors.
:license: Mozilla Public License Version 2.0, see LICENSE for more details.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
import sys

if sys.version_info >= (3, 11):
    from enum import StrEnum
else:  # Python 3.10: verbatim backport of enum.StrEnum
    from backports.strenum import StrEnum
from fractions import Fraction
import logging
import math
import re
from tokenize import TokenError
from typing import Any, NamedTuple, TypeAlias

from sympy import QQ, Symbol
from sympy.core.sympify import SympifyError
from sympy.ntheory import divisors
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations
from sympy.polys.fields import FracElement
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.exceptions import DMNonInvertibleMatrixError
from sympy.polys.polyerrors import CoercionFailed
from sympy.polys.rings import PolyElement, ring

from errors import (
    BaseRingMismatchError,
    DimensionMismatchError,
    InputFormatError,
    NonSquareMatrixError,
    SingularMatrixError,
    ZeroPolynomialError,
)

_LOG = logging.getLogger(__name__)

X = Symbol("x")
"""The differential indeterminate of Q(x)."""

_FRAC_DOMAIN = QQ.frac_field(X)
_FIELD = _FRAC_DOMAIN.field
_POLY_RING = _FIELD.ring
_POLY_GEN = _POLY_RING.gens[0]
_FIELD_GEN = _FIELD.gens[0]

# Q[x, t] for the Rothstein-Trager resultant; the resultant in x lands in Q[t].
_RT_RING, _RT_X, _RT_T = ring("x,t", QQ)

# Expression strings may only use x, integers, arithmetic and parentheses; nothing else reaches the parser.
_EXPRESSION = re.compile(r"[0-9x+\-*/^()\s]+")
_TRANSFORMATIONS = (*standard_transformations, convert_xor)

Rational: TypeAlias = Fraction
"""Arbitrary-precision rational, always reduced with a positive denominator."""


def to_qq(value: Fraction | int) -> Any:
    """Convert a Python rational to an element of sympy's QQ."""
    value = Fraction(value)
    return QQ(value.numerator, value.denominator)


def from_qq(element: Any) -> Fraction:
    """Convert an element of sympy's QQ to a Python rational."""
    return Fraction(int(element.numerator), int(element.denominator))


@dataclass(frozen=True)
class Polynomial:
    """Univariate polynomial over Q, coefficients constant term first and without trailing zeros."""

    coeffs: tuple[Fraction, ...] = ()

    def __post_init__(self) -> None:
        coeffs = [Fraction(c) for c in self.coeffs]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        object.__setattr__(self, "coeffs", tuple(coeffs))

    @classmethod
    def constant(cls, value: Fraction | int) -> Polynomial:
        """Return the constant polynomial with the given value."""
        return cls((Fraction(value),))

    @classmethod
    def monomial(cls, degree: int, coeff: Fraction | int = 1) -> Polynomial:
        """Return ``coeff * x^degree``."""
        return cls((Fraction(0),) * degree + (Fraction(coeff),))

    @classmethod
    def from_roots(cls, roots: Iterable[Fraction | int]) -> Polynomial:
        """Return the monic polynomial with the given roots, repeated roots included."""
        result = cls.constant(1)
        for root in roots:
            result = result * cls((-Fraction(root), Fraction(1)))
        return result

    @classmethod
    def from_poly_element(cls, element: PolyElement) -> Polynomial:
        """Convert a univariate sympy ring element over QQ."""
        if not element:
            return cls()
        coeffs = [Fraction(0)] * (int(element.degree()) + 1)
        for monom, coeff in element.items():
            coeffs[monom[0]] = from_qq(coeff)
        return cls(tuple(coeffs))

    def to_poly_element(self) -> PolyElement:
        """Convert to an element of the sympy ring Q[x]."""
        return _POLY_RING.from_dict({(k,): to_qq(c) for k, c in enumerate(self.coeffs) if c})

    @property
    def degree(self) -> int:
        """Return the degree, -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        """Check for the zero polynomial."""
        return not self.coeffs

    @property
    def leading(self) -> Fraction:
        """Return the leading coefficient, zero for the zero polynomial."""
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_constant(self) -> bool:
        """Check if the polynomial has degree at most zero."""
        return self.degree <= 0

    def constant_term(self) -> Fraction:
        """Return the coefficient of x^0."""
        return self.coeffs[0] if self.coeffs else Fraction(0)

    def __add__(self, other: Polynomial | Fraction | int) -> Polynomial:
        other = _as_polynomial(other)
        return Polynomial.from_poly_element(self.to_poly_element() + other.to_poly_element())

    __radd__ = __add__

    def __sub__(self, other: Polynomial | Fraction | int) -> Polynomial:
        other = _as_polynomial(other)
        return Polynomial.from_poly_element(self.to_poly_element() - other.to_poly_element())

    def __rsub__(self, other: Polynomial | Fraction | int) -> Polynomial:
        return _as_polynomial(other) - self

    def __neg__(self) -> Polynomial:
        return Polynomial(tuple(-c for c in self.coeffs))

    def __mul__(self, other: Polynomial | Fraction | int) -> Polynomial:
        other = _as_polynomial(other)
        return Polynomial.from_poly_element(self.to_poly_element() * other.to_poly_element())

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> Polynomial:
        return Polynomial.from_poly_element(self.to_poly_element() ** exponent)

    def __divmod__(self, other: Polynomial) -> tuple[Polynomial, Polynomial]:
        if other.is_zero:
            msg = "polynomial division by zero"
            raise ZeroDivisionError(msg)
        quotient, remainder = divmod(self.to_poly_element(), other.to_poly_element())
        return Polynomial.from_poly_element(quotient), Polynomial.from_poly_element(remainder)

    def __floordiv__(self, other: Polynomial) -> Polynomial:
        return divmod(self, other)[0]

    def __mod__(self, other: Polynomial) -> Polynomial:
        return divmod(self, other)[1]

    def derivative(self) -> Polynomial:
        """Return d/dx of the polynomial."""
        return Polynomial.from_poly_element(self.to_poly_element().diff(_POLY_GEN))

    def gcd(self, other: Polynomial) -> Polynomial:
        """Return the monic greatest common divisor (zero if both are zero)."""
        return Polynomial.from_poly_element(self.to_poly_element().gcd(other.to_poly_element()))

    def monic(self) -> Polynomial:
        """Return the polynomial divided by its leading coefficient."""
        if self.is_zero:
            return self
        return Polynomial(tuple(c / self.leading for c in self.coeffs))

    def evaluate(self, value: Fraction | int) -> Fraction:
        """Evaluate at a rational point."""
        if self.is_zero:
            return Fraction(0)
        return from_qq(self.to_poly_element().evaluate(_POLY_GEN, to_qq(value)))

    def primitive_integer_coeffs(self) -> tuple[int, ...]:
        """Return the primitive integer multiple with a positive leading coefficient, constant term first."""
        if self.is_zero:
            return ()
        scale = math.lcm(*(c.denominator for c in self.coeffs))
        ints = [int(c * scale) for c in self.coeffs]
        content = math.gcd(*ints)
        if ints[-1] < 0:
            content = -content
        return tuple(i // content for i in ints)


def _as_polynomial(value: Polynomial | Fraction | int) -> Polynomial:
    if isinstance(value, Polynomial):
        return value
    return Polynomial.constant(value)


ZERO_POLY = Polynomial()
ONE_POLY = Polynomial.constant(1)


@dataclass(frozen=True)
class RationalFunction:
    """
    Element of Q(x) in canonical form.

    The denominator is monic and coprime to the numerator; zero is 0/1.
    """

    num: Polynomial
    den: Polynomial = ONE_POLY

    def __post_init__(self) -> None:
        if self.den.is_zero:
            msg = "rational function with zero denominator"
            raise ZeroDivisionError(msg)
        if self.num.is_zero:
            object.__setattr__(self, "den", ONE_POLY)
            return
        numer = self.num.to_poly_element()
        denom = self.den.to_poly_element()
        common = numer.gcd(denom)
        numer, denom = numer.exquo(common), denom.exquo(common)
        lead = denom.LC
        object.__setattr__(self, "num", Polynomial.from_poly_element(numer.quo_ground(lead)))
        object.__setattr__(self, "den", Polynomial.from_poly_element(denom.monic()))

    @classmethod
    def constant(cls, value: Fraction | int) -> RationalFunction:
        """Return the constant function with the given value."""
        return cls(Polynomial.constant(value))

    @classmethod
    def x(cls) -> RationalFunction:
        """Return the indeterminate x."""
        return cls(Polynomial.monomial(1))

    @classmethod
    def parse(cls, text: str) -> RationalFunction:
        """
        Parse an expression in x such as ``"x/(x+1)"`` or ``"x^2 - 1/2"``.

        Only integers, x, ``+ - * / ^``, parentheses and whitespace are accepted.

        :raises InputFormatError: if the text isn't a rational function of x with rational coefficients.
        """
        if not _EXPRESSION.fullmatch(text):
            msg = f"{text!r} may only contain integers, x, + - * / ^ and parentheses"
            raise InputFormatError(msg)
        try:
            expr = parse_expr(text, local_dict={"x": X}, transformations=_TRANSFORMATIONS)
        except (SympifyError, SyntaxError, TokenError, TypeError) as err:
            msg = f"cannot parse {text!r} as a rational function of x"
            raise InputFormatError(msg) from err
        if expr.free_symbols - {X}:
            msg = f"{text!r} has symbols other than x"
            raise InputFormatError(msg)
        try:
            return cls.from_frac(_FRAC_DOMAIN.from_sympy(expr))
        except (CoercionFailed, ZeroDivisionError) as err:
            msg = f"{text!r} isn't a rational function of x over Q"
            raise InputFormatError(msg) from err

    @classmethod
    def from_frac(cls, element: FracElement) -> RationalFunction:
        """Convert an element of sympy's Q(x)."""
        return cls(Polynomial.from_poly_element(element.numer), Polynomial.from_poly_element(element.denom))

    def to_frac(self) -> FracElement:
        """Convert to an element of sympy's Q(x)."""
        return _FIELD.raw_new(self.num.to_poly_element(), self.den.to_poly_element())

    @property
    def is_zero(self) -> bool:
        """Check for the zero function."""
        return self.num.is_zero

    def is_constant(self) -> bool:
        """Check if the function is an element of Q."""
        return self.num.is_constant() and self.den == ONE_POLY

    def constant_value(self) -> Fraction:
        """Return the rational value of a constant function."""
        if not self.is_constant():
            msg = f"{self} is not a constant"
            raise BaseRingMismatchError(msg)
        return self.num.constant_term()

    def is_polynomial(self) -> bool:
        """Check if the denominator is one."""
        return self.den == ONE_POLY

    def __add__(self, other: RationalFunction | Fraction | int) -> RationalFunction:
        return RationalFunction.from_frac(self.to_frac() + _as_rational_function(other).to_frac())

    __radd__ = __add__

    def __sub__(self, other: RationalFunction | Fraction | int) -> RationalFunction:
        return RationalFunction.from_frac(self.to_frac() - _as_rational_function(other).to_frac())

    def __rsub__(self, other: RationalFunction | Fraction | int) -> RationalFunction:
        return _as_rational_function(other) - self

    def __neg__(self) -> RationalFunction:
        return RationalFunction(-self.num, self.den)

    def __mul__(self, other: RationalFunction | Fraction | int) -> RationalFunction:
        return RationalFunction.from_frac(self.to_frac() * _as_rational_function(other).to_frac())

    __rmul__ = __mul__

    def __truediv__(self, other: RationalFunction | Fraction | int) -> RationalFunction:
        other = _as_rational_function(other)
        if other.is_zero:
            msg = "rational function division by zero"
            raise ZeroDivisionError(msg)
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other: RationalFunction | Fraction | int) -> RationalFunction:
        return _as_rational_function(other) / self

    def __pow__(self, exponent: int) -> RationalFunction:
        if exponent < 0:
            return RationalFunction(self.den**-exponent, self.num**-exponent)
        return RationalFunction(self.num**exponent, self.den**exponent)

    def derivative(self) -> RationalFunction:
        """Return d/dx by the quotient rule."""
        return RationalFunction.from_frac(self.to_frac().diff(_FIELD_GEN))

    def __str__(self) -> str:
        return str(self.to_frac().as_expr())


def _as_rational_function(value: RationalFunction | Fraction | int) -> RationalFunction:
    if isinstance(value, RationalFunction):
        return value
    return RationalFunction.constant(value)


Scalar: TypeAlias = Fraction | RationalFunction
"""Element of a base ring: Fraction over Q, RationalFunction over Q(x)."""


def rf_derive(f: RationalFunction) -> RationalFunction:
    """Return df/dx in canonical form; zero exactly for constants."""
    return f.derivative()


class BaseRing(StrEnum):
    """The supported differential base rings."""

    CONSTANT_FIELD = "Q"
    """Q with the zero derivation; its constants are all of Q."""
    RATIONAL_FUNCTION_FIELD = "Q(x)"
    """Q(x) with d/dx; its constants are Q."""

    @property
    def domain(self) -> Any:
        """Return the sympy domain of the ring."""
        return QQ if self is BaseRing.CONSTANT_FIELD else _FRAC_DOMAIN

    @property
    def has_derivation(self) -> bool:
        """Check if the derivation of the ring is nonzero."""
        return self is BaseRing.RATIONAL_FUNCTION_FIELD

    def zero(self) -> Scalar:
        """Return the zero of the ring."""
        return self.coerce(0)

    def one(self) -> Scalar:
        """Return the one of the ring."""
        return self.coerce(1)

    def coerce(self, value: Scalar | int) -> Scalar:
        """Convert a value to the canonical scalar type of the ring."""
        if self is BaseRing.CONSTANT_FIELD:
            if isinstance(value, RationalFunction):
                if not value.is_constant():
                    msg = f"{value} is not an element of Q"
                    raise BaseRingMismatchError(msg)
                return value.constant_value()
            return Fraction(value)
        if isinstance(value, RationalFunction):
            return value
        return RationalFunction.constant(value)

    def add(self, left: Scalar | int, right: Scalar | int) -> Scalar:
        """Return left + right in the ring."""
        return self.from_domain(self.to_domain(left) + self.to_domain(right))

    def sub(self, left: Scalar | int, right: Scalar | int) -> Scalar:
        """Return left - right in the ring."""
        return self.from_domain(self.to_domain(left) - self.to_domain(right))

    def mul(self, left: Scalar | int, right: Scalar | int) -> Scalar:
        """Return left * right in the ring."""
        return self.from_domain(self.to_domain(left) * self.to_domain(right))

    def derive(self, value: Scalar) -> Scalar:
        """Apply the derivation of the ring."""
        if isinstance(value, RationalFunction):
            return value.derivative()
        return Fraction(0)

    def to_domain(self, value: Scalar | int) -> Any:
        """Convert a scalar of this ring to the sympy domain element."""
        value = self.coerce(value)
        if isinstance(value, RationalFunction):
            return value.to_frac()
        return to_qq(value)

    def from_domain(self, element: Any) -> Scalar:
        """Convert a sympy domain element to the scalar type of this ring."""
        if self is BaseRing.CONSTANT_FIELD:
            return from_qq(element)
        return RationalFunction.from_frac(element)


def is_constant_scalar(value: Scalar) -> bool:
    """Check if a scalar lies in Q."""
    return not isinstance(value, RationalFunction) or value.is_constant()


def scalar_to_rational(value: Scalar) -> Fraction:
    """Return the rational value of a constant scalar."""
    if isinstance(value, RationalFunction):
        return value.constant_value()
    return value


@dataclass(frozen=True)
class Matrix:
    """Dense matrix over one base ring, entries stored row-major."""

    base: BaseRing
    rows: int
    cols: int
    entries: tuple[Scalar, ...]

    def __post_init__(self) -> None:
        if self.rows <= 0 or self.cols <= 0:
            msg = f"matrix dimensions must be positive, got {self.rows}x{self.cols}"
            raise DimensionMismatchError(msg)
        if len(self.entries) != self.rows * self.cols:
            msg = f"{len(self.entries)} entries don't fill a {self.rows}x{self.cols} matrix"
            raise DimensionMismatchError(msg)
        object.__setattr__(self, "entries", tuple(self.base.coerce(e) for e in self.entries))

    @classmethod
    def from_rows(cls, base: BaseRing, rows: Sequence[Sequence[Scalar | int]]) -> Matrix:
        """Create a matrix from nested row lists."""
        if not rows or not rows[0]:
            msg = "a matrix needs at least one row and one column"
            raise DimensionMismatchError(msg)
        width = len(rows[0])
        if any(len(row) != width for row in rows):
            msg = "ragged matrix rows"
            raise DimensionMismatchError(msg)
        return cls(base, len(rows), width, tuple(base.coerce(e) for row in rows for e in row))

    @classmethod
    def column(cls, base: BaseRing, values: Sequence[Scalar | int]) -> Matrix:
        """Create a column vector."""
        return cls(base, len(values), 1, tuple(base.coerce(v) for v in values))

    @classmethod
    def zeros(cls, base: BaseRing, rows: int, cols: int | None = None) -> Matrix:
        """Create a zero matrix."""
        cols = rows if cols is None else cols
        return cls(base, rows, cols, (base.zero(),) * (rows * cols))

    @classmethod
    def scalar(cls, base: BaseRing, n: int, value: Scalar | int) -> Matrix:
        """Create the scalar matrix value * I."""
        zero = base.zero()
        value = base.coerce(value)
        return cls(base, n, n, tuple(value if i == j else zero for i in range(n) for j in range(n)))

    @classmethod
    def identity(cls, base: BaseRing, n: int) -> Matrix:
        """Create the n x n identity matrix."""
        return cls.scalar(base, n, 1)

    @classmethod
    def diagonal(cls, base: BaseRing, values: Sequence[Scalar | int]) -> Matrix:
        """Create a diagonal matrix."""
        n = len(values)
        zero = base.zero()
        return cls(base, n, n, tuple(base.coerce(values[i]) if i == j else zero for i in range(n) for j in range(n)))

    @classmethod
    def unit(cls, base: BaseRing, n: int, i: int, j: int) -> Matrix:
        """Create the matrix unit e_ij (0-based indices)."""
        zero, one = base.zero(), base.one()
        return cls(base, n, n, tuple(one if (r, c) == (i, j) else zero for r in range(n) for c in range(n)))

    @classmethod
    def from_domain_matrix(cls, base: BaseRing, matrix: DomainMatrix) -> Matrix:
        """Convert a sympy DomainMatrix over the domain of ``base``."""
        rows, cols = matrix.shape
        return cls(base, rows, cols, tuple(base.from_domain(e) for e in matrix.to_list_flat()))

    def to_domain_matrix(self) -> DomainMatrix:
        """Convert to a sympy DomainMatrix over the domain of the base ring."""
        flat = [self.base.to_domain(e) for e in self.entries]
        return DomainMatrix.from_list_flat(flat, (self.rows, self.cols), self.base.domain)

    def to_rational_domain_matrix(self) -> DomainMatrix:
        """Convert a constant matrix to a DomainMatrix over QQ."""
        flat = [to_qq(scalar_to_rational(e)) for e in self.entries]
        return DomainMatrix.from_list_flat(flat, (self.rows, self.cols), QQ)

    def __getitem__(self, index: tuple[int, int]) -> Scalar:
        i, j = index
        return self.entries[i * self.cols + j]

    def row_lists(self) -> list[list[Scalar]]:
        """Return the entries as nested row lists."""
        return [list(self.entries[i * self.cols : (i + 1) * self.cols]) for i in range(self.rows)]

    @property
    def is_square(self) -> bool:
        """Check if the matrix is square."""
        return self.rows == self.cols

    def _check_compatible(self, other: Matrix) -> None:
        if self.base is not other.base:
            msg = f"base ring mismatch: {self.base} vs {other.base}"
            raise BaseRingMismatchError(msg)

    def _check_same_shape(self, other: Matrix) -> None:
        self._check_compatible(other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            msg = f"shape mismatch: {self.rows}x{self.cols} vs {other.rows}x{other.cols}"
            raise DimensionMismatchError(msg)

    def __add__(self, other: Matrix) -> Matrix:
        self._check_same_shape(other)
        return Matrix.from_domain_matrix(self.base, self.to_domain_matrix() + other.to_domain_matrix())

    def __sub__(self, other: Matrix) -> Matrix:
        self._check_same_shape(other)
        return Matrix.from_domain_matrix(self.base, self.to_domain_matrix() - other.to_domain_matrix())

    def __neg__(self) -> Matrix:
        return Matrix.from_domain_matrix(self.base, -self.to_domain_matrix())

    def __matmul__(self, other: Matrix) -> Matrix:
        self._check_compatible(other)
        if self.cols != other.rows:
            msg = f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}"
            raise DimensionMismatchError(msg)
        return Matrix.from_domain_matrix(self.base, self.to_domain_matrix().matmul(other.to_domain_matrix()))

    def scale(self, value: Scalar | int) -> Matrix:
        """Multiply every entry by a scalar of the base ring."""
        factor = self.base.to_domain(self.base.coerce(value))
        return Matrix.from_domain_matrix(self.base, self.to_domain_matrix().scalarmul(factor))

    def power(self, exponent: int) -> Matrix:
        """Return the matrix raised to a nonnegative integer power."""
        if not self.is_square:
            msg = "only square matrices have powers"
            raise NonSquareMatrixError(msg)
        return Matrix.from_domain_matrix(self.base, self.to_domain_matrix() ** exponent)

    def transpose(self) -> Matrix:
        """Return the transpose."""
        entries = tuple(self[i, j] for j in range(self.cols) for i in range(self.rows))
        return Matrix(self.base, self.cols, self.rows, entries)

    def kron(self, other: Matrix) -> Matrix:
        """
        Return the Kronecker product.

        The entry ``(i*m + k, j*q + l)`` of ``A ⊗ B`` is ``A[i, j] * B[k, l]`` for B of shape m x q.
        """
        self._check_compatible(other)
        m, q = other.rows, other.cols
        entries: list[Scalar] = []
        for i in range(self.rows):
            for k in range(m):
                for j in range(self.cols):
                    a = self[i, j]
                    entries.extend(self.base.mul(a, other[k, col]) for col in range(q))
        return Matrix(self.base, self.rows * m, self.cols * q, tuple(entries))

    def inverse(self) -> Matrix:
        """Return the inverse of a square matrix."""
        if not self.is_square:
            msg = "only square matrices can be inverted"
            raise NonSquareMatrixError(msg)
        try:
            return Matrix.from_domain_matrix(self.base, self.to_domain_matrix().inv())
        except DMNonInvertibleMatrixError as err:
            msg = "matrix is singular"
            raise SingularMatrixError(msg) from err

    def det(self) -> Scalar:
        """Return the determinant."""
        if not self.is_square:
            msg = "only square matrices have a determinant"
            raise NonSquareMatrixError(msg)
        return self.base.from_domain(self.to_domain_matrix().det())

    def trace(self) -> Scalar:
        """Return the trace."""
        if not self.is_square:
            msg = "only square matrices have a trace"
            raise NonSquareMatrixError(msg)
        total = self.base.zero()
        for i in range(self.rows):
            total = self.base.add(total, self[i, i])
        return total

    def derivative(self) -> Matrix:
        """Apply the base derivation entrywise (the zero matrix over Q)."""
        return Matrix(self.base, self.rows, self.cols, tuple(self.base.derive(e) for e in self.entries))

    def is_zero(self) -> bool:
        """Check for the zero matrix."""
        return all(e == 0 if isinstance(e, Fraction) else e.is_zero for e in self.entries)

    def is_constant(self) -> bool:
        """Check if every entry lies in Q."""
        return all(is_constant_scalar(e) for e in self.entries)

    def is_scalar(self) -> bool:
        """Check if the matrix is c * I for some scalar c."""
        if not self.is_square:
            return False
        return self == Matrix.scalar(self.base, self.rows, self[0, 0])

    def change_base(self, base: BaseRing) -> Matrix:
        """Reinterpret the entries over another base ring (Q -> Q(x) always works, the reverse needs constants)."""
        return Matrix(base, self.rows, self.cols, tuple(base.coerce(e) for e in self.entries))

    def flatten(self) -> Matrix:
        """Return the row-major stacking of the matrix as a column vector."""
        return Matrix(self.base, self.rows * self.cols, 1, self.entries)


CharPoly: TypeAlias = Polynomial | tuple[RationalFunction, ...]
"""Characteristic polynomial: over Q for constant matrices, coefficients in Q(x) (constant term first) otherwise."""


def char_poly(matrix: Matrix) -> CharPoly:
    """
    Return det(tI - M).

    Constant matrices (entries in Q, over either base) yield a monic Polynomial over Q; otherwise the
    coefficients are rational functions, constant term first.

    :raises NonSquareMatrixError: if M isn't square.
    """
    if not matrix.is_square:
        msg = f"characteristic polynomial of a non-square {matrix.rows}x{matrix.cols} matrix"
        raise NonSquareMatrixError(msg)
    if matrix.is_constant():
        coeffs = matrix.to_rational_domain_matrix().charpoly()
        return Polynomial(tuple(from_qq(c) for c in reversed(coeffs)))
    coeffs = matrix.to_domain_matrix().charpoly()
    return tuple(RationalFunction.from_frac(c) for c in reversed(coeffs))


class RationalRoots(NamedTuple):
    """Rational roots of a polynomial, repeated by multiplicity and sorted."""

    roots: tuple[Fraction, ...]
    splits: bool
    """True if the polynomial is a product of linear factors over Q."""


def rational_roots(p: Polynomial) -> RationalRoots:
    """
    Find the rational roots of p with multiplicity.

    Candidates ±a/b come from the rational-root test on the primitive integer form (a divides the lowest
    nonzero coefficient, b the leading one); each root is deflated as often as it divides.

    :raises ZeroPolynomialError: for the zero polynomial.
    """
    if p.is_zero:
        msg = "rational roots of the zero polynomial"
        raise ZeroPolynomialError(msg)
    ints = list(p.primitive_integer_coeffs())
    roots: list[Fraction] = []
    while ints[0] == 0:
        roots.append(Fraction(0))
        ints.pop(0)
    remaining = Polynomial(tuple(Fraction(c) for c in ints))
    if remaining.degree > 0:
        candidates = sorted(
            {
                Fraction(sign * a, b)
                for a in divisors(abs(ints[0]))
                for b in divisors(abs(ints[-1]))
                for sign in (1, -1)
            }
        )
        _LOG.debug("Testing %d rational root candidates", len(candidates))
        for candidate in candidates:
            linear = Polynomial((-candidate, Fraction(1)))
            while remaining.degree > 0 and remaining.evaluate(candidate) == 0:
                roots.append(candidate)
                remaining = remaining // linear
    roots.sort()
    return RationalRoots(tuple(roots), splits=len(roots) == p.degree)


def squarefree_part(p: Polynomial) -> Polynomial:
    """
    Return p / gcd(p, p'), made monic.

    :raises ZeroPolynomialError: for the zero polynomial.
    """
    if p.is_zero:
        msg = "square-free part of the zero polynomial"
        raise ZeroPolynomialError(msg)
    return Polynomial.from_poly_element(p.to_poly_element().sqf_part()).monic()


def rothstein_trager_resultant(a: Polynomial, q: Polynomial) -> Polynomial:
    """Return res_x(q, a - t*q') as a polynomial in t."""

    def lift(p: Polynomial) -> PolyElement:
        return _RT_RING.from_dict({(k, 0): to_qq(c) for k, c in enumerate(p.coeffs) if c})

    q2 = lift(q)
    result = q2.resultant(lift(a) - _RT_T * q2.diff(_RT_X))
    if isinstance(result, PolyElement):
        return Polynomial.from_poly_element(result)
    return Polynomial.constant(from_qq(result))


def log_derivative_solve(f: RationalFunction) -> RationalFunction | None:
    """
    Solve y' = f*y for a nonzero y in Q(x).

    A solution exists iff f is a logarithmic derivative: no polynomial part, a square-free denominator q
    and only integer residues. With f = a/q the residues are the roots of the Rothstein-Trager resultant
    res_x(q, a - t*q'); the solution is the product of gcd(q, a - n*q')^n over the distinct residues n.

    :return: a nonzero solution, or None if there's none in Q(x).
    """
    if f.is_zero:
        return RationalFunction.constant(1)
    a, q = f.num, f.den
    if a.degree >= q.degree:
        _LOG.debug("No log-derivative solution for %s: nonzero polynomial part", f)
        return None
    dq = q.derivative()
    if q.gcd(dq).degree > 0:
        _LOG.debug("No log-derivative solution for %s: denominator isn't square-free", f)
        return None
    resultant = rothstein_trager_resultant(a, q)
    roots, splits = rational_roots(resultant)
    _LOG.debug("Rothstein-Trager resultant %s has rational roots %s (splits: %s)", resultant.coeffs, roots, splits)
    if not splits or any(r.denominator != 1 for r in roots):
        return None
    solution = RationalFunction.constant(1)
    for residue in sorted(set(roots)):
        factor = q.gcd(a - dq * residue)
        solution = solution * RationalFunction(factor) ** int(residue)
    return solution
