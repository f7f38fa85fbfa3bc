"""
Differential matrix algebras.

An algebra (Mn(R), Z) carries the derivation Y -> Y' + ZY - YZ, which is purely inner over the constant
base. A differential module (R^n, A) carries x -> x' + Ax.

:copyright: (c) 2026 by the diffbrauer authors.
:license: Mozilla Public License Version 2.0, see LICENSE for more details.
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass
from fractions import Fraction
import logging

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from errors import BaseRingMismatchError, DimensionMismatchError, NonSquareMatrixError, PreconditionError
from exactnum import BaseRing, Matrix, Polynomial, RationalFunction, Scalar, from_qq, to_qq

_LOG = logging.getLogger(__name__)


@dataclass(frozen=True)
class DiffMatrixAlgebra:
    """The differential algebra (Mn(base), Z)."""

    base: BaseRing
    n: int
    Z: Matrix  # noqa: N815

    def __post_init__(self) -> None:
        if self.n <= 0:
            msg = f"algebra size must be positive, got {self.n}"
            raise DimensionMismatchError(msg)
        if not self.Z.is_square or self.Z.rows != self.n:
            msg = f"derivation matrix must be {self.n}x{self.n}, got {self.Z.rows}x{self.Z.cols}"
            raise NonSquareMatrixError(msg)
        if self.Z.base is not self.base:
            msg = f"derivation matrix is over {self.Z.base}, algebra over {self.base}"
            raise BaseRingMismatchError(msg)

    @classmethod
    def trivial(cls, base: BaseRing, n: int) -> DiffMatrixAlgebra:
        """Return (Mn(base), 0)."""
        return cls(base, n, Matrix.zeros(base, n))


@dataclass(frozen=True)
class DiffModule:
    """The differential module (base^n, A)."""

    base: BaseRing
    n: int
    A: Matrix

    def __post_init__(self) -> None:
        if not self.A.is_square or self.A.rows != self.n:
            msg = f"module matrix must be {self.n}x{self.n}, got {self.A.rows}x{self.A.cols}"
            raise NonSquareMatrixError(msg)
        if self.A.base is not self.base:
            msg = f"module matrix is over {self.A.base}, module over {self.base}"
            raise BaseRingMismatchError(msg)


@dataclass(frozen=True)
class GaugeCertificate:
    """
    Gauge matrix Y with an optional scalar shift c.

    The certificate claims Y^-1 Z Y + Y^-1 Y' = Z_dst + c*I.
    """

    Y: Matrix  # noqa: N815
    scalar_shift: Scalar | None = None


def _check_element(alg: DiffMatrixAlgebra, y: Matrix) -> None:
    if y.base is not alg.base:
        msg = f"matrix is over {y.base}, algebra over {alg.base}"
        raise BaseRingMismatchError(msg)
    if (y.rows, y.cols) != (alg.n, alg.n):
        msg = f"expected a {alg.n}x{alg.n} matrix, got {y.rows}x{y.cols}"
        raise DimensionMismatchError(msg)


def derive_element(alg: DiffMatrixAlgebra, y: Matrix) -> Matrix:
    """Return Y' + ZY - YZ."""
    _check_element(alg, y)
    return y.derivative() + (alg.Z @ y - y @ alg.Z)


def module_derive(mod: DiffModule, v: Matrix) -> Matrix:
    """Return v' + Av for a column vector v."""
    if v.base is not mod.base:
        msg = f"vector is over {v.base}, module over {mod.base}"
        raise BaseRingMismatchError(msg)
    if v.cols != 1 or v.rows != mod.n:
        msg = f"expected a column vector of length {mod.n}, got {v.rows}x{v.cols}"
        raise DimensionMismatchError(msg)
    return v.derivative() + mod.A @ v


def tensor_alg(a: DiffMatrixAlgebra, b: DiffMatrixAlgebra) -> DiffMatrixAlgebra:
    """Return (M_nm, Za ⊗ Im + In ⊗ Zb)."""
    if a.base is not b.base:
        msg = f"cannot tensor algebras over {a.base} and {b.base}"
        raise BaseRingMismatchError(msg)
    z = a.Z.kron(Matrix.identity(b.base, b.n)) + Matrix.identity(a.base, a.n).kron(b.Z)
    return DiffMatrixAlgebra(a.base, a.n * b.n, z)


def amplify(alg: DiffMatrixAlgebra, p: int) -> DiffMatrixAlgebra:
    """Return Mp(A) = A ⊗ (Mp, 0)."""
    if p <= 0:
        msg = f"amplification size must be positive, got {p}"
        raise DimensionMismatchError(msg)
    return tensor_alg(alg, DiffMatrixAlgebra.trivial(alg.base, p))


def base_extend(alg: DiffMatrixAlgebra) -> DiffMatrixAlgebra:
    """Map (Mn(Q), Z) to (Mn(Q(x)), Z); algebras already over Q(x) are returned as is."""
    if alg.base is BaseRing.RATIONAL_FUNCTION_FIELD:
        return alg
    extended = BaseRing.RATIONAL_FUNCTION_FIELD
    return DiffMatrixAlgebra(extended, alg.n, alg.Z.change_base(extended))


def gauge_transform(alg: DiffMatrixAlgebra, y: Matrix) -> DiffMatrixAlgebra:
    """
    Return (Mn, Y^-1 Z Y + Y^-1 Y').

    Conjugation X -> Y^-1 X Y is then a differential isomorphism from alg to the result.

    :raises SingularMatrixError: if Y isn't invertible.
    """
    _check_element(alg, y)
    y_inv = y.inverse()
    return DiffMatrixAlgebra(alg.base, alg.n, y_inv @ alg.Z @ y + y_inv @ y.derivative())


def verify_certificate(src: DiffMatrixAlgebra, dst: DiffMatrixAlgebra, cert: GaugeCertificate) -> bool:
    """
    Check that the gauge transform of src by cert.Y is dst + c*I.

    Without a scalar shift the match must be exact. A true result certifies a differential isomorphism.
    """
    if src.base is not dst.base:
        msg = f"cannot compare algebras over {src.base} and {dst.base}"
        raise BaseRingMismatchError(msg)
    if src.n != dst.n:
        msg = f"cannot compare algebras of sizes {src.n} and {dst.n}"
        raise DimensionMismatchError(msg)
    transformed = gauge_transform(src, cert.Y)
    shift = src.base.zero() if cert.scalar_shift is None else src.base.coerce(cert.scalar_shift)
    expected = dst.Z + Matrix.scalar(src.base, src.n, shift)
    accepted = transformed.Z == expected
    if not accepted:
        _LOG.debug("Certificate rejected: gauge transform doesn't match the target")
    return accepted


def kron_certificate(first: GaugeCertificate, second: GaugeCertificate) -> GaugeCertificate:
    """Return the certificate Y1 ⊗ Y2 with shift c1 + c2 for the tensor product of two certified pairs."""
    base = first.Y.base
    c1 = base.zero() if first.scalar_shift is None else first.scalar_shift
    c2 = base.zero() if second.scalar_shift is None else second.scalar_shift
    shift = base.add(c1, c2)
    if shift == base.zero():
        return GaugeCertificate(first.Y.kron(second.Y))
    return GaugeCertificate(first.Y.kron(second.Y), shift)


def _common_denominator(matrix: Matrix) -> Polynomial:
    denominator = Polynomial.constant(1)
    for entry in matrix.entries:
        if isinstance(entry, RationalFunction):
            denominator = denominator * (entry.den // denominator.gcd(entry.den))
    return denominator


def constants_basis(alg: DiffMatrixAlgebra, deg_bound: int) -> list[Matrix]:
    """
    Return a Q-basis of the constants Y (polynomial entries of degree <= deg_bound) with ∂Z(Y) = 0.

    The unknowns are the coefficients of x^k e_ij. Clearing the common denominator L of Z turns
    L * ∂Z(x^k e_ij) into polynomial matrices whose coefficients form the columns of a linear system
    over Q. Over the constant base only k = 0 occurs, which gives the centralizer of Z.
    """
    if deg_bound < 0:
        msg = f"degree bound must be nonnegative, got {deg_bound}"
        raise PreconditionError(msg)
    n, base = alg.n, alg.base
    degrees = deg_bound if base.has_derivation else 0
    denominator = _common_denominator(alg.Z)
    unknowns: list[Matrix] = []
    images: list[list[Polynomial]] = []
    for i in range(n):
        for j in range(n):
            for k in range(degrees + 1):
                unit = Matrix.unit(base, n, i, j).scale(_monomial(base, k))
                unknowns.append(unit)
                image = derive_element(alg, unit)
                images.append([_cleared(entry, denominator) for entry in image.entries])
    height = max((p.degree for column in images for p in column), default=0) + 1
    system = [
        [column[entry].coeffs[power] if power <= column[entry].degree else Fraction(0) for column in images]
        for entry in range(n * n)
        for power in range(height)
    ]
    kernel = DomainMatrix([[to_qq(c) for c in row] for row in system], (len(system), len(unknowns)), QQ).nullspace()
    _LOG.debug("Constants system: %d equations, %d unknowns, nullity %d", len(system), len(unknowns), kernel.shape[0])
    basis: list[Matrix] = []
    for vector in kernel.to_list():
        element = Matrix.zeros(base, n)
        for coeff, unit in zip(vector, unknowns, strict=True):
            if coeff:
                element = element + unit.scale(from_qq(coeff))
        basis.append(element)
    return basis


def _monomial(base: BaseRing, k: int) -> Scalar:
    if base.has_derivation:
        return RationalFunction(Polynomial.monomial(k))
    return Fraction(1)


def _cleared(entry: Scalar, denominator: Polynomial) -> Polynomial:
    if isinstance(entry, RationalFunction):
        cleared = entry * RationalFunction(denominator)
        return cleared.num
    return Polynomial.constant(entry)


def recover_derivation_matrix(base: BaseRing, n: int, images: Mapping[tuple[int, int], Matrix]) -> Matrix:
    """
    Recover the trace-zero X with D = (·)' + I_X from the images D(e_ij) of the matrix units.

    The matrix units are constant, so D(e_ij) = X e_ij - e_ij X. Off-diagonal entries of X are read off
    D(e_jj), diagonal differences off D(e_1j), and trace zero fixes the diagonal. The candidate is then
    checked against every image.

    :param images: mapping (i, j) -> D(e_ij), 0-based, for every pair.
    :raises PreconditionError: if the images don't come from a derivation of the form (·)' + I_X.
    """
    for i in range(n):
        for j in range(n):
            if (i, j) not in images:
                msg = f"missing image of e_{i + 1}{j + 1}"
                raise PreconditionError(msg)
            image = images[(i, j)]
            if image.base is not base or (image.rows, image.cols) != (n, n):
                msg = f"image of e_{i + 1}{j + 1} must be a {n}x{n} matrix over {base}"
                raise PreconditionError(msg)
    entries: list[list[Scalar]] = [[base.zero() for _ in range(n)] for _ in range(n)]
    for k in range(n):
        for j in range(n):
            if k != j:
                # (X e_jj - e_jj X)[k, j] = X_kj
                entries[k][j] = images[(j, j)][k, j]
    # (X e_0j - e_0j X)[0, j] = X_00 - X_jj
    diffs = [images[(0, j)][0, j] for j in range(n)]
    total = base.zero()
    for d in diffs:
        total = base.add(total, d)
    x00 = base.mul(total, Fraction(1, n))
    for j in range(n):
        entries[j][j] = base.sub(x00, diffs[j])
    x_matrix = Matrix.from_rows(base, entries)
    alg = DiffMatrixAlgebra(base, n, x_matrix)
    for (i, j), image in images.items():
        unit = Matrix.unit(base, n, i, j)
        if derive_element(alg, unit) != image:
            msg = f"image of e_{i + 1}{j + 1} isn't the inner derivation of any matrix"
            raise PreconditionError(msg)
    return x_matrix
