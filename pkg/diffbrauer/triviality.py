"""
Membership of the trivial class.

Decides whether (Mn(R), Z) is equivalent to (Mn(R), 0) for the supported inputs, with an explicit gauge
certificate for a positive answer and a separation witness for a negative one. Anything else is Unknown.

:copyright: (c) 2026 by the diffbrauer authors.
:license: Mozilla Public License Version 2.0, see LICENSE for more details.
"""

from __future__ import annotations

from dataclasses import dataclass
import sys

if sys.version_info >= (3, 11):
    from enum import StrEnum
else:  # Python 3.10: verbatim backport of enum.StrEnum
    from backports.strenum import StrEnum
from fractions import Fraction
import logging

from diffalg import DiffMatrixAlgebra, GaugeCertificate, constants_basis, verify_certificate
from errors import PreconditionError
from exactnum import BaseRing, Matrix, RationalFunction, Scalar, log_derivative_solve, scalar_to_rational
from invariants import SeparationWitness, WitnessKind, eig_diff_report, separate

_LOG = logging.getLogger(__name__)


class TrivialityStatus(StrEnum):
    """Three-valued triviality outcome."""

    TRIVIAL = "TrivialWithCertificate"
    NONTRIVIAL = "NontrivialWithWitness"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class TrivialityVerdict:
    """Outcome of decide_trivial with its evidence."""

    status: TrivialityStatus
    certificate: GaugeCertificate | None = None
    witness: SeparationWitness | None = None


def _shift_or_none(base: BaseRing, value: Scalar) -> Scalar | None:
    return None if value == base.zero() else value


def nilpotent_exp_certificate(alg: DiffMatrixAlgebra) -> GaugeCertificate:
    """
    Return Y = exp(-N x) for a constant Z = θI + N with N nilpotent.

    The series is finite since N^n = 0. Y' = -NY, so the gauge transform of Z by Y is θI; θ becomes the
    scalar shift of the certificate.

    :raises PreconditionError: if the base isn't Q(x) or Z isn't constant scalar plus nilpotent.
    """
    base, n = alg.base, alg.n
    if base is not BaseRing.RATIONAL_FUNCTION_FIELD:
        msg = "exponential certificates need the base Q(x)"
        raise PreconditionError(msg)
    if not alg.Z.is_constant():
        msg = "exponential certificates need a constant derivation matrix"
        raise PreconditionError(msg)
    theta = scalar_to_rational(alg.Z.trace()) / n
    nilpotent = alg.Z - Matrix.scalar(base, n, theta)
    if not nilpotent.power(n).is_zero():
        msg = "derivation matrix isn't a scalar plus a nilpotent matrix"
        raise PreconditionError(msg)
    step = -nilpotent.scale(RationalFunction.x())
    term = Matrix.identity(base, n)
    y = term
    for k in range(1, n):
        term = (term @ step).scale(Fraction(1, k))
        y = y + term
    _LOG.debug("Exponential certificate with shift %s", theta)
    return GaugeCertificate(y, _shift_or_none(base, base.coerce(theta)))


def scalar_obstruction(alg: DiffMatrixAlgebra) -> SeparationWitness | None:
    """
    Return a ScalarTest witness iff Z isn't scalar, over the constant base.

    The witness records a nonzero eigenvalue difference when there's a rational one, otherwise the
    nilpotency index of the (nonzero) adjoint operator against 1.
    """
    if alg.base is not BaseRing.CONSTANT_FIELD:
        msg = "the scalar test only decides triviality over Q"
        raise PreconditionError(msg)
    if alg.Z.is_scalar():
        return None
    report = eig_diff_report(alg)
    zero = frozenset({Fraction(0)})
    if report.e_value_set is not None and report.e_value_set != zero:
        return SeparationWitness(WitnessKind.SCALAR_TEST, report.e_value_set, zero)
    return SeparationWitness(WitnessKind.SCALAR_TEST, report.nilpotency_index, 1)


def constants_rank_obstruction(alg: DiffMatrixAlgebra) -> SeparationWitness | None:
    """
    Compare the dimension of the constants with n² over the constant base.

    The constants of (Mn(Q), Z) are the centralizer of Z, which is all of Mn(Q) only for scalar Z.
    """
    if alg.base is not BaseRing.CONSTANT_FIELD:
        msg = "the constants rank test needs the base Q"
        raise PreconditionError(msg)
    dimension = len(constants_basis(alg, 0))
    full = alg.n * alg.n
    if dimension < full:
        return SeparationWitness(WitnessKind.CONSTANTS_RANK, dimension, full)
    return None


def diagonal_certificate(alg: DiffMatrixAlgebra) -> GaugeCertificate | None:
    """
    Trivialize a diagonal Z over Q(x) entry by entry.

    Solves y_i' = -(z_i - z_1) y_i with log_derivative_solve; Y = diag(y_i) then gauges Z to z_1 * I.

    :return: the certificate, or None if Z isn't diagonal or some equation has no rational solution.
    """
    base, n, z = alg.base, alg.n, alg.Z
    if base is not BaseRing.RATIONAL_FUNCTION_FIELD:
        return None
    if z != Matrix.diagonal(base, [z[i, i] for i in range(n)]):
        return None
    first = z[0, 0]
    solutions: list[Scalar] = []
    for i in range(n):
        rhs = base.sub(first, z[i, i])
        if not isinstance(rhs, RationalFunction):
            return None
        solution = log_derivative_solve(rhs)
        if solution is None:
            _LOG.debug("No rational solution for diagonal entry %d", i)
            return None
        solutions.append(solution)
    return GaugeCertificate(Matrix.diagonal(base, solutions), _shift_or_none(base, first))


def _checked(alg: DiffMatrixAlgebra, cert: GaugeCertificate) -> TrivialityVerdict:
    if verify_certificate(alg, DiffMatrixAlgebra.trivial(alg.base, alg.n), cert):
        _LOG.info("Trivial with a verified certificate")
        return TrivialityVerdict(TrivialityStatus.TRIVIAL, certificate=cert)
    _LOG.warning("Constructed certificate failed verification")
    return TrivialityVerdict(TrivialityStatus.UNKNOWN)


def _nontrivial(witness: SeparationWitness) -> TrivialityVerdict:
    _LOG.info("Nontrivial, witness %s", witness.kind)
    return TrivialityVerdict(TrivialityStatus.NONTRIVIAL, witness=witness)


def decide_trivial(alg: DiffMatrixAlgebra, certificate: GaugeCertificate | None = None) -> TrivialityVerdict:
    """
    Decide whether alg lies in the trivial class.

    Over Q the answer is always decided: trivial iff Z is scalar. Over Q(x) a supplied certificate is tried
    first; constant Z is trivial when Z - θI is nilpotent and nontrivial when some eigenvalue difference
    is a nonzero rational; non-constant diagonal Z is solved entrywise. Everything else is Unknown.

    :param certificate: optional user certificate against (Mn, 0).
    """
    base, n = alg.base, alg.n
    if base is BaseRing.CONSTANT_FIELD:
        if alg.Z.is_scalar():
            return _checked(alg, GaugeCertificate(Matrix.identity(base, n), _shift_or_none(base, alg.Z[0, 0])))
        witness = separate(alg, DiffMatrixAlgebra.trivial(base, 1)) or scalar_obstruction(alg)
        if witness is None:
            return TrivialityVerdict(TrivialityStatus.UNKNOWN)
        return _nontrivial(witness)

    if certificate is not None:
        if verify_certificate(alg, DiffMatrixAlgebra.trivial(base, n), certificate):
            return TrivialityVerdict(TrivialityStatus.TRIVIAL, certificate=certificate)
        _LOG.warning("Supplied certificate rejected")

    if alg.Z.is_constant():
        report = eig_diff_report(alg)
        if report.splits and all(root == 0 for root in report.root_multiset):
            return _checked(alg, nilpotent_exp_certificate(alg))
        if any(root != 0 for root in report.root_multiset):
            witness = separate(alg, DiffMatrixAlgebra.trivial(base, 1))
            if witness is not None:
                return _nontrivial(witness)
        _LOG.info("Eigenvalue differences aren't all rational, verdict unknown")
        return TrivialityVerdict(TrivialityStatus.UNKNOWN)

    diagonal = diagonal_certificate(alg)
    if diagonal is not None:
        return _checked(alg, diagonal)
    return TrivialityVerdict(TrivialityStatus.UNKNOWN)
