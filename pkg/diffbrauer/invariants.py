"""
Class invariants of differential matrix algebras.

The adjoint operator I_Z : X -> ZX - XZ as an n²×n² matrix, its characteristic polynomial, the rational
eigenvalue differences (e-values), the nilpotency index and separation witnesses built from them.

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
from typing import TypeAlias

from diffalg import DiffMatrixAlgebra
from errors import BaseRingMismatchError, UnsupportedInputError
from exactnum import BaseRing, CharPoly, Matrix, Polynomial, char_poly, rational_roots, squarefree_part

_LOG = logging.getLogger(__name__)


@dataclass(frozen=True)
class AdOperator:
    """Matrix of X -> ZX - XZ on row-major stacked X, i.e. Z ⊗ I - I ⊗ Zᵀ."""

    n: int
    matrix: Matrix


@dataclass(frozen=True)
class InvariantReport:
    """Adjoint-operator invariants of one algebra."""

    ad_char_poly: CharPoly
    ad_squarefree: Polynomial | None
    """Square-free part of ad_char_poly; None when Z isn't constant."""
    root_multiset: tuple[Fraction, ...]
    splits: bool
    nilpotency_index: int | None
    e_value_set: frozenset[Fraction] | None
    stable: bool


class WitnessKind(StrEnum):
    """The invariant a separation witness compares."""

    EVALUE_SET = "EValueSet"
    ROOT_SET = "RootSet"
    NILPOTENCY_INDEX = "NilpotencyIndex"
    SCALAR_TEST = "ScalarTest"
    CONSTANTS_RANK = "ConstantsRank"


WitnessValue: TypeAlias = frozenset[Fraction] | Polynomial | int | None


@dataclass(frozen=True)
class SeparationWitness:
    """Two differing values of one class-stable invariant; ``left`` belongs to the first algebra."""

    kind: WitnessKind
    left: WitnessValue
    right: WitnessValue


def ad_matrix(alg: DiffMatrixAlgebra) -> AdOperator:
    """Return Z ⊗ I - I ⊗ Zᵀ."""
    identity = Matrix.identity(alg.base, alg.n)
    return AdOperator(alg.n, alg.Z.kron(identity) - identity.kron(alg.Z.transpose()))


def nilpotency_index(ad: AdOperator) -> int | None:
    """Return the smallest k <= 2n-1 with ad^k = 0, or None if there's none."""
    power = ad.matrix
    for k in range(1, 2 * ad.n):
        if power.is_zero():
            _LOG.debug("Adjoint operator is nilpotent of index %d", k)
            return k
        power = power @ ad.matrix
    return None


def eig_diff_report(alg: DiffMatrixAlgebra) -> InvariantReport:
    """
    Compute the adjoint-operator invariants of an algebra.

    Root data and e-values are only available for constant Z, which is also the only regime flagged
    stable. The nilpotency index is computed either way.
    """
    ad = ad_matrix(alg)
    poly = char_poly(ad.matrix)
    index = nilpotency_index(ad)
    if not isinstance(poly, Polynomial):
        return InvariantReport(poly, None, (), splits=False, nilpotency_index=index, e_value_set=None, stable=False)
    squarefree = squarefree_part(poly)
    roots, splits = rational_roots(poly)
    e_value_set = frozenset(rational_roots(squarefree).roots)
    _LOG.debug("Adjoint char poly %s: roots %s, splits %s", poly.coeffs, roots, splits)
    return InvariantReport(poly, squarefree, roots, splits, index, e_value_set, stable=True)


def e_values(alg: DiffMatrixAlgebra) -> frozenset[Fraction]:
    """
    Return the rational eigenvalue differences of a constant Z.

    These are the μ admitting a nonzero e-element b with D(b) = μb; 0 is always one of them.

    :raises UnsupportedInputError: if Z isn't constant.
    """
    if not alg.Z.is_constant():
        msg = "e-values are only defined for a constant derivation matrix"
        raise UnsupportedInputError(msg)
    return eig_diff_report(alg).e_value_set or frozenset({Fraction(0)})


def separate(a: DiffMatrixAlgebra, b: DiffMatrixAlgebra) -> SeparationWitness | None:
    """
    Look for a class-stable invariant on which two algebras differ.

    Over Q the e-value set, the full eigenvalue-difference set (square-free adjoint char poly) and the
    nilpotency index are compared in that order. Over Q(x) only the e-value set is a class invariant.
    A witness proves the classes differ; None is inconclusive.

    :raises UnsupportedInputError: if either Z isn't constant.
    :raises BaseRingMismatchError: if the bases differ.
    """
    if a.base is not b.base:
        msg = f"cannot separate algebras over {a.base} and {b.base}"
        raise BaseRingMismatchError(msg)
    left, right = eig_diff_report(a), eig_diff_report(b)
    if not (left.stable and right.stable):
        msg = "separation needs constant derivation matrices"
        raise UnsupportedInputError(msg)
    witness: SeparationWitness | None = None
    if left.e_value_set != right.e_value_set:
        witness = SeparationWitness(WitnessKind.EVALUE_SET, left.e_value_set, right.e_value_set)
    elif a.base is BaseRing.CONSTANT_FIELD:
        if left.ad_squarefree != right.ad_squarefree:
            witness = SeparationWitness(WitnessKind.ROOT_SET, left.ad_squarefree, right.ad_squarefree)
        elif left.nilpotency_index != right.nilpotency_index:
            witness = SeparationWitness(WitnessKind.NILPOTENCY_INDEX, left.nilpotency_index, right.nilpotency_index)
    if witness is not None:
        _LOG.info("Separated by %s: %s vs %s", witness.kind, witness.left, witness.right)
    return witness
