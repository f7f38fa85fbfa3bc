"""
Canned example scenarios.

Each scenario recomputes one structural claim about differential matrix algebras over Q and Q(x) and
reports whether the computed values match.

:copyright: (c) 2026 by the diffbrauer authors.
:license: Mozilla Public License Version 2.0, see LICENSE for more details.
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass
from fractions import Fraction
import logging

from diffalg import (
    DiffMatrixAlgebra,
    amplify,
    base_extend,
    derive_element,
    gauge_transform,
    tensor_alg,
    verify_certificate,
)
from errors import DiffBrauerError
from exactnum import BaseRing, Matrix, Polynomial, RationalFunction, char_poly, log_derivative_solve, rational_roots
from invariants import WitnessKind, ad_matrix, e_values, eig_diff_report, separate
from monoid import multiplicative_monoid, quotient, quotient_units
from triviality import TrivialityStatus, decide_trivial

_LOG = logging.getLogger(__name__)

Q = BaseRing.CONSTANT_FIELD
QX = BaseRing.RATIONAL_FUNCTION_FIELD


@dataclass(frozen=True)
class ScenarioResult:
    """Outcome of one scenario."""

    name: str
    claim: str
    passed: bool
    detail: str


def _fractions(*values: int) -> tuple[Fraction, ...]:
    return tuple(sorted(Fraction(v) for v in values))


def _eigenvalue_differences() -> tuple[bool, str]:
    alg = DiffMatrixAlgebra(Q, 2, Matrix.diagonal(Q, [3, 1]))
    poly = char_poly(ad_matrix(alg).matrix)
    roots = rational_roots(poly) if isinstance(poly, Polynomial) else None
    expected = Polynomial((Fraction(0), Fraction(0), Fraction(-4), Fraction(0), Fraction(1)))
    passed = poly == expected and roots is not None and roots.roots == _fractions(-2, 0, 0, 2)
    return passed, f"ad char poly coefficients {[str(c) for c in expected.coeffs]}"


def _difference_law() -> tuple[bool, str]:
    p = Matrix.from_rows(Q, [[1, 2, 0], [0, 1, 3], [1, 0, 1]])
    z = p @ Matrix.diagonal(Q, [1, 2, 4]) @ p.inverse()
    report = eig_diff_report(DiffMatrixAlgebra(Q, 3, z))
    lambdas = (1, 2, 4)
    expected = _fractions(*(a - b for a in lambdas for b in lambdas))
    return report.root_multiset == expected, "roots of ad are the differences of 1, 2, 4"


def _nilpotency_obstruction() -> tuple[bool, str]:
    alg = DiffMatrixAlgebra(Q, 2, Matrix.unit(Q, 2, 0, 1))
    report = eig_diff_report(alg)
    verdict = decide_trivial(alg)
    passed = (
        report.nilpotency_index == 3
        and verdict.status is TrivialityStatus.NONTRIVIAL
        and verdict.witness is not None
        and verdict.witness.kind is WitnessKind.NILPOTENCY_INDEX
    )
    return passed, f"nilpotency index {report.nilpotency_index}, verdict {verdict.status}"


def _trivialization_over_qx() -> tuple[bool, str]:
    alg = base_extend(DiffMatrixAlgebra(Q, 2, Matrix.unit(Q, 2, 0, 1)))
    verdict = decide_trivial(alg)
    expected = Matrix.identity(QX, 2) - Matrix.unit(QX, 2, 0, 1).scale(RationalFunction.x())
    passed = (
        verdict.status is TrivialityStatus.TRIVIAL
        and verdict.certificate is not None
        and verdict.certificate.Y == expected
        and verify_certificate(alg, DiffMatrixAlgebra.trivial(QX, 2), verdict.certificate)
    )
    return passed, "certificate I - x*e12"


def _gauge_convention() -> tuple[bool, str]:
    alg = DiffMatrixAlgebra(QX, 2, Matrix.unit(QX, 2, 0, 1))
    y = Matrix.identity(QX, 2) - Matrix.unit(QX, 2, 0, 1).scale(RationalFunction.x())
    return gauge_transform(alg, y).Z.is_zero(), "Y^-1 Z Y + Y^-1 Y' vanishes for Y' = -ZY"


def _separation_of_families() -> tuple[bool, str]:
    one = DiffMatrixAlgebra(QX, 2, Matrix.diagonal(QX, [2, 1]))
    two = DiffMatrixAlgebra(QX, 2, Matrix.diagonal(QX, [3, 1]))
    witness = separate(one, two)
    passed = (
        witness is not None
        and witness.kind is WitnessKind.EVALUE_SET
        and witness.left == frozenset(_fractions(-1, 0, 1))
        and witness.right == frozenset(_fractions(-2, 0, 2))
    )
    for p in (2, 3):
        passed = passed and e_values(amplify(one, p)) == e_values(one) and e_values(amplify(two, p)) == e_values(two)
    return passed, "e-values {0, 1, -1} vs {0, 2, -2}, stable under amplification by 2 and 3"


def _scalar_triviality() -> tuple[bool, str]:
    scalar = decide_trivial(DiffMatrixAlgebra(Q, 3, Matrix.scalar(Q, 3, 5)))
    diagonal = decide_trivial(DiffMatrixAlgebra(Q, 2, Matrix.diagonal(Q, [1, 2])))
    passed = scalar.status is TrivialityStatus.TRIVIAL and diagonal.status is TrivialityStatus.NONTRIVIAL
    return passed, "5I trivial, diag(1, 2) nontrivial over Q"


def _scalar_ode() -> tuple[bool, str]:
    x = RationalFunction.x()
    square = log_derivative_solve(RationalFunction.constant(2) / x)
    passed = (
        log_derivative_solve(RationalFunction.constant(1)) is None
        and square == x * x
        and log_derivative_solve(RationalFunction.constant(1) / (x * 2)) is None
    )
    return passed, "y' = y has no rational solution, y' = 2y/x gives x^2"


def _tensor_leibniz() -> tuple[bool, str]:
    x = RationalFunction.x()
    a = DiffMatrixAlgebra(QX, 2, Matrix.diagonal(QX, [1, 2]))
    b = DiffMatrixAlgebra(QX, 2, Matrix.unit(QX, 2, 0, 1))
    left = Matrix.from_rows(QX, [[x, 1], [0, x * x]])
    right = Matrix.from_rows(QX, [[1, x], [2, 0]])
    lhs = derive_element(tensor_alg(a, b), left.kron(right))
    rhs = derive_element(a, left).kron(right) + left.kron(derive_element(b, right))
    return lhs == rhs, "derivation of a tensor product is D_A ⊗ 1 + 1 ⊗ D_B"


def _monoid_quotient() -> tuple[bool, str]:
    z6 = multiplicative_monoid(6)
    q = quotient(z6, {1, 5})
    passed = q.classes == ((0,), (1, 5), (2, 4), (3,)) and quotient_units(z6, {1, 5}) == frozenset({1, 5})
    return passed, f"(Z/6, ×) modulo {{1, 5}} has {len(q.classes)} classes"


SCENARIOS: tuple[tuple[str, str, Callable[[], tuple[bool, str]]], ...] = (
    ("eigenvalue-differences", "ad eigenvalues are eigenvalue differences of Z", _eigenvalue_differences),
    ("difference-law", "root multiset of ad equals all ordered differences", _difference_law),
    ("nilpotency-obstruction", "(M2(Q), e12) is not trivial, ad^2 != 0 = ad^3", _nilpotency_obstruction),
    ("trivialization", "Q(x) ⊗ (M2(Q), e12) is trivial", _trivialization_over_qx),
    ("gauge-convention", "Y' = -ZY trivializes Z", _gauge_convention),
    ("family-separation", "diag(1 + λ, 1) for λ = 1, 2 are distinct classes", _separation_of_families),
    ("scalar-triviality", "over Q the trivial class is exactly the scalar Z", _scalar_triviality),
    ("scalar-ode", "y' = cy with c nonzero constant has only y = 0", _scalar_ode),
    ("tensor-leibniz", "tensor products carry the Kronecker-sum derivation", _tensor_leibniz),
    ("monoid-quotient", "m1 ~ m2 iff m1 n1 = m2 n2 for n1, n2 in N", _monoid_quotient),
)


def reproduce_examples() -> list[ScenarioResult]:
    """Run every scenario; a scenario that raises counts as failed."""
    results: list[ScenarioResult] = []
    for name, claim, scenario in SCENARIOS:
        try:
            passed, detail = scenario()
        except DiffBrauerError as err:
            _LOG.exception("Scenario %s raised", name)
            passed, detail = False, str(err)
        _LOG.info("Scenario %s: %s", name, "pass" if passed else "FAIL")
        results.append(ScenarioResult(name, claim, passed, detail))
    return results
