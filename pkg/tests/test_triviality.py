from fractions import Fraction
import itertools
import unittest

from hypothesis import given, settings, strategies as st

from diffalg import DiffMatrixAlgebra, GaugeCertificate, verify_certificate
from errors import PreconditionError
from exact_strategies import QX, invertible_matrices, small_ints
from exactnum import BaseRing, Matrix, RationalFunction
from invariants import WitnessKind, eig_diff_report
from triviality import (
    TrivialityStatus,
    constants_rank_obstruction,
    decide_trivial,
    diagonal_certificate,
    nilpotent_exp_certificate,
    scalar_obstruction,
)

Q = BaseRing.CONSTANT_FIELD
x = RationalFunction.x()


def trivializer() -> Matrix:
    return Matrix.identity(QX, 2) - Matrix.unit(QX, 2, 0, 1).scale(x)


class TestNilpotentExpCertificate(unittest.TestCase):
    def test_zero(self):
        cert = nilpotent_exp_certificate(DiffMatrixAlgebra.trivial(QX, 3))
        self.assertEqual(Matrix.identity(QX, 3), cert.Y)
        self.assertIsNone(cert.scalar_shift)

    def test_nilpotent(self):
        cert = nilpotent_exp_certificate(DiffMatrixAlgebra(QX, 2, Matrix.unit(QX, 2, 0, 1)))
        self.assertEqual(trivializer(), cert.Y, "Expected the series to stop after the linear term")

    def test_scalar_plus_nilpotent(self):
        alg = DiffMatrixAlgebra(QX, 2, Matrix.identity(QX, 2) + Matrix.unit(QX, 2, 0, 1))
        cert = nilpotent_exp_certificate(alg)
        self.assertEqual(trivializer(), cert.Y)
        self.assertEqual(RationalFunction.constant(1), cert.scalar_shift)
        self.assertTrue(verify_certificate(alg, DiffMatrixAlgebra.trivial(QX, 2), cert))

    def test_index_three(self):
        n = Matrix.unit(QX, 3, 0, 1) + Matrix.unit(QX, 3, 1, 2)
        alg = DiffMatrixAlgebra(QX, 3, n)
        cert = nilpotent_exp_certificate(alg)
        expected = Matrix.identity(QX, 3) - n.scale(x) + (n @ n).scale(x * x * Fraction(1, 2))
        self.assertEqual(expected, cert.Y)
        self.assertTrue(verify_certificate(alg, DiffMatrixAlgebra.trivial(QX, 3), cert))

    def test_not_nilpotent(self):
        with self.assertRaises(PreconditionError):
            nilpotent_exp_certificate(DiffMatrixAlgebra(QX, 2, Matrix.diagonal(QX, [1, 2])))

    def test_constant_base(self):
        with self.assertRaises(PreconditionError):
            nilpotent_exp_certificate(DiffMatrixAlgebra.trivial(Q, 2))


class TestScalarObstruction(unittest.TestCase):
    def test_scalar(self):
        self.assertIsNone(scalar_obstruction(DiffMatrixAlgebra(Q, 2, Matrix.scalar(Q, 2, 7))))

    def test_eigenvalue_difference(self):
        witness = scalar_obstruction(DiffMatrixAlgebra(Q, 2, Matrix.diagonal(Q, [1, 2])))
        self.assertIsNotNone(witness)
        if witness is None:
            return
        self.assertEqual(WitnessKind.SCALAR_TEST, witness.kind)
        self.assertEqual(frozenset({Fraction(-1), Fraction(0), Fraction(1)}), witness.left)

    def test_nilpotent(self):
        witness = scalar_obstruction(DiffMatrixAlgebra(Q, 2, Matrix.unit(Q, 2, 0, 1)))
        self.assertIsNotNone(witness)
        if witness is None:
            return
        self.assertEqual((3, 1), (witness.left, witness.right))

    def test_rational_function_base(self):
        with self.assertRaises(PreconditionError):
            scalar_obstruction(DiffMatrixAlgebra.trivial(QX, 2))


class TestConstantsRankObstruction(unittest.TestCase):
    def test_scalar_has_full_constants(self):
        self.assertIsNone(constants_rank_obstruction(DiffMatrixAlgebra(Q, 2, Matrix.scalar(Q, 2, 3))))

    def test_nilpotent_has_smaller_centralizer(self):
        witness = constants_rank_obstruction(DiffMatrixAlgebra(Q, 2, Matrix.unit(Q, 2, 0, 1)))
        self.assertIsNotNone(witness)
        if witness is None:
            return
        self.assertEqual((2, 4), (witness.left, witness.right))


class TestDiagonalCertificate(unittest.TestCase):
    def test_logarithmic_derivative_entries(self):
        alg = DiffMatrixAlgebra(QX, 2, Matrix.diagonal(QX, [1 / x, RationalFunction.constant(0)]))
        cert = diagonal_certificate(alg)
        self.assertIsNotNone(cert)
        if cert is None:
            return
        self.assertEqual(Matrix.diagonal(QX, [1, x]), cert.Y)
        self.assertTrue(verify_certificate(alg, DiffMatrixAlgebra.trivial(QX, 2), cert))

    def test_no_rational_solution(self):
        alg = DiffMatrixAlgebra(QX, 2, Matrix.diagonal(QX, [1 / (x * 2), RationalFunction.constant(0)]))
        self.assertIsNone(diagonal_certificate(alg))

    def test_not_diagonal(self):
        self.assertIsNone(diagonal_certificate(DiffMatrixAlgebra(QX, 2, Matrix.unit(QX, 2, 0, 1).scale(x))))


class TestDecideTrivial(unittest.TestCase):
    def test_scalar_over_constant_base(self):
        verdict = decide_trivial(DiffMatrixAlgebra(Q, 3, Matrix.scalar(Q, 3, 5)))
        self.assertEqual(TrivialityStatus.TRIVIAL, verdict.status)

    def test_nilpotent_over_constant_base(self):
        verdict = decide_trivial(DiffMatrixAlgebra(Q, 2, Matrix.unit(Q, 2, 0, 1)))
        self.assertEqual(TrivialityStatus.NONTRIVIAL, verdict.status)
        self.assertIsNotNone(verdict.witness)
        if verdict.witness is None:
            return
        self.assertEqual(WitnessKind.NILPOTENCY_INDEX, verdict.witness.kind)

    def test_nilpotent_over_rational_functions(self):
        alg = DiffMatrixAlgebra(QX, 2, Matrix.unit(QX, 2, 0, 1))
        verdict = decide_trivial(alg)
        self.assertEqual(TrivialityStatus.TRIVIAL, verdict.status)
        self.assertIsNotNone(verdict.certificate)
        if verdict.certificate is None:
            return
        self.assertEqual(trivializer(), verdict.certificate.Y)
        self.assertTrue(verify_certificate(alg, DiffMatrixAlgebra.trivial(QX, 2), verdict.certificate))

    def test_diagonal_over_rational_functions(self):
        verdict = decide_trivial(DiffMatrixAlgebra(QX, 2, Matrix.diagonal(QX, [3, 1])))
        self.assertEqual(TrivialityStatus.NONTRIVIAL, verdict.status)
        self.assertIsNotNone(verdict.witness)
        if verdict.witness is None:
            return
        self.assertEqual(WitnessKind.EVALUE_SET, verdict.witness.kind)
        self.assertEqual(frozenset({Fraction(0), Fraction(2), Fraction(-2)}), verdict.witness.left)
        self.assertEqual(frozenset({Fraction(0)}), verdict.witness.right)

    def test_rotation_is_unknown(self):
        verdict = decide_trivial(DiffMatrixAlgebra(QX, 2, Matrix.from_rows(QX, [[0, 1], [-1, 0]])))
        self.assertEqual(TrivialityStatus.UNKNOWN, verdict.status)

    def test_non_constant_without_certificate(self):
        verdict = decide_trivial(DiffMatrixAlgebra(QX, 2, Matrix.from_rows(QX, [[0, x], [1, 0]])))
        self.assertEqual(TrivialityStatus.UNKNOWN, verdict.status)

    def test_user_certificate(self):
        y = Matrix.from_rows(QX, [[1, x * x], [0, 1]])
        trivial = DiffMatrixAlgebra.trivial(QX, 2)
        alg = DiffMatrixAlgebra(QX, 2, y @ (-(y.inverse() @ y.derivative())) @ y.inverse())
        self.assertFalse(alg.Z.is_constant())
        verdict = decide_trivial(alg, GaugeCertificate(y))
        self.assertEqual(TrivialityStatus.TRIVIAL, verdict.status)
        self.assertTrue(verify_certificate(alg, trivial, GaugeCertificate(y)))

    def test_rejected_user_certificate_falls_back(self):
        alg = DiffMatrixAlgebra(QX, 2, Matrix.unit(QX, 2, 0, 1))
        verdict = decide_trivial(alg, GaugeCertificate(Matrix.identity(QX, 2)))
        self.assertEqual(TrivialityStatus.TRIVIAL, verdict.status)
        self.assertIsNotNone(verdict.certificate)
        if verdict.certificate is None:
            return
        self.assertEqual(trivializer(), verdict.certificate.Y)

    def test_zero_derivation_is_trivial(self):
        for base in (Q, QX):
            for n in range(1, 5):
                trivial = DiffMatrixAlgebra.trivial(base, n)
                verdict = decide_trivial(trivial)
                self.assertEqual(TrivialityStatus.TRIVIAL, verdict.status, f"Expected (M{n}, 0) over {base} trivial")
                if verdict.certificate is None:
                    self.fail("Expected a certificate")
                self.assertTrue(verify_certificate(trivial, trivial, verdict.certificate))

    def test_exhaustive_small_entries_over_constant_base(self):
        for entries in itertools.product((-1, 0, 1), repeat=4):
            z = Matrix(Q, 2, 2, tuple(Fraction(v) for v in entries))
            verdict = decide_trivial(DiffMatrixAlgebra(Q, 2, z))
            expected = TrivialityStatus.TRIVIAL if z.is_scalar() else TrivialityStatus.NONTRIVIAL
            self.assertEqual(expected, verdict.status, f"Unexpected verdict for Z = {entries}")

    @settings(max_examples=50, deadline=None)
    @given(st.data(), st.integers(min_value=1, max_value=3), small_ints)
    def test_scalar_plus_nilpotent_is_certified(self, data, n, theta):
        strict_upper = Matrix(
            QX,
            n,
            n,
            tuple(data.draw(small_ints) if j > i else 0 for i in range(n) for j in range(n)),
        )
        p = data.draw(invertible_matrices(QX, n))
        z = p @ (strict_upper + Matrix.scalar(QX, n, theta)) @ p.inverse()
        alg = DiffMatrixAlgebra(QX, n, z)
        verdict = decide_trivial(alg)
        self.assertEqual(TrivialityStatus.TRIVIAL, verdict.status)
        if verdict.certificate is None:
            self.fail("Expected a certificate")
        self.assertTrue(verify_certificate(alg, DiffMatrixAlgebra.trivial(QX, n), verdict.certificate))

    def test_witness_values_are_reproducible(self):
        alg = DiffMatrixAlgebra(Q, 2, Matrix.diagonal(Q, [1, 4]))
        verdict = decide_trivial(alg)
        if verdict.witness is None:
            self.fail("Expected a witness")
        self.assertEqual(eig_diff_report(alg).e_value_set, verdict.witness.left)


if __name__ == "__main__":
    unittest.main()
