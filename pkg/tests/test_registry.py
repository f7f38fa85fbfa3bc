from fractions import Fraction
import json
from pathlib import Path
import tempfile
import unittest
from unittest.mock import patch

from diffalg import DiffMatrixAlgebra, GaugeCertificate
from errors import InputFormatError, RegistryContradictionError, RegistryIndexError
from exactnum import BaseRing, Matrix, RationalFunction
from invariants import SeparationWitness, WitnessKind
from registry import ClassRegistry, Distinction, Events

QX = BaseRing.RATIONAL_FUNCTION_FIELD
x = RationalFunction.x()
E12 = Matrix.unit(QX, 2, 0, 1)


def trivializer() -> Matrix:
    return Matrix.identity(QX, 2) - E12.scale(x)


def nilpotent() -> DiffMatrixAlgebra:
    return DiffMatrixAlgebra(QX, 2, E12)


def diagonal(first: int) -> DiffMatrixAlgebra:
    return DiffMatrixAlgebra(QX, 2, Matrix.diagonal(QX, [first, 1]))


class TestClassRegistry(unittest.TestCase):
    def setUp(self):
        self.registry = ClassRegistry()
        self.nilpotent = self.registry.register(nilpotent())
        self.trivial = self.registry.register(DiffMatrixAlgebra.trivial(QX, 2))
        self.first = self.registry.register(diagonal(2))
        self.second = self.registry.register(diagonal(3))

    def test_register_deduplicates(self):
        self.assertEqual(self.first, self.registry.register(diagonal(2)))
        self.assertEqual(4, len(self.registry))

    def test_get_invalid_index(self):
        with self.assertRaises(RegistryIndexError):
            self.registry.get(17)

    def test_same_index_is_equivalent(self):
        self.assertEqual(Distinction.EQUIVALENT, self.registry.distinguish(self.first, self.first))

    def test_family_members_are_not_equivalent(self):
        self.assertEqual(Distinction.NOT_EQUIVALENT, self.registry.distinguish(self.first, self.second))
        self.assertEqual(1, len(self.registry.separations), "Expected the fresh witness to be stored")
        self.assertEqual(WitnessKind.EVALUE_SET, self.registry.separations[0].witness.kind)

    def test_nilpotent_unknown_until_certified(self):
        self.assertEqual(Distinction.UNKNOWN, self.registry.distinguish(self.nilpotent, self.trivial))
        stored = self.registry.add_equivalence(self.nilpotent, self.trivial, GaugeCertificate(trivializer()))
        self.assertTrue(stored)
        self.assertEqual(Distinction.EQUIVALENT, self.registry.distinguish(self.trivial, self.nilpotent))

    def test_rejects_invalid_certificate(self):
        stored = self.registry.add_equivalence(self.nilpotent, self.trivial, GaugeCertificate(Matrix.identity(QX, 2)))
        self.assertFalse(stored)
        self.assertEqual((), self.registry.equivalences)

    def test_separation_propagates_along_equivalences(self):
        self.registry.add_equivalence(self.nilpotent, self.trivial, GaugeCertificate(trivializer()))
        self.assertEqual(Distinction.NOT_EQUIVALENT, self.registry.distinguish(self.first, self.trivial))
        self.assertEqual(Distinction.NOT_EQUIVALENT, self.registry.distinguish(self.first, self.nilpotent))

    def test_amplified_equivalence(self):
        one = self.registry.register(DiffMatrixAlgebra.trivial(QX, 1))
        inverse = Matrix.identity(QX, 2) + E12.scale(x)
        self.assertTrue(self.registry.add_equivalence(one, self.nilpotent, GaugeCertificate(inverse), p_left=2))
        self.assertEqual(Distinction.EQUIVALENT, self.registry.distinguish(one, self.nilpotent))

    def test_amplification_outside_bound(self):
        one = self.registry.register(DiffMatrixAlgebra.trivial(QX, 1))
        cert = GaugeCertificate(Matrix.identity(QX, 5))
        self.assertFalse(self.registry.add_equivalence(one, self.trivial, cert, p_left=5, p_right=1))

    def test_tensor_closure(self):
        self.registry.add_equivalence(self.nilpotent, self.trivial, GaugeCertificate(trivializer()))
        self.assertEqual(1, self.registry.tensor_closure())
        kronecker_sum = E12.kron(Matrix.identity(QX, 2)) + Matrix.identity(QX, 2).kron(E12)
        product = self.registry.index_of(DiffMatrixAlgebra(QX, 4, kronecker_sum))
        trivial_product = self.registry.index_of(DiffMatrixAlgebra.trivial(QX, 4))
        if product is None or trivial_product is None:
            self.fail("Expected the tensor products to be registered")
        self.assertEqual(Distinction.EQUIVALENT, self.registry.distinguish(product, trivial_product))
        self.assertTrue(self.registry.verify_all())

    def test_events(self):
        seen: list[tuple[int, int]] = []
        self.registry.events.on(Events.EQUIVALENCE, lambda left, right: seen.append((left, right)))
        self.registry.add_equivalence(self.nilpotent, self.trivial, GaugeCertificate(trivializer()))
        self.assertEqual([(self.nilpotent, self.trivial)], seen)

    def test_clear(self):
        self.registry.clear()
        self.assertEqual(0, len(self.registry))


FORGED_WITNESS = SeparationWitness(WitnessKind.EVALUE_SET, frozenset({Fraction(1)}), frozenset({Fraction(0)}))


class TestRegistryContradiction(unittest.TestCase):
    def setUp(self):
        self.registry = ClassRegistry()
        self.nilpotent = self.registry.register(nilpotent())
        self.trivial = self.registry.register(DiffMatrixAlgebra.trivial(QX, 2))

    def test_equivalence_after_separation_is_rolled_back(self):
        with patch("registry.separate", return_value=FORGED_WITNESS):
            self.assertEqual(FORGED_WITNESS, self.registry.add_separation(self.nilpotent, self.trivial))
            separations = self.registry.separations
            with self.assertRaises(RegistryContradictionError):
                self.registry.add_equivalence(self.nilpotent, self.trivial, GaugeCertificate(trivializer()))
        self.assertEqual((), self.registry.equivalences, "Expected the contradicting equivalence to be removed")
        self.assertEqual(separations, self.registry.separations)

    def test_separation_after_equivalence_is_rolled_back(self):
        self.assertTrue(self.registry.add_equivalence(self.nilpotent, self.trivial, GaugeCertificate(trivializer())))
        equivalences = self.registry.equivalences
        with (
            patch("registry.separate", return_value=FORGED_WITNESS),
            self.assertRaises(RegistryContradictionError),
        ):
            self.registry.add_separation(self.trivial, self.nilpotent)
        self.assertEqual((), self.registry.separations, "Expected the contradicting separation to be removed")
        self.assertEqual(equivalences, self.registry.equivalences)


class TestRegistryPersistence(unittest.TestCase):
    def setUp(self):
        self.directory = tempfile.TemporaryDirectory()
        self.path = Path(self.directory.name) / "registry.json"

    def tearDown(self):
        self.directory.cleanup()

    def populate(self) -> ClassRegistry:
        registry = ClassRegistry(path=self.path)
        nil = registry.register(nilpotent())
        trivial = registry.register(DiffMatrixAlgebra.trivial(QX, 2))
        first, second = registry.register(diagonal(2)), registry.register(diagonal(3))
        registry.add_equivalence(nil, trivial, GaugeCertificate(trivializer()))
        registry.distinguish(first, second)
        return registry

    def test_reload_reverifies(self):
        original = self.populate()
        reloaded = ClassRegistry(path=self.path)
        self.assertEqual(original.algebras, reloaded.algebras)
        self.assertEqual(original.equivalences, reloaded.equivalences)
        self.assertEqual(original.separations, reloaded.separations)
        self.assertTrue(reloaded.verify_all())
        self.assertEqual(Distinction.EQUIVALENT, reloaded.distinguish(0, 1))
        self.assertEqual(Distinction.NOT_EQUIVALENT, reloaded.distinguish(2, 3))

    def test_tampered_certificate_is_dropped(self):
        self.populate()
        document = json.loads(self.path.read_text(encoding="utf-8"))
        document["equivalences"][0]["certificate"] = {"Y": [["1", "0"], ["0", "1"]]}
        self.path.write_text(json.dumps(document), encoding="utf-8")
        reloaded = ClassRegistry(path=self.path)
        self.assertEqual((), reloaded.equivalences)
        self.assertEqual(1, len(reloaded.separations))
        rewritten = json.loads(self.path.read_text(encoding="utf-8"))
        self.assertEqual([], rewritten["equivalences"], "Expected the file to be rewritten without the entry")

    def test_invalid_file(self):
        self.path.write_text("{not json", encoding="utf-8")
        with self.assertRaises(InputFormatError):
            ClassRegistry(path=self.path)
        self.assertEqual("{not json", self.path.read_text(encoding="utf-8"), "Expected the file to stay untouched")

    def test_malformed_entry_keeps_file(self):
        self.populate()
        document = json.loads(self.path.read_text(encoding="utf-8"))
        document["algebras"][1] = "abc"
        content = json.dumps(document)
        self.path.write_text(content, encoding="utf-8")
        with self.assertRaises(InputFormatError):
            ClassRegistry(path=self.path)
        self.assertEqual(content, self.path.read_text(encoding="utf-8"))

    def test_failed_load_keeps_entries(self):
        registry = self.populate()
        before = registry.to_document()
        other = Path(self.directory.name) / "broken.json"
        other.write_text(json.dumps({"algebras": [{"base": "Q", "n": 2, "Z": [["0"]]}]}), encoding="utf-8")
        self.assertFalse(registry.load(other))
        self.assertEqual(before, registry.to_document())

    def test_store_to_other_path(self):
        registry = self.populate()
        other = Path(self.directory.name) / "copy.json"
        self.assertTrue(registry.store(other))
        copy = ClassRegistry()
        self.assertTrue(copy.load(other))
        self.assertEqual(registry.to_document(), copy.to_document())


if __name__ == "__main__":
    unittest.main()
