import itertools
import unittest

from errors import InvalidMonoidError, NotSubmonoidError, PreconditionError
from monoid import (
    FiniteCommutativeMonoid,
    enumerate_commutative_monoids,
    get_identity,
    induced_map,
    is_submonoid,
    multiplicative_monoid,
    quotient,
    quotient_of_quotient,
    quotient_units,
    relabel,
    submonoid_generated,
    units,
)


def submonoids(m: FiniteCommutativeMonoid) -> list[frozenset[int]]:
    others = [a for a in m.elements if a != m.identity]
    found: list[frozenset[int]] = []
    for r in range(len(others) + 1):
        for extra in itertools.combinations(others, r):
            subset = frozenset((m.identity, *extra))
            if is_submonoid(m, subset):
                found.append(subset)
    return found


def corpus() -> list[FiniteCommutativeMonoid]:
    monoids = [m for size in range(1, 5) for m in enumerate_commutative_monoids(size)]
    return [*monoids, multiplicative_monoid(5), multiplicative_monoid(6)]


CORPUS = corpus()


class TestFiniteCommutativeMonoid(unittest.TestCase):
    def test_identity_detection(self):
        self.assertEqual(1, get_identity(((0, 0), (0, 1))))
        self.assertIsNone(get_identity(((0, 0), (0, 0))))

    def test_from_table(self):
        m = FiniteCommutativeMonoid.from_table([[0, 0], [0, 1]])
        self.assertEqual(1, m.identity)
        self.assertEqual(0, m.op(0, 1))

    def test_rejects_non_commutative(self):
        with self.assertRaises(InvalidMonoidError):
            FiniteCommutativeMonoid(3, ((0, 1, 2), (1, 1, 1), (2, 2, 2)), 0)

    def test_rejects_non_associative(self):
        with self.assertRaises(InvalidMonoidError):
            FiniteCommutativeMonoid(3, ((0, 1, 2), (1, 2, 0), (2, 0, 0)), 0)

    def test_rejects_missing_identity(self):
        with self.assertRaises(InvalidMonoidError):
            FiniteCommutativeMonoid.from_table([[0, 0], [0, 0]])

    def test_rejects_out_of_range_entries(self):
        with self.assertRaises(InvalidMonoidError):
            FiniteCommutativeMonoid(2, ((0, 1), (1, 2)), 0)


class TestEnumeration(unittest.TestCase):
    def test_census(self):
        counts = [len(enumerate_commutative_monoids(size)) for size in range(1, 5)]
        self.assertEqual([1, 2, 5, 19], counts, "Expected the known counts of commutative monoids")

    def test_representatives_are_not_isomorphic(self):
        for size in range(1, 5):
            found = enumerate_commutative_monoids(size)
            tables = {m.table for m in found}
            self.assertEqual(len(found), len(tables))
            for m in found:
                perms = [(0, *p) for p in itertools.permutations(range(1, size))]
                self.assertEqual(m.table, min(relabel(m.table, p) for p in perms), "Expected canonical tables")

    def test_invalid_size(self):
        with self.assertRaises(PreconditionError):
            enumerate_commutative_monoids(0)


class TestQuotient(unittest.TestCase):
    def test_trivial_submonoid(self):
        m = multiplicative_monoid(6)
        q = quotient(m, {1})
        self.assertEqual(tuple((a,) for a in range(6)), q.classes)
        self.assertEqual(m.table, q.table)

    def test_units_of_z6(self):
        q = quotient(multiplicative_monoid(6), {1, 5})
        self.assertEqual(((0,), (1, 5), (2, 4), (3,)), q.classes)

    def test_units_of_z5(self):
        q = quotient(multiplicative_monoid(5), {1, 2, 3, 4})
        self.assertEqual(((0,), (1, 2, 3, 4)), q.classes)

    def test_not_submonoid(self):
        with self.assertRaises(NotSubmonoidError):
            quotient(multiplicative_monoid(6), {1, 2})

    def test_quotient_relation_on_corpus(self):
        for m in CORPUS:
            for n in submonoids(m):
                q = quotient(m, n)
                related = {
                    (a, b)
                    for a in m.elements
                    for b in m.elements
                    if any(m.op(a, n1) == m.op(b, n2) for n1 in n for n2 in n)
                }
                for a in m.elements:
                    for b in m.elements:
                        same = q.class_of[a] == q.class_of[b]
                        self.assertEqual((a, b) in related, same, f"Relation mismatch at ({a}, {b}) for {m}, N={n}")
                for a, b in itertools.product(m.elements, repeat=2):
                    for c, d in itertools.product(m.elements, repeat=2):
                        if (a, b) in related and (c, d) in related:
                            self.assertIn((m.op(a, c), m.op(b, d)), related, "Expected products of equivalents")
                q.as_monoid()

    def test_one_class_with_proper_submonoid(self):
        found = [
            (m, n) for m in CORPUS for n in submonoids(m) if len(n) < m.size and len(quotient(m, n).classes) == 1
        ]
        self.assertTrue(found, "Expected M/N = 1 for some N != M")

    def test_quotient_of_quotient(self):
        for m in CORPUS:
            subs = submonoids(m)
            for small in subs:
                for large in subs:
                    if small <= large:
                        self.assertTrue(quotient_of_quotient(m, small, large))

    def test_quotient_of_quotient_needs_containment(self):
        with self.assertRaises(NotSubmonoidError):
            quotient_of_quotient(multiplicative_monoid(6), {1, 5}, {1})


class TestUnits(unittest.TestCase):
    def test_z6(self):
        self.assertEqual(frozenset({1, 5}), units(multiplicative_monoid(6)))

    def test_z5(self):
        self.assertEqual(frozenset({1, 2, 3, 4}), units(multiplicative_monoid(5)))

    def test_group(self):
        cyclic = FiniteCommutativeMonoid(3, tuple(tuple((i + j) % 3 for j in range(3)) for i in range(3)), 0)
        self.assertEqual(frozenset({0, 1, 2}), units(cyclic))
        self.assertEqual(frozenset({0, 1, 2}), quotient_units(cyclic, {0, 1, 2}))

    def test_quotient_units_examples(self):
        self.assertEqual(frozenset({1, 5}), quotient_units(multiplicative_monoid(6), {1, 5}))
        self.assertEqual(frozenset({1, 2, 3, 4}), quotient_units(multiplicative_monoid(5), {1}))

    def test_quotient_units_match_quotient_on_corpus(self):
        for m in CORPUS:
            for n in submonoids(m):
                q = quotient(m, n)
                invertible = units(q.as_monoid())
                pulled_back = frozenset(a for a in m.elements if q.class_of[a] in invertible)
                self.assertEqual(pulled_back, quotient_units(m, n), f"Mismatch for {m}, N={n}")

    def test_submonoid_generated(self):
        m = multiplicative_monoid(7)
        self.assertEqual(frozenset({1, 2, 4}), submonoid_generated(m, {2}))
        self.assertEqual(frozenset({1}), submonoid_generated(m, set()))


class TestInducedMap(unittest.TestCase):
    def test_reduction_mod_three(self):
        z6, z3 = multiplicative_monoid(6), multiplicative_monoid(3)
        reduction = [a % 3 for a in range(6)]
        images = induced_map(z6, {1, 5}, z3, {1, 2}, reduction)
        q3 = quotient(z3, {1, 2})
        expected = tuple(q3.class_of[reduction[cls[0]]] for cls in quotient(z6, {1, 5}).classes)
        self.assertEqual(expected, images)

    def test_not_a_homomorphism(self):
        z6 = multiplicative_monoid(6)
        with self.assertRaises(PreconditionError):
            induced_map(z6, {1}, z6, {1}, [0, 1, 2, 3, 4, 0])

    def test_submonoid_not_preserved(self):
        z6 = multiplicative_monoid(6)
        with self.assertRaises(PreconditionError):
            induced_map(z6, {1, 5}, z6, {1}, list(range(6)))


if __name__ == "__main__":
    unittest.main()
