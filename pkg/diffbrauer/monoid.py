"""
Finite commutative monoids.

Monoids are Cayley tables over opaque element indices. Quotients M/N by a submonoid identify m1 and m2
when m1*n1 = m2*n2 for some n1, n2 in N; units and the elements with invertible image in M/N come with
them, plus a small census of all commutative monoids of a given size.

:copyright: (c) 2026 by the diffbrauer authors.
:license: Mozilla Public License Version 2.0, see LICENSE for more details.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from itertools import permutations, product
import logging

from errors import InvalidMonoidError, NotSubmonoidError, PreconditionError

_LOG = logging.getLogger(__name__)

Table = tuple[tuple[int, ...], ...]


def get_identity(table: Sequence[Sequence[int]]) -> int | None:
    """Return the two-sided identity of a Cayley table, or None."""
    rn = range(len(table))
    for e in rn:
        if all(table[e][x] == x == table[x][e] for x in rn):
            return e
    return None


@dataclass(frozen=True)
class FiniteCommutativeMonoid:
    """A commutative monoid given by its Cayley table; checked on construction."""

    size: int
    table: Table
    identity: int

    def __post_init__(self) -> None:
        table = tuple(tuple(row) for row in self.table)
        object.__setattr__(self, "table", table)
        rn = range(self.size)
        if self.size <= 0 or len(table) != self.size or any(len(row) != self.size for row in table):
            msg = f"Cayley table must be {self.size}x{self.size}"
            raise InvalidMonoidError(msg)
        if any(not 0 <= v < self.size for row in table for v in row):
            msg = "Cayley table entries must be element indices"
            raise InvalidMonoidError(msg)
        if self.identity not in rn or any(table[self.identity][x] != x for x in rn):
            msg = f"{self.identity} isn't an identity"
            raise InvalidMonoidError(msg)
        for a in rn:
            for b in rn:
                if table[a][b] != table[b][a]:
                    msg = f"operation isn't commutative at ({a}, {b})"
                    raise InvalidMonoidError(msg)
        if not _is_associative(table):
            msg = "operation isn't associative"
            raise InvalidMonoidError(msg)

    @classmethod
    def from_table(cls, table: Sequence[Sequence[int]], identity: int | None = None) -> FiniteCommutativeMonoid:
        """Create a monoid, detecting the identity when it isn't given."""
        if identity is None:
            identity = get_identity(table)
            if identity is None:
                msg = "Cayley table has no identity"
                raise InvalidMonoidError(msg)
        return cls(len(table), tuple(tuple(row) for row in table), identity)

    def op(self, a: int, b: int) -> int:
        """Return a*b."""
        return self.table[a][b]

    @property
    def elements(self) -> range:
        """Return all element indices."""
        return range(self.size)


def _is_associative(table: Table) -> bool:
    rn = range(len(table))
    return all(table[table[a][b]][c] == table[a][table[b][c]] for a in rn for b in rn for c in rn)


@dataclass(frozen=True)
class QuotientMonoid:
    """M/N: classes of the parent's elements (sorted by smallest member) and the induced table."""

    classes: tuple[tuple[int, ...], ...]
    table: Table
    class_of: tuple[int, ...]
    identity: int

    def as_monoid(self) -> FiniteCommutativeMonoid:
        """Return the quotient as a monoid on class indices."""
        return FiniteCommutativeMonoid(len(self.classes), self.table, self.identity)


def multiplicative_monoid(k: int) -> FiniteCommutativeMonoid:
    """Return (Z/k, ×) with element i standing for the residue i."""
    if k <= 0:
        msg = f"modulus must be positive, got {k}"
        raise InvalidMonoidError(msg)
    return FiniteCommutativeMonoid(k, tuple(tuple(i * j % k for j in range(k)) for i in range(k)), 1 % k)


def is_submonoid(m: FiniteCommutativeMonoid, subset: Iterable[int]) -> bool:
    """Check that the subset holds the identity and is closed under the operation."""
    members = frozenset(subset)
    if m.identity not in members or any(x not in m.elements for x in members):
        return False
    return all(m.op(a, b) in members for a in members for b in members)


def _require_submonoid(m: FiniteCommutativeMonoid, subset: Iterable[int]) -> frozenset[int]:
    members = frozenset(subset)
    if not is_submonoid(m, members):
        msg = f"{sorted(members)} isn't a submonoid"
        raise NotSubmonoidError(msg)
    return members


def submonoid_generated(m: FiniteCommutativeMonoid, generators: Iterable[int]) -> frozenset[int]:
    """Return the smallest submonoid containing the generators."""
    gens = set(generators)
    if any(g not in m.elements for g in gens):
        msg = f"generators {sorted(gens)} aren't elements of the monoid"
        raise NotSubmonoidError(msg)
    members = {m.identity}
    frontier = [m.identity]
    while frontier:
        current = frontier.pop()
        for g in gens:
            nxt = m.op(current, g)
            if nxt not in members:
                members.add(nxt)
                frontier.append(nxt)
    return frozenset(members)


def quotient(m: FiniteCommutativeMonoid, n: Iterable[int]) -> QuotientMonoid:
    """
    Return M/N.

    The relation m1 ~ m2 iff m1*N meets m2*N is closed transitively with a union-find; commutativity makes
    the direct relation transitive already, which is checked. The induced table is checked to be
    well defined on every pair of representatives.

    :raises NotSubmonoidError: if N isn't a submonoid.
    """
    members = _require_submonoid(m, n)
    orbits = [frozenset(m.op(a, x) for x in members) for a in m.elements]
    parent = list(m.elements)

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for a in m.elements:
        for b in range(a + 1, m.size):
            if orbits[a] & orbits[b]:
                parent[find(a)] = find(b)

    groups: dict[int, list[int]] = {}
    for a in m.elements:
        groups.setdefault(find(a), []).append(a)
    classes = tuple(sorted(tuple(g) for g in groups.values()))
    class_of = [0] * m.size
    for index, cls in enumerate(classes):
        for a in cls:
            class_of[a] = index
        for a in cls:
            for b in cls:
                if not orbits[a] & orbits[b]:
                    msg = f"quotient relation isn't transitive at ({a}, {b})"
                    raise InvalidMonoidError(msg)

    table: list[list[int]] = []
    for left in classes:
        row: list[int] = []
        for right in classes:
            images = {class_of[m.op(a, b)] for a in left for b in right}
            if len(images) != 1:
                msg = f"induced operation isn't well defined on classes {left} and {right}"
                raise InvalidMonoidError(msg)
            row.append(images.pop())
        table.append(row)
    _LOG.debug("Quotient by %s has %d classes", sorted(members), len(classes))
    return QuotientMonoid(classes, tuple(tuple(r) for r in table), tuple(class_of), class_of[m.identity])


def units(m: FiniteCommutativeMonoid) -> frozenset[int]:
    """Return the group of invertible elements."""
    result = frozenset(a for a in m.elements if any(m.op(a, b) == m.identity for b in m.elements))
    if not is_submonoid(m, result):
        msg = "units aren't closed under the operation"
        raise InvalidMonoidError(msg)
    return result


def quotient_units(m: FiniteCommutativeMonoid, n: Iterable[int]) -> frozenset[int]:
    """
    Return the elements of M with invertible image in M/N.

    Computed as {a : a*b*n in N for some b in M, n in N} and cross-checked against the units of the
    quotient pulled back to M; a mismatch is logged.

    :raises NotSubmonoidError: if N isn't a submonoid.
    """
    members = _require_submonoid(m, n)
    result = frozenset(
        a for a in m.elements if any(m.op(m.op(a, b), x) in members for b in m.elements for x in members)
    )
    q = quotient(m, members)
    pulled_back = frozenset(a for a in m.elements if q.class_of[a] in units(q.as_monoid()))
    if result != pulled_back:
        _LOG.warning("Invertible-image formula gives %s, quotient units give %s", sorted(result), sorted(pulled_back))
    return result


def relabel(table: Table, perm: Sequence[int]) -> Table:
    """Return the table with element i renamed to perm[i]."""
    size = len(table)
    inverse = [0] * size
    for old, new in enumerate(perm):
        inverse[new] = old
    return tuple(tuple(perm[table[inverse[i]][inverse[j]]] for j in range(size)) for i in range(size))


def enumerate_commutative_monoids(size: int) -> list[FiniteCommutativeMonoid]:
    """
    Return every commutative monoid of the given size up to isomorphism.

    The identity is element 0 and each class is represented by its lexicographically smallest table
    under relabellings of the other elements.
    """
    if size <= 0:
        msg = f"monoid size must be positive, got {size}"
        raise PreconditionError(msg)
    free = [(i, j) for i in range(1, size) for j in range(i, size)]
    perms = [(0, *p) for p in permutations(range(1, size))]
    seen: set[Table] = set()
    found: list[FiniteCommutativeMonoid] = []
    for values in product(range(size), repeat=len(free)):
        rows = [[j if i == 0 else (i if j == 0 else 0) for j in range(size)] for i in range(size)]
        for (i, j), v in zip(free, values, strict=True):
            rows[i][j] = rows[j][i] = v
        table = tuple(tuple(r) for r in rows)
        if not _is_associative(table):
            continue
        canonical = min(relabel(table, p) for p in perms)
        if canonical not in seen:
            seen.add(canonical)
            found.append(FiniteCommutativeMonoid(size, canonical, 0))
    found.sort(key=lambda mon: mon.table)
    _LOG.debug("Found %d commutative monoids of size %d", len(found), size)
    return found


def quotient_of_quotient(m: FiniteCommutativeMonoid, n: Iterable[int], n2: Iterable[int]) -> bool:
    """
    Check that dividing by N and then by the image of N2 partitions M like dividing by N2 at once.

    :raises NotSubmonoidError: if N or N2 isn't a submonoid or N isn't contained in N2.
    """
    small, large = _require_submonoid(m, n), _require_submonoid(m, n2)
    if not small <= large:
        msg = f"{sorted(small)} isn't contained in {sorted(large)}"
        raise NotSubmonoidError(msg)
    first = quotient(m, small)
    staged = quotient(first.as_monoid(), {first.class_of[x] for x in large})
    direct = quotient(m, large)
    staged_partition = {
        frozenset(a for a in m.elements if staged.class_of[first.class_of[a]] == c) for c in range(len(staged.classes))
    }
    direct_partition = {frozenset(cls) for cls in direct.classes}
    return staged_partition == direct_partition


def induced_map(
    m: FiniteCommutativeMonoid,
    n: Iterable[int],
    m2: FiniteCommutativeMonoid,
    n2: Iterable[int],
    f: Sequence[int],
) -> tuple[int, ...]:
    """
    Return the map M/N -> M2/N2 induced by a homomorphism f: M -> M2 with f(N) ⊆ N2.

    :param f: f[a] is the image of element a.
    :raises PreconditionError: if f isn't a monoid homomorphism into M2 mapping N into N2.
    """
    small, target = _require_submonoid(m, n), _require_submonoid(m2, n2)
    if len(f) != m.size or any(v not in m2.elements for v in f):
        msg = "map must send every element to an element of the target"
        raise PreconditionError(msg)
    if f[m.identity] != m2.identity:
        msg = "map doesn't preserve the identity"
        raise PreconditionError(msg)
    if any(f[m.op(a, b)] != m2.op(f[a], f[b]) for a in m.elements for b in m.elements):
        msg = "map isn't multiplicative"
        raise PreconditionError(msg)
    if any(f[x] not in target for x in small):
        msg = "map doesn't send the submonoid into the target submonoid"
        raise PreconditionError(msg)
    source_q, target_q = quotient(m, small), quotient(m2, target)
    images: list[int] = []
    for cls in source_q.classes:
        classes = {target_q.class_of[f[a]] for a in cls}
        if len(classes) != 1:
            msg = f"induced map isn't well defined on class {cls}"
            raise PreconditionError(msg)
        images.append(classes.pop())
    return tuple(images)
