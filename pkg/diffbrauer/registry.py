"""
Certified class registry.

Stores algebra presentations with verified equivalences (gauge certificates, possibly after amplification
by (Mp, 0)) and reproducible separation witnesses, and answers whether two presentations lie in the same
class of the differential Brauer monoid.

:copyright: (c) 2026 by the diffbrauer authors.
:license: Mozilla Public License Version 2.0, see LICENSE for more details.
"""

from __future__ import annotations

from collections.abc import Iterator
from dataclasses import dataclass
import sys

if sys.version_info >= (3, 11):
    from enum import StrEnum
else:  # Python 3.10: verbatim backport of enum.StrEnum
    from backports.strenum import StrEnum
import json
import logging
from pathlib import Path
import threading
from typing import Any

from pyee import EventEmitter

import codec
from diffalg import (
    DiffMatrixAlgebra,
    GaugeCertificate,
    amplify,
    kron_certificate,
    tensor_alg,
    verify_certificate,
)
from errors import (
    DiffBrauerError,
    InputFormatError,
    PreconditionError,
    RegistryContradictionError,
    RegistryIndexError,
)
from invariants import SeparationWitness, separate

_LOG = logging.getLogger(__name__)


class Events(StrEnum):
    """Registry events."""

    REGISTERED = "registered"
    EQUIVALENCE = "equivalence"
    SEPARATION = "separation"
    CLEARED = "cleared"


class Distinction(StrEnum):
    """Answer of a class comparison."""

    EQUIVALENT = "Equivalent"
    NOT_EQUIVALENT = "NotEquivalent"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class Equivalence:
    """Certificate between amplify(left, p_left) and amplify(right, p_right)."""

    left: int
    right: int
    certificate: GaugeCertificate
    p_left: int = 1
    p_right: int = 1


@dataclass(frozen=True)
class Separation:
    """Witness that left and right lie in different classes."""

    left: int
    right: int
    witness: SeparationWitness


class ClassRegistry:
    """
    Registry of algebra presentations and their certified class relations.

    Queries may run concurrently; mutations are serialized by a lock. When a path is given the registry
    is loaded from it and rewritten after every mutation.
    """

    def __init__(self, tensor_bound: int = 4, path: Path | str | None = None) -> None:
        """
        Create a registry.

        :param tensor_bound: largest amplification size accepted for equivalences.
        :param path: optional JSON file backing the registry.
        """
        self._tensor_bound = tensor_bound
        self._path: Path | None = None if path is None else Path(path)
        self._lock = threading.RLock()
        self._algebras: list[DiffMatrixAlgebra] = []
        self._equivalences: list[Equivalence] = []
        self._separations: list[Separation] = []
        self.events = EventEmitter()
        if self._path is not None and self._path.exists() and not self.load():
            msg = f"cannot load the registry file {self._path}"
            raise InputFormatError(msg)

    @property
    def tensor_bound(self) -> int:
        """Return the amplification bound."""
        return self._tensor_bound

    @property
    def algebras(self) -> tuple[DiffMatrixAlgebra, ...]:
        """Return the registered presentations."""
        return tuple(self._algebras)

    @property
    def equivalences(self) -> tuple[Equivalence, ...]:
        """Return the stored equivalences."""
        return tuple(self._equivalences)

    @property
    def separations(self) -> tuple[Separation, ...]:
        """Return the stored separations."""
        return tuple(self._separations)

    def __len__(self) -> int:
        return len(self._algebras)

    def __iter__(self) -> Iterator[DiffMatrixAlgebra]:
        return iter(self._algebras)

    def get(self, index: int) -> DiffMatrixAlgebra:
        """Return the algebra with the given index."""
        if not 0 <= index < len(self._algebras):
            msg = f"no algebra with index {index}, registry holds {len(self._algebras)}"
            raise RegistryIndexError(msg)
        return self._algebras[index]

    def index_of(self, alg: DiffMatrixAlgebra) -> int | None:
        """Return the index of an identical presentation, if registered."""
        for index, item in enumerate(self._algebras):
            if item == alg:
                return index
        return None

    def register(self, alg: DiffMatrixAlgebra) -> int:
        """Register a presentation and return its index; identical presentations share one index."""
        with self._lock:
            existing = self.index_of(alg)
            if existing is not None:
                return existing
            self._algebras.append(alg)
            index = len(self._algebras) - 1
            _LOG.info("Registered algebra %d over %s of size %d", index, alg.base, alg.n)
            self._persist()
        self.events.emit(Events.REGISTERED, index, alg)
        return index

    def _verify_equivalence(self, item: Equivalence) -> bool:
        for p in (item.p_left, item.p_right):
            if not 1 <= p <= self._tensor_bound:
                _LOG.warning("Amplification %d is outside the tensor bound %d", p, self._tensor_bound)
                return False
        left = amplify(self.get(item.left), item.p_left)
        right = amplify(self.get(item.right), item.p_right)
        if left.base is not right.base or left.n != right.n:
            _LOG.warning("Amplified algebras %d and %d have different shapes", item.left, item.right)
            return False
        try:
            return verify_certificate(left, right, item.certificate)
        except DiffBrauerError as err:
            _LOG.warning("Certificate between %d and %d can't be checked: %s", item.left, item.right, err)
            return False

    def _verify_separation(self, item: Separation) -> bool:
        try:
            return separate(self.get(item.left), self.get(item.right)) == item.witness
        except DiffBrauerError as err:
            _LOG.warning("Witness between %d and %d can't be reproduced: %s", item.left, item.right, err)
            return False

    def add_equivalence(
        self, left: int, right: int, certificate: GaugeCertificate, p_left: int = 1, p_right: int = 1
    ) -> bool:
        """
        Store a certified equivalence after verifying it.

        :return: True if the certificate verified and was stored.
        :raises RegistryContradictionError: if a stored separation contradicts the equivalence.
        """
        item = Equivalence(left, right, certificate, p_left, p_right)
        with self._lock:
            self.get(left)
            self.get(right)
            if not self._verify_equivalence(item):
                _LOG.warning("Rejected certificate between %d and %d", left, right)
                return False
            self._equivalences.append(item)
            try:
                self._check_consistency()
            except RegistryContradictionError:
                self._equivalences.pop()
                raise
            _LOG.info("Stored equivalence %d ~ %d", left, right)
            self._persist()
        self.events.emit(Events.EQUIVALENCE, left, right)
        return True

    def add_separation(self, left: int, right: int) -> SeparationWitness | None:
        """
        Compute, store and return a separation witness between two presentations.

        :return: the witness, or None if the invariants don't separate the pair.
        :raises RegistryContradictionError: if the pair is certified equivalent.
        """
        with self._lock:
            a, b = self.get(left), self.get(right)
            try:
                witness = separate(a, b)
            except DiffBrauerError as err:
                _LOG.info("No separation between %d and %d: %s", left, right, err)
                return None
            if witness is None:
                return None
            self._separations.append(Separation(left, right, witness))
            try:
                self._check_consistency()
            except RegistryContradictionError:
                self._separations.pop()
                raise
            _LOG.info("Stored separation %d / %d by %s", left, right, witness.kind)
            self._persist()
        self.events.emit(Events.SEPARATION, left, right, witness)
        return witness

    def _components(self) -> list[int]:
        parent = list(range(len(self._algebras)))

        def find(a: int) -> int:
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for item in self._equivalences:
            parent[find(item.left)] = find(item.right)
        return [find(a) for a in range(len(parent))]

    def _check_consistency(self) -> None:
        components = self._components()
        for item in self._separations:
            if components[item.left] == components[item.right]:
                msg = f"algebras {item.left} and {item.right} are both certified equivalent and separated"
                raise RegistryContradictionError(msg)

    def distinguish(self, left: int, right: int) -> Distinction:
        """
        Compare the classes of two presentations.

        Equivalent when a chain of stored certificates connects them, NotEquivalent when a stored witness
        separates their equivalence classes or a fresh one is found (and stored), Unknown otherwise.

        :raises RegistryContradictionError: if the stored data claims both.
        """
        with self._lock:
            self.get(left)
            self.get(right)
            self._check_consistency()
            if left == right:
                return Distinction.EQUIVALENT
            components = self._components()
            if components[left] == components[right]:
                return Distinction.EQUIVALENT
            pair = {components[left], components[right]}
            if any({components[s.left], components[s.right]} == pair for s in self._separations):
                return Distinction.NOT_EQUIVALENT
        if self.add_separation(left, right) is not None:
            return Distinction.NOT_EQUIVALENT
        return Distinction.UNKNOWN

    def tensor_closure(self) -> int:
        """
        Derive equivalences of tensor products from pairs of stored equivalences.

        For stored a ~ a' and b ~ b' without amplification, registers a ⊗ b and a' ⊗ b' and stores the
        Kronecker certificate once it verifies.

        :return: the number of equivalences added.
        """
        added = 0
        with self._lock:
            snapshot = [e for e in self._equivalences if e.p_left == e.p_right == 1]
            for first in snapshot:
                for second in snapshot:
                    a, a2 = self.get(first.left), self.get(first.right)
                    b, b2 = self.get(second.left), self.get(second.right)
                    if a.base is not b.base:
                        continue
                    left = self.register(tensor_alg(a, b))
                    right = self.register(tensor_alg(a2, b2))
                    if self._components()[left] == self._components()[right]:
                        continue
                    cert = kron_certificate(first.certificate, second.certificate)
                    if self.add_equivalence(left, right, cert):
                        added += 1
        _LOG.info("Tensor closure added %d equivalences", added)
        return added

    def verify_all(self) -> bool:
        """Re-verify every stored equivalence and separation."""
        with self._lock:
            ok = all(self._verify_equivalence(e) for e in self._equivalences)
            return ok and all(self._verify_separation(s) for s in self._separations)

    def clear(self) -> None:
        """Remove all entries and the backing file."""
        with self._lock:
            self._algebras = []
            self._equivalences = []
            self._separations = []
            if self._path is not None and self._path.exists():
                self._path.unlink()
        self.events.emit(Events.CLEARED)

    def to_document(self) -> dict[str, Any]:
        """Return the JSON document of the registry."""
        return {
            "tensor_bound": self._tensor_bound,
            "algebras": [codec.encode_algebra(a) for a in self._algebras],
            "equivalences": [
                {
                    "left": e.left,
                    "right": e.right,
                    "certificate": codec.encode_certificate(e.certificate),
                    "p_left": e.p_left,
                    "p_right": e.p_right,
                }
                for e in self._equivalences
            ],
            "separations": [
                {"left": s.left, "right": s.right, "witness": codec.encode_witness(s.witness)}
                for s in self._separations
            ],
        }

    def _persist(self) -> None:
        if self._path is not None:
            self.store()

    def store(self, path: Path | str | None = None) -> bool:
        """
        Write the registry to its JSON file.

        :return: True if the registry could be saved.
        """
        target = self._path if path is None else Path(path)
        if target is None:
            msg = "registry has no file to store to"
            raise PreconditionError(msg)
        try:
            with target.open("w+", encoding="utf-8") as f:
                json.dump(self.to_document(), f, ensure_ascii=False, cls=codec.EnhancedJSONEncoder)
            return True
        except OSError:
            _LOG.exception("Cannot write the registry file")
        return False

    def load(self, path: Path | str | None = None) -> bool:
        """
        Load the registry, re-verifying every certificate and witness.

        Entries that fail verification are dropped with a warning and the file is rewritten. The load is
        atomic: if the file can't be read or decoded the current entries are kept unchanged.

        :return: True if the registry could be loaded.
        """
        source = self._path if path is None else Path(path)
        if source is None:
            msg = "registry has no file to load from"
            raise PreconditionError(msg)
        try:
            with source.open(encoding="utf-8") as f:
                data = json.load(f)
        except OSError:
            _LOG.exception("Cannot open the registry file")
            return False
        except ValueError:
            _LOG.exception("Empty or invalid registry file")
            return False
        with self._lock:
            previous = (self._algebras, self._equivalences, self._separations)
            try:
                dropped = self._decode_entries(data)
                self._check_consistency()
            except (AttributeError, TypeError, ValueError, DiffBrauerError):
                self._algebras, self._equivalences, self._separations = previous
                _LOG.exception("Invalid registry file %s", source)
                return False
        if dropped and source == self._path:
            self.store()
        return True

    def _decode_entries(self, data: Any) -> int:
        self._algebras = [codec.decode_algebra(a) for a in data.get("algebras", [])]
        self._equivalences = []
        self._separations = []
        dropped = 0
        for item in data.get("equivalences", []):
            left, right = item.get("left"), item.get("right")
            equivalence = Equivalence(
                left,
                right,
                codec.decode_certificate(self.get(left).base, item.get("certificate")),
                item.get("p_left", 1),
                item.get("p_right", 1),
            )
            if self._verify_equivalence(equivalence):
                self._equivalences.append(equivalence)
            else:
                _LOG.warning("Dropped equivalence %s ~ %s: certificate doesn't verify", left, right)
                dropped += 1
        for item in data.get("separations", []):
            witness = codec.decode_witness(item.get("witness"))
            separation = Separation(item.get("left"), item.get("right"), witness)
            if self._verify_separation(separation):
                self._separations.append(separation)
            else:
                _LOG.warning(
                    "Dropped separation %s / %s: witness isn't reproducible", separation.left, separation.right
                )
                dropped += 1
        return dropped
