"""
JSON encodings.

Rationals are strings ``"p/q"`` or ``"p"``, polynomials arrays of rational strings (constant term first),
rational functions ``{"num": [...], "den": [...]}`` and matrices nested row-major arrays. Decoders raise
InputFormatError on anything else.

:copyright: (c) 2026 by the diffbrauer authors.
:license: Mozilla Public License Version 2.0, see LICENSE for more details.
"""

from __future__ import annotations

import dataclasses
from enum import Enum
from fractions import Fraction
import json
import logging
from pathlib import Path
from typing import Any

from typing_extensions import override

from diffalg import DiffMatrixAlgebra, DiffModule, GaugeCertificate
from errors import DiffBrauerError, InputFormatError
from exactnum import BaseRing, Matrix, Polynomial, RationalFunction, Scalar
from invariants import InvariantReport, SeparationWitness, WitnessKind, WitnessValue
from monoid import FiniteCommutativeMonoid, QuotientMonoid
from triviality import TrivialityVerdict

_LOG = logging.getLogger(__name__)


def encode_rational(value: Fraction) -> str:
    """Return ``"p/q"``, or ``"p"`` for integers."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def decode_rational(raw: Any) -> Fraction:
    """Parse a rational string or an integer."""
    if isinstance(raw, bool) or not isinstance(raw, str | int):
        msg = f"expected a rational string, got {raw!r}"
        raise InputFormatError(msg)
    if isinstance(raw, int):
        return Fraction(raw)
    text = raw.strip()
    numerator, slash, denominator = text.partition("/")
    try:
        if slash:
            return Fraction(int(numerator), int(denominator))
        return Fraction(int(numerator))
    except (ValueError, ZeroDivisionError) as err:
        msg = f"{raw!r} isn't a rational p/q"
        raise InputFormatError(msg) from err


def encode_polynomial(p: Polynomial) -> list[str]:
    """Return the coefficients as rational strings, constant term first."""
    return [encode_rational(c) for c in p.coeffs]


def decode_polynomial(raw: Any) -> Polynomial:
    """Parse an array of rationals, constant term first."""
    if not isinstance(raw, list):
        msg = f"expected a coefficient array, got {raw!r}"
        raise InputFormatError(msg)
    return Polynomial(tuple(decode_rational(c) for c in raw))


def encode_rational_function(f: RationalFunction) -> dict[str, list[str]]:
    """Return ``{"num": ..., "den": ...}``."""
    return {"num": encode_polynomial(f.num), "den": encode_polynomial(f.den)}


def decode_rational_function(raw: Any) -> RationalFunction:
    """
    Parse a rational function.

    Accepts the ``{"num", "den"}`` object, a rational constant, or an expression string in x.
    """
    if isinstance(raw, dict):
        if "num" not in raw:
            msg = f"rational function object without 'num': {raw!r}"
            raise InputFormatError(msg)
        num = decode_polynomial(raw["num"])
        den = decode_polynomial(raw.get("den", ["1"]))
        if den.is_zero:
            msg = "rational function with zero denominator"
            raise InputFormatError(msg)
        return RationalFunction(num, den)
    if isinstance(raw, str) and "x" in raw:
        return RationalFunction.parse(raw)
    return RationalFunction.constant(decode_rational(raw))


def encode_scalar(value: Scalar) -> str | dict[str, list[str]]:
    """Encode a scalar of either base ring."""
    if isinstance(value, RationalFunction):
        return encode_rational_function(value)
    return encode_rational(value)


def decode_scalar(base: BaseRing, raw: Any) -> Scalar:
    """Parse a scalar of the given base ring."""
    if base is BaseRing.CONSTANT_FIELD:
        return decode_rational(raw)
    return decode_rational_function(raw)


def encode_matrix(matrix: Matrix) -> list[list[Any]]:
    """Return nested row-major arrays."""
    return [[encode_scalar(e) for e in row] for row in matrix.row_lists()]


def decode_matrix(base: BaseRing, raw: Any) -> Matrix:
    """Parse nested row arrays over the given base ring."""
    if not isinstance(raw, list) or not raw or not all(isinstance(row, list) for row in raw):
        msg = f"expected a nested array of matrix rows, got {raw!r}"
        raise InputFormatError(msg)
    rows: list[list[Scalar]] = [[decode_scalar(base, e) for e in row] for row in raw]
    return Matrix.from_rows(base, rows)


def decode_base(raw: Any) -> BaseRing:
    """Parse ``"Q"`` or ``"Q(x)"``."""
    try:
        return BaseRing(raw)
    except ValueError as err:
        msg = f"unknown base ring {raw!r}, expected 'Q' or 'Q(x)'"
        raise InputFormatError(msg) from err


def _field(raw: Any, name: str) -> Any:
    if not isinstance(raw, dict) or name not in raw:
        msg = f"missing field {name!r}"
        raise InputFormatError(msg)
    return raw[name]


def _positive_int(raw: Any, name: str) -> int:
    value = _field(raw, name)
    if isinstance(value, bool) or not isinstance(value, int) or value <= 0:
        msg = f"{name} must be a positive integer, got {value!r}"
        raise InputFormatError(msg)
    return value


def encode_algebra(alg: DiffMatrixAlgebra) -> dict[str, Any]:
    """Return ``{"base", "n", "Z"}``."""
    return {"base": alg.base.value, "n": alg.n, "Z": encode_matrix(alg.Z)}


def decode_algebra(raw: Any) -> DiffMatrixAlgebra:
    """Parse ``{"base", "n", "Z"}``."""
    base = decode_base(_field(raw, "base"))
    return DiffMatrixAlgebra(base, _positive_int(raw, "n"), decode_matrix(base, _field(raw, "Z")))


def decode_module(raw: Any) -> DiffModule:
    """Parse ``{"base", "n", "A"}``."""
    base = decode_base(_field(raw, "base"))
    return DiffModule(base, _positive_int(raw, "n"), decode_matrix(base, _field(raw, "A")))


def decode_vector(base: BaseRing, raw: Any) -> Matrix:
    """Parse a flat array as a column vector."""
    if not isinstance(raw, list) or not raw:
        msg = f"expected a nonempty array, got {raw!r}"
        raise InputFormatError(msg)
    return Matrix.column(base, [decode_scalar(base, e) for e in raw])


def encode_vector(v: Matrix) -> list[Any]:
    """Return a column vector as a flat array."""
    return [encode_scalar(e) for e in v.entries]


def encode_certificate(cert: GaugeCertificate) -> dict[str, Any]:
    """Return ``{"Y": ..., "c": ...}``; c is omitted without a shift."""
    document: dict[str, Any] = {"Y": encode_matrix(cert.Y)}
    if cert.scalar_shift is not None:
        document["c"] = encode_scalar(cert.scalar_shift)
    return document


def decode_certificate(base: BaseRing, raw: Any) -> GaugeCertificate:
    """Parse ``{"Y": ..., "c": ...}`` over the given base ring."""
    y = decode_matrix(base, _field(raw, "Y"))
    shift = raw.get("c")
    return GaugeCertificate(y, None if shift is None else decode_scalar(base, shift))


def _rational_list(values: frozenset[Fraction] | tuple[Fraction, ...]) -> list[str]:
    return [encode_rational(v) for v in sorted(values)]


def encode_witness_value(value: WitnessValue) -> Any:
    """Encode one side of a witness: a rational set, a polynomial or an integer."""
    if isinstance(value, frozenset):
        return _rational_list(value)
    if isinstance(value, Polynomial):
        return {"poly": encode_polynomial(value)}
    return value


def decode_witness_value(raw: Any) -> WitnessValue:
    """Inverse of encode_witness_value."""
    if isinstance(raw, list):
        return frozenset(decode_rational(v) for v in raw)
    if isinstance(raw, dict):
        return decode_polynomial(_field(raw, "poly"))
    if raw is None or (isinstance(raw, int) and not isinstance(raw, bool)):
        return raw
    msg = f"invalid witness value {raw!r}"
    raise InputFormatError(msg)


def encode_witness(witness: SeparationWitness) -> dict[str, Any]:
    """Return ``{"kind", "left", "right"}``."""
    return {
        "kind": witness.kind.value,
        "left": encode_witness_value(witness.left),
        "right": encode_witness_value(witness.right),
    }


def decode_witness(raw: Any) -> SeparationWitness:
    """Parse ``{"kind", "left", "right"}``."""
    try:
        kind = WitnessKind(_field(raw, "kind"))
    except ValueError as err:
        msg = f"unknown witness kind {raw.get('kind')!r}"
        raise InputFormatError(msg) from err
    left, right = decode_witness_value(_field(raw, "left")), decode_witness_value(_field(raw, "right"))
    return SeparationWitness(kind, left, right)


def encode_report(report: InvariantReport) -> dict[str, Any]:
    """Encode an invariant report; root multisets become sorted arrays."""
    poly = report.ad_char_poly
    return {
        "ad_char_poly": encode_polynomial(poly)
        if isinstance(poly, Polynomial)
        else [encode_rational_function(c) for c in poly],
        "ad_squarefree": None if report.ad_squarefree is None else encode_polynomial(report.ad_squarefree),
        "root_multiset": _rational_list(report.root_multiset),
        "splits": report.splits,
        "nilpotency_index": report.nilpotency_index,
        "e_value_set": None if report.e_value_set is None else _rational_list(report.e_value_set),
        "stable": report.stable,
    }


def encode_verdict(verdict: TrivialityVerdict) -> dict[str, Any]:
    """Return ``{"status", "certificate", "witness"}``."""
    return {
        "status": verdict.status.value,
        "certificate": None if verdict.certificate is None else encode_certificate(verdict.certificate),
        "witness": None if verdict.witness is None else encode_witness(verdict.witness),
    }


def encode_monoid(m: FiniteCommutativeMonoid) -> dict[str, Any]:
    """Return ``{"size", "identity", "table"}``."""
    return {"size": m.size, "identity": m.identity, "table": [list(row) for row in m.table]}


def decode_monoid(raw: Any) -> FiniteCommutativeMonoid:
    """Parse ``{"size", "identity", "table"}``; identity is detected when absent."""
    table = _field(raw, "table")
    if not isinstance(table, list) or not all(isinstance(row, list) for row in table):
        msg = "monoid table must be a nested array"
        raise InputFormatError(msg)
    rows: list[list[int]] = []
    for row in table:
        if not all(isinstance(v, int) and not isinstance(v, bool) for v in row):
            msg = "monoid table entries must be element indices"
            raise InputFormatError(msg)
        rows.append(list(row))
    monoid = FiniteCommutativeMonoid.from_table(rows, raw.get("identity"))
    size = raw.get("size", monoid.size)
    if size != monoid.size:
        msg = f"size {size} doesn't match a {monoid.size}x{monoid.size} table"
        raise InputFormatError(msg)
    return monoid


def decode_subset(raw: Any) -> frozenset[int]:
    """Parse an array of element indices."""
    if not isinstance(raw, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in raw):
        msg = f"expected an array of element indices, got {raw!r}"
        raise InputFormatError(msg)
    return frozenset(raw)


def encode_quotient(q: QuotientMonoid) -> dict[str, Any]:
    """Return ``{"classes", "table", "class_of", "identity"}``."""
    return {
        "classes": [list(c) for c in q.classes],
        "table": [list(row) for row in q.table],
        "class_of": list(q.class_of),
        "identity": q.identity,
    }


def encode_error(err: DiffBrauerError) -> dict[str, Any]:
    """Return the machine-readable error document."""
    return {"error": {"code": err.code, "message": str(err)}}


class EnhancedJSONEncoder(json.JSONEncoder):
    """JSON encoder for the value types and plain dataclasses."""

    @override
    def default(self, o: Any) -> Any:
        encoded: Any
        match o:
            case Fraction():
                encoded = encode_rational(o)
            case Polynomial():
                encoded = encode_polynomial(o)
            case RationalFunction():
                encoded = encode_rational_function(o)
            case Matrix():
                encoded = encode_matrix(o)
            case DiffMatrixAlgebra():
                encoded = encode_algebra(o)
            case GaugeCertificate():
                encoded = encode_certificate(o)
            case SeparationWitness():
                encoded = encode_witness(o)
            case Enum():
                encoded = o.value
            case frozenset() | set():
                encoded = sorted(o)
            case _ if dataclasses.is_dataclass(o) and not isinstance(o, type):
                encoded = dataclasses.asdict(o)
            case _:
                encoded = super().default(o)
        return encoded


def dumps(document: Any) -> str:
    """Serialize a document deterministically."""
    return json.dumps(document, cls=EnhancedJSONEncoder, ensure_ascii=False)


def load_json(source: str) -> Any:
    """
    Load JSON from inline text or a file path.

    Text starting with ``{``, ``[`` or ``"`` is parsed inline, anything else is read as a path.
    """
    text = source.lstrip()
    if not text.startswith(("{", "[", '"')):
        try:
            text = Path(source).read_text(encoding="utf-8")
        except OSError as err:
            msg = f"cannot read {source}: {err.strerror}"
            raise InputFormatError(msg) from err
    try:
        return json.loads(text)
    except ValueError as err:
        msg = f"malformed JSON: {err}"
        raise InputFormatError(msg) from err
