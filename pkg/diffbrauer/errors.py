"""
Error types of the differential Brauer monoid toolkit.

:copyright: (c) 2026 by the diffbrauer authors.
:license: Mozilla Public License Version 2.0, see LICENSE for more details.
"""


class DiffBrauerError(Exception):
    """Base class of all errors raised by the toolkit."""

    code: str = "error"
    """Machine-readable error code used in CLI error documents."""


class InputFormatError(DiffBrauerError):
    """Malformed JSON input or an unparsable scalar."""

    code = "input_format"


class DimensionMismatchError(DiffBrauerError):
    """Matrix or vector dimensions don't fit the operation."""

    code = "dimension_mismatch"


class NonSquareMatrixError(DimensionMismatchError):
    """A square matrix was required."""

    code = "non_square"


class BaseRingMismatchError(DiffBrauerError):
    """Operands live over different base rings, or a value doesn't belong to the base ring."""

    code = "base_mismatch"


class SingularMatrixError(DiffBrauerError):
    """An invertible matrix was required."""

    code = "singular_matrix"


class ZeroPolynomialError(DiffBrauerError):
    """A nonzero polynomial was required."""

    code = "zero_polynomial"


class UnsupportedInputError(DiffBrauerError):
    """The input is outside the supported regime, e.g. a non-constant derivation matrix."""

    code = "unsupported"


class PreconditionError(DiffBrauerError):
    """A documented precondition of an operation doesn't hold."""

    code = "precondition"


class InvalidMonoidError(DiffBrauerError):
    """A Cayley table isn't a commutative monoid."""

    code = "invalid_monoid"


class NotSubmonoidError(DiffBrauerError):
    """A subset isn't a submonoid."""

    code = "not_submonoid"


class RegistryIndexError(DiffBrauerError):
    """A registry index doesn't refer to a registered algebra."""

    code = "registry_index"


class RegistryContradictionError(DiffBrauerError):
    """The registry certifies a pair as both equivalent and separated."""

    code = "registry_contradiction"
