"""
Runtime settings.

:copyright: (c) 2026 by the diffbrauer authors.
:license: Mozilla Public License Version 2.0, see LICENSE for more details.
"""

from collections.abc import Mapping
from dataclasses import dataclass
import logging
import os

from errors import InputFormatError

_LOG = logging.getLogger(__name__)

ENV_DEG_BOUND = "DIFFBRAUER_DEG_BOUND"
ENV_TENSOR_BOUND = "DIFFBRAUER_TENSOR_BOUND"
ENV_LOG_LEVEL = "DIFFBRAUER_LOG_LEVEL"

DEFAULT_TENSOR_BOUND = 4
DEFAULT_LOG_LEVEL = "WARNING"
_LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


@dataclass
class Settings:
    """Defaults of the command line flags."""

    deg_bound: int | None = None
    """Degree bound of constants searches; None means 2n for an algebra of size n."""
    tensor_bound: int = DEFAULT_TENSOR_BOUND
    """Largest amplification size p accepted for registry equivalences."""
    log_level: str = DEFAULT_LOG_LEVEL

    def __post_init__(self) -> None:
        if self.deg_bound is not None and self.deg_bound < 0:
            msg = f"degree bound must be nonnegative, got {self.deg_bound}"
            raise InputFormatError(msg)
        if self.tensor_bound <= 0:
            msg = f"tensor bound must be positive, got {self.tensor_bound}"
            raise InputFormatError(msg)
        self.log_level = self.log_level.upper()
        if self.log_level not in _LOG_LEVELS:
            msg = f"unknown log level {self.log_level}"
            raise InputFormatError(msg)

    def degree_bound_for(self, n: int) -> int:
        """Return the degree bound for an algebra of size n."""
        return 2 * n if self.deg_bound is None else self.deg_bound

    @classmethod
    def from_env(cls, environ: Mapping[str, str] | None = None) -> "Settings":
        """
        Read settings from environment variables; unset variables take the defaults.

        :param environ: mapping to read instead of ``os.environ``.
        """
        env = os.environ if environ is None else environ
        deg_bound = _int_or_none(env, ENV_DEG_BOUND)
        tensor_bound = _int_or_none(env, ENV_TENSOR_BOUND)
        return cls(
            deg_bound,
            DEFAULT_TENSOR_BOUND if tensor_bound is None else tensor_bound,
            env.get(ENV_LOG_LEVEL, DEFAULT_LOG_LEVEL),
        )


def _int_or_none(env: Mapping[str, str], name: str) -> int | None:
    value = env.get(name)
    if value is None or not value.strip():
        return None
    try:
        return int(value)
    except ValueError as err:
        msg = f"{name} must be an integer, got {value!r}"
        raise InputFormatError(msg) from err
