"""
Command line front end.

Every subcommand reads JSON (inline or from a file) and writes one JSON document to stdout or ``--output``.
Exit codes: 0 affirmative, 1 definitive negative, 2 unknown, 3 input error.

:copyright: (c) 2026 by the diffbrauer authors.
:license: Mozilla Public License Version 2.0, see LICENSE for more details.
"""

from __future__ import annotations

import argparse
from collections.abc import Callable, Sequence
from enum import IntEnum
from functools import wraps
import logging
from pathlib import Path
import sys
from typing import Any, NoReturn

from typing_extensions import override

import codec
from config import Settings
from diffalg import (
    constants_basis,
    derive_element,
    gauge_transform,
    module_derive,
    tensor_alg,
    verify_certificate,
)
from errors import DiffBrauerError, InputFormatError
from exactnum import RationalFunction, log_derivative_solve
from invariants import e_values, eig_diff_report, separate
from monoid import quotient, quotient_units, units
from registry import ClassRegistry, Distinction
from reproduce import reproduce_examples
from triviality import TrivialityStatus, decide_trivial

_LOG = logging.getLogger(__name__)

_MODULES = (
    "cli",
    "codec",
    "config",
    "diffalg",
    "exactnum",
    "invariants",
    "monoid",
    "registry",
    "reproduce",
    "triviality",
)


class ExitCode(IntEnum):
    """Process exit codes."""

    OK = 0
    NEGATIVE = 1
    UNKNOWN = 2
    INPUT_ERROR = 3


Handler = Callable[[argparse.Namespace, Settings], int]


class _ArgumentParser(argparse.ArgumentParser):
    """Argument parser reporting usage errors as input errors."""

    @override
    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        sys.stdout.write(codec.dumps({"error": {"code": "usage", "message": message}}) + "\n")
        self.exit(ExitCode.INPUT_ERROR)


def setup_logging(level: str) -> None:
    """Log to stderr with the module loggers at the given level."""
    logging.basicConfig(
        stream=sys.stderr,
        format="%(asctime)s.%(msecs)03d %(levelname)-5s %(name)s.%(funcName)s: %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
    )
    for name in _MODULES:
        logging.getLogger(name).setLevel(level)


def _emit(args: argparse.Namespace, document: Any) -> None:
    text = codec.dumps(document) + "\n"
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def handle_errors(func: Handler) -> Handler:
    """Map toolkit errors of a subcommand to an error document and exit code 3."""

    @wraps(func)
    def wrapper(args: argparse.Namespace, settings: Settings) -> int:
        try:
            return func(args, settings)
        except DiffBrauerError as err:
            _LOG.warning("%s failed with %s: %s", args.command, err.code, err)
            _emit(args, codec.encode_error(err))
            return ExitCode.INPUT_ERROR

    return wrapper


def _load(source: str) -> Any:
    return codec.load_json(source)


@handle_errors
def _cmd_derive(args: argparse.Namespace, _settings: Settings) -> int:
    if args.vector:
        mod = codec.decode_module(_load(args.algebra))
        vector = codec.decode_vector(mod.base, _load(args.element))
        _emit(args, {"result": codec.encode_vector(module_derive(mod, vector))})
    else:
        alg = codec.decode_algebra(_load(args.algebra))
        y = codec.decode_matrix(alg.base, _load(args.element))
        _emit(args, {"result": codec.encode_matrix(derive_element(alg, y))})
    return ExitCode.OK


@handle_errors
def _cmd_tensor(args: argparse.Namespace, _settings: Settings) -> int:
    a = codec.decode_algebra(_load(args.left))
    b = codec.decode_algebra(_load(args.right))
    _emit(args, codec.encode_algebra(tensor_alg(a, b)))
    return ExitCode.OK


@handle_errors
def _cmd_gauge(args: argparse.Namespace, _settings: Settings) -> int:
    alg = codec.decode_algebra(_load(args.algebra))
    y = codec.decode_matrix(alg.base, _load(args.matrix))
    _emit(args, codec.encode_algebra(gauge_transform(alg, y)))
    return ExitCode.OK


@handle_errors
def _cmd_verify_cert(args: argparse.Namespace, _settings: Settings) -> int:
    src = codec.decode_algebra(_load(args.source))
    dst = codec.decode_algebra(_load(args.target))
    cert = codec.decode_certificate(src.base, _load(args.certificate))
    valid = verify_certificate(src, dst, cert)
    _emit(args, {"valid": valid})
    return ExitCode.OK if valid else ExitCode.NEGATIVE


@handle_errors
def _cmd_constants(args: argparse.Namespace, settings: Settings) -> int:
    alg = codec.decode_algebra(_load(args.algebra))
    bound = settings.degree_bound_for(alg.n)
    basis = constants_basis(alg, bound)
    _emit(args, {"deg_bound": bound, "dimension": len(basis), "basis": [codec.encode_matrix(m) for m in basis]})
    return ExitCode.OK


@handle_errors
def _cmd_invariants(args: argparse.Namespace, _settings: Settings) -> int:
    alg = codec.decode_algebra(_load(args.algebra))
    _emit(args, codec.encode_report(eig_diff_report(alg)))
    return ExitCode.OK


@handle_errors
def _cmd_evalues(args: argparse.Namespace, _settings: Settings) -> int:
    alg = codec.decode_algebra(_load(args.algebra))
    _emit(args, {"e_values": [codec.encode_rational(v) for v in sorted(e_values(alg))]})
    return ExitCode.OK


@handle_errors
def _cmd_separate(args: argparse.Namespace, _settings: Settings) -> int:
    a = codec.decode_algebra(_load(args.left))
    b = codec.decode_algebra(_load(args.right))
    witness = separate(a, b)
    _emit(args, {"witness": None if witness is None else codec.encode_witness(witness)})
    return ExitCode.OK if witness is not None else ExitCode.UNKNOWN


_VERDICT_EXIT = {
    TrivialityStatus.TRIVIAL: ExitCode.OK,
    TrivialityStatus.NONTRIVIAL: ExitCode.NEGATIVE,
    TrivialityStatus.UNKNOWN: ExitCode.UNKNOWN,
}


@handle_errors
def _cmd_trivial(args: argparse.Namespace, _settings: Settings) -> int:
    alg = codec.decode_algebra(_load(args.algebra))
    cert = None if args.certificate is None else codec.decode_certificate(alg.base, _load(args.certificate))
    verdict = decide_trivial(alg, cert)
    _emit(args, codec.encode_verdict(verdict))
    return _VERDICT_EXIT[verdict.status]


def _load_rational_function(source: str) -> RationalFunction:
    text = source.strip()
    if text.startswith(("{", "[", '"')) or Path(text).is_file():
        return codec.decode_rational_function(_load(text))
    return codec.decode_rational_function(text)


@handle_errors
def _cmd_solve_log(args: argparse.Namespace, _settings: Settings) -> int:
    f = _load_rational_function(args.function)
    solution = log_derivative_solve(f)
    _emit(args, {"solution": None if solution is None else codec.encode_rational_function(solution)})
    return ExitCode.OK if solution is not None else ExitCode.NEGATIVE


@handle_errors
def _cmd_monoid_quotient(args: argparse.Namespace, _settings: Settings) -> int:
    m = codec.decode_monoid(_load(args.monoid))
    _emit(args, codec.encode_quotient(quotient(m, codec.decode_subset(_load(args.submonoid)))))
    return ExitCode.OK


@handle_errors
def _cmd_monoid_units(args: argparse.Namespace, _settings: Settings) -> int:
    m = codec.decode_monoid(_load(args.monoid))
    if args.submonoid is None:
        _emit(args, {"units": sorted(units(m))})
        return ExitCode.OK
    n = codec.decode_subset(_load(args.submonoid))
    formula = quotient_units(m, n)
    q = quotient(m, n)
    quotient_group = units(q.as_monoid())
    pulled_back = sorted(a for a in m.elements if q.class_of[a] in quotient_group)
    _emit(args, {"units": sorted(formula), "pullback_units": pulled_back, "consistent": sorted(formula) == pulled_back})
    return ExitCode.OK


_DISTINCTION_EXIT = {
    Distinction.EQUIVALENT: ExitCode.OK,
    Distinction.NOT_EQUIVALENT: ExitCode.NEGATIVE,
    Distinction.UNKNOWN: ExitCode.UNKNOWN,
}


@handle_errors
def _cmd_registry(args: argparse.Namespace, settings: Settings) -> int:
    registry = ClassRegistry(settings.tensor_bound, args.registry)
    code: int = ExitCode.OK
    match args.action:
        case "add":
            index = registry.register(codec.decode_algebra(_load(args.operands[0])))
            document: Any = {"index": index}
        case "equiv":
            left, right = _indices(args.operands, 2)
            cert = codec.decode_certificate(registry.get(left).base, _load(_operand(args.operands, 2)))
            stored = registry.add_equivalence(left, right, cert, args.p_left, args.p_right)
            document = {"stored": stored}
            code = ExitCode.OK if stored else ExitCode.NEGATIVE
        case "separate":
            left, right = _indices(args.operands, 2)
            witness = registry.add_separation(left, right)
            document = {"witness": None if witness is None else codec.encode_witness(witness)}
            code = ExitCode.OK if witness is not None else ExitCode.UNKNOWN
        case "query":
            left, right = _indices(args.operands, 2)
            answer = registry.distinguish(left, right)
            document = {"answer": answer.value}
            code = _DISTINCTION_EXIT[answer]
        case "closure":
            document = {"added": registry.tensor_closure()}
        case "verify":
            valid = registry.verify_all()
            document = {"valid": valid}
            code = ExitCode.OK if valid else ExitCode.NEGATIVE
        case _:
            document = registry.to_document()
    _emit(args, document)
    return code


def _operand(operands: Sequence[str], position: int) -> str:
    if len(operands) <= position:
        msg = f"missing operand {position + 1}"
        raise InputFormatError(msg)
    return operands[position]


def _indices(operands: Sequence[str], count: int) -> list[int]:
    try:
        return [int(_operand(operands, i)) for i in range(count)]
    except ValueError as err:
        msg = "registry indices must be integers"
        raise InputFormatError(msg) from err


def _cmd_reproduce(args: argparse.Namespace, _settings: Settings) -> int:
    results = reproduce_examples()
    passed = all(r.passed for r in results)
    _emit(args, {"scenarios": results, "passed": passed})
    return ExitCode.OK if passed else ExitCode.NEGATIVE


def build_parser() -> argparse.ArgumentParser:
    """Create the argument parser with all subcommands."""
    parser = _ArgumentParser(prog="diffbrauer", description="Differential matrix algebras over Q and Q(x).")
    parser.add_argument("--deg-bound", type=int, default=None, help="degree bound of constants (default 2n)")
    parser.add_argument("--tensor-bound", type=int, default=None, help="largest amplification p (default 4)")
    parser.add_argument("--output", default=None, help="write the JSON document to this path")
    parser.add_argument("--log-level", default=None, help="log level of the diagnostics on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name: str, handler: Handler, help_text: str, *operands: str) -> argparse.ArgumentParser:
        cmd = sub.add_parser(name, help=help_text)
        for operand in operands:
            cmd.add_argument(operand)
        cmd.set_defaults(handler=handler)
        return cmd

    derive = command("derive", _cmd_derive, "derivation of a matrix (or a module vector)", "algebra", "element")
    derive.add_argument("--vector", action="store_true", help="treat the inputs as a module and a vector")
    command("tensor", _cmd_tensor, "tensor product of two algebras", "left", "right")
    command("gauge", _cmd_gauge, "gauge transform of an algebra", "algebra", "matrix")
    command("verify-cert", _cmd_verify_cert, "verify a gauge certificate", "source", "target", "certificate")
    command("constants", _cmd_constants, "degree-bounded constants basis", "algebra")
    command("invariants", _cmd_invariants, "adjoint operator invariants", "algebra")
    command("evalues", _cmd_evalues, "e-value set of a constant derivation matrix", "algebra")
    command("separate", _cmd_separate, "separation witness between two algebras", "left", "right")
    trivial = command("trivial", _cmd_trivial, "decide triviality", "algebra")
    trivial.add_argument("--certificate", default=None, help="certificate against (Mn, 0) to try first")
    command("solve-log", _cmd_solve_log, "solve y' = f y in Q(x)", "function")
    command("monoid-quotient", _cmd_monoid_quotient, "quotient M/N", "monoid", "submonoid")
    units_cmd = command("monoid-units", _cmd_monoid_units, "units of M, or of M/N", "monoid")
    units_cmd.add_argument("--submonoid", default=None, help="elements with invertible image in M/N")
    registry = command("registry", _cmd_registry, "certified class registry", "registry")
    registry.add_argument("action", choices=("add", "equiv", "separate", "query", "closure", "verify", "show"))
    registry.add_argument("operands", nargs="*")
    registry.add_argument("--p-left", type=int, default=1)
    registry.add_argument("--p-right", type=int, default=1)
    command("reproduce", _cmd_reproduce, "run the canned example scenarios")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    """Run the command line and return the exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        try:
            env = Settings.from_env()
            settings = Settings(
                env.deg_bound if args.deg_bound is None else args.deg_bound,
                env.tensor_bound if args.tensor_bound is None else args.tensor_bound,
                env.log_level if args.log_level is None else args.log_level,
            )
        except DiffBrauerError as err:
            _emit(args, codec.encode_error(err))
            return ExitCode.INPUT_ERROR
        setup_logging(settings.log_level)
        handler: Handler = args.handler
        return handler(args, settings)
    except OSError as err:
        _LOG.error("Cannot write the output file %s: %s", args.output, err)
        sys.stderr.write(codec.dumps({"error": {"code": "output", "message": str(err)}}) + "\n")
        return ExitCode.INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
