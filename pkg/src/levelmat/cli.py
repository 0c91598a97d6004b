"""Command-line interface: JSON in, JSON-lines out.

Exit codes: 0 every check passed, 1 a mathematical check failed, 2 usage or parse
error, 3 resource limit reached.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

from .errors import CertificationError, CharacteristicError, LevelmatError, ParseError, ResourceLimitError
from .groebner import Limits, buchberger, dimension, height, syzygies
from .latent import LatentData, LatentReport, validate_latent
from .level import LevelMatrix, certify_level, minors_fixing_lower_block, monomial_level
from .matrices import PolyMatrix, signed_maximal_minors
from .resolution import (
    GradedComplex,
    build_resolution,
    buchsbaum_eisenbud_check,
    hilbert_numerator,
    recover_level_matrix,
    resolve_3generated,
    verify_complex,
)
from .ring import PolyRing, field_from_options

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_LIMIT = 0, 1, 2, 3


class UsageError(LevelmatError):
    pass


def _encode(obj):
    if isinstance(obj, float) and math.isinf(obj):
        return "infinity" if obj > 0 else "-infinity"
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): _encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_encode(v) for v in obj]
    return obj


class Emitter:
    def __init__(self, stream, pretty: bool):
        self.stream = stream
        self.pretty = pretty

    def __call__(self, record: dict) -> None:
        record = _encode(record)
        if self.pretty:
            text = json.dumps(record, indent=2, sort_keys=True)
        else:
            text = json.dumps(record, sort_keys=True, separators=(",", ":"))
        self.stream.write(text + "\n")

    def text(self, line: str) -> None:
        if self.pretty:
            self.stream.write(line + "\n")


# input handling


def read_payload(arg: str | None, stdin=None) -> Any:
    """Inline JSON, ``@path`` or ``-``/absent for standard input."""
    if arg is None or arg == "-":
        text = (stdin or sys.stdin).read()
    elif arg.startswith("@"):
        text = Path(arg[1:]).read_text()
    else:
        text = arg
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"invalid JSON input: {exc}") from exc


def _ring(args, data) -> PolyRing:
    spec = data.get("ring", {}) if isinstance(data, dict) else {}
    variables = spec.get("vars") or spec.get("variables") or ["x", "y", "z"]
    kind = spec.get("field", args.field)
    modulus = spec.get("modulus", args.modulus)
    return PolyRing(variables, field_from_options(kind, modulus))


def _limits(args) -> Limits:
    return Limits(max_degree=args.max_degree, max_pairs=args.max_pairs)


def _gens(args, data) -> tuple[PolyRing, list]:
    items = data.get("gens") if isinstance(data, dict) else data
    if not isinstance(items, list) or not items:
        raise UsageError("expected a nonempty list of polynomials (or {\"gens\": [...]})")
    ring = _ring(args, data)
    return ring, [ring.parse(str(t)) for t in items]


def _latent_input(data) -> LatentData:
    result = validate_latent(data["latent"] if "latent" in data else data)
    if isinstance(result, LatentReport):
        raise UsageError("invalid latent data: " + "; ".join(v.message for v in result.violations))
    return result


def _level_input(args, data, strict: bool = False) -> LevelMatrix:
    ring = _ring(args, data)
    latent = _latent_input(data)
    A = PolyMatrix(ring, _entries(data["A"]))
    B = PolyMatrix(ring, _entries(data["B"]))
    return certify_level(
        latent, A, B, authoritative=args.authoritative, modulus=args.modulus, limits=_limits(args), strict=strict
    )


def _entries(obj):
    return obj["entries"] if isinstance(obj, dict) else obj


def _complex_input(args, data) -> GradedComplex:
    if "maps" in data:
        ring = _ring(args, data)
        return GradedComplex.from_json(data, ring)
    return build_resolution(_level_input(args, data, strict=True))


# verbs


def cmd_validate_latent(args, emit) -> int:
    data = read_payload(args.input)
    result = validate_latent(data)
    if isinstance(result, LatentData):
        emit({"claim": "latent-data", "status": "valid", "latent": result.to_json()})
        return EXIT_OK
    emit({"claim": "latent-data", "status": "invalid", **result.to_json()})
    return EXIT_FAILED


def cmd_make_level(args, emit) -> int:
    data = read_payload(args.input)
    latent = _latent_input(data)
    eta = monomial_level(
        latent, authoritative=args.authoritative, modulus=args.modulus, limits=_limits(args), strict=False
    )
    emit({"claim": "monomial-level-matrix", "level": eta.to_json(), "pass": eta.certified})
    return EXIT_OK if eta.certified else EXIT_FAILED


def cmd_check_level(args, emit) -> int:
    eta = _level_input(args, read_payload(args.input))
    emit({"claim": "determinantal-heights", "certified": eta.certification.to_json(), "pass": eta.certified})
    return EXIT_OK if eta.certified else EXIT_FAILED


def cmd_minors(args, emit) -> int:
    data = read_payload(args.input)
    eta = _level_input(args, data)
    out = {"claim": "signed-minors-of-eta", "signed_minors": [str(f) for f in signed_maximal_minors(eta.eta)]}
    if eta.certification.shape:
        out["fixing_lower_block"] = [str(f) for f in minors_fixing_lower_block(eta)]
    emit(out)
    return EXIT_OK


def cmd_build_resolution(args, emit) -> int:
    eta = _level_input(args, read_payload(args.input), strict=True)
    cx = build_resolution(eta)
    emit({"claim": "level-resolution", "complex": cx.to_json()})
    return EXIT_OK


def cmd_verify_resolution(args, emit) -> int:
    cx = _complex_input(args, read_payload(args.input))
    vc = verify_complex(cx)
    be = buchsbaum_eisenbud_check(cx, modulus=None if args.authoritative else args.modulus, limits=_limits(args),
                                  seed=args.seed)
    emit({"claim": "level-resolution", **vc})
    emit({"claim": "acyclicity-criterion", **be})
    return EXIT_OK if vc["ok"] and be["acyclic"] else EXIT_FAILED


def cmd_hilbert(args, emit) -> int:
    data = read_payload(args.input)
    if isinstance(data, dict) and "maps" in data:
        modules = data["modules"]
    else:
        modules = data.get("shifts") if isinstance(data, dict) else data
    N = hilbert_numerator([tuple(F) for F in modules])
    out = {"claim": "hilbert-numerator", **N.to_json()}
    ok = N.value_at_one == 0 and N.first_derivative_at_one == 0 and N.e >= 1
    if N.value_at_one == 0 and N.first_derivative_at_one == 0 and N.e == 0:
        out["status"] = "multiplicity 0"
    emit({**out, "pass": ok})
    return EXIT_OK if ok else EXIT_FAILED


def cmd_height(args, emit) -> int:
    ring, gens = _gens(args, read_payload(args.input))
    emit({"claim": "determinantal-heights", "height": height(gens, _limits(args)),
          "dimension": dimension(gens, _limits(args)), "ring": ring.to_json()})
    return EXIT_OK


def cmd_groebner(args, emit) -> int:
    _, gens = _gens(args, read_payload(args.input))
    emit({"claim": None, **buchberger(gens, order=args.order, limits=_limits(args)).to_json()})
    return EXIT_OK


def cmd_syzygy(args, emit) -> int:
    _, gens = _gens(args, read_payload(args.input))
    emit({"claim": None, **syzygies(gens, order=args.order, limits=_limits(args)).to_json()})
    return EXIT_OK


def cmd_recover_level(args, emit) -> int:
    _, gens = _gens(args, read_payload(args.input))
    cx = resolve_3generated(gens, _limits(args))
    eta = recover_level_matrix(cx, gens, _limits(args), authoritative=args.authoritative, modulus=args.modulus)
    emit({"claim": "level-recovery", "shifts": [list(F) for F in cx.modules], "level": eta.to_json(),
          "pass": eta.certified})
    return EXIT_OK if eta.certified else EXIT_FAILED


def cmd_example(args, emit) -> int:
    from .corpus import record_names, run_example

    names = record_names() if args.name == "all" else [args.name]
    ok = True
    for name in names:
        report = run_example(name, args.d, m=args.m, seed=args.seed_given, field=args.field, modulus=args.modulus,
                             limits=_limits(args))
        for check in report.checks:
            emit({"example": report.name, "params": report.params, **check.to_json()})
        if report.shifts:
            emit({"example": report.name, "params": report.params, "shifts": [list(F) for F in report.shifts]})
            emit.text(shift_table(report.shifts))
        emit({"example": report.name, "params": report.params, "ok": report.ok, "failed": report.failed()})
        ok &= report.ok
    return EXIT_OK if ok else EXIT_FAILED


def shift_table(shifts) -> str:
    lines = [f"F_{k}: " + " ".join(f"R(-{a})" if a else "R" for a in F) for k, F in enumerate(shifts)]
    return "\n".join(lines)


def cmd_selftest(args, emit) -> int:
    from .selftest import selftest

    report = selftest(args.seed)
    for suite in report.suites:
        emit(suite.to_json())
    emit({"selftest": "summary", "seed": report.seed, "pass": report.ok})
    emit.text(report.table())
    return EXIT_OK if report.ok else EXIT_FAILED


COMMANDS = {
    "validate-latent": (cmd_validate_latent, "check latent data (d, m, delta, epsilon)"),
    "make-level": (cmd_make_level, "monomial level matrix for latent data"),
    "check-level": (cmd_check_level, "certify a candidate [A over B]"),
    "minors": (cmd_minors, "signed maximal minors and those fixing the lower block"),
    "build-resolution": (cmd_build_resolution, "resolution attached to a level matrix"),
    "verify-resolution": (cmd_verify_resolution, "compositions, degrees, minimality and acyclicity"),
    "hilbert": (cmd_hilbert, "Hilbert numerator and multiplicity from shifts"),
    "height": (cmd_height, "height and Krull dimension of an ideal"),
    "groebner": (cmd_groebner, "reduced Groebner basis"),
    "syzygy": (cmd_syzygy, "minimal syzygies of a list of forms"),
    "recover-level": (cmd_recover_level, "resolve three forms and recover a level matrix"),
    "example": (cmd_example, "run a corpus example"),
    "selftest": (cmd_selftest, "seeded invariant suites"),
}


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--field", choices=["qq", "fp"], default=argparse.SUPPRESS)
    p.add_argument("--modulus", type=int, default=argparse.SUPPRESS)
    p.add_argument("--order", choices=["degrevlex", "lex", "deglex"], default=argparse.SUPPRESS)
    p.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    p.add_argument("--max-degree", type=int, default=argparse.SUPPRESS)
    p.add_argument("--max-pairs", type=int, default=argparse.SUPPRESS)
    p.add_argument("--authoritative", action="store_true", default=argparse.SUPPRESS,
                   help="compute heights over the input field instead of GF(p)")
    p.add_argument("--pretty", action="store_true", default=argparse.SUPPRESS)
    return p


DEFAULTS = {
    "field": None,
    "modulus": 32003,
    "order": "degrevlex",
    "seed": None,
    "max_degree": Limits().max_degree,
    "max_pairs": Limits().max_pairs,
    "authoritative": False,
    "pretty": False,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="levelmat", description="Level matrices and almost Cohen-Macaulay ideals.",
                     parents=[common])
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)
    for verb, (_, help_text) in COMMANDS.items():
        sp = sub.add_parser(verb, help=help_text, parents=[common])
        if verb == "example":
            sp.add_argument("name", help="record name or 'all'")
            sp.add_argument("--d", type=int)
            sp.add_argument("--m", type=int)
        elif verb != "selftest":
            sp.add_argument("input", nargs="?", help="inline JSON, @file, or - for stdin")
    return parser


def parse_args(argv: Sequence[str]) -> argparse.Namespace:
    args = build_parser().parse_args(list(argv))
    for key, value in DEFAULTS.items():
        if not hasattr(args, key):
            setattr(args, key, value)
    args.seed_given = args.seed
    if args.seed is None:
        args.seed = 0
    if args.field is None:
        args.field = "fp" if args.verb == "example" else "qq"
    return args


def dispatch(argv: Sequence[str], stdout=None) -> int:
    stdout = stdout or sys.stdout
    try:
        args = parse_args(argv)
    except UsageError as exc:
        Emitter(stdout, False)({"error": "usage", "message": str(exc)})
        return EXIT_USAGE
    emit = Emitter(stdout, args.pretty)
    handler = COMMANDS[args.verb][0]
    try:
        return handler(args, emit)
    except ResourceLimitError as exc:
        emit({"error": "resource-limit", "message": str(exc), "stats": exc.stats})
        return EXIT_LIMIT
    except CertificationError as exc:
        emit({"error": "check-failed", "message": str(exc), "report": exc.report})
        return EXIT_FAILED
    except (UsageError, ParseError, CharacteristicError, KeyError, ValueError, OSError, LevelmatError) as exc:
        emit({"error": "usage", "type": type(exc).__name__, "message": str(exc)})
        return EXIT_USAGE


def main(argv: Sequence[str] | None = None) -> int:
    return dispatch(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
