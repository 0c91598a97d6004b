"""Claim index: consistency check against code annotations and tests, plus page generation.

Run ``python -m levelmat.docs check`` or ``python -m levelmat.docs render`` from the repository root.
"""

from __future__ import annotations

import ast
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

INDEX_PATH = Path("docs") / "claims.json"
PAGE_PATH = Path("docs") / "claims.md"

# Operations that implement a mathematical statement; each must sit in exactly one index row.
REQUIRED_OPERATIONS = (
    "is_homogeneous",
    "partial_derivative",
    "minor",
    "signed_maximal_minors",
    "compound",
    "adjugate",
    "rank_ff",
    "validate_latent",
    "check_nonperfect_shifts",
    "latent_from_shifts",
    "check_degree_shape",
    "certify_level",
    "monomial_level",
    "embed_identity_level",
    "minors_fixing_lower_block",
    "build_K",
    "verify_rank2_compound",
    "vasconcelos_identity_a",
    "vasconcelos_identity_b",
    "height_equivalences",
    "dimension",
    "height",
    "build_resolution",
    "verify_complex",
    "buchsbaum_eisenbud_check",
    "hilbert_numerator",
    "recover_level_matrix",
    "jacobian_ideal",
    "run_example",
    "xyz_special_eta",
)


@dataclass
class IndexReport:
    problems: list[str] = field(default_factory=list)
    rows: int = 0

    @property
    def ok(self) -> bool:
        return not self.problems

    def to_json(self) -> dict:
        return {"ok": self.ok, "rows": self.rows, "problems": self.problems}


def _decorator_claim(dec) -> str | None:
    if (
        isinstance(dec, ast.Call)
        and isinstance(dec.func, ast.Name)
        and dec.func.id == "claims"
        and dec.args
        and isinstance(dec.args[0], ast.Constant)
    ):
        return dec.args[0].value
    return None


def annotated_operations(src: Path) -> dict[str, list[str]]:
    """Function name -> claim ids found in ``@claims("...")`` decorators."""
    found: dict[str, list[str]] = {}
    for path in sorted(src.rglob("*.py")):
        for node in ast.walk(ast.parse(path.read_text())):
            if isinstance(node, (ast.FunctionDef, ast.AsyncFunctionDef)):
                for dec in node.decorator_list:
                    claim = _decorator_claim(dec)
                    if claim is not None:
                        found.setdefault(node.name, []).append(claim)
    return found


def collect_test_names(tests: Path) -> set[str]:
    """Identifiers ``file.py::test`` and ``file.py::Class::test`` for every collected-looking test."""
    names = set()
    for path in sorted(tests.rglob("test_*.py")):
        rel = path.relative_to(tests.parent).as_posix()
        for node in ast.parse(path.read_text()).body:
            if isinstance(node, ast.FunctionDef) and node.name.startswith("test"):
                names.add(f"{rel}::{node.name}")
            elif isinstance(node, ast.ClassDef) and node.name.startswith("Test"):
                for item in node.body:
                    if isinstance(item, ast.FunctionDef) and item.name.startswith("test"):
                        names.add(f"{rel}::{node.name}::{item.name}")
    return names


def load_index(root: Path) -> list[dict]:
    return json.loads((root / INDEX_PATH).read_text())["claims"]


def check_claim_index(root: Path | str = ".", index: list[dict] | None = None) -> IndexReport:
    root = Path(root)
    rows = load_index(root) if index is None else index
    report = IndexReport(rows=len(rows))
    annotations = annotated_operations(root / "src")
    tests = collect_test_names(root / "tests")
    seen: dict[str, list[str]] = {}
    ids = [row["id"] for row in rows]
    for dup in sorted({i for i in ids if ids.count(i) > 1}):
        report.problems.append(f"duplicate claim id {dup}")
    for row in rows:
        cid = row["id"]
        if not row.get("statement"):
            report.problems.append(f"{cid}: missing statement")
        if not row.get("tests"):
            report.problems.append(f"{cid}: no tests listed")
        for op in row.get("operations", []):
            seen.setdefault(op, []).append(cid)
            tags = annotations.get(op)
            if tags is None:
                report.problems.append(f"{cid}: operation {op} carries no claim annotation in the source")
            elif cid not in tags:
                report.problems.append(f"{cid}: operation {op} is annotated as {', '.join(tags)}")
        for name in row.get("tests", []):
            if name not in tests:
                report.problems.append(f"{cid}: stale test name {name}")
    for op in REQUIRED_OPERATIONS:
        rows_for = seen.get(op, [])
        if not rows_for:
            report.problems.append(f"operation missing from the index: {op}")
        elif len(rows_for) > 1:
            report.problems.append(f"operation {op} appears in several rows: {', '.join(rows_for)}")
    for op, tags in sorted(annotations.items()):
        if op not in seen:
            report.problems.append(f"annotated operation {op} ({', '.join(tags)}) has no index row")
    return report


def render_claims_page(rows: list[dict]) -> str:
    lines = [
        "# Claim index",
        "",
        "Generated from `docs/claims.json` by `python -m levelmat.docs render`; do not edit by hand.",
        "",
        "| claim | statement | operations | tests |",
        "|---|---|---|---|",
    ]
    for row in rows:
        ops = ", ".join(f"`{op}`" for op in row["operations"])
        tests = "<br>".join(f"`{t}`" for t in row["tests"])
        lines.append(f"| `{row['id']}` | {row['statement']} | {ops} | {tests} |")
    return "\n".join(lines) + "\n"


def render(root: Path | str = ".") -> Path:
    root = Path(root)
    out = root / PAGE_PATH
    out.write_text(render_claims_page(load_index(root)))
    return out


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    verb = argv[0] if argv else "check"
    root = Path(argv[1]) if len(argv) > 1 else Path(".")
    if verb == "render":
        print(render(root))
        return 0
    report = check_claim_index(root)
    print(json.dumps(report.to_json(), indent=2))
    return 0 if report.ok else 1


if __name__ == "__main__":
    sys.exit(main())
