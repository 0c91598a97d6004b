import copy
from pathlib import Path

import levelmat.corpus  # noqa: F401  (with the package itself, fills the registry)
from levelmat.claims import REGISTRY
from levelmat.docs import (
    PAGE_PATH,
    REQUIRED_OPERATIONS,
    annotated_operations,
    check_claim_index,
    load_index,
    main,
    render_claims_page,
)

ROOT = Path(__file__).resolve().parent.parent


def rows():
    return copy.deepcopy(load_index(ROOT))


def test_complete_index_passes():
    report = check_claim_index(ROOT)
    assert report.ok, report.problems
    assert report.rows == len(load_index(ROOT))


def test_missing_operation_is_named():
    index = rows()
    for row in index:
        if "build_K" in row["operations"]:
            row["operations"].remove("build_K")
    report = check_claim_index(ROOT, index)
    assert "operation missing from the index: build_K" in report.problems


def test_stale_test_name_fails():
    index = rows()
    index[0]["tests"].append("tests/test_ring.py::test_that_does_not_exist")
    report = check_claim_index(ROOT, index)
    assert not report.ok
    assert any("stale test name" in p for p in report.problems)


def test_duplicate_rows_and_misattributed_operations_fail():
    index = rows()
    index.append(copy.deepcopy(index[0]))
    index[1]["operations"].append("build_K")
    problems = check_claim_index(ROOT, index).problems
    assert any(p.startswith("duplicate claim id") for p in problems)
    assert any("build_K is annotated as skew-complementary-minors" in p for p in problems)


def test_source_scan_agrees_with_the_runtime_registry():
    scanned = {(op, cid) for op, ids in annotated_operations(ROOT / "src").items() for cid in ids}
    runtime = {(name, cid) for cid, names in REGISTRY.items() for name in names}
    assert scanned == runtime
    assert {op for op, _ in scanned} == set(REQUIRED_OPERATIONS)


def test_generated_page_is_current():
    assert (ROOT / PAGE_PATH).read_text() == render_claims_page(load_index(ROOT))


def test_command_line_check(capsys):
    assert main(["check", str(ROOT)]) == 0
    assert '"ok": true' in capsys.readouterr().out
