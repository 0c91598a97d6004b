import io
import json
import subprocess
import sys

import pytest

from levelmat.cli import EXIT_FAILED, EXIT_LIMIT, EXIT_OK, EXIT_USAGE, dispatch, shift_table

LEVEL = {
    "latent": {"d": 3, "m": 3, "delta": [2, 2, 3], "epsilon": [1]},
    "A": [["x", "0", "0"], ["y", "x", "0"], ["0", "y", "1"]],
    "B": [["x", "z", "y"]],
}


def run(*argv, stdin=None, monkeypatch=None):
    out = io.StringIO()
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = dispatch([str(a) for a in argv], out)
    return code, [json.loads(line) for line in out.getvalue().splitlines() if line.startswith("{")]


def test_validate_latent_valid_and_invalid():
    code, [rec] = run("validate-latent", json.dumps(LEVEL["latent"]))
    assert code == EXIT_OK and rec["status"] == "valid"
    code, [rec] = run("validate-latent", '{"d": 2, "m": 3, "delta": [1, 1, 1], "epsilon": [1]}')
    assert code == EXIT_FAILED and rec["status"] == "invalid"


def test_make_level_emits_a_certified_matrix():
    code, [rec] = run("make-level", json.dumps(LEVEL["latent"]))
    assert code == EXIT_OK and rec["pass"]
    assert rec["level"]["certified"]["ht_eta"] == 2


def test_check_level_and_minors():
    code, [rec] = run("make-level", json.dumps(LEVEL["latent"]))
    level = rec["level"]
    payload = {"latent": level["latent"], "A": level["A"], "B": level["B"]}
    code, [rec] = run("check-level", json.dumps(payload))
    assert code == EXIT_OK and rec["pass"]
    code, [rec] = run("minors", json.dumps(payload))
    assert rec["fixing_lower_block"] == ["x^3 + y^3 - y*z^2", "-x*y^2 + x*z^2", "x^2*y"]


def test_resolution_round_trip_through_files(tmp_path):
    code, [rec] = run("make-level", json.dumps(LEVEL["latent"]))
    level = rec["level"]
    path = tmp_path / "level.json"
    path.write_text(json.dumps({"latent": level["latent"], "A": level["A"], "B": level["B"]}))
    code, [rec] = run("build-resolution", f"@{path}")
    assert code == EXIT_OK
    cx = rec["complex"]
    assert cx["modules"] == [[0], [3, 3, 3], [5, 5, 6], [7]]
    (tmp_path / "cx.json").write_text(json.dumps(cx))
    code, records = run("verify-resolution", f"@{tmp_path / 'cx.json'}")
    assert code == EXIT_OK
    assert records[0]["ok"] and records[1]["acyclic"]


def test_hilbert_from_stdin(monkeypatch):
    code, [rec] = run("hilbert", stdin='{"shifts": [[0], [2, 2, 2], [3, 3]]}', monkeypatch=monkeypatch)
    assert code == EXIT_OK
    assert rec["e"] == 3 and rec["numerator"] == "1 - 3*t^2 + 2*t^3"


def test_hilbert_multiplicity_zero_is_a_failure():
    code, [rec] = run("hilbert", "[[0], [1], [1]]")
    assert code == EXIT_FAILED


def test_height_groebner_syzygy():
    code, [rec] = run("height", '["x^2", "x*y"]')
    assert code == EXIT_OK and rec["height"] == 1 and rec["dimension"] == 2
    code, [rec] = run("height", '["1"]')
    assert rec["height"] == "infinity"
    code, [rec] = run("groebner", '["x*y - z^2", "y^2"]')
    assert "y^2" in rec["basis"]
    code, [rec] = run("syzygy", '["x", "y", "z"]')
    assert rec["degrees"] == [2, 2, 2]


def test_recover_level_from_three_forms():
    code, [rec] = run("recover-level", '["x^3 + y^3 - y*z^2", "-x*y^2 + x*z^2", "x^2*y"]', "--field", "fp")
    assert code == EXIT_OK and rec["pass"]
    assert rec["shifts"] == [[0], [3, 3, 3], [5, 5, 6], [7]]


def test_example_verb_and_failing_example():
    code, records = run("example", "cuspidal", "--d", "2")
    assert code == EXIT_OK
    assert records[-1] == {"example": "cuspidal", "params": {"d": 2}, "ok": True, "failed": []}
    code, records = run("example", "nodal", "--d", "3")
    assert code == EXIT_FAILED
    assert records[-1]["failed"] == ["printed-latent", "printed-shifts"]


@pytest.mark.parametrize(
    "argv",
    [
        ("frobnicate",),
        ("height", "not json"),
        ("height", '["x + "]'),
        ("height", "@/no/such/file"),
        ("example", "no-such-example"),
        ("height", '["x"]', "--modulus", "8", "--field", "fp"),
        ("example", "xyz-special", "--d", "32005"),
    ],
)
def test_usage_errors_exit_2(argv):
    code, records = run(*argv)
    assert code == EXIT_USAGE
    assert records[-1]["error"] == "usage"


def test_resource_limit_exits_3():
    code, [rec] = run("groebner", '["x^3 + y^2*z", "y^3 + x*z^2", "z^3 + x^2*y"]', "--max-pairs", "1")
    assert code == EXIT_LIMIT and rec["error"] == "resource-limit"


def test_non_level_input_exits_1():
    payload = dict(LEVEL, A=[["x", "0", "0"], ["x", "0", "0"], ["0", "y", "1"]])
    code, [rec] = run("build-resolution", json.dumps(payload))
    assert code == EXIT_FAILED and rec["error"] == "check-failed"


def test_pretty_output_prints_a_shift_table():
    out = io.StringIO()
    dispatch(["example", "cuspidal", "--pretty"], out)
    assert "F_1: R(-2) R(-2) R(-2)" in out.getvalue()
    assert shift_table([[0], [2]]) == "F_0: R\nF_1: R(-2)"


def test_installed_script_is_deterministic():
    cmd = [sys.executable, "-m", "levelmat", "example", "jns", "--d", "3", "--seed", "5"]
    first = subprocess.run(cmd, capture_output=True, text=True, check=True).stdout
    second = subprocess.run(cmd, capture_output=True, text=True, check=True).stdout
    assert first == second and first
