import json
import os
import subprocess
import sys

import pytest

from conftest import asset

CLI = [sys.executable, "-m", "autofix.cli"]
FAST = ["--int-bits", "3", "--max-list", "3"]


def run_cli(*args, env_extra=None):
    env = dict(os.environ)
    if env_extra:
        env.update(env_extra)
    return subprocess.run(
        CLI + list(args), capture_output=True, text=True, env=env
    )


def deriv_args(student, *extra):
    return [
        "--ref", asset("computederiv", "reference.imp"),
        "--student", student,
        "--model", asset("computederiv", "model.eml"),
        *FAST,
        *extra,
    ]


def test_fixed_submission_exits_1():
    proc = run_cli(*deriv_args(asset("computederiv", "student.imp"), "--format", "json"))
    assert proc.returncode == 1
    doc = json.loads(proc.stdout)
    assert doc["verdict"] == "fixed" and doc["cost"] == 3
    assert [c["line"] for c in doc["corrections"]] == [5, 6, 7]


def test_correct_submission_exits_0():
    proc = run_cli(*deriv_args(asset("computederiv", "reference.imp")))
    assert proc.returncode == 0
    assert proc.stdout == "No corrections needed. cost = 0.\n"


def test_no_fix_exits_2():
    proc = run_cli(*deriv_args(asset("computederiv", "corpus", "s14_far_off.imp")))
    assert proc.returncode == 2


def test_missing_model_exits_3(tmp_path):
    proc = run_cli(
        "--ref", asset("computederiv", "reference.imp"),
        "--student", asset("computederiv", "student.imp"),
        "--model", str(tmp_path / "missing.eml"),
    )
    assert proc.returncode == 3
    assert proc.stdout == "" and "autofix:" in proc.stderr


def test_syntax_error_submission_exits_3():
    proc = run_cli(*deriv_args(asset("computederiv", "corpus", "s15_syntax_error.imp")))
    assert proc.returncode == 3


def test_signature_mismatch_exits_3(tmp_path):
    other = tmp_path / "other.imp"
    other.write_text("def computeDeriv_int(x_int):\n    return x_int\n")
    proc = run_cli(*deriv_args(str(other)))
    assert proc.returncode == 3


def test_uninterpreted_callees_rejected():
    proc = run_cli(*deriv_args(asset("computederiv", "student.imp"),
                               "--callees", "uninterpreted"))
    assert proc.returncode == 3


def test_dump_tilde_is_stable():
    args = deriv_args(asset("computederiv", "student.imp"), "--dump-tilde")
    one = run_cli(*args)
    two = run_cli(*args)
    assert one.returncode == 0
    assert one.stdout == two.stdout
    assert "site 0" in one.stdout


def test_seed_env_var_is_a_no_op():
    args = deriv_args(asset("computederiv", "student.imp"), "--format", "json")
    plain = run_cli(*args)
    seeded = run_cli(*args, env_extra={"AUTOFIX_SEED": "12345"})
    assert plain.stdout == seeded.stdout


def corpus_args(*extra):
    return [
        "--ref", asset("computederiv", "reference.imp"),
        "--corpus", asset("computederiv", "corpus"),
        "--model", asset("computederiv", "model.eml"),
        *FAST,
        *extra,
    ]


@pytest.fixture(scope="module")
def corpus_json():
    proc = run_cli(*corpus_args("--format", "json", "--jobs", "2"))
    assert proc.returncode == 0
    return json.loads(proc.stdout)


def test_corpus_summary(corpus_json):
    summary = corpus_json["summary"]
    assert summary["total"] == 15
    assert summary["parse_error"] == 1
    assert summary["fixed"] == 13
    assert summary["no_fix"] == 1
    assert summary["fixed_pct"] >= 80.0
    assert "avg_s" not in summary  # timing only with --timing


def test_corpus_entries_sorted_and_annotated(corpus_json):
    names = [e["name"] for e in corpus_json["files"]]
    assert names == sorted(names)
    by_name = {e["name"]: e for e in corpus_json["files"]}
    assert by_name["s15_syntax_error.imp"]["verdict"] == "parse-error"
    assert by_name["s01_three_bugs.imp"]["cost"] == 3
    assert by_name["s05_skips_zeros.imp"]["cost"] == 1


def test_corpus_text_mode_lists_files():
    proc = run_cli(*corpus_args())
    assert proc.returncode == 0
    assert "s01_three_bugs.imp: fixed (cost 3)" in proc.stdout
    assert "summary: total=15" in proc.stdout


def test_empty_corpus(tmp_path):
    proc = run_cli(
        "--ref", asset("computederiv", "reference.imp"),
        "--corpus", str(tmp_path),
        "--model", asset("computederiv", "model.eml"),
        *FAST,
    )
    assert proc.returncode == 0
    assert "total=0" in proc.stdout


def test_timing_flag_adds_timing_fields():
    proc = run_cli(*corpus_args("--format", "json", "--timing"))
    summary = json.loads(proc.stdout)["summary"]
    assert "avg_s" in summary and "median_s" in summary


def test_alternates_flag():
    proc = run_cli(
        "--ref", asset("arrayreverse", "reference.imp"),
        "--student", asset("arrayreverse", "student.imp"),
        "--model", asset("arrayreverse", "model.eml"),
        "--int-bits", "3", "--max-list", "3",
        "--alternates", "1", "--format", "json",
    )
    assert proc.returncode == 1
    doc = json.loads(proc.stdout)
    assert doc["cost"] == 2 and len(doc["alternates"]) == 1


def test_callees_reference_mode(tmp_path):
    ref = tmp_path / "ref.imp"
    ref.write_text(
        "def apply_int(x_int):\n"
        "    return helper_int(x_int) + 1\n"
        "\n"
        "def helper_int(x_int):\n"
        "    return x_int * 2\n"
    )
    student = tmp_path / "student.imp"
    student.write_text(
        "def apply_int(x_int):\n"
        "    return helper_int(x_int) - 1\n"
        "\n"
        "def helper_int(x_int):\n"
        "    return x_int + 2\n"
    )
    model = tmp_path / "model.eml"
    model.write_text("rule OpF: a0 - a1 -> a0 + a1\n")
    base = ["--ref", str(ref), "--student", str(student), "--model", str(model),
            "--int-bits", "3", "--max-list", "0"]
    with_ref = run_cli(*base, "--callees", "reference")
    assert with_ref.returncode == 1
    with_student = run_cli(*base, "--callees", "student")
    assert with_student.returncode == 2


def test_budget_candidates_flag():
    proc = run_cli(*deriv_args(asset("computederiv", "student.imp"),
                               "--budget-candidates", "5", "--format", "json"))
    assert proc.returncode == 2
    assert json.loads(proc.stdout)["verdict"] == "budget"


def test_renamed_parameters_are_accepted(tmp_path):
    renamed = tmp_path / "renamed.imp"
    renamed.write_text(
        "def computeDeriv_list_int(data_list_int):\n"
        "    result = []\n"
        "    if len(data_list_int) == 1:\n"
        "        return [0]\n"
        "    for i in range(1, len(data_list_int)):\n"
        "        result.append(i * data_list_int[i])\n"
        "    return result\n"
    )
    proc = run_cli(*deriv_args(str(renamed)))
    assert proc.returncode == 0  # equivalent despite different parameter names
