import json
import subprocess
import sys

import pytest

from mknf_aft.cli import run
from conftest import KB_DIR


def call(capsys, *argv):
    code = run([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def as_json(capsys, *argv):
    code, out, _ = call(capsys, *argv, "--output", "json")
    return code, json.loads(out)


def test_wfm_accepted(capsys):
    code, data = as_json(capsys, "wfm", KB_DIR / "ex5.kb")
    assert code == 0
    assert set(data) == {"kb", "operator", "partitions", "well_founded"}
    assert data["well_founded"] == {
        "t": ["Ka", "Kb", "Kc"],
        "p": ["Ka", "Kb", "Kc", "Kd", "Ke"],
        "kind": "WELL_FOUNDED",
        "reason": None,
    }


def test_wfm_rejected_exits_one(capsys):
    code, data = as_json(capsys, "wfm", KB_DIR / "ex6.kb")
    assert code == 1
    assert data["well_founded"] is None
    assert data["partitions"][0]["reason"] == "theta-unsat"


def test_phi_and_psi_differ_on_blocking_example(capsys):
    assert as_json(capsys, "wfm", KB_DIR / "ex7.kb", "--operator", "phi")[0] == 1
    assert as_json(capsys, "wfm", KB_DIR / "ex7.kb", "--operator", "psi")[0] == 0
    code, data = as_json(capsys, "compare", KB_DIR / "ex7.kb")
    assert code == 0
    assert data["relation"] == "strictly-below"
    assert data["precision_counterexamples"] == 0


def test_models_lists_every_stable_fixpoint(capsys):
    code, data = as_json(capsys, "models", KB_DIR / "ex6.kb")
    assert code == 0
    assert [p["kind"] for p in data["partitions"]] == ["REJECTED", "TWO_VALUED", "TWO_VALUED", "REJECTED"]
    assert data["well_founded"] is None


def test_models_without_accepted_partition_exits_one(capsys):
    assert call(capsys, "models", KB_DIR / "phi_inconsistent.kb")[0] == 1


def test_output_is_deterministic_across_jobs(capsys):
    outs = {call(capsys, "models", KB_DIR / "ex5.kb", "--jobs", j)[1] for j in (1, 3)}
    assert len(outs) == 1


@pytest.mark.parametrize(
    "partition, code, kind",
    [
        ("a,b,c;a,b,c,d,e", 0, "WELL_FOUNDED"),
        ("a,b,c,d;a,b,c,d", 0, "TWO_VALUED"),
        ("a;a,b,c,d,e", 1, "REJECTED"),
    ],
)
def test_check_partition(capsys, partition, code, kind):
    got, data = as_json(capsys, "check", KB_DIR / "ex5.kb", "--partition", partition)
    assert got == code and data["partitions"][0]["kind"] == kind


@pytest.mark.parametrize(
    "argv",
    [
        ["wfm", KB_DIR / "missing.kb"],
        ["check", KB_DIR / "ex5.kb"],
        ["check", KB_DIR / "ex5.kb", "--partition", "a"],
        ["check", KB_DIR / "ex5.kb", "--partition", "zz;a"],
        ["wfm", KB_DIR / "ex5.kb", "--jobs", "0"],
        ["frobnicate", KB_DIR / "ex5.kb"],
    ],
)
def test_usage_errors_exit_two(capsys, argv):
    assert call(capsys, *argv)[0] == 2


def test_syntax_error_exits_two(capsys, tmp_path):
    bad = tmp_path / "bad.kb"
    bad.write_text("rules:\n  K a <- K b\n")
    code, _, err = call(capsys, "wfm", bad)
    assert code == 2 and "line 3" in err


def test_props_on_operator_tables(capsys):
    code, out, _ = call(capsys, "props", KB_DIR / "ex1.json")
    assert code == 0
    assert "A ({},{x}): contracting=True prudent=True" in out
    assert "A' ({},{x}): contracting=True prudent=True" in out
    # A' fixes (top, top) but iterating its first projection from bot stays at bot
    assert "A' ({x},{x}): contracting=True prudent=False" in out


@pytest.mark.parametrize("name", ["ex5", "ex7", "four_fixpoints"])
def test_props_on_kbs(capsys, name):
    code, data = as_json(capsys, "props", KB_DIR / f"{name}.kb")
    assert code == 0 and all(data["checks"].values())


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "mknf_aft", "wfm", str(KB_DIR / "ex5.kb")],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert "status: WELL_FOUNDED" in proc.stdout
