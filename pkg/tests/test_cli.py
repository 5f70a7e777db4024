import json
import subprocess
import sys

import pytest

from torcert import cli
from torcert.lattice import VerificationError


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_local_cyclic(capsys):
    code, out, _ = run(capsys, "local-cyclic", "--radicands", "3,5")
    assert code == 0
    assert json.loads(out)["all_cyclic"] is False
    code, out, _ = run(capsys, "local-cyclic", "--radicands", "13,17")
    assert json.loads(out)["all_cyclic"] is True
    code, out, _ = run(capsys, "local-cyclic", "--radicands", "-1,17", "--format", "text")
    assert code == 0 and "all_cyclic: true" in out


@pytest.mark.parametrize("radicands", ["4", "2,3,6", "a,b", "1"])
def test_local_cyclic_input_errors(capsys, radicands):
    code, _, err = run(capsys, "local-cyclic", "--radicands", radicands)
    assert code == 1 and "input error" in err


def test_certify_sign(capsys):
    code, out, _ = run(capsys, "certify", "--fixture", "examples/sign.json", "--seed", "1")
    assert code == 0
    data = json.loads(out)
    assert data["br_trivial"] is True
    assert data["local_rationality"]["all_rational"] is True
    assert "resolution" in data


def test_certify_needs_seed(capsys):
    code, _, err = run(capsys, "certify", "--fixture", "sign.json")
    assert code == 1 and "--seed" in err


def test_certify_biquadratic(capsys):
    code, out, _ = run(capsys, "certify", "--fixture", "j_c2x2.json", "--seed", "0", "--no-resolution")
    data = json.loads(out)
    assert code == 0 and data["br_trivial"] is False
    assert data["unramified_brauer_group"] == "Z/2"
    assert "resolution" not in data


def test_cohomology_command(capsys):
    code, out, _ = run(capsys, "cohomology", "--fixture", "j_c2x2.json")
    data = json.loads(out)
    assert code == 0
    full = [row for row in data["subgroups"] if row["order"] == 4][0]
    assert full["H^1"] == [2, 2] and full["H^-1"] == [4]


def test_resolve_commands(capsys):
    code, out, _ = run(capsys, "resolve", "--fixture", "sign.json", "--kind", "coflasquify")
    assert code == 0 and json.loads(out)["result_rank"] == 2
    code, out, _ = run(capsys, "resolve", "--fixture", "sign.json", "--kind", "coflasque")
    assert code == 0 and json.loads(out)["kind"] == "COFLASQUE"


def test_conic_bundle_command(capsys):
    code, out, _ = run(capsys, "conic-bundle", "--fixture", "s3_surface.json", "--seed", "1")
    data = json.loads(out)
    assert code == 0
    assert data["stably_permutation"]["status"] == "YES"
    assert data["h1_independent_of_section_convention"] is True
    full = [row for row in data["subgroups"] if row["subgroup_order"] == 6][0]
    assert full["residual_fibres"] == 4 and full["verdict"] == "NOT_RATIONAL"


def test_missing_and_malformed_fixtures(capsys, tmp_path):
    code, _, err = run(capsys, "cohomology", "--fixture", str(tmp_path / "absent.json"))
    assert code == 1 and "no such file" in err
    bad = tmp_path / "bad.json"
    bad.write_text('{"group": "C2",\n "generator_action": [[[1]]')
    code, _, err = run(capsys, "cohomology", "--fixture", str(bad))
    assert code == 1 and "line 2" in err


def test_usage_errors_exit_1(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["frobnicate"])
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        cli.main(["local-cyclic"])
    assert exc.value.code == 1


def test_group_order_limit_exit_1(capsys):
    code, _, err = run(capsys, "cohomology", "--fixture", "f20_norm.json", "--max-group-order", "10")
    assert code == 1 and "exceeds" in err


def test_verification_failure_exit_2(capsys, monkeypatch):
    import torcert.resolutions as res

    def broken(M, subgroups=None):
        raise VerificationError("maps do not compose to zero")

    monkeypatch.setattr(res, "flasque_resolution", broken)
    code, _, err = run(capsys, "resolve", "--fixture", "sign.json")
    assert code == 2 and "verification failure" in err


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "torcert", "local-cyclic", "--radicands", "13,17,53"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["all_cyclic"] is True


@pytest.mark.slow
def test_paper_output_is_byte_identical_across_runs():
    cmd = [sys.executable, "-m", "torcert", "paper", "--seed", "1", "--format", "json"]
    first = subprocess.run(cmd, capture_output=True, text=True, check=False)
    second = subprocess.run(cmd, capture_output=True, text=True, check=False)
    assert first.returncode == 0, first.stderr
    assert first.stdout == second.stdout
    rows = {r["id"]: r for r in json.loads(first.stdout)["rows"]}
    assert rows["biquadratic_norm_torus"]["br_trivial"] is False
    for rid in ("f20_norm_torus", "c2x3_h_trivial_chain", "rank3_twisted_augmentation"):
        assert rows[rid]["br_trivial"] is True
    assert rows["s3_conic_bundle"]["h1_pic_all_zero"] is True
    assert rows["local_13_17"]["all_cyclic"] is True
