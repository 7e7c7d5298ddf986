import gzip
import subprocess
import sys
from pathlib import Path

import pytest

from subadditivity import cli
from subadditivity.constructions import VerificationReport
from subadditivity.grassmann import parse_witness, verify_span_limit_witness
from subadditivity.tensor import parse_tensor, w_state

GOLDEN = Path(__file__).parent / "golden"


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize(
    "argv,golden",
    [
        (("verify", "--c2", "--a", "2"), "verify_c2_2.txt"),
        (("verify", "--c1", "--n", "3,3,2"), "verify_c1_3_3_2.txt"),
        (("verify", "--c1", "--n", "3,3,2", "--format", "witness"), "witness_c1_3_3_2.txt"),
        (("dump", "w-state"), "w_state.txt"),
        (("omega", "--schonhage", "2", "2"), "omega_2_2.txt"),
        (("grid", "--family", "dome", "--n", "2", "--p", "0.1"), "dome_2_0.1.csv"),
    ],
)
def test_goldens(capsys, argv, golden):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    assert out == (GOLDEN / golden).read_text()


def test_verify_output_is_byte_identical(capsys):
    first = run(capsys, "verify", "--c4", "--n", "2,2,2")
    second = run(capsys, "verify", "--c4", "--n", "2,2,2")
    assert first[0] == 0 and first[1] == second[1]
    assert "strict_subadditivity = true" in first[1]
    assert first[2].startswith("verifying C4(2,2,2)")


def test_verify_c1_canonicalizes(capsys):
    code, out, _ = run(capsys, "verify", "--c1", "--n", "3,2,3")
    assert code == 0 and out.startswith("construction = C1(3,2,3)")
    code, out, _ = run(capsys, "verify", "--c1", "--n", "2,3,2")
    assert code == 0 and out.startswith("construction = C1(3,2,2)")


def test_verify_c3(capsys):
    code, out, _ = run(capsys, "verify", "--c3", "--d", "3", "--n", "2")
    assert code == 0 and "witness_size = 21" in out


def test_witness_file_round_trip(tmp_path, capsys):
    path = tmp_path / "w.txt"
    code, out, _ = run(capsys, "verify", "--c2", "--a", "2", "--format", "witness", "--out", str(path))
    assert code == 0 and out == ""
    shape, mode, family = parse_witness(path.read_text())
    assert len(family) == 17 and mode == 3


@pytest.mark.parametrize(
    "argv",
    [
        ("verify", "--c1", "--n", "4,2,2"),
        ("verify", "--c1", "--c2", "--a", "2"),
        ("verify", "--c2"),
        ("verify", "--c4", "--n", "3,2,2"),
        ("verify", "--c3", "--d", "3", "--n", "2", "--format", "witness"),
        ("verify", "--c2", "--a", "2", "--format", "ppm"),
        ("search-m", "4", "4", "4", "--target", "16"),
        ("omega", "--schonhage", "1", "3"),
        ("grid", "--family", "ext_mamu", "--n3", "2..5", "--n4", "3..5"),
        ("grid", "--family", "dome", "--n", "3", "--p", "0.5"),
        ("grid", "--family", "dome", "--p", "0.5"),
        ("grid", "--family", "dome", "--n", "2", "--format", "witness"),
        ("dump", "mamu", "2,2"),
        ("dump", "c1", "2,2,2"),
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2 and out == "" and err.startswith("error:")


def test_failed_verification_exits_1(capsys, monkeypatch):
    def fake(spec, seed=0):
        return VerificationReport(spec.label(), 17, 17, 18, False)

    monkeypatch.setattr(cli.C, "verify_construction", fake)
    code, out, _ = run(capsys, "verify", "--c2", "--a", "2")
    assert code == 1 and "border_rank_upper_confirmed = false" in out


def test_search_m(capsys):
    code, out, _ = run(capsys, "search-m", "2", "2", "2", "--target", "2")
    assert code == 0
    assert "exists = true" in out and "lemma_M = 2" in out and "matches_lemma = true" in out
    code, out, _ = run(capsys, "search-m", "2", "2", "2", "--target", "3")
    assert "exists = false" in out and "matches_lemma = true" in out
    code, out, _ = run(capsys, "search-m", "1", "2", "3", "--target", "1")
    assert code == 0 and "exists = true" in out and "M = 1" in out


def test_omega(capsys):
    code, out, _ = run(capsys, "omega", "--schonhage", "3", "3")
    vals = dict(line.split(" = ") for line in out.splitlines())
    assert 0.60 <= float(vals["p_star"]) <= 0.62 and float(vals["omega_star"]) <= 2.551


def test_grid_figure_defaults_to_file(tmp_path, capsys):
    path = tmp_path / "dome.csv"
    code, _, err = run(capsys, "grid", "--family", "dome", "--figure-defaults", "--out", str(path))
    assert code == 0 and "4975 grid cells" in err
    with gzip.open(GOLDEN / "dome.csv.gz", "rt") as fh:
        assert path.read_text() == fh.read()


def test_grid_ranges_and_ppm(capsys):
    code, out, _ = run(capsys, "grid", "--family", "ext_mamu", "--n3", "2..10:2", "--n4", "4..6")
    assert code == 0 and len(out.splitlines()) == 1 + 5 * 3
    code, out, _ = run(capsys, "grid", "--family", "multi_emamu_p_of_d", "--d", "3..4", "--n", "4", "--format", "ppm")
    assert code == 0 and out.splitlines()[:2] == ["P3", "2 1"]
    code, out, _ = run(capsys, "grid", "--family", "multi_emamu_fixed_d", "--d", "4", "--n", "4", "--p", "0.5..0.6:0.05")
    assert code == 0 and len(out.splitlines()) == 4


def test_dump_round_trip(capsys):
    code, out, _ = run(capsys, "dump", "w-state")
    assert parse_tensor(out) == w_state()
    code, out, _ = run(capsys, "dump", "c2", "2")
    t = parse_tensor(out)
    assert t.shape == (4, 4, 5, 17)
    code, out, _ = run(capsys, "dump", "unit", "3,2")
    assert parse_tensor(out).nnz() == 2


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "subadditivity", "dump", "w-state"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout == (GOLDEN / "w_state.txt").read_text()


def test_witness_from_cli_verifies(capsys):
    from subadditivity.constructions import ConstructionSpec, build_summands
    from subadditivity.tensor import direct_sum

    code, out, _ = run(capsys, "verify", "--c2", "--a", "2", "--format", "witness")
    shape, mode, family = parse_witness(out)
    t1, t2 = build_summands(ConstructionSpec.c2(2))
    rep = verify_span_limit_witness(direct_sum(t1, t2), family, mode)
    assert rep.contained and rep.generic_rank_ok
