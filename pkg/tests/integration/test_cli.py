import json

import pytest

from src.config.settings import settings
from src.infrastructure.cli.main import EXIT_FAIL, EXIT_PASS, EXIT_USAGE, attach_values, main


def run_json(capsys, *argv: str):
    code = main(["--format", "json", *argv])
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_enumerate3d_three_legs(capsys):
    code, report = run_json(capsys, "enumerate3d", "--legs", "1;1;1", "--budget", "0")
    assert code == EXIT_PASS
    assert report["check"] == "enumerate3d"
    assert report["params"]["counts"] == {"-2": 1}
    assert report["params"]["version"] == settings.TOOL_VERSION


def test_enumerate3d_plane_partitions(capsys):
    code, report = run_json(capsys, "enumerate3d", "--legs=-;-;-", "--budget", "4")
    assert code == EXIT_PASS
    assert report["params"]["counts"] == {"0": 1, "1": 1, "2": 3, "3": 6, "4": 13}
    assert report["status"] == "PASS"


def test_vertex_both_methods_agree(capsys):
    code, report = run_json(capsys, "vertex", "--legs", "1;1;-", "--method", "both", "--pmax", "3")
    assert code == EXIT_PASS
    assert sorted(report["series"]) == ["box", "orv"]
    assert report["series"]["orv"]["kind"] == "pseries"


def test_vertex_single_leg(capsys):
    code, report = run_json(capsys, "vertex", "--legs", "1;-;-", "--method", "orv", "--pmax", "5/2")
    assert code == EXIT_PASS
    assert report["params"]["pmax"] == 5


def test_identity_text_output(capsys):
    code = main(["identity", "--id", "3", "--qmax", "1", "--pmin=-1", "--pmax", "3"])
    out = capsys.readouterr().out
    assert code == EXIT_PASS
    assert out.startswith("check: identity-3\nstatus: PASS\n")
    assert "mismatches: 0" in out


def test_identity_with_box_ratio(capsys):
    code, report = run_json(capsys, "identity", "--id", "4", "--qmax", "1", "--pmin=-1", "--pmax", "3",
                            "--box-ratio", "1")
    assert code == EXIT_PASS
    assert report["mismatches"] == []


def test_vertex_legs_starting_with_dash(capsys):
    code, report = run_json(capsys, "vertex", "--legs", "-;-;-", "--method", "both", "--pmax", "6")
    assert code == EXIT_PASS
    for method in ("box", "orv"):
        coeffs = report["series"][method]["coeffs"]
        assert [c for _, c in coeffs] == ["1", "1", "3", "6", "13", "24", "48"]


def test_attach_values():
    assert attach_values(["vertex", "--legs", "-;-;-", "--pmin", "-3/2"]) == [
        "vertex", "--legs=-;-;-", "--pmin=-3/2"
    ]
    assert attach_values(["--legs=1;-;-", "--legs"]) == ["--legs=1;-;-", "--legs"]


def test_half_integral_negative_pmin(capsys):
    code, report = run_json(capsys, "identity", "--id", "3", "--qmax", "1", "--pmin", "-3/2", "--pmax", "2")
    assert code == EXIT_PASS
    assert report["params"]["window"] == [-3, 4]


def test_bo_one_point(capsys):
    code, report = run_json(capsys, "bo", "--point", "one", "--qmax", "2", "--pmin=-2", "--pmax", "2")
    assert code == EXIT_PASS
    assert report["check"] == "bo-one"
    assert report["mismatches"] == []


def test_bo_two_point(capsys):
    code, report = run_json(capsys, "bo", "--point", "two", "--qmax", "2")
    assert code == EXIT_PASS
    assert report["check"] == "bo-two"


def test_dt_nodal_fiber_alias(capsys):
    code, report = run_json(capsys, "dt", "--case", "N", "--qmax", "2", "--pmin=-2", "--pmax", "3")
    assert code == EXIT_PASS
    assert report["params"]["case"] == "Nfib"


def test_dt_quotients(capsys):
    code, report = run_json(capsys, "dt", "--case", "BF", "--genus", "0", "--qmax", "1",
                            "--pmin=-2", "--pmax", "2", "--check-quotients")
    assert code == EXIT_PASS
    assert report["status"] == "PASS"


def test_fock_check(capsys):
    code, report = run_json(capsys, "fock", "--check", "matrix-coeff", "--emax", "2", "--qmax", "1",
                            "--awin", "1")
    assert code == EXIT_PASS
    assert report["params"]["check"] == "matrix-coeff"
    assert "timings" not in report


def test_out_writes_file(capsys, tmp_path):
    target = tmp_path / "report.json"
    code = main(["--format", "json", "--out", str(target), "enumerate3d", "--legs", "1;-;-", "--budget", "1"])
    assert code == EXIT_PASS
    assert capsys.readouterr().out == ""
    assert json.loads(target.read_text())["params"]["counts"] == {"0": 1, "1": 2}


def test_output_is_byte_stable(capsys):
    argv = ["--format", "json", "enumerate3d", "--legs", "2;-;-", "--budget", "2"]
    main(argv)
    first = capsys.readouterr().out
    main(argv)
    assert capsys.readouterr().out == first


@pytest.mark.parametrize("argv", [
    ["vertex", "--legs", "1,3;-;-", "--pmax", "2"],
    ["vertex", "--legs", "1;1", "--pmax", "2"],
    ["vertex", "--legs", "1;-;-", "--pmax", "1/3"],
    ["--jobs", "0", "enumerate3d", "--legs", "1;-;-", "--budget", "1"],
    ["enumerate3d", "--legs", "1;-;-", "--budget", "-1"],
    ["dt", "--case", "X", "--qmax", "1"],
    ["fock", "--check", "lemma51", "--emax", "2", "--qmax", "1"],
])
def test_usage_errors(capsys, argv):
    assert main(argv) == EXIT_USAGE
    assert capsys.readouterr().err


def test_bad_partition_message(capsys):
    assert main(["vertex", "--legs", "1,3;-;-", "--pmax", "2"]) == EXIT_USAGE
    assert capsys.readouterr().err.startswith("error:")


def test_missing_command(capsys):
    assert main([]) == EXIT_USAGE


def test_version(capsys):
    assert main(["--version"]) == EXIT_PASS
    assert settings.TOOL_VERSION in capsys.readouterr().out


def test_exit_codes_are_distinct():
    assert len({EXIT_PASS, EXIT_FAIL, EXIT_USAGE}) == 3
