"""
Tests for the command-line front end and the report writer
"""

import json
from fractions import Fraction

import pytest

from api.cli import EXIT_FAILED, EXIT_OK, EXIT_USAGE, main, parse_config
from api.report_writer import CSV_HEADER, render
from models.errors import ConfigError
from models.tensor import Decomposition, RankOneTerm, Tensor3


def _run(tmp_path, *argv):
    output = tmp_path / "report.out"
    code = main([*argv, "--output", str(output)])
    data = output.read_bytes() if output.exists() else b""
    return code, data


def test_parse_config_collects_options():
    config = parse_config(["secant", "--m", "4", "--r", "2", "--format", "csv", "--seed", "9"])
    assert config.subcommand == "secant"
    assert config.option("m") == 4
    assert config.option("r") == 2
    assert config.option("verify") is False
    assert config.seed == 9
    assert config.report_format == "csv"


def test_parse_config_rejects_bad_workers():
    with pytest.raises(ConfigError):
        parse_config(["mu", "--workers", "0"])


def test_unknown_subcommand_exits_with_usage():
    with pytest.raises(SystemExit) as info:
        parse_config(["frobnicate"])
    assert info.value.code == 2


def test_mu_report(tmp_path):
    code, data = _run(tmp_path, "mu", "--step", "0.5")
    assert code == EXIT_OK
    report = json.loads(data)
    assert report["mu"] == pytest.approx(0.625)
    assert "seconds" not in report


def test_mu_exact_check(tmp_path):
    code, data = _run(tmp_path, "mu", "--step", "0.25", "--exact-check", "--timing")
    assert code == EXIT_OK
    report = json.loads(data)
    assert report["positive_gap"] is True
    assert "seconds" in report


@pytest.mark.parametrize(
    "argv",
    [
        ["rank"],
        ["phi"],
        ["clone", "--input", "does-not-exist.json", "--v", "2"],
        ["mu", "--workers", "0"],
        ["mu", "--step", "0.3"],
    ],
)
def test_usage_errors(tmp_path, argv):
    code, _ = _run(tmp_path, *argv)
    assert code == EXIT_USAGE


def test_bad_json_input(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json", encoding="utf-8")
    code, _ = _run(tmp_path, "rank", "--input", str(path))
    assert code == EXIT_USAGE


def test_malformed_tensor_input(tmp_path, write_json):
    path = write_json("bad.json", {"dims": [2, 2, 2], "entries": [[0, 0, 0, "2/4"]]})
    code, _ = _run(tmp_path, "tensor", "--input", path)
    assert code == EXIT_USAGE


def test_tensor_summary(tmp_path, write_json):
    path = write_json("diag.json", Tensor3.diagonal(2))
    code, data = _run(tmp_path, "tensor", "--input", path)
    assert code == EXIT_OK
    report = json.loads(data)
    assert report["lower_bound"] == 2
    assert report["flattening_ranks"] == [2, 2, 2]
    assert report["trivial_bounds"] == [2, 4]
    assert report["canonical"]["entries"] == [[0, 0, 0, "1/1"], [1, 1, 1, "1/1"]]


def test_rank_certificate(tmp_path, write_json):
    path = write_json("diag.json", Tensor3.diagonal(3))
    code, data = _run(tmp_path, "rank", "--input", path, "--budget", "1")
    assert code == EXIT_OK
    report = json.loads(data)
    assert report["lower"] == report["upper"] == 3


def test_phi_verify(tmp_path):
    code, data = _run(tmp_path, "phi", "--r", "2", "--theta", "1", "--sigma", "2", "--verify")
    assert code == EXIT_OK
    assert json.loads(data)["passed"] is True


def test_phi_summary(tmp_path):
    code, data = _run(tmp_path, "phi", "--r", "3", "--theta", "2", "--sigma", "4")
    assert code == EXIT_OK
    report = json.loads(data)
    assert (report["family_size"], report["units"], report["span_dimension"]) == (256, 288, 544)


def test_secant_csv(tmp_path):
    code, data = _run(tmp_path, "secant", "--m", "4", "--r", "2", "--format", "csv")
    assert code == EXIT_OK
    assert data == b"m,r,formula,sampled,match\n4,2,20,20,true\n"


def test_clone_with_wrong_decomposition(tmp_path, write_json, matmul_2x2):
    tensor_path = write_json("matmul.json", matmul_2x2)
    wrong = Decomposition((4, 4, 4), (RankOneTerm((1, 0, 0, 0), (1, 0, 0, 0), (1, 0, 0, 0)),))
    decomposition_path = write_json("wrong.json", wrong)
    code, data = _run(
        tmp_path, "clone", "--input", tensor_path, "--v", "2", "--decomposition", decomposition_path
    )
    assert code == EXIT_FAILED
    report = json.loads(data)
    assert report["error"] == "decomposition does not re-sum to the input tensor"
    assert report["witness"]["terms"] == 1


def test_clone_transfers_strassen(tmp_path, write_json, matmul_2x2, strassen):
    tensor_path = write_json("matmul.json", matmul_2x2)
    decomposition_path = write_json("strassen.json", strassen)
    code, data = _run(
        tmp_path, "clone", "--input", tensor_path, "--v", "2", "--decomposition", decomposition_path
    )
    assert code == EXIT_OK
    report = json.loads(data)
    assert report["clone_certified"] is True
    assert report["dims"] == [8, 8, 8]
    assert len(report["decomposition"]["terms"]) == 7


def test_augment_subcommand(tmp_path, write_json):
    tensor_path = write_json("zero.json", Tensor3.zeros((2, 2, 2)))
    unit = {"ambient": [2, 2], "basis": [{"dims": [2, 2], "entries": [[0, 0, "1/1"]]}]}
    paths = [write_json(f"u{mode}.json", unit) for mode in "abc"]
    code, data = _run(
        tmp_path, "augment", "--input", tensor_path, "--ua", paths[0], "--ub", paths[1], "--uc", paths[2]
    )
    assert code == EXIT_OK
    report = json.loads(data)
    assert report["dims"] == [3, 3, 3]
    assert report["subspace_dims"] == [1, 1, 1]


@pytest.mark.parametrize(
    "argv",
    [
        ["secant", "--m", "4", "--trials", "2"],
        ["mu", "--step", "0.1"],
    ],
)
def test_output_independent_of_workers(tmp_path, argv):
    outputs = []
    for workers in ("1", "2"):
        target = tmp_path / f"w{workers}.json"
        assert main([*argv, "--workers", workers, "--output", str(target)]) == EXIT_OK
        outputs.append(target.read_bytes())
    assert outputs[0] == outputs[1]


# ----------------------------------------------------------------------------
# Report writer
# ----------------------------------------------------------------------------


def test_render_empty_report():
    assert render({}) == b"{}"
    assert render(None) == b"{}"
    assert render([], "csv") == (",".join(CSV_HEADER) + "\n").encode("utf-8")


def test_render_rationals_and_sorting():
    data = render({"b": Fraction(1, 2), "a": [Fraction(3)]})
    assert data == b'{\n  "a": [\n    "3/1"\n  ],\n  "b": "1/2"\n}'


def test_render_strips_timing_unless_asked():
    report = {"mu": 0.5, "seconds": 1.25}
    assert json.loads(render(report)) == {"mu": 0.5}
    assert json.loads(render(report, include_timing=True)) == report
