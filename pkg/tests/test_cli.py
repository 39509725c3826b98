import json
import math
import subprocess
import sys
from importlib import resources

import jsonschema
import pytest

from spinring import RingSpec, distance_matrix, kappa_max

SCHEMA = json.loads(
    resources.files("spinring").joinpath("schemas/output-v1.schema.json").read_text()
)


def run_cli(*args):
    return subprocess.run(
        [sys.executable, "-m", "spinring", *args],
        capture_output=True,
        text=True,
    )


def parse(result):
    doc = json.loads(result.stdout)
    jsonschema.validate(doc, SCHEMA)
    return doc


def test_schema_itself_is_valid():
    jsonschema.Draft7Validator.check_schema(SCHEMA)


def test_distance_small_ring():
    result = run_cli("distance", "--n", "3")
    assert result.returncode == 0
    payload = parse(result)["payload"]
    assert payload["distance_matrix"][0][1] == pytest.approx(
        math.log(9.0 / 4.0), abs=1e-12
    )
    assert payload["p_max_matrix"][0][1] == pytest.approx(4.0 / 9.0, abs=1e-12)
    assert payload["semi_metric"] is False
    assert payload["zero_distance_pairs"] == []


def test_distance_even_ring_marks_semi_metric():
    payload = parse(run_cli("distance", "--n", "4"))["payload"]
    assert payload["semi_metric"] is True
    assert payload["zero_distance_pairs"] == [[1, 3], [2, 4]]
    assert payload["distance_matrix"][0][2] == 0.0


def test_distance_quotient():
    result = run_cli("distance", "--n", "4", "--quotient")
    assert result.returncode == 0
    payload = parse(result)["payload"]
    assert payload["n_effective"] == 2
    assert payload["distance_matrix"][0][1] == pytest.approx(math.log(4.0), abs=1e-12)
    assert payload["semi_metric"] is False


def test_distance_csv_format():
    result = run_cli("distance", "--n", "4", "--format", "csv")
    assert result.returncode == 0
    lines = result.stdout.strip().splitlines()
    assert lines[0] == "i,j,distance,p_max"
    assert len(lines) == 1 + 6
    first = lines[1].split(",")
    assert first[0] == "1" and first[1] == "2"
    assert float(first[3]) == pytest.approx(0.25, abs=1e-12)


def test_usage_errors_exit_2():
    assert run_cli("distance", "--n", "2").returncode == 2
    assert run_cli("metric-check", "--n", "9", "--quotient").returncode == 2
    assert run_cli("distance", "--n", "5", "--strength", "0").returncode == 2
    assert run_cli("embed", "--n", "5", "--space", "spherical", "--kappa", "much").returncode == 2
    assert run_cli("embed", "--n", "5", "--space", "spherical", "--kappa", "-1").returncode == 2
    assert run_cli("nonsense").returncode == 2


def test_metric_check_exit_codes_and_classification():
    result = run_cli("metric-check", "--n", "9")
    assert result.returncode == 0
    assert parse(result)["payload"]["classification"] == "Metric"

    result = run_cli("metric-check", "--n", "8")
    assert result.returncode == 0
    payload = parse(result)["payload"]
    assert payload["classification"] == "SemiMetricAntipodal"
    assert len(payload["violations"]) == 4

    result = run_cli("metric-check", "--n", "8", "--quotient")
    assert result.returncode == 0
    assert parse(result)["payload"]["classification"] == "Metric"


def test_classify_kinds():
    payload = parse(run_cli("classify", "--n", "13"))["payload"]
    assert payload["kind"] == "Prime"
    assert payload["uniform"] is True
    assert payload["uniform_distance"] is not None
    assert len(payload["distinct_values"]) == 1

    payload = parse(run_cli("classify", "--n", "26"))["payload"]
    assert payload["kind"] == "TwicePrime"
    assert payload["uniform"] is True

    payload = parse(run_cli("classify", "--n", "21"))["payload"]
    assert payload["kind"] == "OddComposite"
    assert payload["uniform"] is False
    assert payload["uniform_distance"] is None
    assert len(payload["distinct_values"]) >= 2


def test_embed_spherical_auto():
    result = run_cli("embed", "--n", "5", "--space", "spherical")
    assert result.returncode == 0
    payload = parse(result)["payload"]
    assert payload["embeddable"] is True
    w = distance_matrix(RingSpec(5)).entries[0, 1]
    assert payload["kappa"] == pytest.approx(kappa_max(5, w), rel=1e-12)
    realization = payload["realization"]
    assert realization["ambient_dim"] == 4
    assert realization["model_dim"] == 3
    assert len(realization["coordinates"]) == 5
    assert len(realization["coordinates"][0]) == 4
    assert realization["max_distortion"] < 1e-8
    assert realization["irreducible"] is True


def test_embed_spherical_above_boundary_exits_1():
    w = float(distance_matrix(RingSpec(5)).entries[0, 1])
    kappa = 1.01 * kappa_max(5, w)
    result = run_cli("embed", "--n", "5", "--space", "spherical", "--kappa", repr(kappa))
    assert result.returncode == 1
    payload = parse(result)["payload"]
    assert payload["embeddable"] is False
    assert payload["realization"] is None
    assert "not embeddable" in result.stderr


def test_embed_euclidean_quotient_triangle():
    result = run_cli("embed", "--n", "6", "--space", "euclidean")
    assert result.returncode == 0
    payload = parse(result)["payload"]
    assert payload["quotient"] is True
    assert payload["n_points"] == 3
    realization = payload["realization"]
    assert realization["ambient_dim"] == 2
    assert len(realization["coordinates"]) == 3
    assert payload["kappa"] is None


def test_embed_hyperbolic_auto():
    result = run_cli("embed", "--n", "5", "--space", "hyperbolic")
    assert result.returncode == 0
    payload = parse(result)["payload"]
    assert payload["kappa"] == -1.0
    assert payload["embeddable"] is True
    assert payload["realization"]["max_distortion"] < 1e-8


def test_variance_sweep_csv():
    result = run_cli("variance-sweep", "--n-min", "3", "--n-max", "20")
    assert result.returncode == 0
    lines = result.stdout.strip().splitlines()
    assert lines[0] == "n,variance"
    assert len(lines) == 1 + 18
    values = {}
    for line in lines[1:]:
        n_text, var_text = line.split(",")
        values[int(n_text)] = float(var_text)
    assert values[13] < 1e-20
    assert values[15] > 1e-6


def test_variance_sweep_json():
    result = run_cli(
        "variance-sweep", "--n-min", "3", "--n-max", "12", "--format", "json"
    )
    assert result.returncode == 0
    payload = parse(result)["payload"]
    assert [row["n"] for row in payload["rows"]] == list(range(3, 13))


def test_verify_passes():
    result = run_cli("verify", "--n-max-full", "6", "--n-max-subspace", "24")
    assert result.returncode == 0
    payload = parse(result)["payload"]
    assert payload["all_ok"] is True
    names = [check["name"] for check in payload["checks"]]
    assert names == [
        "subspace_restriction",
        "spectrum_agreement",
        "coupling_invariance",
        "toeplitz_minors",
        "transfer_bound",
    ]
    assert all(check["ok"] for check in payload["checks"])


def test_verify_fault_injection_fails_spectrum_check():
    result = run_cli(
        "verify",
        "--n-max-full",
        "4",
        "--n-max-subspace",
        "12",
        "--inject-fault",
    )
    assert result.returncode == 1
    payload = parse(result)["payload"]
    assert payload["all_ok"] is False
    by_name = {check["name"]: check for check in payload["checks"]}
    assert by_name["spectrum_agreement"]["ok"] is False
    assert by_name["subspace_restriction"]["ok"] is True
    assert "spectrum_agreement" in result.stderr


def test_output_is_deterministic():
    for args in (("distance", "--n", "9"), ("embed", "--n", "9", "--space", "spherical")):
        first = run_cli(*args)
        second = run_cli(*args)
        assert first.stdout == second.stdout
        assert first.stdout != ""


def test_out_flag_writes_file(tmp_path):
    target = tmp_path / "distance.json"
    result = run_cli("distance", "--n", "5", "--out", str(target))
    assert result.returncode == 0
    assert result.stdout == ""
    doc = json.loads(target.read_text())
    jsonschema.validate(doc, SCHEMA)
    assert doc["command"] == "distance"
