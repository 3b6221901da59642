import csv
import io
import json
import math

import numpy as np
import pytest

from gupqm import cli, oscillator


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def parse_csv(text):
    body = text.split("# footer\n")[0]
    rows = list(csv.DictReader(io.StringIO(body)))
    footer = {}
    if "# footer\n" in text:
        for r in csv.DictReader(io.StringIO(text.split("# footer\n")[1])):
            footer[(float(r["beta"]), r["key"])] = float(r["value"])
    return rows, footer


def test_verify_defaults_pass(capsys):
    code, out, err = run(capsys, "verify")
    rows, _ = parse_csv(out)
    assert code == 0, err
    assert rows and all(r["status"] == "pass" for r in rows)
    names = {r["check"] for r in rows}
    assert {"ml_kinetic_deformed_P", "ml_delta_X", "pp_min_length_reference",
            "position_state_kinetic_deformed_divergent"} <= names


def test_verify_report_carries_labelled_values(capsys):
    _, out, _ = run(capsys, "verify", "--beta", "1")
    rows = {r["check"]: r for r in parse_csv(out)[0]}
    assert float(rows["ml_kinetic_deformed_P"]["value"]) == pytest.approx(1 / 6, rel=1e-8)
    assert float(rows["ml_delta_X"]["value"]) == pytest.approx(2 / math.sqrt(3), rel=1e-8)
    assert float(rows["pp_min_length_reference"]["value"]) == pytest.approx(3 * math.sqrt(3) / 4, rel=1e-15)
    assert "divergent (boundary non-integrable)" in rows["position_state_kinetic_deformed_divergent"]["provenance"]
    assert rows["position_state_kinetic_deformed_divergent"]["value"] == "inf"


@pytest.mark.parametrize("argv", [["--beta", "0"], ["--beta", "-1"], ["--hbar", "0"], ["--format", "xml"]])
def test_usage_errors_exit_2(capsys, argv):
    with pytest.raises(SystemExit) as info:
        cli.main(["verify", *argv])
    assert info.value.code == 2


@pytest.mark.parametrize("argv", [["bethe", "--n", "13"], ["bethe", "--n", "0"], ["mlstate", "--samples", "8"],
                                  ["overlap", "--steps", "1"], ["spectrum", "--n-max", "0"]])
def test_operation_preconditions_exit_2(capsys, argv):
    with pytest.raises(SystemExit) as info:
        cli.main(argv)
    assert info.value.code == 2


def test_verify_tiny_grid_fails_oracle_suite(capsys):
    code, out, err = run(capsys, "verify", "--grid-size", "8")
    assert code == 1
    rows, _ = parse_csv(out)
    failing = [r for r in rows if r["status"] == "FAIL"]
    assert failing and all(r["suite"] == "oracle" for r in failing)
    assert "insufficient grid" in failing[0]["provenance"]
    assert "oracle" in err


def test_overlap_rows(capsys):
    code, out, _ = run(capsys, "overlap", "--beta", "0.25", "--lambda-min", "-2", "--lambda-max", "2", "--steps", "9")
    assert code == 0
    rows = parse_csv(out)[0]
    assert [k for k in rows[0]] == ["beta", "x", "y_closed_form", "y_quadrature", "abs_diff"]
    by_x = {float(r["x"]): r for r in rows}
    assert float(by_x[0.0]["y_closed_form"]) == 1.0
    assert abs(float(by_x[1.0]["y_closed_form"])) < 1e-15  # 2 hbar sqrt(beta) = 1
    assert all(float(r["abs_diff"]) < 1e-10 for r in rows)


def test_spectrum_rows(capsys):
    code, out, _ = run(capsys, "spectrum", "--beta", "1e-8", "--beta", "0.1", "--beta", "1", "--n-max", "10")
    assert code == 0
    rows = parse_csv(out)[0]
    assert list(rows[0]) == ["n", "beta", "E_closed_form", "E_oracle", "rel_diff"]
    assert len(rows) == 33
    for r in rows:
        assert float(r["rel_diff"]) < 1e-6
        if float(r["beta"]) == 1e-8:
            assert abs(float(r["E_oracle"]) - (int(r["n"]) + 0.5)) < 1e-6
    for n in range(11):
        e = [float(r["E_closed_form"]) for r in rows if int(r["n"]) == n]
        assert e == sorted(e) and len(set(e)) == 3


def test_bethe_rows(capsys):
    code, out, _ = run(capsys, "bethe", "--n", "1")
    rows = parse_csv(out)[0]
    assert code == 0 and len(rows) == 1 and float(rows[0]["t_i"]) == 0.5
    code, out, _ = run(capsys, "bethe", "--n", "2", "--beta", "1")
    rows = parse_csv(out)[0]
    assert list(rows[0]) == ["beta", "i", "t_i", "residual", "oracle_root", "abs_diff"]
    assert [round(float(r["t_i"]), 6) for r in rows] == [0.281492, 0.718508]
    code, out, _ = run(capsys, "bethe", "--n", "12", "--beta", "0.5")
    rows = parse_csv(out)[0]
    assert all(abs(float(r["residual"])) < 1e-12 and float(r["abs_diff"]) < 1e-10 for r in rows)


def test_bethe_failure_gives_partial_output(capsys, monkeypatch):
    def broken(n, params, **kw):
        raise oscillator.BetheConvergenceError("stalled", np.linspace(0.2, 0.8, n), np.full(n, 1e-3))

    monkeypatch.setattr(oscillator, "bethe_solve", broken)
    code, out, err = run(capsys, "bethe", "--n", "3")
    assert code == 1
    assert len(parse_csv(out)[0]) == 3
    assert "did not converge" in err


def test_mlstate_footer(capsys):
    code, out, _ = run(capsys, "mlstate", "--beta", "1", "--xi", "0.3", "--samples", "32")
    assert code == 0
    rows, footer = parse_csv(out)
    assert len(rows) == 32 and list(rows[0]) == ["beta", "p", "re_psi", "im_psi", "abs_psi2"]
    assert footer[(1.0, "norm")] == pytest.approx(1.0, abs=1e-10)
    assert footer[(1.0, "mean_X")] == pytest.approx(0.3, abs=1e-8)
    assert footer[(1.0, "mean_p2_lower/2m")] == pytest.approx(0.083333, abs=5e-7)
    assert footer[(1.0, "mean_P2_deformed/2m")] == pytest.approx(1 / 6, rel=1e-10)
    assert footer[(1.0, "delta_X_quadrature")] == pytest.approx(2 / math.sqrt(3), rel=1e-10)
    for r in rows:
        assert float(r["abs_psi2"]) == pytest.approx(float(r["re_psi"]) ** 2 + float(r["im_psi"]) ** 2, rel=1e-12)


def test_json_output(capsys):
    code, out, _ = run(capsys, "mlstate", "--beta", "0.5", "--format", "json", "--samples", "16", "--xi", "1")
    doc = json.loads(out)
    assert code == 0 and doc["ok"] is True
    assert doc["meta"]["betas"] == [0.5] and doc["meta"]["xi"] == 1.0 and doc["meta"]["command"] == "mlstate"
    assert set(doc["columns"]) == {"beta", "p", "re_psi", "im_psi", "abs_psi2"}
    assert len(doc["columns"]["p"]) == 16
    assert {f["key"] for f in doc["footer"]} >= {"norm", "mean_X"}


def test_outputs_are_deterministic(capsys, tmp_path):
    for fmt in ("csv", "json"):
        texts = []
        for i in range(2):
            path = tmp_path / f"out.{fmt}"  # meta echoes the path, so reuse it
            assert cli.main(["spectrum", "--n-max", "3", "--format", fmt, "--out", str(path)]) == 0
            texts.append(path.read_bytes())
        assert texts[0] == texts[1]
    assert capsys.readouterr().out == ""


def test_floats_use_17_significant_digits(capsys):
    _, out, _ = run(capsys, "bethe", "--n", "2", "--beta", "1")
    t = parse_csv(out)[0][0]["t_i"]
    assert t == f"{float(t):.17g}" and len(t.replace("0.", "", 1)) == 17
