"""End-to-end command-line behavior: outputs, determinism, exit codes."""

import json
import math

import numpy as np
import pytest

from corona_lab.cli import main


def run(capsys, *argv):
    """Invoke the entry point, returning (exit_code, stdout, stderr)."""
    try:
        rc = main(list(argv))
    except SystemExit as e:       # argparse usage errors
        rc = e.code
    out = capsys.readouterr()
    return rc, out.out, out.err


def write(tmp_path, name, payload):
    p = tmp_path / name
    p.write_text(json.dumps(payload))
    return str(p)


def test_blaschke_eval(capsys):
    rc, out, _ = run(capsys, "blaschke-eval", "--zeros", "[[0,0]]",
                     "--at", "[0.3,0]")
    assert rc == 0
    assert json.loads(out) == {"value": [0.3, 0.0]}


def test_blaschke_eval_rejects_exterior_point(capsys):
    rc, _, err = run(capsys, "blaschke-eval", "--zeros", "[[0,0]]",
                     "--at", "[2,0]")
    assert rc == 2
    assert json.loads(err)["error"] == "ConfigError"


def test_quartiles_uniform(capsys, tmp_path):
    level = 2 * math.pi / 0.4
    path = write(tmp_path, "density.json",
                 {"pieces": [[-0.2, 0.2, level]]})
    rc, out, _ = run(capsys, "quartiles", "--density", path)
    assert rc == 0
    rep = json.loads(out)
    assert abs(rep["alpha"] + 0.1) < 1e-12
    assert abs(rep["beta"] - 0.1) < 1e-12
    assert rep["case_tag"] == "straddle"


def test_corona_solve_check_pipeline(capsys, tmp_path):
    inst = write(tmp_path, "inst.json", {"functions": [
        {"kind": "polynomial", "data": {"coeffs": [[0, 0], [0, 0], [1, 0]]}},
        {"kind": "polynomial", "data": {"coeffs": [[-0.5, 0], [1, 0]]}},
    ]})
    cert_path = str(tmp_path / "cert.json")
    rc, _, _ = run(capsys, "corona-solve", "--in", inst, "--out", cert_path)
    assert rc == 0
    cert = json.loads(open(cert_path).read())
    assert cert["method"] == "exact"
    assert cert["residual_sup"] < 1e-12

    rc, out, _ = run(capsys, "corona-check", "--in", inst,
                     "--cert", cert_path, "--tol", "1e-10")
    assert rc == 0
    assert json.loads(out)["passing"] is True


def test_corona_check_fails_on_bad_certificate(capsys, tmp_path):
    inst = write(tmp_path, "inst.json", {"functions": [
        {"kind": "polynomial", "data": {"coeffs": [[0, 0], [0, 0], [1, 0]]}},
        {"kind": "polynomial", "data": {"coeffs": [[-0.5, 0], [1, 0]]}},
    ]})
    cert = write(tmp_path, "cert.json", {"solutions": [
        {"kind": "polynomial", "data": {"coeffs": [[4.5, 0]]}},
        {"kind": "polynomial", "data": {"coeffs": [[-2, 0], [-4, 0]]}},
    ]})
    rc, out, _ = run(capsys, "corona-check", "--in", inst, "--cert", cert)
    assert rc == 1
    assert json.loads(out)["passing"] is False


def test_corona_solve_numeric_method(capsys, tmp_path):
    inst = write(tmp_path, "inst.json", {"functions": [
        {"kind": "finite_blaschke", "data": {"zeros": [[0.5, 0]]}},
        {"kind": "polynomial", "data": {"coeffs": [[1, 0]]}},
    ]})
    rc, out, _ = run(capsys, "corona-solve", "--in", inst,
                     "--method", "auto", "--degree-cap", "6")
    assert rc == 0
    assert json.loads(out)["method"] == "numeric"


def test_corona_solve_unsolvable_exit_one(capsys, tmp_path):
    inst = write(tmp_path, "inst.json", {"functions": [
        {"kind": "polynomial", "data": {"coeffs": [[0, 0], [1, 0]]}},
        {"kind": "polynomial", "data": {"coeffs": [[0, 0], [0, 0], [1, 0]]}},
    ]})
    rc, _, err = run(capsys, "corona-solve", "--in", inst, "--method", "exact")
    assert rc == 1
    payload = json.loads(err)
    assert payload["error"] == "UnsolvableError"


def test_delta_report(capsys, tmp_path):
    inst = write(tmp_path, "inst.json", {"functions": [
        {"kind": "polynomial", "data": {"coeffs": [[0, 0], [0, 0], [1, 0]]}},
        {"kind": "polynomial", "data": {"coeffs": [[-0.5, 0], [1, 0]]}},
    ]})
    rc, out, _ = run(capsys, "delta", "--in", inst)
    assert rc == 0
    rep = json.loads(out)
    assert abs(rep["value"] - 0.25) < 1e-12
    assert rep["argmin"] == [0.5, 0.0]


def test_interp_check(capsys, tmp_path):
    points = write(tmp_path, "pts.json",
                   {"points": [[1 - 2.0 ** -j, 0.0] for j in range(1, 11)]})
    rc, out, _ = run(capsys, "interp-check", "--points", points)
    assert rc == 0
    rep = json.loads(out)
    assert rep["count"] == 10
    assert abs(rep["carleson_constant"] - 0.019135243301794246) < 1e-15
    assert len(rep["tails"]) == 10


def test_ladder_two_rungs(capsys, tmp_path):
    zeros = write(tmp_path, "zeros.json",
                  {"zeros": [[1 - 2.0 ** -k, 0.0] for k in range(1, 31)]})
    cands = write(tmp_path, "cands.json",
                  {"points": [[1 - 3.0 ** -n, 0.0] for n in range(1, 33)]})
    rc, out, _ = run(capsys, "ladder", "--zeros", zeros, "--candidates", cands,
                     "--eps", "[0.5,0.25]", "--eta", "[0.5,0.75]",
                     "--ell", "0.5")
    assert rc == 0
    rep = json.loads(out)
    assert rep["indices"] == [3, 12]
    for row in rep["verification"]:
        assert row[3] > 1 - row[2]


def test_hoffman_trace_csv(capsys, tmp_path):
    fn = write(tmp_path, "f.json",
               {"kind": "polynomial", "data": {"coeffs": [[0, 0], [1, 0]]}})
    pts = write(tmp_path, "pts.json",
                {"points": [[1 - 2.0 ** -j, 0.0] for j in range(1, 11)]})
    rc, out, _ = run(capsys, "hoffman-trace", "--function", fn,
                     "--points", pts, "--grid-size", "8")
    assert rc == 0
    lines = out.splitlines()
    assert lines[0] == "grid_re,grid_im,j,re,im"
    assert len(lines) == 1 + 10 * 8


def test_l2_identity_summary_and_determinism(capsys):
    argv = ("l2-identity", "--zeros", "[[0,0],[0,0]]")
    rc, out1, _ = run(capsys, *argv)
    assert rc == 0
    rep = json.loads(out1)
    assert abs(rep["distance"] - math.sqrt(2)) < 1e-12
    assert abs(rep["parseval"] - 1) < 1e-10
    rc, out2, _ = run(capsys, *argv)
    assert out1 == out2      # byte-identical rerun


def test_measure_fit_uniform(capsys, tmp_path):
    spec = write(tmp_path, "fit.json", {
        "targets": [],
        "partition": [[-0.25 + 0.5 * k / 8, -0.25 + 0.5 * (k + 1) / 8]
                      for k in range(8)],
    })
    rc, out, _ = run(capsys, "measure-fit", "--in", spec)
    assert rc == 0
    rep = json.loads(out)
    levels = {p[2] for p in rep["pieces"]}
    assert len(levels) == 1
    assert rep["mass_error"] == 0.0
    assert rep["residuals"] == []


def test_measure_fit_output_feeds_density_commands(capsys, tmp_path):
    # the fit artifact keeps its diagnostics but still loads as a density
    spec = write(tmp_path, "fit.json", {
        "targets": [],
        "partition": [[-0.25 + 0.5 * k / 8, -0.25 + 0.5 * (k + 1) / 8]
                      for k in range(8)],
    })
    fitted = str(tmp_path / "fitted.json")
    rc, _, _ = run(capsys, "measure-fit", "--in", spec, "--out", fitted)
    assert rc == 0
    rc, out, _ = run(capsys, "quartiles", "--density", fitted)
    assert rc == 0
    rep = json.loads(out)
    assert rep["alpha"] == pytest.approx(-0.125)
    assert rep["beta"] == pytest.approx(0.125)


def test_pushforward_json_and_csv(capsys, tmp_path):
    level = 2 * math.pi / 1.0
    density = write(tmp_path, "d.json", {"pieces": [[-0.5, 0.5, level]]})
    rc, out, _ = run(capsys, "pushforward", "--density", density,
                     "--c", "[0.3,0.1]")
    assert rc == 0
    rep = json.loads(out)
    assert abs(rep["mass"] - 1) < 1e-8
    assert len(rep["breakpoints"]) == 2

    rc, out, _ = run(capsys, "pushforward", "--density", density,
                     "--c", "[0.3,0.1]", "--samples", "16")
    assert rc == 0
    lines = out.splitlines()
    assert lines[0] == "theta,u"
    assert len(lines) == 17


def test_align_arcs_cli(capsys, tmp_path):
    level = 2 * math.pi / 4.0
    density = write(tmp_path, "d.json", {"pieces": [[-2.0, 2.0, level]]})
    rc, out, _ = run(capsys, "align-arcs", "--density", density,
                     "--alpha", "-0.6", "--beta", "0.4", "--case", "a")
    assert rc == 0
    rep = json.loads(out)
    assert len(rep["pieces"]) == 3


def test_cluster_scenario_cli(capsys, tmp_path):
    fns = write(tmp_path, "fns.json", {"functions": [
        {"kind": "polynomial", "data": {"coeffs": [[0, 0], [1, 0]]}},
    ]})
    pts = write(tmp_path, "pts.json",
                {"points": [[1 - 2.0 ** -j, 0.0] for j in range(1, 21)]})
    rc, out, _ = run(capsys, "cluster-scenario", "--functions", fns,
                     "--points", pts, "--eps", "1e-3")
    assert rc == 0
    rep = json.loads(out)
    assert abs(rep["limits"][0][0] - (1 - 2.0 ** -20)) < 1e-15


def test_selftest_flag_needs_no_other_flags(capsys):
    for cmd in ("ladder", "corona-solve", "l2-identity", "align-arcs"):
        rc, out, _ = run(capsys, cmd, "--selftest")
        assert rc == 0
        assert "passed" in out


def test_exit_code_two_on_usage_errors(capsys, tmp_path):
    rc, _, _ = run(capsys, "no-such-command")
    assert rc == 2
    rc, _, _ = run(capsys)
    assert rc == 2
    rc, _, err = run(capsys, "delta", "--in", str(tmp_path / "missing.json"))
    assert rc == 2
    zeros = write(tmp_path, "zeros.json", {"zeros": [[0.5, 0.0]]})
    rc, _, err = run(capsys, "ladder", "--zeros", zeros)  # missing flags
    assert rc == 2
    payload = json.loads(err)
    assert "--candidates" in payload["message"]


def test_exit_code_two_on_unknown_key(capsys, tmp_path):
    inst = write(tmp_path, "inst.json", {"functions": [], "bogus": 1})
    rc, _, err = run(capsys, "delta", "--in", inst)
    assert rc == 2
    assert "bogus" in json.loads(err)["message"]


def test_nodes_env_override(capsys, tmp_path, monkeypatch):
    level = 2 * math.pi / 1.0
    density = write(tmp_path, "d.json", {"pieces": [[-0.5, 0.5, level]]})
    monkeypatch.setenv("CORONA_LAB_NODES", "512")
    rc, out, _ = run(capsys, "pushforward", "--density", density,
                     "--c", "[0.1,0]")
    assert rc == 0
    monkeypatch.setenv("CORONA_LAB_NODES", "junk")
    rc, _, _ = run(capsys, "pushforward", "--density", density,
                   "--c", "[0.1,0]")
    assert rc == 2
    monkeypatch.setenv("CORONA_LAB_NODES", "2")
    rc, _, _ = run(capsys, "pushforward", "--density", density,
                   "--c", "[0.1,0]")
    assert rc == 2


def test_output_file_determinism(capsys, tmp_path):
    inst = write(tmp_path, "inst.json", {"functions": [
        {"kind": "polynomial", "data": {"coeffs": [[0, 0], [0, 0], [1, 0]]}},
        {"kind": "polynomial", "data": {"coeffs": [[-0.5, 0], [1, 0]]}},
    ]})
    out1, out2 = str(tmp_path / "a.json"), str(tmp_path / "b.json")
    assert run(capsys, "corona-solve", "--in", inst, "--out", out1)[0] == 0
    assert run(capsys, "corona-solve", "--in", inst, "--out", out2)[0] == 0
    assert open(out1, "rb").read() == open(out2, "rb").read()


def test_unwritable_out_is_a_usage_error(capsys, tmp_path):
    inst = write(tmp_path, "inst.json", {"functions": [
        {"kind": "polynomial", "data": {"coeffs": [[0, 0], [0, 0], [1, 0]]}},
        {"kind": "polynomial", "data": {"coeffs": [[-0.5, 0], [1, 0]]}},
    ]})
    bad = str(tmp_path / "no-such-dir" / "c.json")
    rc, _, err = run(capsys, "corona-solve", "--in", inst, "--out", bad)
    assert rc == 2
    assert "--out" in err
