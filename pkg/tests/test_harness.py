"""Verification harness reports and the command-line interface."""

import json

from mpmath import mpf

import pytest

import qseries.cli as cli
from qseries import (
    IdentityEntry,
    QPoint,
    RunConfig,
    SeriesValue,
    UnknownIdentityError,
    full_registry,
    run,
)
from qseries.harness import render_json, render_text, report_passed


def _synthetic_offset_entry():
    """An identity whose lhs is exactly twice its rhs at every point."""

    def lhs(p, ctx):
        return SeriesValue.of(2 * (1 + p.q))

    def rhs(p, ctx):
        return SeriesValue.of(1 + p.q)

    return IdentityEntry(
        id="synthetic-offset",
        paper_ref="synthetic test entry",
        param_names=(),
        domain_desc="0 < q < 1",
        default_tol=1e-20,
        domain=lambda p: [],
        lhs=lhs,
        rhs=rhs,
        sampler=lambda rng: QPoint(rng.uniform(0.1, 0.6), {}),
    )


# --- report structure -----------------------------------------------------------

def test_reports_are_byte_identical():
    config = RunConfig(identities=("eq-1.1", "eq-3.2"), points_per_identity=3,
                       seed=7, digits=30)
    first = render_json(run(config))
    second = render_json(run(config))
    assert first == second
    parsed = json.loads(first)
    assert parsed["version"]
    assert [r["id"] for r in parsed["results"]] == ["eq-1.1", "eq-3.2"]


def test_seed_changes_sampled_points():
    base = RunConfig(identities=("eq-1.1",), points_per_identity=3, digits=30)
    r1 = run(RunConfig(identities=("eq-1.1",), points_per_identity=3,
                       seed=1, digits=30))
    r2 = run(RunConfig(identities=("eq-1.1",), points_per_identity=3,
                       seed=2, digits=30))
    del base
    p1 = [pt["params"] for pt in r1["results"][0]["points"]]
    p2 = [pt["params"] for pt in r2["results"][0]["points"]]
    assert p1 != p2


def test_unknown_identity_rejected():
    with pytest.raises(UnknownIdentityError):
        run(RunConfig(identities=("eq-99.9",)))


def test_config_validation():
    with pytest.raises(ValueError):
        RunConfig(points_per_identity=0)
    with pytest.raises(ValueError):
        RunConfig(report_format="xml")


def test_synthetic_offset_detected():
    report = run(RunConfig(identities=("synthetic-offset",),
                           points_per_identity=4, digits=30),
                 registry=[_synthetic_offset_entry()])
    agg = report["results"][0]["aggregate"]
    assert not agg["pass"]
    assert agg["passCount"] == 0
    offset = mpf(agg["suspectedConstantOffset"])
    assert abs(offset - 2) < mpf("1e-20")
    assert not report_passed(report)
    text = render_text(report)
    assert "FAIL" in text and "suspected constant offset" in text
    assert text.rstrip().endswith("overall: FAIL")


def test_explicit_point_bypasses_sampler():
    point = QPoint(mpf("0.3"), {"a": mpf("0.5"), "b": mpf("0.05"),
                                "z": mpf("0.4")})
    report = run(RunConfig(identities=("eq-1.1",), explicit_points=(point,),
                           digits=30))
    res = report["results"][0]
    assert len(res["points"]) == 1
    assert res["points"][0]["params"]["a"].startswith("0.5")
    assert res["aggregate"]["pass"]
    assert len(report["config"]["explicitPoints"]) == 1


def test_point_errors_recorded_not_fatal():
    # out-of-domain explicit point: recorded as a per-point error
    point = QPoint(mpf("0.3"), {"a": mpf("0.5"), "b": mpf("0.05"),
                                "z": mpf("0.01")})  # |b/a| < |z| violated
    report = run(RunConfig(identities=("eq-1.1",), explicit_points=(point,),
                           digits=30))
    pt = report["results"][0]["points"][0]
    assert pt["pass"] is False
    assert "error" in pt
    assert not report["results"][0]["aggregate"]["pass"]


# --- CLI --------------------------------------------------------------------------

def test_cli_list(capsys):
    assert cli.main(["list"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 24
    assert any(line.startswith("eq-1.1") for line in lines)


def test_cli_verify_pass_json(capsys):
    code = cli.main(["verify", "--identity", "eq-3.2", "--points", "3",
                     "--digits", "30", "--report", "json"])
    out = capsys.readouterr().out
    assert code == 0
    parsed = json.loads(out)
    assert parsed["results"][0]["aggregate"]["pass"]


def test_cli_verify_failing_identity(capsys):
    # eq-4.3 as printed does not hold, so verify reports FAIL (exit 1)
    code = cli.main(["verify", "--identity", "eq-4.3", "--points", "2",
                     "--digits", "30"])
    out = capsys.readouterr().out
    assert code == 1
    assert "overall: FAIL" in out


def test_cli_verify_unknown_identity(capsys):
    assert cli.main(["verify", "--identity", "nope"]) == 2


def test_cli_verify_explicit_point(capsys):
    code = cli.main(["verify", "--identity", "eq-1.1", "--digits", "30",
                     "--q", "0.3", "--set", "a=0.5", "--set", "b=0.05",
                     "--set", "z=0.4"])
    assert code == 0


def test_cli_set_requires_q():
    with pytest.raises(SystemExit) as exc:
        cli.main(["verify", "--identity", "eq-1.1", "--set", "a=0.5"])
    assert exc.value.code == 2


def test_cli_explicit_point_requires_single_identity(capsys):
    code = cli.main(["verify", "--q", "0.3", "--set", "a=0.5"])
    assert code == 2


def test_cli_eval(capsys):
    code = cli.main(["eval", "--identity", "eq-3.2", "--side", "rhs",
                     "--q", "0.5", "--digits", "30"])
    out = capsys.readouterr().out.strip()
    assert code == 0
    assert abs(mpf(out) - mpf("7.5")) < mpf("1e-25")


def test_cli_eval_missing_param(capsys):
    code = cli.main(["eval", "--identity", "eq-1.1", "--side", "lhs",
                     "--q", "0.3", "--set", "a=0.5"])
    assert code == 2
    assert "missing --set" in capsys.readouterr().err


def test_cli_eval_param_expressions(capsys):
    # q-power expressions: a = -q^1/2, b = q^2, z = 0.5
    code = cli.main(["eval", "--identity", "eq-1.1", "--side", "lhs",
                     "--q", "0.25", "--digits", "30",
                     "--set", "a=-q^1/2", "--set", "b=q^2",
                     "--set", "z=0.5"])
    assert code == 0
    assert capsys.readouterr().out.strip()


def test_cli_digits_env(monkeypatch, capsys):
    monkeypatch.setenv("QSERIES_DIGITS", "25")
    code = cli.main(["verify", "--identity", "eq-3.2", "--points", "2",
                     "--report", "json"])
    out = capsys.readouterr().out
    assert code == 0
    assert json.loads(out)["config"]["digits"] == 25


def test_cli_verify_out_file(tmp_path, capsys):
    out_path = tmp_path / "report.json"
    code = cli.main(["verify", "--identity", "eq-3.2", "--points", "2",
                     "--digits", "30", "--report", "json",
                     "--out", str(out_path)])
    assert code == 0
    parsed = json.loads(out_path.read_text())
    assert parsed["results"][0]["id"] == "eq-3.2"


def test_cli_bad_q(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["eval", "--identity", "eq-3.2", "--side", "lhs",
                  "--q", "zap"])
    assert exc.value.code == 2
