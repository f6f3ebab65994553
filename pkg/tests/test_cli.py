import json

import pytest

from rovloc import dataset as ds
from rovloc.cli import main

SCENARIO = """
[trajectory]
kind = "square"
speed = 0.5
margin = 4.0
depth = -2.0
duration = 3.0

[mount]
pitch_deg = 17.5

[sonar]
hfov_deg = 130.0
vfov_min_deg = -20.0
vfov_max_deg = 20.0
max_range = 30.0

[sensors]
seed = 1
sigma_depth = 0.005
sigma_px = 2.0
"""


@pytest.fixture(scope="module")
def workdir(tmp_path_factory):
    root = tmp_path_factory.mktemp("cli")
    scenario = root / "short.toml"
    scenario.write_text(SCENARIO)
    dataset = root / "run.jsonl"
    estimates = root / "est.jsonl"
    assert main(["simulate", "--scenario", str(scenario), "--out", str(dataset)]) == 0
    assert main(["solve", "--dataset", str(dataset), "--out", str(estimates)]) == 0
    return {"root": root, "scenario": scenario, "dataset": dataset,
            "estimates": estimates}


def test_eval_writes_metrics_and_report(workdir, capsys):
    out = workdir["root"] / "metrics.json"
    rc = main(["eval", "--estimates", str(workdir["estimates"]),
               "--dataset", str(workdir["dataset"]), "--out", str(out)])
    assert rc == 0
    report = capsys.readouterr().out
    assert "mean distance:" in report and "rmse x:" in report
    metrics = json.loads(out.read_text())
    assert 0.0 < metrics["med"] < 0.4
    assert metrics["counts"]["solved"] == metrics["counts"]["detections"]


def test_estimates_file_is_typed(workdir):
    header, records = ds.read_jsonl(str(workdir["estimates"]))
    assert header["format"] == "rovloc-estimates-v1"
    assert header["counts"]["solved"] == len(records)
    assert all(r["type"] == "estimate" for r in records)
    assert set(records[0]["payload"]) == {"x", "y", "z"}


def test_repeat_runs_are_byte_identical(workdir):
    root = workdir["root"]
    ds2 = root / "run2.jsonl"
    est2 = root / "est2.jsonl"
    m1, m2 = root / "m1.json", root / "m2.json"
    assert main(["simulate", "--scenario", str(workdir["scenario"]),
                 "--out", str(ds2)]) == 0
    assert main(["solve", "--dataset", str(ds2), "--out", str(est2)]) == 0
    assert main(["eval", "--estimates", str(workdir["estimates"]),
                 "--dataset", str(workdir["dataset"]), "--out", str(m1)]) == 0
    assert main(["eval", "--estimates", str(est2), "--dataset", str(ds2),
                 "--out", str(m2)]) == 0
    assert ds2.read_bytes() == workdir["dataset"].read_bytes()
    assert est2.read_bytes() == workdir["estimates"].read_bytes()
    assert m1.read_bytes() == m2.read_bytes()


def test_seed_override_changes_the_dataset(workdir):
    other = workdir["root"] / "seeded.jsonl"
    assert main(["simulate", "--scenario", str(workdir["scenario"]),
                 "--out", str(other), "--seed", "99"]) == 0
    assert other.read_bytes() != workdir["dataset"].read_bytes()


def test_eval_empty_overlap_exits_nonzero(workdir, capsys):
    header, records = ds.read_jsonl(str(workdir["estimates"]))
    for rec in records:
        rec["t"] += 1000.0
    shifted = workdir["root"] / "shifted.jsonl"
    ds.write_jsonl(str(shifted), header, records)
    out = workdir["root"] / "empty.json"
    rc = main(["eval", "--estimates", str(shifted),
               "--dataset", str(workdir["dataset"]), "--out", str(out)])
    assert rc == 1
    assert "empty_overlap" in capsys.readouterr().out
    assert json.loads(out.read_text())["error"] == "empty_overlap"


def test_eval_rejects_a_dataset_as_estimates(workdir, capsys):
    out = workdir["root"] / "unused.json"
    rc = main(["eval", "--estimates", str(workdir["dataset"]),
               "--dataset", str(workdir["dataset"]), "--out", str(out)])
    assert rc == 1
    assert "not an estimates file" in capsys.readouterr().err


def test_plot_writes_figures(workdir):
    figs = workdir["root"] / "figs"
    rc = main(["plot", "--estimates", str(workdir["estimates"]),
               "--dataset", str(workdir["dataset"]), "--out-dir", str(figs)])
    assert rc == 0
    for name in ("track.png", "errors.png"):
        data = (figs / name).read_bytes()
        assert data[:4] == b"\x89PNG"


def test_dump_scans_writes_graymaps(workdir):
    scans = workdir["root"] / "scans"
    out = workdir["root"] / "scanrun.jsonl"
    rc = main(["simulate", "--scenario", str(workdir["scenario"]),
               "--out", str(out), "--dump-scans", str(scans)])
    assert rc == 0
    files = sorted(scans.iterdir())
    assert len(files) > 0
    assert files[0].read_bytes()[:3] == b"P5\n"


def test_missing_scenario_reports_error(workdir, capsys):
    rc = main(["simulate", "--scenario", str(workdir["root"] / "nope.toml"),
               "--out", str(workdir["root"] / "x.jsonl")])
    assert rc == 1
    assert "error:" in capsys.readouterr().err
