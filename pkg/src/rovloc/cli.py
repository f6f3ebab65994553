"""Command-line front end.

Four subcommands cover the workflow:

    simulate   scenario TOML -> dataset JSONL
    solve      dataset JSONL -> estimates JSONL
    eval       estimates + dataset -> metrics (text and JSON)
    plot       estimates + dataset -> diagnostic PNGs

Outputs are canonically serialized, so repeating a command on the same
inputs reproduces the output files byte for byte.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import replace

import numpy as np

from . import dataset as ds
from .geometry import compose
from .metrics import compute_metrics, format_report
from .pipeline import replay
from .scenario import AsvTrack, RovTrack, load_scenario, simulate
from .sonar import render_scan, scan_to_pgm

ESTIMATES_FORMAT = "rovloc-estimates-v1"


def _dump_scans(sc, header: dict, records: list[dict], out_dir: str,
                target_radius: float) -> int:
    """Render one graymap per detection record for visual inspection."""
    os.makedirs(out_dir, exist_ok=True)
    gt_dt = 1.0 / sc.sensors.gt_rate
    rov = RovTrack(sc.trajectory, sc.tank, gt_dt, header["duration"])
    asv = AsvTrack(sc.asv, rov, sc.sensors.gt_rate, header["duration"])
    mount = sc.mount.to_pose()
    count = 0
    for rec in records:
        if rec["type"] != "detection":
            continue
        t = rec["t"]
        sonar_pose = compose(asv.world_pose(t), mount)
        target = rov.positions(np.array([t]))[0]
        scan = render_scan(sonar_pose, [(target, target_radius)], sc.sonar)
        path = os.path.join(out_dir, f"scan_{count:05d}.pgm")
        with open(path, "wb") as fh:
            fh.write(scan_to_pgm(scan))
        count += 1
    return count


def cmd_simulate(args: argparse.Namespace) -> int:
    sc = load_scenario(args.scenario)
    if args.seed is not None:
        sc = replace(sc, sensors=replace(sc.sensors, seed=args.seed))
    header, records = simulate(sc)
    ds.write_jsonl(args.out, header, records)
    print(f"wrote {len(records)} records to {args.out}")
    if args.dump_scans:
        n = _dump_scans(sc, header, records, args.dump_scans,
                        args.target_radius)
        print(f"wrote {n} scans to {args.dump_scans}")
    return 0


def cmd_solve(args: argparse.Namespace) -> int:
    header, records = ds.read_jsonl(args.dataset)
    result = replay(header, records)
    est_header = {
        "type": "header",
        "format": ESTIMATES_FORMAT,
        "source_format": header.get("format"),
        "counts": result.counts,
    }
    est_records = [
        ds.record(t, "estimate", {"x": p[0], "y": p[1], "z": p[2]})
        for t, p in zip(result.times, result.positions)
    ]
    ds.write_jsonl(args.out, est_header, est_records)
    print(
        f"{result.counts['detections']} detections, "
        f"{result.counts['solved']} solved; wrote {args.out}"
    )
    return 0


def _load_run(estimates_path: str, dataset_path: str):
    est_header, est_records = ds.read_jsonl(estimates_path)
    if est_header.get("format") != ESTIMATES_FORMAT:
        raise ValueError(f"{estimates_path}: not an estimates file")
    _, data_records = ds.read_jsonl(dataset_path)
    est_t, est_p, truth_t, truth_p = [], [], [], []
    for rec in est_records:
        if rec["type"] == "estimate":
            pl = rec["payload"]
            est_t.append(rec["t"])
            est_p.append([pl["x"], pl["y"], pl["z"]])
    for rec in data_records:
        if rec["type"] == "gt_rov":
            pl = rec["payload"]
            truth_t.append(rec["t"])
            truth_p.append([pl["x"], pl["y"], pl["z"]])
    return (
        est_header,
        np.array(est_t),
        np.array(est_p).reshape(-1, 3),
        np.array(truth_t),
        np.array(truth_p).reshape(-1, 3),
    )


def cmd_eval(args: argparse.Namespace) -> int:
    est_header, est_t, est_p, truth_t, truth_p = _load_run(
        args.estimates, args.dataset
    )
    metrics = compute_metrics(est_t, est_p, truth_t, truth_p)
    metrics["counts"] = est_header.get("counts", {})
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(ds.dumps(metrics))
        fh.write("\n")
    print(format_report(metrics))
    return 1 if metrics.get("error") else 0


def cmd_plot(args: argparse.Namespace) -> int:
    from .plots import plot_errors, plot_track

    _, est_t, est_p, truth_t, truth_p = _load_run(args.estimates, args.dataset)
    os.makedirs(args.out_dir, exist_ok=True)
    track = plot_track(est_t, est_p, truth_t, truth_p,
                       os.path.join(args.out_dir, "track.png"))
    errors = plot_errors(est_t, est_p, truth_t, truth_p,
                         os.path.join(args.out_dir, "errors.png"))
    print(f"wrote {track} and {errors}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rovloc",
        description="Simulate and evaluate sonar+depth target positioning runs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="generate a dataset from a scenario")
    p_sim.add_argument("--scenario", required=True, help="scenario TOML file")
    p_sim.add_argument("--out", required=True, help="output dataset JSONL")
    p_sim.add_argument("--seed", type=int, help="override the scenario seed")
    p_sim.add_argument("--dump-scans", metavar="DIR",
                       help="also render a graymap per detection")
    p_sim.add_argument("--target-radius", type=float, default=0.2,
                       help="target radius in metres for rendered scans")
    p_sim.set_defaults(func=cmd_simulate)

    p_solve = sub.add_parser("solve", help="replay a dataset into estimates")
    p_solve.add_argument("--dataset", required=True, help="input dataset JSONL")
    p_solve.add_argument("--out", required=True, help="output estimates JSONL")
    p_solve.set_defaults(func=cmd_solve)

    p_eval = sub.add_parser("eval", help="score estimates against ground truth")
    p_eval.add_argument("--estimates", required=True, help="estimates JSONL")
    p_eval.add_argument("--dataset", required=True,
                        help="dataset JSONL holding the ground truth")
    p_eval.add_argument("--out", required=True, help="output metrics JSON")
    p_eval.set_defaults(func=cmd_eval)

    p_plot = sub.add_parser("plot", help="render diagnostic figures")
    p_plot.add_argument("--estimates", required=True, help="estimates JSONL")
    p_plot.add_argument("--dataset", required=True,
                        help="dataset JSONL holding the ground truth")
    p_plot.add_argument("--out-dir", required=True, help="output directory")
    p_plot.set_defaults(func=cmd_plot)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ValueError, RuntimeError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
