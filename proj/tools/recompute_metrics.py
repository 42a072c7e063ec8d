#!/usr/bin/env python3
"""Independently recompute flight-log metrics and compare to the simulator.

Runs the CLI for a scenario, then rebuilds the setpoint trajectory from the
dumped config and recomputes every metric straight from the CSV, mirroring
the simulator's arithmetic. Exits nonzero if any value disagrees beyond
1e-12 (relative to max(1, |value|)).
"""

import argparse
import csv
import math
import subprocess
import sys
from pathlib import Path

PI = math.pi
LEVEL = (0.0, 1.0, 0.0, 0.0)  # half turn about x: level flight attitude


def quat_normalized(q):
    n = math.sqrt(q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3])
    return (q[0] / n, q[1] / n, q[2] / n, q[3] / n)


def quat_multiply(a, b):
    w = a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3]
    x = a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2]
    y = a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1]
    z = a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0]
    return quat_normalized((w, x, y, z))


def quat_conjugate(q):
    return (q[0], -q[1], -q[2], -q[3])


def from_axis_angle(axis, angle):
    half = 0.5 * angle
    s = math.sin(half)
    return quat_normalized(
        (math.cos(half), s * axis[0], s * axis[1], s * axis[2]))


def relative_axis_angle(q_from, q_to):
    d = quat_multiply(quat_conjugate(q_from), q_to)
    if d[0] < 0.0:
        d = (-d[0], -d[1], -d[2], -d[3])
    vnorm = math.sqrt(d[1] * d[1] + d[2] * d[2] + d[3] * d[3])
    angle = 2.0 * math.atan2(vnorm, d[0])
    if vnorm > 1e-15:
        axis = (d[1] / vnorm, d[2] / vnorm, d[3] / vnorm)
    else:
        axis = (0.0, 0.0, 0.0)
    return axis, angle


def attitude_angle(a, b):
    return relative_axis_angle(a, b)[1]


def attitude_from_level(axis, angle):
    return quat_multiply(LEVEL, from_axis_angle(axis, angle))


def parse_config(path):
    duration = None
    segments = []
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, value = [part.strip() for part in line.split("=", 1)]
        if key == "duration":
            duration = float(value)
        elif key == "segment":
            tokens = value.split()
            segments.append({
                "ramp": tokens[0] == "ramp",
                "t0": float(tokens[1]),
                "t1": float(tokens[2]),
                "pos": tuple(float(v) for v in tokens[4:7]),
                "axis": tuple(float(v) for v in tokens[8:11]),
                "angle": float(tokens[11]) * PI / 180.0,
            })
    if duration is None or not segments:
        raise SystemExit("config missing duration or segments: " + str(path))
    return duration, segments


def compile_trajectory(segments):
    pieces = []
    first = segments[0]
    norm = math.sqrt(sum(v * v for v in first["axis"]))
    prev_pos = first["pos"]
    prev_att = attitude_from_level(
        tuple(v / norm for v in first["axis"]), first["angle"])
    for seg in segments:
        norm = math.sqrt(sum(v * v for v in seg["axis"]))
        target = attitude_from_level(
            tuple(v / norm for v in seg["axis"]), seg["angle"])
        if seg["ramp"]:
            axis, angle = relative_axis_angle(prev_att, target)
            pieces.append({
                "t0": seg["t0"], "t1": seg["t1"],
                "p0": prev_pos, "p1": seg["pos"],
                "q0": prev_att, "axis": axis, "angle": angle,
            })
        else:
            pieces.append({
                "t0": seg["t0"], "t1": seg["t1"],
                "p0": seg["pos"], "p1": seg["pos"],
                "q0": target, "axis": (0.0, 0.0, 0.0), "angle": 0.0,
            })
        prev_pos = seg["pos"]
        prev_att = target
    return pieces


def sample(pieces, t):
    piece = pieces[-1]
    for p in pieces:
        if t < p["t1"]:
            piece = p
            break
    if piece["angle"] == 0.0 and piece["p0"] == piece["p1"]:
        return piece["p0"], piece["q0"]
    span = piece["t1"] - piece["t0"]
    u = (t - piece["t0"]) / span
    u = min(max(u, 0.0), 1.0)
    pos = tuple(piece["p0"][i] + (piece["p1"][i] - piece["p0"][i]) * u
                for i in range(3))
    if piece["angle"] > 0.0:
        att = quat_multiply(piece["q0"],
                            from_axis_angle(piece["axis"],
                                            piece["angle"] * u))
    else:
        att = piece["q0"]
    return pos, att


def recompute(csv_path, pieces):
    with open(csv_path, newline="") as f:
        rows = list(csv.DictReader(f))
    if not rows:
        raise SystemExit("empty log: " + str(csv_path))

    pos_sq_sum = 0.0
    att_sq_sum = 0.0
    sat_steps = 0
    mask_switches = 0
    max_tilt_rate = 0.0
    prev = None
    for row in rows:
        t = float(row["t"])
        pos = (float(row["px"]), float(row["py"]), float(row["pz"]))
        att = (float(row["qw"]), float(row["qx"]), float(row["qy"]),
               float(row["qz"]))
        sp_pos, sp_att = sample(pieces, t)
        dx = pos[0] - sp_pos[0]
        dy = pos[1] - sp_pos[1]
        dz = pos[2] - sp_pos[2]
        pos_sq_sum += dx * dx + dy * dy + dz * dz
        ang = attitude_angle(sp_att, att)
        att_sq_sum += ang * ang

        if any(row[f"sat{i}"] != "0" for i in range(1, 7)):
            sat_steps += 1
        if prev is not None:
            if row["mask"] != prev["mask"]:
                mask_switches += 1
            dt = t - float(prev["t"])
            for i in range(1, 7):
                rate = abs(float(row[f"a{i}"]) - float(prev[f"a{i}"])) / dt
                max_tilt_rate = max(max_tilt_rate, rate)
        prev = row

    n = float(len(rows))
    last = rows[-1]
    last_pos = (float(last["px"]), float(last["py"]), float(last["pz"]))
    last_att = (float(last["qw"]), float(last["qx"]), float(last["qy"]),
                float(last["qz"]))
    sp_pos, sp_att = sample(pieces, float(last["t"]))
    dx = last_pos[0] - sp_pos[0]
    dy = last_pos[1] - sp_pos[1]
    dz = last_pos[2] - sp_pos[2]
    return {
        "pos_rmse_m": math.sqrt(pos_sq_sum / n),
        "att_rmse_rad": math.sqrt(att_sq_sum / n),
        "max_tilt_rate": max_tilt_rate,
        "sat_steps": float(sat_steps),
        "mask_switches": float(mask_switches),
        "final_pos_err_m": math.sqrt(dx * dx + dy * dy + dz * dz),
        "final_att_err_rad": attitude_angle(sp_att, last_att),
    }


def parse_metrics(path):
    out = {}
    for line in Path(path).read_text().splitlines():
        key, value = [part.strip() for part in line.split("=", 1)]
        out[key] = float(value)
    return out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--cli", required=True, help="path to the omnisim binary")
    ap.add_argument("--scenario", default="roll90_hover")
    ap.add_argument("--workdir", required=True)
    args = ap.parse_args()

    workdir = Path(args.workdir)
    workdir.mkdir(parents=True, exist_ok=True)
    subprocess.run(
        [args.cli, "run", "--scenario", args.scenario, "--out-dir",
         str(workdir)],
        check=True, stdout=subprocess.DEVNULL)

    duration, segments = parse_config(workdir / "config.txt")
    pieces = compile_trajectory(segments)
    ours = recompute(workdir / "log.csv", pieces)
    theirs = parse_metrics(workdir / "metrics.txt")

    failed = False
    for key, value in ours.items():
        reference = theirs[key]
        tol = 1e-12 * max(1.0, abs(reference))
        status = "ok" if abs(value - reference) <= tol else "MISMATCH"
        if status == "MISMATCH":
            failed = True
        print(f"{key}: emitted={reference!r} recomputed={value!r} [{status}]")
    if failed:
        sys.exit(1)
    print("all metrics agree within 1e-12")


if __name__ == "__main__":
    main()
