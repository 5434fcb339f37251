#!/usr/bin/env python3
"""Pilot runs behind tests/acceptance/calibration.hpp.

Runs the torsionlab binary at the calibrated cells with a pilot seed that the
acceptance suite never uses, and prints the statistics the thresholds are
derived from: pilot fraction, binomial standard error, and mean - 3 SE or
mean + 3 SE as appropriate.
"""
import argparse
import csv
import io
import json
import math
import statistics
import subprocess


def run(binary, *args):
    return subprocess.run([binary, *args], check=True, capture_output=True, text=True).stdout


def bounds(frac, trials):
    se = math.sqrt(frac * (1 - frac) / trials)
    return se, frac - 3 * se, frac + 3 * se


def burst_pilot(binary, seed, trials):
    firsts, lasts, final_torsion = [], [], 0
    for t in range(trials):
        out = run(binary, "process", "--n", "100", "--k", "3", "--m", "300",
                  "--seed", str(seed), "--trial-id", str(t))
        steps = [json.loads(line) for line in out.splitlines()]
        tor = [s["step"] for s in steps if s["torsion"]]
        if tor:
            firsts.append(min(tor))
            lasts.append(max(tor))
        final_torsion += bool(steps[-1]["torsion"])
    print(f"burst: {len(firsts)}/{trials} traces with torsion")
    if firsts:
        print(f"  first step: min {min(firsts)} mean {statistics.mean(firsts):.2f} "
              f"sd {statistics.pstdev(firsts):.2f}")
        print(f"  last step:  max {max(lasts)} mean {statistics.mean(lasts):.2f} "
              f"sd {statistics.pstdev(lasts):.2f}")
    frac = final_torsion / trials
    se, _, hi = bounds(frac, trials)
    print(f"m=300 torsion fraction {frac:.4f} se {se:.4f} upper {hi:.4f}")


def curve_pilot(binary, seed, trials):
    grid = ",".join(str(m) for m in range(0, 301, 5))
    out = run(binary, "curve", "--n", "100", "--k", "3", "--grid", grid,
              "--trials", str(trials), "--seed", str(seed))
    rows = list(csv.DictReader(io.StringIO(out)))
    best = max(rows, key=lambda r: float(r["torsion_fraction"]))
    print(f"curve: argmax m={best['m']} fraction {best['torsion_fraction']}")
    print("  " + " ".join(f"{r['m']}:{float(r['torsion_fraction']):.3f}" for r in rows
                          if float(r["torsion_fraction"]) > 0))


def threshold_pilot(binary, seed, trials):
    for n, k, c in ((150, 3, "3"), (150, 3, "12"), (100, 4, "48")):
        out = run(binary, "sweep", "--n", str(n), "--k", str(k), "--c", c,
                  "--trials", str(trials), "--seed", str(seed), "--format", "json")
        rec = json.loads(out)[0]
        print(f"threshold n={n} k={k} c={c}: trivial {rec['trivial']} coker_Z {rec['coker_Z']} "
              f"free_rank>=1 {rec['free_rank_at_least_one']} "
              f"torsion_final {rec['torsion_final']} mean_free_rank {rec['mean_free_rank']:.3f}")
        for name in ("trivial", "coker_Z", "free_rank_at_least_one"):
            frac = rec[name] / trials
            se, lo, _ = bounds(frac, trials)
            print(f"  {name}: fraction {frac:.4f} se {se:.4f} lower {lo:.4f}")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--binary", default="build/tools/torsionlab")
    ap.add_argument("--seed", type=int, default=9001)
    ap.add_argument("--trials", type=int, default=300)
    ap.add_argument("--only", choices=["burst", "curve", "threshold"])
    args = ap.parse_args()
    for name, fn in (("burst", burst_pilot), ("curve", curve_pilot), ("threshold", threshold_pilot)):
        if args.only in (None, name):
            fn(args.binary, args.seed, args.trials)


if __name__ == "__main__":
    main()
