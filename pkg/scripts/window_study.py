"""Observed windowing orders for q in {4, 6, 8}, w in {1/4, ..., 3/4}, at k*h = pi and 0.75 pi."""

import argparse
import math
from pathlib import Path

from movsource.experiments import run_window_study, write_manifest


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="runs/window_study")
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    results = {}
    for frac in (1.0, 0.75):
        rep = run_window_study(frac * math.pi, jobs=args.jobs)
        rep.to_csv(out / f"window_study_{frac:g}pi.csv")
        results[f"{frac:g}pi"] = rep.to_dict()
        print(f"k*h = {frac:g} pi   observed (conjectured)")
        print("  q \\ w " + "".join(f"{w:>13.3f}" for w in rep.ws))
        for q in rep.qs:
            cells = "".join(f"{rep.observed(q, w):>7.2f} ({rep.conjectured(q, w):.1f})" for w in rep.ws)
            print(f"  {q:5d} {cells}")
    write_manifest(out, "scripts/window_study.py", vars(args), results)


if __name__ == "__main__":
    main()
