"""1D advection with a moving source: errors against the exact solution for p = 2, 4, 6."""

import argparse
from pathlib import Path

from movsource.experiments import ADVECT_MS, run_advection_ladder, write_manifest


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="runs/advection")
    ap.add_argument("--cfl", type=float, default=0.2)
    ap.add_argument("--cfl-p6", type=float, default=0.1, help="time step / h for p = 6")
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    results = {}
    for p in (2, 4, 6):
        cfl = args.cfl_p6 if p == 6 else args.cfl
        rep = run_advection_ladder(p, ADVECT_MS, cfl=cfl, jobs=args.jobs)
        rep.to_csv(out / f"advection_p{p}.csv")
        results[f"p{p}"] = rep.to_dict()
        print(f"p = {p} (dt = {cfl} h)")
        for row in rep.rows():
            print(f"  M = {row['resolution']:5d}  log10 e = {row['log10_error']:>9}  rate = {row['rate']}")
    write_manifest(out, "scripts/advection_convergence.py", vars(args), results)


if __name__ == "__main__":
    main()
