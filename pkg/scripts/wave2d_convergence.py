"""2D acoustics with a source on a circle: self-convergence against a fine reference run.

The default ladder (N = 101..801, reference 1601) takes tens of minutes on one
core; ``--full`` (N up to 1601, reference 3201) takes hours.  Solutions are
cached in ``--cache`` so reruns only recompute what changed.
"""

import argparse
from pathlib import Path

from movsource.experiments import (
    WAVE2D_NREF,
    WAVE2D_NREF_FULL,
    WAVE2D_NS,
    WAVE2D_NS_FULL,
    run_wave2d_ladder,
    write_manifest,
)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="runs/wave2d")
    ap.add_argument("--orders", type=int, nargs="+", default=[4, 6])
    ap.add_argument("--full", action="store_true")
    ap.add_argument("--cache", default=".cache/wave2d")
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()
    Ns, N_ref = (WAVE2D_NS_FULL, WAVE2D_NREF_FULL) if args.full else (WAVE2D_NS, WAVE2D_NREF)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    results = {}
    for p in args.orders:
        rep = run_wave2d_ladder(p, Ns, N_ref, jobs=args.jobs, cache_dir=args.cache)
        rep.to_csv(out / f"wave2d_p{p}.csv")
        results[f"p{p}"] = rep.to_dict()
        print(f"p = {p} (reference N = {N_ref})")
        for row in rep.rows():
            print(f"  N = {row['resolution']:5d}  log10 e = {row['log10_error']:>9}  rate = {row['rate']}")
    write_manifest(out, "scripts/wave2d_convergence.py", vars(args), results)


if __name__ == "__main__":
    main()
