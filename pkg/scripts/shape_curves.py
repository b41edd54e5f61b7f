"""Non-zero part of F for m = s = q, q in {2, 6, 14}, with k*h = pi."""

import argparse
import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from movsource.shape import build_shape


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="runs/shapes")
    ap.add_argument("--q", type=int, nargs="+", default=[2, 6, 14])
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    kappa = np.linspace(0, math.pi, 401)
    fig, ax = plt.subplots(figsize=(5, 3.5))
    for q in args.q:
        sh = build_shape(q, q, math.pi)
        sh.to_csv(out / f"F_q{q}.csv")
        ax.plot(kappa, sh(kappa), label=f"q = {q}")
    ax.set_xlabel("kh")
    ax.set_ylabel("F(kh)")
    ax.legend()
    fig.tight_layout()
    fig.savefig(out / "shapes.svg")


if __name__ == "__main__":
    main()
