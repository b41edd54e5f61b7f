"""Reproduction harness: windowing study, convergence ladders, rates, reports."""

from __future__ import annotations

import csv
import hashlib
import json
import math
import platform
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import ConfigError
from .grid import PeriodicGrid, norm_h
from .shape import build_shape
from .solvers import (
    AdvectionConfig,
    SourcePolicy,
    Wave2DConfig,
    exact_advection_solution,
    norm_h2,
    restrict,
    solve_advection_1d,
    solve_wave_2d,
)
from .source import Gaussian, WindowSpec, apply_window, build_delta

EXCLUDE_BELOW = 1e-9
WINDOW_QS = (4, 6, 8)
WINDOW_WS = (1 / 4, 1 / 3, 1 / 2, 2 / 3, 3 / 4)
WINDOW_HS = tuple(2.0**-i for i in range(4, 11))
ADVECT_MS = (100, 200, 400, 800, 1600)
WAVE2D_NS = (101, 201, 401, 801)
WAVE2D_NREF = 1601
WAVE2D_NS_FULL = (101, 201, 401, 801, 1601)
WAVE2D_NREF_FULL = 3201


def _sig(x, digits=6):
    if x is None or (isinstance(x, float) and not math.isfinite(x)):
        return ""
    return float(f"{x:.{digits}g}")


def compute_rates(errors: Sequence[float], resolutions: Sequence[float], convention: str = "M"):
    """Observed orders between consecutive ladder entries.

    ``"M"``: ``log(e1/e2) / log(M2/M1)``; ``"N-1"``: same with ``N - 1``;
    ``"h-halving"``: resolutions are spacings, ``log(e1/e2) / log(h1/h2)``
    (``log2(e_2h / e_h)`` for halving).  A pair with a zero error gives ``None``.
    """
    if len(errors) != len(resolutions):
        raise ValueError("errors and resolutions differ in length")
    if len(errors) < 2:
        raise ValueError("need at least two ladder entries")
    if convention == "M":
        scale = [float(r) for r in resolutions]
    elif convention == "N-1":
        scale = [float(r) - 1 for r in resolutions]
    elif convention == "h-halving":
        scale = [1.0 / float(r) for r in resolutions]
    else:
        raise ValueError(f"unknown rate convention {convention!r}")
    rates = []
    for (e1, s1), (e2, s2) in zip(zip(errors, scale), zip(errors[1:], scale[1:])):
        if e1 <= 0 or e2 <= 0:
            rates.append(None)
        else:
            rates.append(math.log(e1 / e2) / math.log(s2 / s1))
    return rates


@dataclass
class ConvergenceReport:
    resolutions: list
    errors: list
    convention: str
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        order = np.argsort(self.resolutions)
        self.resolutions = [self.resolutions[i] for i in order]
        self.errors = [float(self.errors[i]) for i in order]

    @property
    def rates(self) -> list:
        return compute_rates(self.errors, self.resolutions, self.convention)

    def rows(self) -> list[dict]:
        rates = [None] + self.rates
        out = []
        for n, e, r in zip(self.resolutions, self.errors, rates):
            out.append(
                {
                    "resolution": n,
                    "error": _sig(e),
                    "log10_error": _sig(math.log10(e)) if e > 0 else "",
                    "rate": _sig(r),
                }
            )
        return out

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.DictWriter(fh, ["resolution", "error", "log10_error", "rate"])
            w.writeheader()
            w.writerows(self.rows())

    def to_dict(self) -> dict:
        return {"convention": self.convention, "rows": self.rows(), "meta": self.meta}


@dataclass
class WindowStudyReport:
    kappa_star: float
    qs: tuple
    ws: tuple
    ladders: dict  # (q, w) -> list of (h, error)
    meta: dict = field(default_factory=dict)

    @staticmethod
    def conjectured(q, w) -> float:
        return q - 1 - q * w

    def p_h(self, q, w) -> list:
        """``log2(e_2h / e_h)`` for each pair with both errors >= the exclusion threshold."""
        ladder = self.ladders[(q, w)]
        out = []
        for (h2, e2), (h1, e1) in zip(ladder, ladder[1:]):
            if e2 < EXCLUDE_BELOW or e1 < EXCLUDE_BELOW:
                out.append(None)
            else:
                out.append(math.log(e2 / e1) / math.log(h2 / h1))
        return out

    def observed(self, q, w) -> float:
        vals = [p for p in self.p_h(q, w) if p is not None]
        return float(np.mean(vals)) if vals else float("nan")

    def table(self) -> dict:
        return {(q, w): (self.observed(q, w), self.conjectured(q, w)) for q in self.qs for w in self.ws}

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w_ = csv.writer(fh)
            w_.writerow(["q", "w", "h", "error", "p_h", "observed_p", "conjectured_p"])
            for q in self.qs:
                for w in self.ws:
                    obs = self.observed(q, w)
                    conj = self.conjectured(q, w)
                    ph = [None] + self.p_h(q, w)
                    for (h, e), p in zip(self.ladders[(q, w)], ph):
                        w_.writerow([q, _sig(w), _sig(h), _sig(e), _sig(p), _sig(obs), _sig(conj)])

    def to_dict(self) -> dict:
        return {
            "kappa_star": self.kappa_star,
            "cells": [
                {"q": q, "w": w, "observed_p": _sig(o), "conjectured_p": _sig(c)}
                for (q, w), (o, c) in self.table().items()
            ],
            "meta": self.meta,
        }


def window_error(q: int, w: float, kappa_star: float, h: float, L: float = 1.0,
                 x0: float = 0.5 + 1 / 29, ell_ref: tuple = (0.5, 1 / 16),
                 periodic: bool = False) -> float:
    """``||W delta - delta||_h`` for one cell of the windowing study."""
    grid = PeriodicGrid(L, int(round(L / h)))
    shape = build_shape(q, q, kappa_star)
    delta = build_delta(grid, shape, x0)
    win = WindowSpec.matching(w, ell_ref[0], ell_ref[1])
    windowed, _ = apply_window(delta, grid, x0, win, periodic=periodic)
    return norm_h(windowed.values - delta.values, grid)


def _window_cell(args):
    q, w, kappa_star, hs, periodic = args
    return (q, w), [(h, window_error(q, w, kappa_star, h, periodic=periodic)) for h in hs]


def run_window_study(kappa_star: float = math.pi, qs: Iterable[int] = WINDOW_QS,
                     ws: Iterable[float] = WINDOW_WS, hs: Iterable[float] = WINDOW_HS,
                     periodic: bool = False, jobs: int = 1) -> WindowStudyReport:
    """Error of the windowed delta against the global one over a ``(q, w, h)`` grid.

    Setup: ``L = 1``, ``x0 = 1/2 + 1/29``, window half-width ``1/2`` at ``h = 1/16``.
    Distances are plain ``|x_j - x0|`` on ``[0, L)`` unless ``periodic``.
    """
    qs, ws, hs = tuple(qs), tuple(ws), tuple(sorted(hs, reverse=True))
    cells = [(q, w, kappa_star, hs, periodic) for q in qs for w in ws]
    ladders = dict(_map(_window_cell, cells, jobs))
    return WindowStudyReport(
        kappa_star, qs, ws, ladders,
        meta={"L": 1.0, "x0": 0.5 + 1 / 29, "ell_at_h_1_16": 0.5, "periodic_distance": periodic,
              "exclude_below": EXCLUDE_BELOW, "norm": "weighted h"},
    )


def _map(fn, items, jobs):
    if jobs > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(fn, items))
    return [fn(it) for it in items]


# ---------------------------------------------------------------- 1D ladder


def _zero(t):
    return 0.0


def _advect_level(args):
    M, order, cfl, q, w, C_l, gamma, windowed, zero_source = args
    policy = SourcePolicy(q=q, gamma=gamma, window=WindowSpec(w, C_l) if windowed else None)
    cfg = AdvectionConfig(M=M, order=order, cfl=cfl, policy=policy)
    if zero_source:
        cfg.g = _zero
    sol = solve_advection_1d(cfg)
    grid = sol.grids[0]
    exact = 0.0 if zero_source else exact_advection_solution(grid.x, cfg.t_end, cfg.c, 0.5, cfg.g, 1.0)
    return norm_h(sol["u"] - exact, grid), sol.info


def run_advection_ladder(order: int, Ms: Sequence[int] = ADVECT_MS, cfl: float = 0.2,
                         q: int | None = None, w: float = 0.5, C_l: float = 4.0,
                         gamma: float = 1.0, windowed: bool = True, zero_source: bool = False,
                         jobs: int = 1) -> ConvergenceReport:
    """Advection with ``c = 1``, ``x0 = 1 + t/2``, Gaussian ``(sigma, t0) = (0.15, 1)``,
    ``L = 4``, errors against the exact solution at ``t = 2``."""
    Ms = list(Ms)
    if Ms != sorted(Ms):
        raise ConfigError("resolutions must be increasing")
    results = _map(_advect_level, [(M, order, cfl, q, w, C_l, gamma, windowed, zero_source) for M in Ms], jobs)
    g = Gaussian(0.15, 1.0)
    return ConvergenceReport(
        Ms,
        [r[0] for r in results],
        "M",
        meta={
            "experiment": "advection-1d",
            "p": order,
            "q": results[0][1]["q"],
            "w": w if windowed else None,
            "C_l": C_l if windowed else None,
            "gamma": gamma,
            "kappa_star": results[0][1]["kappa_star"],
            "cfl": cfl,
            "trajectory": "x0(t) = 1 + 0.5 t",
            "g_tail_at_t0": float(g(0.0)),
        },
    )


# ---------------------------------------------------------------- 2D ladder


def _code_hash() -> str:
    h = hashlib.sha256()
    here = Path(__file__).parent
    for name in ("_kernels.py", "solvers.py", "source.py", "shape.py", "fd.py", "grid.py"):
        h.update((here / name).read_bytes())
    return h.hexdigest()[:16]


def _wave2d_level(args):
    N, order, q, w, C_l, gamma, zero_source = args
    cfg = Wave2DConfig(N=N, order=order, policy=SourcePolicy(q=q, gamma=gamma, window=WindowSpec(w, C_l)))
    if zero_source:
        cfg.g = _zero
    sol = solve_wave_2d(cfg)
    return sol["theta"], sol.info


def wave2d_reference(N_ref: int, order: int, q=None, w=0.5, C_l=4.0, gamma=1.0,
                     cache_dir: str | Path | None = None):
    """Pressure field of one run at ``N_ref`` points per direction, optionally
    cached as ``.npz`` keyed by the parameters and a hash of the solver sources."""
    path = None
    if cache_dir is not None:
        key = f"wave2d_N{N_ref}_p{order}_q{q}_w{w}_cl{C_l}_g{gamma}_{_code_hash()}"
        path = Path(cache_dir) / f"{key}.npz"
        if path.exists():
            data = np.load(path, allow_pickle=False)
            return data["theta"], json.loads(str(data["info"]))
    theta, info = _wave2d_level((N_ref, order, q, w, C_l, gamma, False))
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        np.savez(path, theta=theta, info=json.dumps(info))
    return theta, info


def _cached_level(args):
    N, order, q, w, C_l, gamma, cache_dir = args
    return wave2d_reference(N, order, q, w, C_l, gamma, cache_dir)


def run_wave2d_ladder(order: int, Ns: Sequence[int] = WAVE2D_NS, N_ref: int = WAVE2D_NREF,
                      q: int | None = None, w: float = 0.5, C_l: float = 4.0, gamma: float = 1.0,
                      zero_source: bool = False, jobs: int = 1,
                      cache_dir: str | Path | None = None) -> ConvergenceReport:
    """2D acoustic ladder against a finer run of the same scheme, by injection.

    ``N`` counts points per direction including both ends of ``[0, L]``; the
    periodic grid has ``N - 1`` points.
    """
    Ns = list(Ns)
    if Ns != sorted(Ns):
        raise ConfigError("resolutions must be increasing")
    for N in Ns:
        if (N_ref - 1) % (N - 1):
            raise ConfigError(f"grid N={N} does not nest in reference N={N_ref}")
    if cache_dir is not None and not zero_source:
        results = _map(_cached_level, [(N, order, q, w, C_l, gamma, cache_dir) for N in Ns], jobs)
    else:
        results = _map(_wave2d_level, [(N, order, q, w, C_l, gamma, zero_source) for N in Ns], jobs)
    if zero_source:
        ref, ref_info = np.zeros((N_ref - 1, N_ref - 1)), {}
    else:
        ref, ref_info = wave2d_reference(N_ref, order, q, w, C_l, gamma, cache_dir)
    errors = []
    for N, (theta, _) in zip(Ns, results):
        grid = PeriodicGrid(2.5, N - 1)
        errors.append(norm_h2(theta - restrict(ref, N - 1), grid))
    g = Gaussian(1 / 25, 1.0)
    return ConvergenceReport(
        Ns,
        errors,
        "N-1",
        meta={
            "experiment": "wave-2d",
            "p": order,
            "N_ref": N_ref,
            "q": results[0][1]["q"],
            "w": w,
            "C_l": C_l,
            "gamma": gamma,
            "kappa_star": results[0][1]["kappa_star"],
            "trajectory": "circle center (1.25, 1.25), radius 0.2, speed 0.5",
            "boundary_ratio": [r[1]["boundary_ratio"] for r in results] + [ref_info.get("boundary_ratio")],
            "g_tail_at_t0": float(g(0.0)),
            "field": "theta",
        },
    )


# ---------------------------------------------------------------- manifest


def environment() -> dict:
    import numba
    import scipy

    return {
        "python": sys.version.split()[0],
        "platform": platform.platform(),
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "numba": numba.__version__,
    }


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if hasattr(obj, "__dataclass_fields__"):
        return _jsonable(asdict(obj))
    if isinstance(obj, (str, int, float, bool)) or obj is None:
        return obj
    return repr(obj)


def write_manifest(out_dir, command: str, config: dict, results: dict | None = None) -> Path:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    path = out / "manifest.json"
    payload = {
        "command": command,
        "config": _jsonable(config),
        "results": _jsonable(results or {}),
        "environment": environment(),
    }
    path.write_text(json.dumps(payload, indent=2, sort_keys=True))
    return path
