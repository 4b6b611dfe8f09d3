"""Batch command-line runner.

Subcommands:

* ``run``    integrate a config and write timeseries.csv + report.json
* ``oracle`` exact linear reference (chi = 0) in the same CSV schema
* ``sweep``  run a family of configs varying n_wells or gamma

Exit codes: 0 success, 2 config error, 3 numerical blowup, 4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

import numpy as np

from . import __version__
from .errors import ConfigError, NumericalBlowup, WignerChainError
from .model import (
    ChainConfig,
    config_to_dict,
    load_config,
    sample_times,
    with_overrides,
)
from .observables import ObservableRecord, tracked_pairs
from .oracle import evolve_samples
from .pipeline import SimulationResult, run_simulation
from .spectral import SpdmMatrix, pseudo_entropy

FLOAT_FMT = "{:.17g}"


def _fmt(x) -> str:
    return FLOAT_FMT.format(float(x))


def csv_header(n_wells: int) -> str:
    cols = ["t"]
    cols += [f"N_{j}" for j in range(1, n_wells + 1)]
    cols += ["I_m"]
    cols += ["re_coh_lm", "im_coh_lm", "re_coh_lr", "im_coh_lr"]
    cols += ["xi_lm", "xi_lr", "sigma_lm", "sigma_lr", "zeta", "zeta_r"]
    return ",".join(cols)


def record_row(rec: ObservableRecord) -> str:
    vals = [rec.t, *rec.populations, rec.current]
    vals += [rec.coh_lm.real, rec.coh_lm.imag, rec.coh_lr.real, rec.coh_lr.imag]
    vals += [rec.xi_lm, rec.xi_lr, rec.sigma_lm, rec.sigma_lr, rec.zeta, rec.zeta_r]
    return ",".join(_fmt(v) for v in vals)


def write_timeseries(path, n_wells: int, records) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(csv_header(n_wells) + "\n")
        for rec in records:
            fh.write(record_row(rec) + "\n")


def write_pairs(path, result: SimulationResult) -> None:
    """All-pairs coherence/xi/sigma table (enabled with --pairs all)."""
    from . import observables as obs

    n = result.config.n_wells
    pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    cols = ["t"]
    for i, j in pairs:
        cols += [f"re_coh_{i}_{j}", f"im_coh_{i}_{j}", f"xi_{i}_{j}", f"sigma_{i}_{j}"]
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(cols) + "\n")
        for acc in result.accumulators:
            vals = [acc.t]
            for i, j in pairs:
                c = obs.coherence(acc, i, j)
                vals += [c.real, c.imag, obs.xi(acc, i, j), obs.sigma(acc, i, j)]
            fh.write(",".join(_fmt(v) for v in vals) + "\n")


def _spdm_json(spdm: SpdmMatrix) -> dict:
    return {
        "re": spdm.entries.real.tolist(),
        "im": spdm.entries.imag.tolist(),
        "norm_total": spdm.norm_total,
    }


def _record_json(rec: ObservableRecord) -> dict:
    return {
        "t": rec.t,
        "populations": list(rec.populations),
        "current": rec.current,
        "coh_lm": {"re": rec.coh_lm.real, "im": rec.coh_lm.imag},
        "coh_lr": {"re": rec.coh_lr.real, "im": rec.coh_lr.imag},
        "xi_lm": rec.xi_lm,
        "xi_lr": rec.xi_lr,
        "sigma_lm": rec.sigma_lm,
        "sigma_lr": rec.sigma_lr,
        "zeta": rec.zeta,
        "zeta_r": rec.zeta_r,
    }


def write_report(path, config: ChainConfig, result: SimulationResult, files) -> dict:
    report = {
        "config": config_to_dict(config),
        "n_traj_completed": result.n_traj,
        "wall_time_s": result.wall_time,
        "backend": result.backend,
        "workers": result.workers,
        "chunk_size": result.chunk_size,
        "version": __version__,
        "spdm_final": _spdm_json(result.spdm_final),
        "final_record": _record_json(result.final_record),
        "files": [str(f) for f in files],
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(report, fh, indent=2)
        fh.write("\n")
    return report


def _apply_overrides(config: ChainConfig, args) -> ChainConfig:
    overrides = {}
    if args.traj is not None:
        overrides["n_traj"] = args.traj
    if args.seed is not None:
        overrides["seed"] = args.seed
    return with_overrides(config, **overrides) if overrides else config


def cmd_run(args) -> int:
    config = _apply_overrides(load_config(args.config), args)
    os.makedirs(args.out, exist_ok=True)
    result = run_simulation(config, workers=args.workers, backend="auto")
    csv_path = os.path.join(args.out, "timeseries.csv")
    write_timeseries(csv_path, config.n_wells, result.records)
    files = [csv_path]
    if args.pairs == "all":
        pairs_path = os.path.join(args.out, "pairs.csv")
        write_pairs(pairs_path, result)
        files.append(pairs_path)
    report_path = os.path.join(args.out, "report.json")
    write_report(report_path, config, result, files + [report_path])
    print(f"wrote {csv_path} ({result.n_traj} trajectories, {result.wall_time:.1f} s)")
    return 0


def cmd_oracle(args) -> int:
    """Exact chi = 0 reference, emitted in the run CSV schema for diffing."""
    from . import observables as obs
    from .observables import MomentAccumulator

    config = load_config(args.config)
    states = evolve_samples(config)  # raises NonzeroChi for chi != 0
    os.makedirs(args.out, exist_ok=True)
    records = []
    for ref in states:
        # Repackage the exact moments as a one-trajectory accumulator with
        # the ordering corrections pre-inverted, so the standard conversion
        # path emits the exact values.
        n = config.n_wells
        first = ref.rho1.copy()
        np.fill_diagonal(first, np.diag(ref.rho1).real + 0.5)
        dens = np.zeros((n, n))
        acc = MomentAccumulator(t=ref.t, count=1, first_order=first, density_pairs=dens)
        (l1, m1), (l2, r2) = tracked_pairs(n)
        total = float(np.trace(ref.rho1).real)
        c0 = config.middle - 1
        block = ref.rho1[c0 - 1 : c0 + 2, c0 - 1 : c0 + 2] / total
        records.append(
            ObservableRecord(
                t=ref.t,
                populations=np.diag(ref.rho1).real.copy(),
                current=obs.current_middle(acc, config.middle),
                coh_lm=obs.coherence(acc, l1, m1),
                coh_lr=obs.coherence(acc, l2, r2),
                # xi needs fourth moments the linear reference does not track
                xi_lm=float("nan"),
                xi_lr=float("nan"),
                sigma_lm=obs.sigma(acc, l1, m1),
                sigma_lr=obs.sigma(acc, l2, r2),
                zeta=pseudo_entropy(ref.rho1 / total),
                zeta_r=pseudo_entropy(block),
            )
        )
    csv_path = os.path.join(args.out, "timeseries.csv")
    write_timeseries(csv_path, config.n_wells, records)
    print(f"wrote {csv_path} (exact linear reference)")
    return 0


def _parse_list(text, cast):
    try:
        return [cast(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise ConfigError(f"cannot parse sweep list {text!r}") from None


def cmd_sweep(args) -> int:
    base = _apply_overrides(load_config(args.config), args)
    if (args.vary_n is None) == (args.vary_gamma is None):
        raise ConfigError("sweep needs exactly one of --vary-n / --vary-gamma")
    if args.vary_n is not None:
        values = _parse_list(args.vary_n, int)
        variants = [(f"n_{v}", with_overrides(base, n_wells=v)) for v in values]
        zeta_cols = [f"zeta_{v}" for v in values]
    else:
        values = _parse_list(args.vary_gamma, float)
        variants = [(f"gamma_{v:g}", with_overrides(base, gamma=v)) for v in values]
        zeta_cols = [f"zeta_gamma_{v:g}" for v in values]

    os.makedirs(args.out, exist_ok=True)
    zeta_series = []
    times = None
    for name, config in variants:
        sub = os.path.join(args.out, name)
        os.makedirs(sub, exist_ok=True)
        result = run_simulation(config, workers=args.workers, backend="auto")
        csv_path = os.path.join(sub, "timeseries.csv")
        write_timeseries(csv_path, config.n_wells, result.records)
        write_report(os.path.join(sub, "report.json"), config, result, [csv_path])
        zeta_series.append([rec.zeta for rec in result.records])
        times = result.sample_times
        print(f"{name}: done ({result.wall_time:.1f} s)")

    combined = os.path.join(args.out, "entropy_sweep.csv")
    with open(combined, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(["t"] + zeta_cols) + "\n")
        for s, t in enumerate(times):
            row = [t] + [series[s] for series in zeta_series]
            fh.write(",".join(_fmt(v) for v in row) + "\n")
    print(f"wrote {combined}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wignerchain",
        description="Truncated-Wigner simulator for dephased Bose-Hubbard chains",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", required=True, help="JSON config path")
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--traj", type=int, default=None, help="override n_traj")
        p.add_argument("--seed", type=int, default=None, help="override seed")
        p.add_argument(
            "--workers", type=int, default=os.cpu_count() or 1, help="worker processes"
        )

    p_run = sub.add_parser("run", help="integrate one config")
    common(p_run)
    p_run.add_argument(
        "--pairs",
        choices=("default", "all"),
        default="default",
        help="also write pairs.csv with every well pair",
    )
    p_run.set_defaults(func=cmd_run)

    p_oracle = sub.add_parser("oracle", help="exact linear reference (chi = 0)")
    p_oracle.add_argument("--config", required=True)
    p_oracle.add_argument("--out", default=".")
    p_oracle.set_defaults(func=cmd_oracle)

    p_sweep = sub.add_parser("sweep", help="family of runs varying one parameter")
    common(p_sweep)
    p_sweep.add_argument("--vary-n", default=None, help="comma list of n_wells")
    p_sweep.add_argument("--vary-gamma", default=None, help="comma list of gamma")
    p_sweep.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except NumericalBlowup as exc:
        print(f"numerical blowup: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 4
    except WignerChainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
