"""Fixtures: schema-conforming CSV files for figure tests."""

import math

import numpy as np
import pytest


def timeseries_csv(path, n_wells=3, rows=21, seed=0):
    """Synthetic timeseries.csv in the simulator's output schema."""
    rng = np.random.default_rng(seed)
    m = (n_wells + 1) // 2
    cols = ["t"] + [f"N_{j}" for j in range(1, n_wells + 1)] + ["I_m"]
    cols += ["re_coh_lm", "im_coh_lm", "re_coh_lr", "im_coh_lr"]
    cols += ["xi_lm", "xi_lr", "sigma_lm", "sigma_lr", "zeta", "zeta_r"]
    t = np.linspace(0.0, 2.0, rows)
    data = {"t": t}
    for j in range(1, n_wells + 1):
        base = 0.0 if j == m else 200.0
        data[f"N_{j}"] = base + 30.0 * np.sin(t + j) ** 2
    data["I_m"] = 10.0 * np.cos(t)
    for name in ("re_coh_lm", "im_coh_lm", "re_coh_lr", "im_coh_lr"):
        data[name] = rng.normal(0, 1, rows)
    data["xi_lm"] = -100.0 + rng.normal(0, 1, rows)
    data["xi_lr"] = -200.0 + rng.normal(0, 1, rows)
    data["sigma_lm"] = 50.0 * np.sin(t) ** 2
    data["sigma_lr"] = 40.0 * np.sin(t) ** 2
    data["zeta"] = math.log(n_wells) * (1 - np.exp(-t))
    data["zeta_r"] = 3.0 / n_wells * math.log(n_wells) * (1 - np.exp(-t))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(",".join(cols) + "\n")
        for k in range(rows):
            fh.write(",".join(f"{data[c][k]:.17g}" for c in cols) + "\n")
    return path


def entropy_sweep_csv(path, lengths=(3, 5, 7), rows=21):
    t = np.linspace(0.0, 2.0, rows)
    cols = ["t"] + [f"zeta_{n}" for n in lengths]
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(",".join(cols) + "\n")
        for k in range(rows):
            vals = [t[k]] + [math.log(n) * (1 - math.exp(-t[k])) for n in lengths]
            fh.write(",".join(f"{v:.17g}" for v in vals) + "\n")
    return path


@pytest.fixture
def run_csv(tmp_path):
    return timeseries_csv(tmp_path / "timeseries.csv")


@pytest.fixture
def sweep_csv(tmp_path):
    return entropy_sweep_csv(tmp_path / "entropy_sweep.csv")
