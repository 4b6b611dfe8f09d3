"""Shared test helpers and acceptance-line reporting."""

import numpy as np
import pytest

from wignerchain import config_from_dict, validate_config


def make_config(**overrides):
    """Small, fast default config for unit tests."""
    raw = {
        "n_wells": 3,
        "initial_state": "fock",
        "n_traj": 100,
        "seed": 12345,
        "t_final": 1.0,
    }
    raw.update(overrides)
    return validate_config(config_from_dict(raw))


@pytest.fixture
def rng():
    return np.random.default_rng(2024)


def pytest_runtest_logreport(report):
    # One visible PASS/FAIL line per acceptance criterion.
    if report.when == "call" and "acceptance" in report.keywords.keys():
        name = report.nodeid.split("::")[-1]
        outcome = "PASS" if report.passed else "FAIL"
        print(f"\nACCEPTANCE {name}: {outcome}", flush=True)
