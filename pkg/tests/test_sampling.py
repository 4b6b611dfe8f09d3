import math

import numpy as np
import pytest

from wignerchain import (
    InitialState,
    sample_coherent,
    sample_fock,
    sample_initial_chain,
    sample_vacuum,
    trajectory_rng,
)
from wignerchain.sampling import trajectory_inputs

from conftest import make_config

ALPHA0 = math.sqrt(200.0)


def _draw(fn, m, seed=7, *args):
    rng = np.random.default_rng(seed)
    return np.array([fn(*args, rng) if args else fn(rng) for _ in range(m)])


class TestCoherent:
    def test_mean_occupation_large_sample(self):
        # Gaussian moment identity: <|alpha|^2> = |alpha0|^2 + 1/2
        samples = _draw(sample_coherent, 1_000_000, 7, ALPHA0)
        occ = np.abs(samples) ** 2
        se = occ.std(ddof=1) / math.sqrt(len(occ))
        assert abs(occ.mean() - 200.5) < 3 * se

    def test_vacuum_occupation(self):
        samples = _draw(sample_vacuum, 100_000)
        occ = np.abs(samples) ** 2
        se = occ.std(ddof=1) / math.sqrt(len(occ))
        assert abs(occ.mean() - 0.5) < 3 * se

    def test_mean_amplitude(self):
        samples = _draw(sample_coherent, 100_000, 11, ALPHA0)
        se = 0.5 / math.sqrt(len(samples))  # component std is 1/2
        assert abs(samples.mean() - ALPHA0) < 5 * se

    def test_vacuum_equals_coherent_zero(self):
        # exact stream-level identity, not just equal statistics
        a = _draw(sample_vacuum, 1000, 3)
        b = _draw(sample_coherent, 1000, 3, 0j)
        assert np.array_equal(a, b)


class TestFock:
    def test_fixed_radius(self):
        samples = _draw(sample_fock, 10_000, 5, 200.0)
        occ = np.abs(samples) ** 2
        assert np.allclose(occ, 200.5, rtol=1e-13, atol=0)

    def test_zero_mean_phase(self):
        samples = _draw(sample_fock, 100_000, 13, 200.0)
        se = math.sqrt(200.5 / 2 / len(samples))  # per-component variance r^2/2
        assert abs(samples.mean()) < 5 * math.sqrt(2) * se

    def test_fourth_moment_distinguishes_vacuum(self):
        # circle at N=0: <|a|^4> = 1/4 exactly; Gaussian vacuum: 1/2
        circle = np.abs(_draw(sample_fock, 50_000, 17, 0.0)) ** 4
        vac = np.abs(_draw(sample_vacuum, 50_000, 17)) ** 4
        assert np.allclose(circle, 0.25, rtol=1e-12)
        se = vac.std(ddof=1) / math.sqrt(len(vac))
        assert abs(vac.mean() - 0.5) < 5 * se


class TestInitialChain:
    @pytest.mark.parametrize("state", ["fock", "coherent"])
    def test_symmetric_ordering_bookkeeping(self, state):
        # <|a_j|^2> - 1/2 reproduces N_j(0) within 5 SE at 1e5 samples
        cfg = make_config(n_wells=3, initial_state=state)
        rng = trajectory_rng(cfg.seed, 0)
        m = 100_000
        amps = np.array([sample_initial_chain(cfg, rng).amplitudes for _ in range(m)])
        occ = np.abs(amps) ** 2 - 0.5
        target = np.array([200.0, 0.0, 200.0])
        se = occ.std(axis=0, ddof=1) / math.sqrt(m)
        assert np.all(np.abs(occ.mean(axis=0) - target) < 5 * np.maximum(se, 1e-12))

    def test_middle_well_vacuum_noise(self):
        # the empty well still carries half-quantum fluctuations
        cfg = make_config(n_wells=3)
        rng = trajectory_rng(cfg.seed, 1)
        mid = np.array(
            [sample_initial_chain(cfg, rng).amplitudes[1] for _ in range(20_000)]
        )
        assert np.abs(mid).min() > 0  # never exactly zero
        assert abs((np.abs(mid) ** 2).mean() - 0.5) < 0.02

    def test_coherent_cross_moment(self):
        # independent wells: <a1* a2> = alpha0^2 = 200 for adjacent occupied wells
        cfg = make_config(n_wells=5, initial_state="coherent")
        rng = trajectory_rng(cfg.seed, 2)
        m = 50_000
        amps = np.array([sample_initial_chain(cfg, rng).amplitudes for _ in range(m)])
        cross = (np.conj(amps[:, 0]) * amps[:, 1]).mean()
        se = 200.0 / math.sqrt(m)  # component std ~ sqrt(N/2) each factor
        assert abs(cross - 200.0) < 5 * se

    def test_fock_cross_moment_vanishes(self):
        cfg = make_config(n_wells=3, initial_state="fock")
        rng = trajectory_rng(cfg.seed, 3)
        m = 50_000
        amps = np.array([sample_initial_chain(cfg, rng).amplitudes for _ in range(m)])
        cross = (np.conj(amps[:, 0]) * amps[:, 2]).mean()
        se = 200.5 / math.sqrt(m)
        assert abs(cross) < 5 * se

    def test_t_zero(self):
        cfg = make_config()
        state = sample_initial_chain(cfg, trajectory_rng(cfg.seed, 0))
        assert state.t == 0.0


class TestDeterminism:
    def test_bit_identical_streams(self):
        cfg = make_config(t_final=0.1)
        a0_a, w_a = trajectory_inputs(cfg, 5)
        a0_b, w_b = trajectory_inputs(cfg, 5)
        assert np.array_equal(a0_a, a0_b)
        assert np.array_equal(w_a, w_b)

    def test_distinct_trajectories_differ(self):
        cfg = make_config(t_final=0.1)
        a0_a, _ = trajectory_inputs(cfg, 5)
        a0_b, _ = trajectory_inputs(cfg, 6)
        assert not np.array_equal(a0_a, a0_b)

    def test_distinct_seeds_differ(self):
        a = trajectory_rng(1, 0).standard_normal(4)
        b = trajectory_rng(2, 0).standard_normal(4)
        assert not np.array_equal(a, b)
