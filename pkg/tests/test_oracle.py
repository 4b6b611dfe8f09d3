import math

import numpy as np
import pytest

from wignerchain import (
    InitialState,
    NonzeroChi,
    compare_tw_to_oracle,
    initial_reference,
    linear_evolve,
)
from wignerchain.model import sample_times
from wignerchain.oracle import evolve_samples, hopping_matrix

from conftest import make_config


class TestInitialReference:
    def test_fock_diagonal(self):
        cfg = make_config(chi=0.0)
        rho = initial_reference(cfg).rho1
        assert np.array_equal(rho, np.diag([200.0, 0.0, 200.0]).astype(complex))

    def test_coherent_rank_structure(self):
        cfg = make_config(chi=0.0, n_wells=5, initial_state="coherent")
        rho = initial_reference(cfg).rho1
        occupied = [0, 1, 3, 4]
        for i in occupied:
            for j in occupied:
                assert rho[i, j] == pytest.approx(200.0)
        assert np.all(rho[2, :] == 0) and np.all(rho[:, 2] == 0)


class TestLinearEvolve:
    def test_rejects_nonzero_chi(self):
        cfg = make_config()
        with pytest.raises(NonzeroChi):
            linear_evolve(initial_reference(make_config(chi=0.0)), cfg, 1.0)
        with pytest.raises(NonzeroChi):
            compare_tw_to_oracle(cfg)

    def test_time_zero_identity(self):
        cfg = make_config(chi=0.0, gamma=1.5)
        init = initial_reference(cfg)
        out = linear_evolve(init, cfg, 0.0)
        assert np.allclose(out.rho1, init.rho1, atol=1e-12)

    def test_three_well_oscillation(self):
        # hopping eigenvalues {0, +-sqrt(2) J} give N2(t) = 200 sin^2(sqrt2 J t)
        cfg = make_config(chi=0.0)
        init = initial_reference(cfg)
        for t in (0.25, 0.8, 1.7):
            rho = linear_evolve(init, cfg, t).rho1
            assert rho[1, 1].real == pytest.approx(
                200.0 * math.sin(math.sqrt(2) * t) ** 2, abs=1e-8
            )

    def test_pure_dephasing_closed_form(self):
        # J = 0: entries touching the middle well decay as e^{-Gamma t/2}
        cfg = make_config(chi=0.0, tunnel_j=0.0, gamma=1.5, initial_state="coherent")
        init = initial_reference(cfg)
        t = 1.3
        rho = linear_evolve(init, cfg, t).rho1
        decay = math.exp(-1.5 * t / 2.0)
        assert rho[0, 1] == pytest.approx(0.0, abs=1e-12)  # middle starts empty
        assert rho[0, 2] == pytest.approx(200.0, abs=1e-9)  # untouched pair
        assert np.allclose(np.diag(rho).real, [200.0, 0.0, 200.0], atol=1e-9)

    def test_dephasing_decay_rate_on_occupied_middle(self):
        # hand-built state with an occupied, coherent middle well
        from wignerchain.oracle import LinearReferenceState

        cfg = make_config(chi=0.0, tunnel_j=0.0, gamma=1.5)
        rho0 = np.full((3, 3), 100.0, dtype=complex)
        t = 0.9
        rho = linear_evolve(LinearReferenceState(rho0, 0.0), cfg, t).rho1
        decay = math.exp(-1.5 * t / 2.0)
        assert rho[0, 1] == pytest.approx(100.0 * decay, abs=1e-9)
        assert rho[1, 2] == pytest.approx(100.0 * decay, abs=1e-9)
        assert rho[0, 2] == pytest.approx(100.0, abs=1e-9)
        assert rho[1, 1] == pytest.approx(100.0, abs=1e-9)

    def test_trace_conserved(self):
        cfg = make_config(chi=0.0, gamma=1.5)
        init = initial_reference(cfg)
        out = linear_evolve(init, cfg, 30.0)
        assert abs(np.trace(out.rho1).real - 400.0) / 400.0 < 1e-9
        assert np.array_equal(out.rho1, out.rho1.conj().T)

    def test_strong_dephasing_freezes_populations(self):
        cfg = make_config(chi=0.0, tunnel_j=0.0, gamma=200.0, initial_state="coherent")
        from wignerchain.oracle import LinearReferenceState

        rho0 = np.full((3, 3), 100.0, dtype=complex)
        rho = linear_evolve(LinearReferenceState(rho0, 0.0), cfg, 0.5).rho1
        assert abs(rho[0, 1]) < 1e-9
        assert np.allclose(np.diag(rho).real, 100.0, atol=1e-9)

    def test_evolve_samples_consistent(self):
        cfg = make_config(chi=0.0, gamma=1.5, t_final=1.0, sample_stride=200)
        refs = evolve_samples(cfg)
        times = sample_times(cfg)
        assert len(refs) == len(times)
        init = initial_reference(cfg)
        for ref, t in zip(refs, times):
            direct = linear_evolve(init, cfg, float(t))
            assert np.allclose(ref.rho1, direct.rho1, atol=1e-9)


class TestComparison:
    @pytest.mark.parametrize("state,gamma", [("coherent", 1.5), ("fock", 0.0)])
    def test_tw_matches_oracle(self, state, gamma):
        cfg = make_config(
            chi=0.0, gamma=gamma, initial_state=state,
            n_traj=2000, t_final=2.0, sample_stride=100, seed=2,
        )
        report = compare_tw_to_oracle(cfg, workers=1)
        assert report.max_population_sigma < 5.0
        assert report.max_coherence_sigma < 5.0
