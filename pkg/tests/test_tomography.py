import numpy as np
import pytest

from conftest import random_density, random_hermitian
from vrdsim import linalg, metrics
from vrdsim.protocols import coherence_input_state, coherence_vrd, entanglement_vrd
from vrdsim.states import bell, mcs, werner
from vrdsim.tomography import (
    PauliDataset,
    exact_expectations,
    full_settings,
    linear_inversion,
    project_physical,
    reconstruct_from_expectations,
    sample_dataset,
    simplex_project,
    virtual_tomography,
    virtual_tomography_exact,
)


class TestLinearInversion:
    def test_exact_expectations_roundtrip_singlet(self):
        rho = bell("psi_minus").to_density()
        rec = reconstruct_from_expectations(exact_expectations(rho), 2)
        assert np.abs(rec - rho.matrix).max() < 1e-12

    def test_exact_expectations_roundtrip_werner(self):
        rho = werner(0.6)
        rec = reconstruct_from_expectations(exact_expectations(rho), 2)
        assert np.abs(rec - rho.matrix).max() < 1e-12

    def test_exact_roundtrip_100_random_states(self, rng):
        worst = 0.0
        for _ in range(100):
            rho = random_density(rng)
            rec = reconstruct_from_expectations(exact_expectations(rho), 2)
            worst = max(worst, np.abs(rec - rho.matrix).max())
        assert worst < 1e-10

    def test_finite_shots_can_go_negative(self):
        # witnessed with this seed: linear inversion is generally unphysical
        ds = sample_dataset(bell("psi_minus").to_density(), 200, 0)
        w, _ = linalg.hermitian_eig(linear_inversion(ds))
        assert w[-1] < 0.0

    def test_sampled_counts_converge(self):
        rho = werner(0.4)
        ds = sample_dataset(rho, 10**5, 3)
        assert np.abs(linear_inversion(ds) - rho.matrix).max() < 0.02

    def test_incomplete_dataset_rejected(self):
        settings = full_settings(2)[:5]
        counts = tuple(np.array([10, 0, 0, 0]) for _ in settings)
        ds = PauliDataset(settings=settings, counts=counts, shots=10, seed=0)
        with pytest.raises(ValueError, match="complete"):
            linear_inversion(ds)

    def test_single_qubit_roundtrip(self, rng):
        rho = random_density(rng, (2,))
        rec = reconstruct_from_expectations(exact_expectations(rho), 1)
        assert np.abs(rec - rho.matrix).max() < 1e-12


class TestSimplexProject:
    def test_two_dim_hand_case(self):
        assert np.allclose(simplex_project([1.2, -0.2]), [1.0, 0.0], atol=1e-14)

    def test_three_dim_water_filling(self):
        assert np.allclose(simplex_project([0.9, 0.4, -0.3]), [0.75, 0.25, 0.0], atol=1e-14)

    def test_already_on_simplex(self):
        v = np.array([0.5, 0.3, 0.2])
        assert np.allclose(simplex_project(v), v, atol=1e-14)

    def test_output_is_distribution(self, rng):
        for _ in range(50):
            v = rng.normal(size=6)
            p = simplex_project(v)
            assert (p >= 0).all() and p.sum() == pytest.approx(1.0, abs=1e-12)


class TestProjectPhysical:
    def test_idempotent_on_physical(self, rng):
        rho = random_density(rng)
        out = project_physical(rho.matrix)
        assert np.abs(out.matrix - rho.matrix).max() < 1e-10

    def test_diag_hand_cases(self):
        out = project_physical(np.diag([1.2, -0.2]))
        assert np.allclose(np.diag(out.matrix).real, [1.0, 0.0], atol=1e-12)
        out = project_physical(np.diag([0.9, 0.4, -0.3]))
        assert np.allclose(np.diag(out.matrix).real, [0.75, 0.25, 0.0], atol=1e-12)

    def test_trace_and_positivity(self, rng):
        for _ in range(20):
            h = random_hermitian(rng, 4)
            h = h - (np.trace(h) - 1.0) * np.eye(4) / 4  # force unit trace
            out = project_physical(h)
            assert np.trace(out.matrix).real == pytest.approx(1.0, abs=1e-12)
            w, _ = linalg.hermitian_eig(out.matrix)
            assert w[-1] >= -1e-12

    def test_matches_brute_force_grid_oracle(self, rng):
        # dense grid over the single-qubit state space (Bloch ball)
        step = 0.02
        ax = np.arange(-1.0, 1.0 + step / 2, step)
        gx, gy, gz = np.meshgrid(ax, ax, ax, indexing="ij")
        pts = np.stack([gx.ravel(), gy.ravel(), gz.ravel()], axis=1)
        pts = pts[(pts**2).sum(axis=1) <= 1.0]
        paulis = np.array(
            [[[0, 1], [1, 0]], [[0, -1j], [1j, 0]], [[1, 0], [0, -1]]], dtype=complex
        )
        sigmas = 0.5 * (np.eye(2)[None] + np.einsum("ni,ijk->njk", pts, paulis))
        for _ in range(8):
            h = random_hermitian(rng, 2)
            h = h - (np.trace(h) - 1.0) * np.eye(2) / 2
            ours = project_physical(h)
            our_dist = np.linalg.norm(ours.matrix - h)
            grid_dist = np.sqrt((np.abs(sigmas - h[None]) ** 2).sum(axis=(1, 2))).min()
            assert our_dist <= grid_dist + 1e-6

    def test_non_unit_trace_rejected(self):
        with pytest.raises(ValueError):
            project_physical(np.eye(2))


class TestVirtualTomography:
    def test_exact_pipeline_coherence(self):
        lin, phys = virtual_tomography_exact(coherence_vrd(), coherence_input_state().to_density())
        assert np.abs(phys.matrix - mcs(4).projector()).max() < 1e-10

    def test_entanglement_high_shots(self):
        qc = entanglement_vrd(0.6)
        _, phys = virtual_tomography(qc, werner(0.6), 10**5, 7)
        assert metrics.fidelity_to_pure(phys, bell("psi_minus")) >= 0.99

    def test_entanglement_clamped_high_shots(self):
        qc = entanglement_vrd(0.0)
        _, phys = virtual_tomography(qc, werner(0.0), 10**5, 7)
        assert metrics.fidelity_to_pure(phys, bell("psi_minus")) >= 0.98

    def test_sampled_allocation(self):
        qc = entanglement_vrd(0.6)
        _, phys = virtual_tomography(qc, werner(0.6), 10**5, 7, allocation="sampled")
        assert metrics.fidelity_to_pure(phys, bell("psi_minus")) >= 0.98

    def test_unknown_allocation(self):
        with pytest.raises(ValueError):
            virtual_tomography(entanglement_vrd(0.6), werner(0.6), 100, 0, allocation="mystery")

    def test_fidelity_nondecreasing_in_shots(self):
        # three-point shot ladder with fixed seeds; slack is roughly one sigma
        # of the smaller-shot estimate
        qc = entanglement_vrd(0.6)
        shots_and_seeds = ((1000, 21), (10000, 22), (100000, 23))
        fids = []
        for shots, seed in shots_and_seeds:
            _, phys = virtual_tomography(qc, werner(0.6), shots, seed)
            fids.append(metrics.fidelity_to_pure(phys, bell("psi_minus")))
        assert fids[1] >= fids[0] - 0.02
        assert fids[2] >= fids[1] - 0.006

    def test_determinism(self):
        qc = entanglement_vrd(0.4)
        lin1, _ = virtual_tomography(qc, werner(0.4), 2000, 99)
        lin2, _ = virtual_tomography(qc, werner(0.4), 2000, 99)
        assert np.array_equal(lin1, lin2)


class TestCsvInterface:
    def test_roundtrip(self, tmp_path):
        ds = sample_dataset(werner(0.3), 400, 11)
        path = tmp_path / "dataset.csv"
        ds.to_csv(path)
        back = PauliDataset.from_csv(path)
        assert back.settings == ds.settings
        assert all(np.array_equal(a, b) for a, b in zip(back.counts, ds.counts))
        assert back.shots == ds.shots and back.seed == ds.seed

    def test_header_is_stable(self, tmp_path):
        ds = sample_dataset(werner(0.3), 10, 0)
        path = tmp_path / "dataset.csv"
        ds.to_csv(path)
        assert path.read_text().splitlines()[0] == "setting,c0,c1,c2,c3,shots,seed"

    def test_reconstruction_from_csv(self, tmp_path):
        rho = werner(0.8)
        ds = sample_dataset(rho, 50000, 4)
        path = tmp_path / "dataset.csv"
        ds.to_csv(path)
        rec = linear_inversion(PauliDataset.from_csv(path))
        assert np.abs(rec - rho.matrix).max() < 0.03
