import numpy as np
import pytest

from vrdsim import linalg
from vrdsim.states import (
    DensityOperator,
    PureState,
    basis_state,
    bell,
    eta_state,
    isotropic,
    maximally_mixed,
    mcs,
    pair_superposition,
    ququart_index,
    werner,
    werner_mixture,
)


def test_ququart_encoding():
    assert ququart_index("H", "v") == 0
    assert ququart_index("V", "v") == 1
    assert ququart_index("H", "h") == 2
    assert ququart_index("V", "h") == 3


class TestMcs:
    def test_dimension_one(self):
        assert np.allclose(mcs(1).amplitudes, [1.0])

    def test_dimension_two_is_plus(self):
        assert np.allclose(mcs(2).amplitudes, np.array([1, 1]) / np.sqrt(2))

    def test_dimension_four(self):
        assert np.allclose(mcs(4).amplitudes, np.full(4, 0.5))

    def test_zero_dimension_rejected(self):
        with pytest.raises(ValueError):
            mcs(0)


class TestBell:
    def test_psi_minus(self):
        assert np.allclose(bell("psi_minus").amplitudes, np.array([0, 1, -1, 0]) / np.sqrt(2))

    def test_psi_plus(self):
        assert np.allclose(bell("psi_plus").amplitudes, np.array([0, 1, 1, 0]) / np.sqrt(2))

    def test_phi_plus(self):
        assert np.allclose(bell("phi_plus").amplitudes, np.array([1, 0, 0, 1]) / np.sqrt(2))

    def test_unknown_label(self):
        with pytest.raises(ValueError):
            bell("sigma_plus")

    def test_phase_convention(self):
        # first nonzero amplitude real positive
        for label in ("phi_plus", "phi_minus", "psi_plus", "psi_minus"):
            amp = bell(label).amplitudes
            first = amp[np.abs(amp) > 1e-12][0]
            assert first.real > 0 and abs(first.imag) < 1e-15


class TestWerner:
    def test_maximally_mixed_limit(self):
        assert np.abs(werner(0.0).matrix - np.eye(4) / 4).max() < 1e-15

    def test_pure_limit(self):
        assert np.abs(werner(1.0).matrix - bell("psi_minus").projector()).max() < 1e-15

    def test_fidelity_with_singlet(self):
        rho = werner(0.6)
        f = np.real(np.vdot(bell("psi_minus").amplitudes, rho.matrix @ bell("psi_minus").amplitudes))
        assert f == pytest.approx(0.7, abs=1e-12)

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            werner(1.1)
        with pytest.raises(ValueError):
            werner(-0.01)

    def test_ppt_positive_iff_below_threshold(self):
        for xi in np.linspace(0, 1, 21):
            w, _ = linalg.hermitian_eig(werner(xi).partial_transpose(0))
            assert w[-1] == pytest.approx((1 - 3 * xi) / 4, abs=1e-12)
            assert (w[-1] >= -1e-12) == (xi <= 1 / 3 + 1e-12)


class TestWernerMixture:
    def test_pure_limit_single_term(self):
        terms = werner_mixture(1.0)
        assert len(terms) == 1
        assert terms[0][0] == pytest.approx(1.0)

    def test_equal_weights_at_zero(self):
        terms = werner_mixture(0.0)
        assert len(terms) == 4
        assert all(w == pytest.approx(0.25) for w, _ in terms)

    def test_third(self):
        weights = [w for w, _ in werner_mixture(1 / 3)]
        assert weights == pytest.approx([0.5, 1 / 6, 1 / 6, 1 / 6])

    def test_mixture_reconstructs_state(self):
        for xi in (0.0, 0.25, 0.6, 0.9):
            total = sum(w * s.projector() for w, s in werner_mixture(xi))
            assert np.abs(total - werner(xi).matrix).max() < 1e-12
            assert sum(w for w, _ in werner_mixture(xi)) == pytest.approx(1.0, abs=1e-12)


class TestEtaState:
    def test_trace(self):
        assert np.trace(eta_state().matrix).real == pytest.approx(1.0, abs=1e-14)

    def test_orthogonal_to_singlet(self):
        amp = bell("psi_minus").amplitudes
        assert abs(np.vdot(amp, eta_state().matrix @ amp)) < 1e-14

    def test_equals_mixture_form(self):
        mix = (bell("psi_plus").projector() + basis_state(0, (2, 2)).projector() + basis_state(3, (2, 2)).projector()) / 3
        assert np.abs(eta_state().matrix - mix).max() < 1e-12


class TestInvariants:
    def test_constructors_pass_density_validation(self):
        for rho in (werner(0.3), eta_state(), isotropic(0.7), maximally_mixed((2, 2))):
            DensityOperator(rho.matrix, rho.dims)  # validates

    def test_pure_state_norm_enforced(self):
        with pytest.raises(ValueError):
            PureState(np.array([1.0, 1.0]), (2,))

    def test_density_trace_enforced(self):
        with pytest.raises(ValueError):
            DensityOperator(np.eye(2), (2,))

    def test_density_positivity_enforced(self):
        with pytest.raises(ValueError):
            DensityOperator(np.diag([1.5, -0.5]), (2,))

    def test_density_hermiticity_enforced(self):
        m = np.array([[0.5, 0.5], [0.0, 0.5]])
        with pytest.raises(ValueError):
            DensityOperator(m, (2,))

    def test_pair_superposition(self):
        s = pair_superposition(4, 1, 3, -1)
        assert np.allclose(s.amplitudes, np.array([0, 1, 0, -1]) / np.sqrt(2))

    def test_arrays_are_frozen(self):
        s = bell("psi_minus")
        with pytest.raises(ValueError):
            s.amplitudes[0] = 1.0
        rho = werner(0.5)
        with pytest.raises(ValueError):
            rho.matrix[0, 0] = 2.0


def test_non_finite_amplitudes_rejected():
    with pytest.raises(ValueError, match="finite"):
        PureState(np.array([np.inf, 0.0]), (2,))
    with pytest.raises(ValueError, match="finite"):
        DensityOperator(np.array([[np.nan, 0], [0, 1.0]]), (2,))
