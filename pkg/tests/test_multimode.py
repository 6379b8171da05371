import math

import numpy as np
import pytest

from gaussent.exceptions import IndexOutOfRange, NotBisymmetric
from gaussent.multimode import service as multimode
from gaussent.multimode.schemas import BisymmetricSpec, GhzTypeSpec
from gaussent.phasespace import service as phasespace
from gaussent.phasespace.schemas import Bipartition
from conftest import random_state


def _ghz(n, r=None, b=None, noise=1.0):
    return multimode.ghz_type_state(
        GhzTypeSpec(n_modes=n, squeezing=r, local_mixedness=b, thermal_noise=noise)
    )


def _local_mixedness(cm, mode=1):
    return math.sqrt(np.linalg.det(cm.block(mode, mode)))


def _is_fully_symmetric(cm, tol=1e-10):
    n = cm.n_modes
    for order in ([*range(2, n + 1), 1], [2, 1, *range(3, n + 1)]):
        moved = phasespace.permute_modes(cm, order)
        if np.max(np.abs(moved.matrix - cm.matrix)) > tol * max(1.0, np.max(np.abs(cm.matrix))):
            return False
    return True


def _random_bisymmetric(rng, m, n, pure):
    """Spread a random pair over m|n modes next to identical single-mode ancillas."""
    pair = random_state(rng, 2, pure=pure)
    tau_a = random_state(rng, 1, pure=pure)
    tau_b = random_state(rng, 1, pure=pure)
    blocks = [phasespace.partial_trace(pair, [1])] + [tau_a] * (m - 1)
    blocks += [phasespace.partial_trace(pair, [2])] + [tau_b] * (n - 1)
    total = m + n
    matrix = np.zeros((2 * total, 2 * total))
    for i, block in enumerate(blocks):
        matrix[2 * i:2 * i + 2, 2 * i:2 * i + 2] = block.matrix
    matrix[0:2, 2 * m:2 * m + 2] = pair.block(1, 2)
    matrix[2 * m:2 * m + 2, 0:2] = pair.block(2, 1)
    inputs = phasespace.covariance(matrix)
    spread = [multimode.n_splitter(k) if k > 1 else phasespace.passive(np.eye(1)) for k in (m, n)]
    return phasespace.apply_symplectic(inputs, phasespace.local_transform(*spread)), tau_a, tau_b


# ==================== N-splitter ====================

def test_two_mode_splitter_is_balanced_beam_splitter():
    np.testing.assert_allclose(
        multimode.n_splitter(2).matrix,
        phasespace.make_beam_splitter(math.pi / 4, 1, 2, 2).matrix,
        atol=1e-15,
    )


@pytest.mark.parametrize("n", [2, 3, 5, 8])
def test_splitter_spreads_first_input_evenly(n):
    s = multimode.n_splitter(n)
    assert phasespace.is_symplectic(s.matrix)
    mixing = s.matrix[::2, ::2]
    np.testing.assert_allclose(mixing @ mixing.T, np.eye(n), atol=1e-12)
    np.testing.assert_allclose(mixing[:, 0], np.full(n, 1 / math.sqrt(n)), atol=1e-12)
    out = phasespace.apply_symplectic(phasespace.vacuum(n), s)
    np.testing.assert_allclose(out.matrix, np.eye(2 * n), atol=1e-12)


def test_splitter_output_is_fully_symmetric():
    cm = multimode.splitter_state(4, 0.6, 0.6)
    assert _is_fully_symmetric(cm)


def test_splitter_needs_two_modes():
    with pytest.raises(IndexOutOfRange):
        multimode.n_splitter(1)


# ==================== GHZ-type states ====================

@pytest.mark.parametrize("r", [0.3, 1.0])
def test_two_mode_ghz_is_tmsv(r):
    np.testing.assert_allclose(_ghz(2, r=r).matrix, phasespace.two_mode_squeezed_vacuum(r).matrix, atol=1e-12)


def test_unsqueezed_ghz_is_vacuum():
    np.testing.assert_allclose(_ghz(5, r=0.0).matrix, np.eye(10), atol=1e-12)


def test_ghz_states_are_pure_and_symmetric():
    cm = _ghz(3, r=0.7)
    assert phasespace.is_pure(cm)
    assert _is_fully_symmetric(cm)
    assert not phasespace.is_pure(_ghz(3, r=0.7, noise=1.5))
    assert phasespace.log_negativity(cm, Bipartition.split(3, {1})) > 0


def test_strongly_squeezed_ghz_state_is_accepted():
    cm = _ghz(3, r=5.0)
    assert phasespace.validate_cm(cm).physical
    assert phasespace.is_pure(cm)
    expected = math.acosh(math.sqrt(np.linalg.det(cm.block(1, 1))))
    assert phasespace.log_negativity(cm, Bipartition.split(3, {1})) == pytest.approx(expected, abs=1e-6)


def test_local_mixedness_grows_with_squeezing():
    values = [_local_mixedness(_ghz(4, r=r)) for r in np.linspace(0, 2, 9)]
    assert np.all(np.diff(values) > 0)


@pytest.mark.parametrize("n", [2, 3, 6])
@pytest.mark.parametrize("b", [1.2, 2.0, 5.0])
def test_squeezing_for_mixedness_inverts_constructor(n, b):
    cm = _ghz(n, b=b)
    assert _local_mixedness(cm) == pytest.approx(b, rel=1e-9)
    r = multimode.ghz_squeezing_for_mixedness(n, b)
    assert _local_mixedness(_ghz(n, r=r)) == pytest.approx(b, rel=1e-9)


def test_ghz_spec_needs_exactly_one_parameter():
    with pytest.raises(ValueError):
        GhzTypeSpec(n_modes=3)
    with pytest.raises(ValueError):
        GhzTypeSpec(n_modes=3, squeezing=0.5, local_mixedness=2.0)


def test_fully_symmetric_constructor():
    cm = multimode.fully_symmetric_cm(3, np.eye(2), np.zeros((2, 2)))
    np.testing.assert_array_equal(cm.matrix, np.eye(6))
    a, c = 2.0, math.sqrt(3.0)
    pair = multimode.fully_symmetric_cm(2, np.diag([a, a]), np.diag([c, -c]))
    assert phasespace.is_pure(pair)


# ==================== Bisymmetric structure ====================

@pytest.mark.parametrize("m", [1, 2, 3])
def test_detect_then_assemble_reproduces_ghz(m):
    cm = _ghz(4, r=0.5)
    spec = multimode.detect_bisymmetric(cm, m)
    assert (spec.m, spec.n) == (m, 4 - m)
    np.testing.assert_allclose(multimode.assemble_bisymmetric(spec).matrix, cm.matrix, atol=1e-12)


def test_random_state_is_not_bisymmetric(make_state):
    with pytest.raises(NotBisymmetric) as exc:
        multimode.detect_bisymmetric(make_state(3), 1)
    assert exc.value.block_pair is not None


def test_any_two_mode_state_is_bisymmetric(make_state):
    cm = make_state(2)
    spec = multimode.detect_bisymmetric(cm, 1)
    np.testing.assert_array_equal(spec.eps_alpha, np.zeros((2, 2)))
    np.testing.assert_allclose(multimode.assemble_bisymmetric(spec).matrix, cm.matrix)


def test_split_must_leave_both_groups():
    with pytest.raises(IndexOutOfRange):
        multimode.detect_bisymmetric(_ghz(3, r=0.2), 3)


def test_spec_requires_couplings_for_larger_groups():
    with pytest.raises(ValueError):
        BisymmetricSpec(m=2, n=1, alpha=np.eye(2), beta=np.eye(2), gamma=np.zeros((2, 2)))


# ==================== Spectral degeneracy ====================

def test_two_mode_split_claims_nothing():
    result = multimode.spectral_degeneracy(phasespace.two_mode_squeezed_vacuum(0.4), 1)
    assert (result.mult_alpha, result.mult_beta) == (0, 0)
    assert result.nu_alpha_minus is None and result.nu_beta_minus is None


def test_pure_ghz_degenerate_pairs():
    result = multimode.spectral_degeneracy(_ghz(4, r=0.8), 2)
    assert (result.mult_alpha, result.mult_beta) == (1, 1)
    assert result.nu_alpha_minus == pytest.approx(1.0, abs=1e-9)


def test_mixed_symmetric_one_vs_three():
    cm = multimode.traced_symmetric_state(6, 4, 0.6)
    result = multimode.spectral_degeneracy(cm, 1)
    assert result.mult_beta == 2
    values = np.array(phasespace.symplectic_spectrum(cm).values)
    assert np.sum(np.abs(values - result.nu_beta_minus) <= 1e-7) >= 2


def test_degenerate_values_on_random_bisymmetric_states(rng):
    for trial in range(20):
        m, n = 1 + trial % 4, 1 + (trial // 4) % 4
        cm, tau_a, tau_b = _random_bisymmetric(rng, m, n, pure=False)
        result = multimode.spectral_degeneracy(cm, m)
        assert (result.mult_alpha, result.mult_beta) == (m - 1, n - 1)
        if m > 1:
            assert result.nu_alpha_minus == pytest.approx(phasespace.symplectic_spectrum(tau_a).values[0], abs=1e-7)
        if n > 1:
            assert result.nu_beta_minus == pytest.approx(phasespace.symplectic_spectrum(tau_b).values[0], abs=1e-7)


# ==================== Localization ====================

def test_two_mode_localization_is_identity(make_state):
    cm = make_state(2)
    result = multimode.unitary_localization(cm, 1)
    np.testing.assert_allclose(result.s_local.matrix, np.eye(4))
    np.testing.assert_allclose(result.eq_two_mode.matrix, cm.matrix)
    assert result.residual_modes == []


def _check_localization(cm, m):
    result = multimode.unitary_localization(cm, m)
    direct = phasespace.log_negativity(cm, Bipartition.split(cm.n_modes, range(1, m + 1)))
    assert multimode.equivalent_pair_log_negativity(result) == pytest.approx(direct, abs=1e-6)
    assert result.cross_residual <= 1e-7 * max(1.0, float(np.max(np.abs(cm.matrix))))
    assert len(result.residual_modes) == cm.n_modes - 2
    u = result.s_local.matrix
    np.testing.assert_allclose(u @ u.T, np.eye(2 * cm.n_modes), atol=1e-12)


def test_localization_preserves_block_entanglement(rng):
    for trial in range(50):
        m = 1 + trial % 4
        n = 1 + (trial // 4) % 4
        if trial % 2:
            cm, _, _ = _random_bisymmetric(rng, m, n, pure=trial % 3 == 0)
        else:
            total = m + n
            cm = multimode.traced_symmetric_state(total + 2, total, rng.uniform(0.1, 1.5))
        _check_localization(cm, m)


def test_localization_of_ghz_states():
    _check_localization(_ghz(3, r=0.9), 1)
    _check_localization(multimode.traced_symmetric_state(6, 4, 0.7), 2)


# ==================== Block hierarchy ====================

@pytest.mark.parametrize("b", [1.2, 2.0, 5.0])
def test_block_entanglement_grows_with_block_size(b):
    rows = multimode.block_hierarchy(_ghz(20, b=b))
    assert [k for k, _ in rows] == list(range(1, 11))
    values = np.array([value for _, value in rows])
    assert np.all(np.diff(values) >= -1e-9)
    assert values[-1] > values[0] > 0


def test_vacuum_has_no_block_entanglement():
    assert all(value == pytest.approx(0.0, abs=1e-12) for _, value in multimode.block_hierarchy(phasespace.vacuum(6)))


def test_traced_block_entanglement_stays_bounded():
    values = [
        multimode.block_log_negativity(multimode.traced_symmetric_state(12, 8, r), 4)
        for r in np.linspace(0.5, 5.0, 10)
    ]
    assert all(math.isfinite(v) and 0 < v < 10 for v in values)
    assert abs(values[-1] - values[-2]) < 0.1


def test_pair_entanglement_falls_with_mode_count():
    values = [
        phasespace.log_negativity(phasespace.partial_trace(_ghz(n, b=2.0), [1, 2]), Bipartition.split(2, {1}))
        for n in range(2, 8)
    ]
    assert np.all(np.diff(values) < 0)


@pytest.mark.parametrize("n", [3, 4, 6])
def test_pair_entanglement_closed_form(n):
    r = 0.8
    reduced = phasespace.partial_trace(_ghz(n, r=r), [1, 2])
    expected = -0.5 * math.log((n - 2 + 2 * math.exp(-4 * r)) / n)
    assert phasespace.log_negativity(reduced, Bipartition.split(2, {1})) == pytest.approx(expected, abs=1e-9)


def test_half_split_entanglement_grows_with_mode_count():
    values = [multimode.block_log_negativity(_ghz(2 * n, b=2.0), n) for n in range(1, 6)]
    assert np.all(np.diff(values) >= -1e-9)
    assert values[-1] > values[0]


def test_equivalent_pair_eof_for_symmetric_split():
    cm = _ghz(4, r=0.6)
    assert multimode.equivalent_two_mode_eof(cm, 2) > 0
