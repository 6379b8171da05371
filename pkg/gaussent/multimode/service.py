"""Fully symmetric and bisymmetric multimode states.

A bisymmetric state is invariant under permutations inside each of two
groups of modes (m and n of them). A passive transform on each group moves
all the m|n entanglement onto one pair of modes and leaves the others in
uncorrelated single-mode states.
"""

import logging
from typing import Optional

import numpy as np

from gaussent.exceptions import DegenerateNumerics, DomainError, IndexOutOfRange, NotBisymmetric
from gaussent.multimode.schemas import (
    BisymmetricSpec,
    GhzTypeSpec,
    LocalizationResult,
    SpectralDegeneracy,
)
from gaussent.phasespace import service as phasespace
from gaussent.phasespace.schemas import Bipartition, CovarianceMatrix, SymplecticTransform
from gaussent.twomode import service as twomode

logger = logging.getLogger(__name__)

BLOCK_TOLERANCE = 1e-8
DEGENERACY_TOLERANCE = 1e-7
CROSS_TOLERANCE = 1e-7


def _group(size: int, diag: np.ndarray, offdiag: np.ndarray) -> np.ndarray:
    return np.kron(np.eye(size), diag - offdiag) + np.kron(np.ones((size, size)), offdiag)


# ==================== Constructors ====================

def fully_symmetric_cm(k: int, diag, offdiag) -> CovarianceMatrix:
    """k-mode state with every diagonal block ``diag`` and every other block ``offdiag``."""
    if k < 1:
        raise IndexOutOfRange("a state needs at least one mode")
    cm = phasespace.covariance(_group(k, np.asarray(diag, dtype=float), np.asarray(offdiag, dtype=float)))
    phasespace.require_physical(cm)
    return cm


def n_splitter(n: int) -> SymplecticTransform:
    """Cascade of n-1 beam splitters spreading input mode 1 evenly over all outputs.

    Splitter k mixes modes k and k+1 with transmissivity cos^2 = 1/(n-k+1).
    """
    if n < 2:
        raise IndexOutOfRange(f"an N-splitter needs at least two modes, got {n}")
    stages = [
        phasespace.make_beam_splitter(float(np.arccos(1 / np.sqrt(n - k + 1))), k, k + 1, n)
        for k in range(1, n)
    ]
    return phasespace.compose(*reversed(stages))


def _balanced_extractor(n: int) -> SymplecticTransform:
    """Passive transform taking the balanced combination of n modes into the first."""
    if n == 1:
        return phasespace.passive(np.eye(1))
    mixing = n_splitter(n).matrix[::2, ::2]
    return phasespace.passive(mixing.T)


def splitter_state(n: int, r1: float, r2: float, noise: float = 1.0) -> CovarianceMatrix:
    """One p-squeezed (r1) and n-1 x-squeezed (r2) thermal inputs through the N-splitter."""
    squeezers = phasespace.local_transform(
        phasespace.make_squeezer(r1, "p"),
        *(phasespace.make_squeezer(r2, "x") for _ in range(n - 1)),
    )
    inputs = phasespace.apply_symplectic(phasespace.thermal(noise, n), squeezers)
    return phasespace.apply_symplectic(inputs, n_splitter(n))


def ghz_squeezing_for_mixedness(n: int, b: float, noise: float = 1.0) -> float:
    """Squeezing r of the n-mode GHZ-type state whose single modes have mixedness b."""
    if n < 2:
        raise IndexOutOfRange(f"GHZ-type states need at least two modes, got {n}")
    ratio = b / noise
    value = (n ** 2 * ratio ** 2 - 1 - (n - 1) ** 2) / (2 * (n - 1))
    if value < 1 - 1e-12:
        raise DomainError(f"local mixedness {b} is below the noise level {noise}")
    return float(np.arccosh(max(value, 1.0)) / 4)


def ghz_type_state(spec: GhzTypeSpec) -> CovarianceMatrix:
    r = spec.squeezing
    if r is None:
        r = ghz_squeezing_for_mixedness(spec.n_modes, spec.local_mixedness, spec.thermal_noise)
    return splitter_state(spec.n_modes, r, r, spec.thermal_noise)


def traced_symmetric_state(total: int, keep: int, r: float, noise: float = 1.0) -> CovarianceMatrix:
    """First ``keep`` modes of a ``total``-mode GHZ-type state."""
    pure = ghz_type_state(GhzTypeSpec(n_modes=total, squeezing=r, thermal_noise=noise))
    return phasespace.partial_trace(pure, range(1, keep + 1))


# ==================== Bisymmetric structure ====================

def assemble_bisymmetric(spec: BisymmetricSpec) -> CovarianceMatrix:
    top = _group(spec.m, spec.alpha, spec.eps_alpha)
    bottom = _group(spec.n, spec.beta, spec.eps_beta)
    cross = np.kron(np.ones((spec.m, spec.n)), spec.gamma)
    cm = phasespace.covariance(np.block([[top, cross], [cross.T, bottom]]))
    phasespace.require_physical(cm)
    return cm


def detect_bisymmetric(cm: CovarianceMatrix, m: int) -> BisymmetricSpec:
    """Read the blocks of an m|(rest) bisymmetric state, checking every block pair."""
    total = cm.n_modes
    if not 1 <= m < total:
        raise IndexOutOfRange(f"split {m} must leave both groups nonempty in a {total}-mode state")
    n = total - m
    alpha, beta, gamma = cm.block(1, 1), cm.block(m + 1, m + 1), cm.block(1, m + 1)
    eps_alpha = cm.block(1, 2) if m > 1 else np.zeros((2, 2))
    eps_beta = cm.block(m + 1, m + 2) if n > 1 else np.zeros((2, 2))

    def expected(i: int, j: int) -> np.ndarray:
        first_i, first_j = i <= m, j <= m
        if first_i and first_j:
            return alpha if i == j else eps_alpha
        if not first_i and not first_j:
            return beta if i == j else eps_beta
        return gamma if first_i else gamma.T

    tol = BLOCK_TOLERANCE * max(1.0, float(np.max(np.abs(cm.matrix))))
    for i in range(1, total + 1):
        for j in range(1, total + 1):
            if np.max(np.abs(cm.block(i, j) - expected(i, j))) > tol:
                raise NotBisymmetric(
                    f"block ({i}, {j}) breaks the {m}|{n} symmetry", block_pair=(i, j)
                )
    return BisymmetricSpec(
        m=m, n=n, alpha=alpha, beta=beta, gamma=gamma, eps_alpha=eps_alpha, eps_beta=eps_beta
    )


def _degenerate_value(diag: np.ndarray, offdiag: np.ndarray) -> float:
    det = float(np.linalg.det(diag - offdiag))
    if det <= 0:
        raise DegenerateNumerics(f"group block difference has determinant {det:.3g}")
    return float(np.sqrt(det))


def spectral_degeneracy(cm: CovarianceMatrix, m: int) -> SpectralDegeneracy:
    spec = detect_bisymmetric(cm, m)
    values = np.array(phasespace.symplectic_spectrum(cm).values)
    result = SpectralDegeneracy(
        nu_alpha_minus=_degenerate_value(spec.alpha, spec.eps_alpha) if spec.m > 1 else None,
        mult_alpha=spec.m - 1,
        nu_beta_minus=_degenerate_value(spec.beta, spec.eps_beta) if spec.n > 1 else None,
        mult_beta=spec.n - 1,
    )
    for nu, mult in ((result.nu_alpha_minus, result.mult_alpha), (result.nu_beta_minus, result.mult_beta)):
        if nu is None:
            continue
        found = int(np.sum(np.abs(values - nu) <= DEGENERACY_TOLERANCE * max(1.0, nu)))
        if found < mult:
            raise DegenerateNumerics(f"eigenvalue {nu:.12g} found {found} times, expected {mult}")
    return result


# ==================== Localization ====================

def unitary_localization(cm: CovarianceMatrix, m: int) -> LocalizationResult:
    """Concentrate the m|(rest) entanglement on modes 1 and m+1."""
    spec = detect_bisymmetric(cm, m)
    s_local = phasespace.local_transform(_balanced_extractor(spec.m), _balanced_extractor(spec.n))
    out = phasespace.apply_symplectic(cm, s_local)

    pair = [1, spec.m + 1]
    others = [label for label in range(1, cm.n_modes + 1) if label not in pair]
    mask = np.ones((cm.n_modes, cm.n_modes), dtype=bool)
    np.fill_diagonal(mask, False)
    mask[0, spec.m] = mask[spec.m, 0] = False
    cross = max(
        (float(np.max(np.abs(out.block(i + 1, j + 1)))) for i, j in zip(*np.nonzero(mask))),
        default=0.0,
    )
    scale = max(1.0, float(np.max(np.abs(cm.matrix))))
    logger.debug("localization cross-correlation residual %.3e (scale %.3e)", cross, scale)
    if cross > CROSS_TOLERANCE * scale:
        logger.warning("localized modes keep correlations of %.3e", cross)

    return LocalizationResult(
        eq_two_mode=phasespace.partial_trace(out, pair),
        residual_modes=[phasespace.partial_trace(out, [label]) for label in others],
        s_local=s_local,
        cross_residual=cross,
    )


def equivalent_pair_log_negativity(result: LocalizationResult) -> float:
    return phasespace.log_negativity(result.eq_two_mode, Bipartition.split(2, {1}))


def block_log_negativity(cm: CovarianceMatrix, k: int) -> float:
    """E_N between the first k modes and the rest, through localization."""
    return equivalent_pair_log_negativity(unitary_localization(cm, k))


def block_hierarchy(cm: CovarianceMatrix, k_max: Optional[int] = None) -> list[tuple[int, float]]:
    """(k, E_N of k|rest) for k = 1 .. half the modes."""
    k_max = k_max or cm.n_modes // 2
    return [(k, block_log_negativity(cm, k)) for k in range(1, k_max + 1)]


def equivalent_two_mode_eof(cm: CovarianceMatrix, m: int) -> float:
    """E_F of the localized pair, defined when that pair is symmetric."""
    return twomode.eof_symmetric(unitary_localization(cm, m).eq_two_mode)
