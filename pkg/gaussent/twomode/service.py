"""Two-mode Gaussian states described by their symplectic invariants.

A two-mode state is fixed, up to local unitaries, by the marginal purities
``mu1``, ``mu2``, the global purity ``mu`` and the global invariant ``delta``.
The extremal values of ``delta`` at fixed purities give the maximally (GMEMS)
and least (GLEMS) entangled states.
"""

import logging
import math
from typing import Union

import numpy as np
from scipy.special import xlogy

from gaussent.exceptions import (
    ConstraintViolation,
    DimensionMismatch,
    DomainError,
    NegativeRadicand,
    NotSymmetric,
    UnphysicalPurities,
)
from gaussent.phasespace import service as phasespace
from gaussent.phasespace.schemas import CovarianceMatrix
from gaussent.twomode.schemas import (
    BoundsRow,
    EntanglementClass,
    ExtremalReport,
    InvariantIntermediates,
    PptPair,
    TwoModeInvariants,
    TwoModeStandardForm,
)

logger = logging.getLogger(__name__)

CLAMP_TOLERANCE = 1e-10
REGION_TOLERANCE = 1e-8
EOF_SYMMETRY_TOLERANCE = 1e-6


def _sqrt_clamped(value: float, scale: float, error: Exception) -> float:
    if value >= 0:
        return math.sqrt(value)
    if value >= -CLAMP_TOLERANCE * max(1.0, scale):
        return 0.0
    raise error


# ==================== Physical region ====================

def purity_bounds(mu1: float, mu2: float) -> tuple[float, float]:
    """Range of the global purity allowed by the marginals."""
    product = mu1 * mu2
    return product, product / (product + abs(mu1 - mu2))


def delta_bounds(mu1: float, mu2: float, mu: float) -> tuple[float, float]:
    """Range of delta at fixed purities.

    The upper end is 1 + 1/mu^2, capped by (1/mu1 + 1/mu2)^2 - 2/mu where the
    cap is lower (global purities below the separable threshold).
    """
    a, b = 1 / mu1, 1 / mu2
    lower = 2 / mu + (a - b) ** 2
    upper = min(1 + 1 / mu ** 2, (a + b) ** 2 - 2 / mu)
    return lower, upper


def check_purities(mu1: float, mu2: float, mu: float) -> None:
    if not all(0 < m <= 1 + REGION_TOLERANCE for m in (mu1, mu2, mu)):
        raise UnphysicalPurities(f"purities must lie in (0, 1], got {(mu1, mu2, mu)}")
    low, high = purity_bounds(mu1, mu2)
    if mu < low * (1 - REGION_TOLERANCE) or mu > high * (1 + REGION_TOLERANCE):
        raise UnphysicalPurities(
            f"global purity {mu:.12g} outside [{low:.12g}, {high:.12g}] allowed by the marginals"
        )


def check_invariants(inv: TwoModeInvariants) -> None:
    try:
        check_purities(inv.mu1, inv.mu2, inv.mu)
    except UnphysicalPurities as exc:
        raise ConstraintViolation(str(exc), constraint="global_purity_bounds") from exc
    lower, upper = delta_bounds(inv.mu1, inv.mu2, inv.mu)
    slack = REGION_TOLERANCE * max(1.0, upper)
    if not lower - slack <= inv.delta <= upper + slack:
        raise ConstraintViolation(
            f"delta {inv.delta:.12g} outside [{lower:.12g}, {upper:.12g}]",
            constraint="delta_bounds",
        )


# ==================== Invariants and standard form ====================

def invariants_from_cm(cm: CovarianceMatrix) -> TwoModeInvariants:
    if cm.n_modes != 2:
        raise DimensionMismatch(f"expected a two-mode state, got {cm.n_modes} modes")
    phasespace.require_physical(cm)
    det_alpha = float(np.linalg.det(cm.block(1, 1)))
    det_beta = float(np.linalg.det(cm.block(2, 2)))
    det_gamma = float(np.linalg.det(cm.block(1, 2)))
    _, logdet = np.linalg.slogdet(cm.matrix)
    return TwoModeInvariants(
        mu1=det_alpha ** -0.5,
        mu2=det_beta ** -0.5,
        mu=math.exp(-0.5 * logdet),
        delta=det_alpha + det_beta + 2 * det_gamma,
    )


def intermediates(inv: TwoModeInvariants) -> InvariantIntermediates:
    mu1, mu2, mu, delta = inv.mu1, inv.mu2, inv.mu, inv.delta
    scale = 4 / mu ** 2
    radicands = [
        (delta - (mu1 - sign * mu2) ** 2 / (mu1 ** 2 * mu2 ** 2)) ** 2 - scale
        for sign in (1, -1)
    ]
    eps_minus, eps_plus = (
        _sqrt_clamped(
            value,
            max(scale, delta ** 2),
            ConstraintViolation(f"negative radicand {value:.3e} in the standard form", constraint="delta_bounds"),
        )
        for value in radicands
    )
    return InvariantIntermediates(eps_minus=eps_minus, eps_plus=eps_plus)


def standard_form_from_invariants(inv: TwoModeInvariants) -> TwoModeStandardForm:
    check_invariants(inv)
    eps = intermediates(inv)
    k = math.sqrt(inv.mu1 * inv.mu2) / 4
    return TwoModeStandardForm(
        a=1 / inv.mu1,
        b=1 / inv.mu2,
        c_plus=k * (eps.eps_minus + eps.eps_plus),
        c_minus=k * (eps.eps_minus - eps.eps_plus),
    )


def cm_from_standard_form(sf: TwoModeStandardForm) -> CovarianceMatrix:
    cm = phasespace.covariance([
        [sf.a, 0, sf.c_plus, 0],
        [0, sf.a, 0, sf.c_minus],
        [sf.c_plus, 0, sf.b, 0],
        [0, sf.c_minus, 0, sf.b],
    ])
    phasespace.require_physical(cm)
    return cm


def standard_form_from_cm(cm: CovarianceMatrix) -> TwoModeStandardForm:
    """Standard form reached by local symplectics.

    The sign of c_plus * c_minus equals that of Det gamma, which the invariant
    delta already encodes.
    """
    return standard_form_from_invariants(invariants_from_cm(cm))


# ==================== Spectra and entanglement ====================

def symplectic_eigenvalues(inv: TwoModeInvariants) -> tuple[float, float]:
    """(nu_minus, nu_plus) of the state itself."""
    radicand = inv.delta ** 2 - 4 / inv.mu ** 2
    root = _sqrt_clamped(radicand, inv.delta ** 2, NegativeRadicand(f"delta^2 - 4/mu^2 = {radicand:.3e}"))
    plus_sq = (inv.delta + root) / 2
    return math.sqrt(1 / (inv.mu ** 2 * plus_sq)), math.sqrt(plus_sq)


def ppt_eigenvalues(inv: TwoModeInvariants) -> PptPair:
    delta_tilde = -inv.delta + 2 / inv.mu1 ** 2 + 2 / inv.mu2 ** 2
    radicand = delta_tilde ** 2 - 4 / inv.mu ** 2
    if delta_tilde <= 0:
        raise NegativeRadicand(f"transposed invariant {delta_tilde:.6g} is not positive")
    root = _sqrt_clamped(radicand, delta_tilde ** 2, NegativeRadicand(f"radicand {radicand:.3e} < 0"))
    plus_sq = (delta_tilde + root) / 2
    # the product of the two eigenvalues is 1/mu
    minus_sq = 1 / (inv.mu ** 2 * plus_sq)
    return PptPair(
        nu_tilde_minus=math.sqrt(minus_sq),
        nu_tilde_plus=math.sqrt(plus_sq),
        delta_tilde=delta_tilde,
    )


def log_negativity_two_mode(inv: TwoModeInvariants) -> float:
    nu = ppt_eigenvalues(inv).nu_tilde_minus
    return max(0.0, -math.log(nu))


def classify_by_purities(mu1: float, mu2: float, mu: float) -> EntanglementClass:
    """Separable, coexistence or entangled band; boundaries go to the lower band."""
    check_purities(mu1, mu2, mu)
    product = mu1 * mu2
    if mu <= product / (mu1 + mu2 - product):
        return EntanglementClass.SEPARABLE
    if mu <= product / math.sqrt(mu1 ** 2 + mu2 ** 2 - product ** 2):
        return EntanglementClass.COEXISTENCE
    return EntanglementClass.ENTANGLED


# ==================== Extremal states ====================

def gmems(mu1: float, mu2: float, mu: float) -> TwoModeStandardForm:
    """Maximally entangled state at fixed purities (lowest delta)."""
    lower, _ = delta_bounds(mu1, mu2, mu)
    return standard_form_from_invariants(TwoModeInvariants(mu1=mu1, mu2=mu2, mu=mu, delta=lower))


def glems(mu1: float, mu2: float, mu: float) -> TwoModeStandardForm:
    """Least entangled state at fixed purities (highest delta)."""
    _, upper = delta_bounds(mu1, mu2, mu)
    return standard_form_from_invariants(TwoModeInvariants(mu1=mu1, mu2=mu2, mu=mu, delta=upper))


def gmemms(mu1: float, mu2: float) -> TwoModeStandardForm:
    """Maximally entangled state at fixed marginals, where gmems and glems coincide."""
    _, mu = purity_bounds(mu1, mu2)
    return gmems(mu1, mu2, mu)


def _log_negativity_at(mu1: float, mu2: float, mu: float, delta: float) -> float:
    return log_negativity_two_mode(TwoModeInvariants(mu1=mu1, mu2=mu2, mu=mu, delta=delta))


def extremal_entanglement(mu1: float, mu2: float, mu: float) -> ExtremalReport:
    """Bounds on E_N at fixed purities and their average.

    rel_error is 1 when the lower bound vanishes but the upper does not, and 0
    when both vanish.
    """
    entanglement_class = classify_by_purities(mu1, mu2, mu)
    lower, upper = delta_bounds(mu1, mu2, mu)
    e_max = _log_negativity_at(mu1, mu2, mu, lower)
    e_min = _log_negativity_at(mu1, mu2, mu, upper)
    e_avg = (e_max + e_min) / 2
    total = e_max + e_min
    if e_min > 0:
        rel_error = (e_max - e_min) / total
    else:
        rel_error = 1.0 if e_max > 0 else 0.0
    return ExtremalReport(
        e_max=e_max,
        e_min=e_min,
        e_avg=e_avg,
        rel_error=rel_error,
        entanglement_class=entanglement_class,
    )


def entanglement_bounds_scan(mu1: float, mu2: float, steps: int) -> list[BoundsRow]:
    """E_N bounds over a grid of global purities spanning the physical range."""
    low, high = purity_bounds(mu1, mu2)
    rows = []
    for mu in np.linspace(low, high, steps):
        report = extremal_entanglement(mu1, mu2, float(mu))
        rows.append(BoundsRow(
            mu=float(mu),
            e_min=report.e_min,
            e_max=report.e_max,
            entanglement_class=report.entanglement_class,
        ))
    return rows


# ==================== Entanglement of formation ====================

def eof_function(x: float) -> float:
    """E_F of a pure two-mode state whose transposed eigenvalue is x, in nats."""
    if not x > 0:
        raise DomainError(f"argument {x} must be positive")
    if x >= 1:
        return 0.0
    plus = (1 + x) ** 2 / (4 * x)
    minus = (1 - x) ** 2 / (4 * x)
    return float(xlogy(plus, plus) - xlogy(minus, minus))


def eof_symmetric(state: Union[CovarianceMatrix, TwoModeInvariants]) -> float:
    """Entanglement of formation of a symmetric two-mode state."""
    inv = invariants_from_cm(state) if isinstance(state, CovarianceMatrix) else state
    a, b = 1 / inv.mu1, 1 / inv.mu2
    if abs(a - b) > EOF_SYMMETRY_TOLERANCE * max(1.0, a):
        raise NotSymmetric(f"local entries differ: a={a:.9g}, b={b:.9g}")
    return eof_function(ppt_eigenvalues(inv).nu_tilde_minus)
