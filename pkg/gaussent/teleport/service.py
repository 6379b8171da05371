"""Teleportation networks over fully symmetric multimode resources.

N-2 cooperating parties measure the momentum of their modes; the sender and
receiver then run unit-gain coherent-state teleportation on the conditioned
pair. Fidelities below 1/2 are reachable without entanglement.
"""

import logging
import math

import numpy as np
from scipy import optimize

from gaussent.config import get_settings
from gaussent.exceptions import DimensionMismatch, DomainError, IndexOutOfRange, OptimizerFailure
from gaussent.multimode import service as multimode
from gaussent.phasespace import service as phasespace
from gaussent.phasespace.schemas import CovarianceMatrix
from gaussent.teleport.schemas import FidelityResult, Quadrature, SweepRow, TeleportResourceSpec
from gaussent.twomode import service as twomode

logger = logging.getLogger(__name__)

CLASSICAL_FIDELITY = 0.5
MAX_E_T = 1 - 1e-9

_Z = np.diag([1.0, -1.0])


# ==================== Resource and protocol ====================

def build_resource(spec: TeleportResourceSpec) -> CovarianceMatrix:
    if spec.noise != 1:
        logger.warning("every input mode gets the same thermal factor %.6g", spec.noise)
    return multimode.splitter_state(spec.n_parties, spec.r1, spec.r2, spec.noise)


def homodyne_condition(cm: CovarianceMatrix, mode: int, quadrature: Quadrature) -> CovarianceMatrix:
    """State of the other modes after measuring one quadrature of ``mode``.

    A - C (Pi B Pi)^+ C^T, which does not depend on the outcome.
    """
    phasespace.require_physical(cm)
    if cm.n_modes < 2:
        raise DimensionMismatch("conditioning needs at least two modes")
    if quadrature not in ("x", "p"):
        raise DomainError(f"unknown quadrature {quadrature!r}")
    return _condition(cm, mode, quadrature)


def _condition(cm: CovarianceMatrix, mode: int, quadrature: Quadrature) -> CovarianceMatrix:
    keep = [label for label in range(1, cm.n_modes + 1) if label != mode]
    measured = cm.block(mode, mode)
    kept_idx = [q for label in keep for q in (2 * (label - 1), 2 * (label - 1) + 1)]
    cross = cm.matrix[np.ix_(kept_idx, [2 * (mode - 1), 2 * (mode - 1) + 1])]
    projector = np.diag([1.0, 0.0] if quadrature == "x" else [0.0, 1.0])
    update = cross @ np.linalg.pinv(projector @ measured @ projector) @ cross.T
    out = cm.matrix[np.ix_(kept_idx, kept_idx)] - update
    return phasespace.covariance((out + out.T) / 2)


def bk_output_cm(resource_eff: CovarianceMatrix) -> CovarianceMatrix:
    """Output of unit-gain teleportation of a coherent state; mode 1 sends, mode 2 receives."""
    if resource_eff.n_modes != 2:
        raise DimensionMismatch(f"expected a two-mode resource, got {resource_eff.n_modes} modes")
    alpha, beta, gamma = resource_eff.block(1, 1), resource_eff.block(2, 2), resource_eff.block(1, 2)
    out = np.eye(2) + _Z @ alpha @ _Z + beta - _Z @ gamma - gamma.T @ _Z
    return phasespace.covariance((out + out.T) / 2)


def fidelity_coherent(sigma_out: CovarianceMatrix) -> float:
    if sigma_out.n_modes != 1:
        raise DimensionMismatch("fidelity is defined on a single output mode")
    phasespace.require_physical(sigma_out)
    return float(2 / np.sqrt(np.linalg.det(np.eye(2) + sigma_out.matrix)))


def network_fidelity(cm: CovarianceMatrix, sender: int, receiver: int) -> float:
    if sender == receiver:
        raise IndexOutOfRange("sender and receiver must be different modes")
    for label in (sender, receiver):
        if not 1 <= label <= cm.n_modes:
            raise IndexOutOfRange(f"mode {label} outside 1..{cm.n_modes}")
    phasespace.require_physical(cm)
    labels = list(range(1, cm.n_modes + 1))
    state = cm
    # conditioned states inherit physicality from cm
    for assisting in [label for label in labels if label not in (sender, receiver)]:
        state = _condition(state, labels.index(assisting) + 1, "p")
        labels.remove(assisting)
    pair = phasespace.permute_modes(state, [labels.index(sender) + 1, labels.index(receiver) + 1])
    return fidelity_coherent(bk_output_cm(pair))


def network_fidelity_closed_form(n: int, r1: float, r2: float, noise: float = 1.0) -> float:
    """network_fidelity of the splitter resource, reduced algebraically."""
    if n < 2:
        raise DomainError(f"a network needs at least two parties, got {n}")
    noise_x = 2 * noise * math.exp(-2 * r2)
    noise_p = 2 * n * noise * math.exp(2 * (r2 - r1)) / (2 * math.exp(2 * r2) + (n - 2) * math.exp(-2 * r1))
    return 2 / math.sqrt((2 + noise_x) * (2 + noise_p))


def equal_squeezer_fidelity(n: int, r: float) -> float:
    """Fidelity of the unbiased resource r1 = r2 = r, which is not optimal for large n."""
    resource = build_resource(TeleportResourceSpec(n_parties=n, r1=r, r2=r))
    return network_fidelity(resource, 1, 2)


# ==================== Optimization ====================

def optimal_fidelity(n: int, r_bar: float, noise: float = 1.0) -> FidelityResult:
    """Best fidelity over the squeezing bias d = r1 - r2 at fixed mean r_bar.

    d ranges over [-2 r_bar, 2 r_bar] so that r1 and r2 stay non-negative.
    A coarse scan brackets the maximum and golden-section search refines it.
    """
    if r_bar < 0 or n < 2:
        raise DomainError(f"need r_bar >= 0 and n >= 2, got r_bar={r_bar}, n={n}")
    settings = get_settings()

    def loss(d: float) -> float:
        return -network_fidelity_closed_form(n, r_bar + d / 2, r_bar - d / 2, noise)

    grid = np.linspace(-2 * r_bar, 2 * r_bar, settings.fidelity_scan_points)
    values = np.array([loss(d) for d in grid])
    i = int(np.argmin(values))
    bias = float(grid[i])
    if 0 < i < len(grid) - 1:
        # a maximum between two grid points ties them; the midpoint then brackets it
        middle = min((grid[i], (grid[i - 1] + grid[i]) / 2, (grid[i] + grid[i + 1]) / 2), key=loss)
        if loss(middle) < min(values[i - 1], values[i + 1]):
            result = optimize.minimize_scalar(
                loss,
                bracket=(grid[i - 1], middle, grid[i + 1]),
                method="golden",
                tol=settings.golden_tolerance,
            )
            bias = float(np.clip(result.x, -2 * r_bar, 2 * r_bar))
    elif r_bar > 0 and values[i] < values[i + 1 if i == 0 else i - 1]:
        raise OptimizerFailure(
            f"fidelity maximum sits on the bias boundary d={bias:.6g}",
            best_value=-float(values[i]),
            converged=False,
        )

    resource = build_resource(TeleportResourceSpec(
        n_parties=n, r1=r_bar + bias / 2, r2=max(r_bar - bias / 2, 0.0), noise=noise
    ))
    fidelity = network_fidelity(resource, 1, 2)
    logger.debug("n=%d r_bar=%.6g: bias %.9g, fidelity %.12g (scan %.12g)", n, r_bar, bias, fidelity, -values[i])
    return FidelityResult(
        fidelity=fidelity,
        e_t=entanglement_of_teleportation(fidelity),
        optimal_bias=bias,
        n_parties=n,
        r_bar=r_bar,
        noise=noise,
    )


def fidelity_sweep(parties_max: int, r_bar: float, noise: float = 1.0) -> list[SweepRow]:
    rows = []
    for n in range(2, parties_max + 1):
        best = optimal_fidelity(n, r_bar, noise)
        rows.append(SweepRow(
            n=n,
            fidelity_opt=best.fidelity,
            e_t=best.e_t,
            fidelity_equal=network_fidelity_closed_form(n, r_bar, r_bar, noise),
        ))
    return rows


# ==================== Entanglement of teleportation ====================

def entanglement_of_teleportation(f_opt: float) -> float:
    if not 0 < f_opt <= 1 + 1e-12:
        raise DomainError(f"fidelity {f_opt} outside (0, 1]")
    return min(1.0, max(0.0, (f_opt - CLASSICAL_FIDELITY) / (1 - CLASSICAL_FIDELITY)))


def _check_e_t(e_t: float) -> None:
    if not 0 <= e_t <= MAX_E_T:
        raise DomainError(f"E_T = {e_t} outside [0, 1)")


def localizable_eof_from_et(e_t: float) -> float:
    """Entanglement of formation localizable on a pair, from E_T."""
    _check_e_t(e_t)
    return twomode.eof_function((1 - e_t) / (1 + e_t))


def tripartite_contangle_from_et(e_t: float) -> float:
    """Residual contangle of the pure three-mode resource with the given E_T."""
    _check_e_t(e_t)
    spread = math.sqrt(e_t * (e_t + 4) + 1)
    first = (2 * math.sqrt(2) * e_t - (e_t + 1) * math.sqrt(e_t ** 2 + 1)) / ((e_t - 1) * spread)
    second = (e_t ** 2 + 1) / spread ** 2
    return max(0.0, math.log(first) ** 2 - 0.5 * math.log(second) ** 2)
