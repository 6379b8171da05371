"""Contangle and the sharing of entanglement among Gaussian modes.

The contangle of a pure state is the squared log-negativity of a one-vs-rest
split. Mixed states use the Gaussian roof G_tau: the smallest contangle of a
pure Gaussian state sigma^p with sigma^p <= sigma.
"""

import logging
from typing import Callable, Iterable, Literal, Optional

import numpy as np
from scipy import optimize

from gaussent.config import get_settings
from gaussent.exceptions import DimensionMismatch, IndexOutOfRange, NotBisymmetric, NotPure, OptimizerFailure
from gaussent.multimode import service as multimode
from gaussent.multimode.schemas import GhzTypeSpec
from gaussent.phasespace import service as phasespace
from gaussent.phasespace.schemas import Bipartition, CovarianceMatrix
from gaussent.sharing.schemas import (
    ContangleValue,
    MonogamyReport,
    PromiscuityReport,
    ResidualContangle,
)
from gaussent.twomode import service as twomode

logger = logging.getLogger(__name__)

PPT_TOLERANCE = 1e-12
MAX_CORRELATION = 1 - 1e-15
MONOGAMY_TOLERANCE = 1e-6

_SIMPLEX_OPTIONS = {"xatol": 1e-10, "fatol": 1e-14, "maxiter": 4000}
_POLISH_SIMPLEX_OPTIONS = {"xatol": 1e-8, "fatol": 1e-14, "maxfev": 6000, "adaptive": True}
_POWELL_OPTIONS = {"xtol": 1e-10, "ftol": 1e-15, "maxfev": 6000}


def _rng(seed: Optional[int]) -> np.random.Generator:
    return np.random.default_rng(get_settings().seed if seed is None else seed)


def _multistart(
    objective: Callable, starts: Iterable[np.ndarray], label: str, polish: bool = False
) -> tuple[float, bool, int]:
    """Run Nelder-Mead from every start; (best, restarts agree, number of runs).

    With ``polish`` the simplex is adaptive and each run ends with a Powell search.
    """
    agreement = get_settings().roof_agreement
    options = _POLISH_SIMPLEX_OPTIONS if polish else _SIMPLEX_OPTIONS
    values = []
    for x0 in starts:
        result = optimize.minimize(objective, x0, method="Nelder-Mead", options=options)
        found = min(float(result.fun), float(objective(x0)))
        if polish:
            refined = optimize.minimize(objective, result.x, method="Powell", options=_POWELL_OPTIONS)
            found = min(found, float(refined.fun))
        values.append(found)
    finite = sorted(v for v in values if np.isfinite(v))
    if not finite:
        raise OptimizerFailure(f"{label}: no feasible value found", best_value=None, converged=False)
    best = finite[0]
    runner_up = finite[1] if len(finite) > 1 else best
    converged = len(finite) > 1 and runner_up - best <= agreement
    logger.debug("%s: best %.12g, runner-up %.12g, %d restarts", label, best, runner_up, len(values))
    if not converged:
        logger.warning("%s: restarts disagree beyond %.1e (best %.12g)", label, agreement, best)
    return best, converged, len(values)


# ==================== Pure states ====================

def _contangle_from_mixedness(inverse_purity: float) -> float:
    # log(1/mu - sqrt(1/mu^2 - 1)) = -arccosh(1/mu)
    return float(np.arccosh(max(inverse_purity, 1.0)) ** 2)


def contangle_pure_1_vs_rest(cm: CovarianceMatrix, i: int) -> ContangleValue:
    phasespace.require_physical(cm)
    if not phasespace.is_pure(cm):
        raise NotPure("one-vs-rest contangle in closed form needs a pure state")
    mu_local = phasespace.purity(phasespace.partial_trace(cm, [i]))
    return ContangleValue(value=_contangle_from_mixedness(1 / mu_local), method="analytic-pure")


# ==================== Two-mode Gaussian roof ====================

def _roof_matrices(phi, t1, t2, p_inv: np.ndarray, d_root: np.ndarray) -> np.ndarray:
    """x-blocks X_p = P^-1 + D^1/2 K D^1/2 of pure states between P^-1 and X."""
    c, s = np.cos(phi), np.sin(phi)
    l1, l2 = np.sin(t1) ** 2, np.sin(t2) ** 2
    k01 = c * s * (l1 - l2)
    k = np.stack([
        np.stack([c * c * l1 + s * s * l2, k01], axis=-1),
        np.stack([k01, s * s * l1 + c * c * l2], axis=-1),
    ], axis=-2)
    return p_inv + d_root @ k @ d_root


def _roof_objective(x_p: np.ndarray) -> np.ndarray:
    rho = x_p[..., 0, 1] / np.sqrt(x_p[..., 0, 0] * x_p[..., 1, 1])
    return np.arctanh(np.clip(np.abs(rho), 0.0, MAX_CORRELATION)) ** 2


def _psd_root(matrix: np.ndarray) -> np.ndarray:
    weights, vectors = np.linalg.eigh((matrix + matrix.T) / 2)
    return (vectors * np.sqrt(np.clip(weights, 0.0, None))) @ vectors.T


def gaussian_contangle_two_mode(cm: CovarianceMatrix, seed: Optional[int] = None) -> ContangleValue:
    """G_tau of a two-mode state.

    In the standard form the x and p blocks are X = [[a, c+], [c+, b]] and
    P = [[a, c-], [c-, b]]. The pure states searched have x block X_p and p
    block X_p^-1 with P^-1 <= X_p <= X, which keeps sigma^p <= sigma; their
    contangle is artanh^2 of the correlation coefficient of X_p.
    """
    if cm.n_modes != 2:
        raise DimensionMismatch(f"expected a two-mode state, got {cm.n_modes} modes")
    phasespace.require_physical(cm)
    if phasespace.is_pure(cm):
        return contangle_pure_1_vs_rest(cm, 1)

    inv = twomode.invariants_from_cm(cm)
    if twomode.ppt_eigenvalues(inv).nu_tilde_minus >= 1 - PPT_TOLERANCE:
        return ContangleValue(value=0.0, method="exact-zero")

    settings = get_settings()
    sf = twomode.standard_form_from_invariants(inv)
    x_block = np.array([[sf.a, sf.c_plus], [sf.c_plus, sf.b]])
    p_inv = np.linalg.inv(np.array([[sf.a, sf.c_minus], [sf.c_minus, sf.b]]))
    d_root = _psd_root(x_block - p_inv)

    points = settings.roof_grid_points
    axes = (
        np.linspace(0, np.pi, points, endpoint=False),
        np.linspace(0, np.pi / 2, points),
        np.linspace(0, np.pi / 2, points),
    )
    grid = np.meshgrid(*axes, indexing="ij")
    values = _roof_objective(_roof_matrices(*grid, p_inv, d_root))
    best = np.unravel_index(np.argmin(values), values.shape)
    rng = _rng(seed)
    starts = [np.array([axis[k] for axis, k in zip(axes, best)])]
    starts += [rng.uniform([0, 0, 0], [np.pi, np.pi / 2, np.pi / 2]) for _ in range(settings.roof_restarts - 1)]

    def objective(params: np.ndarray) -> float:
        return float(_roof_objective(_roof_matrices(*params, p_inv, d_root)))

    value, converged, runs = _multistart(objective, starts, "two-mode roof")
    return ContangleValue(value=value, method="gaussian-roof-numeric", converged=converged, restarts=runs)


# ==================== One-vs-rest ====================

def _generator(params: np.ndarray, m: int) -> np.ndarray:
    """Symmetric H with H Omega + Omega H = 0 on m modes (xpxp), so exp(H) is a pure CM.

    In xxpp order H = [[A, B], [B, -A]]. Off-diagonal entries of A and B carry
    1/sqrt(2), which makes |params| = ||H||_F / sqrt(2).
    """
    upper = np.triu_indices(m)
    weight = np.where(upper[0] == upper[1], 1.0, np.sqrt(0.5))
    half = len(weight)
    a, b = np.zeros((m, m)), np.zeros((m, m))
    a[upper], b[upper] = params[:half] * weight, params[half:] * weight
    a, b = a + np.triu(a, 1).T, b + np.triu(b, 1).T
    order = [q for i in range(m) for q in (i, m + i)]
    return np.block([[a, b], [b, -a]])[np.ix_(order, order)]


def _boundary_radius(h: np.ndarray, vectors: np.ndarray, inv_root_nu: np.ndarray) -> float:
    """Largest s with exp(s u) <= diag(nu), for the unit direction u = V diag(h) V^T.

    The admissible s form an interval [0, R] and log lambda_max is convex in s,
    so the excess crosses zero once.
    """
    scaled = inv_root_nu[:, None] * vectors

    def excess(s: float) -> float:
        return float(np.linalg.eigvalsh((scaled * np.exp(s * h)) @ scaled.T)[-1]) - 1.0

    upper = (1.0 - 2 * np.log(float(np.min(inv_root_nu)))) / float(np.max(h))
    return optimize.brentq(excess, 0.0, upper, xtol=1e-14)


def gaussian_roof_one_vs_rest(cm: CovarianceMatrix, focus: int, seed: Optional[int] = None) -> ContangleValue:
    """Numeric G_tau of ``focus`` against the other modes, for any mixed state.

    With sigma = S diag(nu) S^T, the pure states below sigma are S E S^T with E
    pure and E <= diag(nu). A mode with nu = 1 forces E to be vacuum there. On
    the m mixed modes E = exp(H), and each search point p is mapped to
    H = sin^2|p| R(p^) p^, R the boundary radius along p^, so every point is
    feasible and |p| = pi/2 reaches the boundary. The start list holds the pure
    part of the Williamson form (H = 0), the best boundary point along the
    coordinate axes, and seeded random points.
    """
    phasespace.require_physical(cm)
    if not 1 <= focus <= cm.n_modes:
        raise IndexOutOfRange(f"focus mode {focus} outside 1..{cm.n_modes}")
    decomposition = phasespace.williamson(cm)
    s = decomposition.s.matrix
    nu = np.asarray(decomposition.nu.values)
    mixed = np.flatnonzero(nu - 1 > phasespace.spectral_slack(cm.matrix, phasespace.PURE_TOLERANCE))
    if mixed.size == 0:
        return contangle_pure_1_vs_rest(cm, focus)

    m = mixed.size
    mixed_idx = [q for k in mixed for q in (2 * k, 2 * k + 1)]
    rows = s[[2 * (focus - 1), 2 * (focus - 1) + 1]]
    pure_rows, mixed_rows = np.delete(rows, mixed_idx, axis=1), rows[:, mixed_idx]
    base = pure_rows @ pure_rows.T
    inv_root_nu = np.repeat(nu[mixed], 2) ** -0.5

    def objective(params: np.ndarray) -> float:
        radius = float(np.linalg.norm(params))
        local = base + mixed_rows @ mixed_rows.T
        if radius > 0:
            h, vectors = np.linalg.eigh(_generator(params / radius, m))
            scale = np.sin(radius) ** 2 * _boundary_radius(h, vectors, inv_root_nu)
            projected = mixed_rows @ vectors
            local = base + (projected * np.exp(scale * h)) @ projected.T
        return float(np.arccosh(max(np.sqrt(np.linalg.det(local)), 1.0)) ** 2)

    size = m * (m + 1)
    axes = [sign * np.pi / 2 * np.eye(size)[k] for k in range(size) for sign in (1.0, -1.0)]
    rng = _rng(seed)
    starts = [np.zeros(size), min(axes, key=objective)]
    for _ in range(max(get_settings().roof_restarts - 2, 0)):
        direction = rng.standard_normal(size)
        starts.append(rng.uniform(0, np.pi / 2) * direction / np.linalg.norm(direction))

    value, converged, runs = _multistart(objective, starts, f"{cm.n_modes}-mode roof", polish=True)
    return ContangleValue(value=value, method="gaussian-roof-numeric", converged=converged, restarts=runs)


def contangle_one_vs_rest(cm: CovarianceMatrix, focus: int, seed: Optional[int] = None) -> ContangleValue:
    """Contangle of mode ``focus`` against all the other modes.

    Pure states use the closed form. Mixed states symmetric under exchange of
    the other modes are localized onto a two-mode pair first, which leaves G_tau
    unchanged; any other mixed state goes to :func:`gaussian_roof_one_vs_rest`.
    """
    phasespace.require_physical(cm)
    if cm.n_modes < 2:
        raise DimensionMismatch("one-vs-rest contangle needs at least two modes")
    if phasespace.is_pure(cm):
        return contangle_pure_1_vs_rest(cm, focus)
    order = [focus] + [label for label in range(1, cm.n_modes + 1) if label != focus]
    reordered = phasespace.permute_modes(cm, order)
    if cm.n_modes == 2:
        return gaussian_contangle_two_mode(reordered, seed)
    try:
        localized = multimode.unitary_localization(reordered, 1)
    except NotBisymmetric:
        logger.info("mode %d has no symmetric partners; using the N-mode roof", focus)
        return gaussian_roof_one_vs_rest(cm, focus, seed)
    value = gaussian_contangle_two_mode(localized.eq_two_mode, seed)
    method = "localized" if value.method == "gaussian-roof-numeric" else value.method
    return value.model_copy(update={"method": method})


# ==================== Monogamy ====================

def monogamy_check(cm: CovarianceMatrix, focus: int, seed: Optional[int] = None) -> MonogamyReport:
    if cm.n_modes < 3:
        raise DimensionMismatch(f"monogamy needs at least three modes, got {cm.n_modes}")
    one_vs_rest = contangle_one_vs_rest(cm, focus, seed)
    partners = [label for label in range(1, cm.n_modes + 1) if label != focus]
    pairwise = [
        gaussian_contangle_two_mode(phasespace.partial_trace(cm, [focus, partner]), seed)
        for partner in partners
    ]
    residual = one_vs_rest.value - sum(p.value for p in pairwise)
    if residual < -MONOGAMY_TOLERANCE:
        logger.warning("mode %d: sharing residual %.3e is negative", focus, residual)
    return MonogamyReport(
        focus_mode=focus,
        one_vs_rest=one_vs_rest,
        partners=partners,
        pairwise=pairwise,
        residual=residual,
    )


def residual_contangle(cm: CovarianceMatrix, seed: Optional[int] = None) -> ResidualContangle:
    """Genuine tripartite contangle: the smallest residual over the three focus modes."""
    if cm.n_modes != 3:
        raise DimensionMismatch(f"residual contangle needs three modes, got {cm.n_modes}")
    reports = [monogamy_check(cm, focus, seed) for focus in (1, 2, 3)]
    return ResidualContangle(per_focus=reports, minimum=min(r.residual for r in reports))


def promiscuity_report(b: float, seed: Optional[int] = None) -> PromiscuityReport:
    """Pairwise and residual contangle of the three-mode GHZ-type state with mixedness b."""
    cm = multimode.ghz_type_state(GhzTypeSpec(n_modes=3, local_mixedness=b))
    pair = gaussian_contangle_two_mode(phasespace.partial_trace(cm, [1, 2]), seed)
    residual = residual_contangle(cm, seed)
    return PromiscuityReport(b=b, pairwise_contangle=pair.value, residual=residual.minimum)


def monogamy_violation(b: float, measure: Literal["log_negativity", "eof"] = "log_negativity") -> float:
    """Residual of the three-mode GHZ-type state with E_N or E_F in place of the contangle.

    Negative values mean the sharing inequality fails for that measure.
    """
    cm = multimode.ghz_type_state(GhzTypeSpec(n_modes=3, local_mixedness=b))
    if measure == "log_negativity":
        whole = phasespace.log_negativity(cm, Bipartition.split(3, {1}))
        pairs = [
            phasespace.log_negativity(phasespace.partial_trace(cm, [1, k]), Bipartition.split(2, {1}))
            for k in (2, 3)
        ]
    elif measure == "eof":
        # pure state: E_F of 1|(23) is the entropy of mode 1
        whole = phasespace.entropy(phasespace.partial_trace(cm, [1]))
        pairs = [twomode.eof_symmetric(phasespace.partial_trace(cm, [1, k])) for k in (2, 3)]
    else:
        raise ValueError(f"unknown measure {measure!r}")
    return whole - sum(pairs)
