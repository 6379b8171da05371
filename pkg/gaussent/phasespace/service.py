"""Covariance-matrix algebra for N-mode Gaussian states.

Conventions
-----------
* Quadratures are ordered mode-major, ``(x1, p1, x2, p2, ...)``.
* The vacuum has covariance matrix equal to the identity, so physical states
  have every symplectic eigenvalue ``nu_i >= 1``.
* Mode labels in the public API are 1-based.
* :func:`williamson` returns ``S`` with ``sigma = S diag(nu) S^T``. Literature
  that writes ``sigma = S^T nu S`` uses the transpose of our ``S``.
"""

import logging
from typing import Iterable, Literal, Sequence

import numpy as np
from scipy import linalg
from scipy.special import xlogy

from gaussent.exceptions import (
    DegenerateNumerics,
    DimensionMismatch,
    DomainError,
    EmptyKeepSet,
    IndexOutOfRange,
    NonFinite,
    NotPositiveDefinite,
    NotSymmetric,
    Unphysical,
)
from gaussent.phasespace.schemas import (
    SYMPLECTIC_TOLERANCE,
    Bipartition,
    CovarianceMatrix,
    SymplecticFormMatrix,
    SymplecticSpectrum,
    SymplecticTransform,
    ValidationReport,
    WilliamsonResult,
    symplectic_defect,
)

logger = logging.getLogger(__name__)

PHYSICAL_TOLERANCE = 1e-9
SYMMETRY_TOLERANCE = 1e-10
RECONSTRUCTION_TOLERANCE = 1e-7
PURE_TOLERANCE = 1e-7

OMEGA_1 = np.array([[0.0, 1.0], [-1.0, 0.0]])


# ==================== Basic matrices ====================

def omega(n: int) -> np.ndarray:
    return np.kron(np.eye(n), OMEGA_1)


def symplectic_form(n: int) -> SymplecticFormMatrix:
    return SymplecticFormMatrix(n_modes=n, matrix=omega(n))


def is_symmetric(matrix: np.ndarray, tol: float = SYMMETRY_TOLERANCE) -> bool:
    matrix = np.asarray(matrix)
    return bool(np.all(np.abs(matrix - matrix.T) <= tol * np.maximum(1.0, np.abs(matrix))))


def is_symplectic(matrix: np.ndarray, tol: float = SYMPLECTIC_TOLERANCE) -> bool:
    return symplectic_defect(np.asarray(matrix, dtype=float)) <= tol


def covariance(matrix, transposed: bool = False) -> CovarianceMatrix:
    return CovarianceMatrix.from_matrix(matrix, transposed=transposed)


def vacuum(n: int = 1) -> CovarianceMatrix:
    return covariance(np.eye(2 * n))


def thermal(nu: float, n: int = 1) -> CovarianceMatrix:
    """Product of n thermal states, each with symplectic eigenvalue nu."""
    return covariance(nu * np.eye(2 * n))


def two_mode_squeezed_vacuum(r: float) -> CovarianceMatrix:
    c, s = np.cosh(2 * r), np.sinh(2 * r)
    return covariance([
        [c, 0, s, 0],
        [0, c, 0, -s],
        [s, 0, c, 0],
        [0, -s, 0, c],
    ])


# ==================== Validation and spectra ====================

def _spectrum_values(matrix: np.ndarray) -> np.ndarray:
    n = matrix.shape[0] // 2
    try:
        weights, vectors = np.linalg.eigh((matrix + matrix.T) / 2)
        if weights[0] > 0 and is_symmetric(matrix):
            # i R Omega R is Hermitian, with R the square root of sigma
            root = (vectors * np.sqrt(weights)) @ vectors.T
            eigenvalues = np.linalg.eigvalsh(1j * (root @ omega(n) @ root))
        else:
            eigenvalues = np.linalg.eigvals(1j * omega(n) @ matrix)
    except np.linalg.LinAlgError as exc:
        raise DegenerateNumerics(f"eigensolver did not converge: {exc}") from exc
    moduli = np.sort(np.abs(eigenvalues))
    # moduli come in equal pairs
    return moduli.reshape(n, 2).mean(axis=1)


def spectral_slack(matrix: np.ndarray, floor: float = PHYSICAL_TOLERANCE) -> float:
    """Resolution of computed symplectic eigenvalues: floor, or 16 eps cond(sigma) if larger.

    Strongly squeezed states lose about eps cond(sigma) in absolute accuracy.
    """
    weights = np.linalg.eigvalsh((matrix + matrix.T) / 2)
    if weights[0] <= 0:
        return floor
    return max(floor, 16 * np.finfo(float).eps * float(weights[-1] / weights[0]))


def validate_cm(cm: CovarianceMatrix) -> ValidationReport:
    matrix = cm.matrix
    symmetric = is_symmetric(matrix)
    nu_min = float(_spectrum_values(matrix)[0])
    positive = symmetric and float(np.linalg.eigvalsh((matrix + matrix.T) / 2)[0]) > 0
    physical = positive and nu_min >= 1 - spectral_slack(matrix)
    return ValidationReport(symmetric=symmetric, physical=physical, nu_min=nu_min)


def require_physical(cm: CovarianceMatrix) -> None:
    report = validate_cm(cm)
    if not report.symmetric:
        raise Unphysical("covariance matrix is not symmetric", nu_min=report.nu_min)
    if not report.physical:
        raise Unphysical(
            f"smallest symplectic eigenvalue {report.nu_min:.12g} is below 1",
            nu_min=report.nu_min,
        )


def symplectic_spectrum(cm: CovarianceMatrix) -> SymplecticSpectrum:
    if not is_symmetric(cm.matrix):
        raise NotSymmetric("symplectic spectrum needs a symmetric matrix")
    values = _spectrum_values(cm.matrix)
    return SymplecticSpectrum(values=values.tolist(), transposed=cm.transposed)


def is_pure(cm: CovarianceMatrix, tol: float = PURE_TOLERANCE) -> bool:
    values = _spectrum_values(cm.matrix)
    return bool(np.all(np.abs(values - 1.0) <= spectral_slack(cm.matrix, tol)))


def purity(cm: CovarianceMatrix) -> float:
    """mu = (Det sigma)^(-1/2)."""
    require_physical(cm)
    _, logdet = np.linalg.slogdet(cm.matrix)
    return float(np.exp(-0.5 * logdet))


def invariant_delta(cm: CovarianceMatrix) -> float:
    """Sum of squared symplectic eigenvalues.

    For two modes the block formula Det alpha + Det beta + 2 Det gamma is used.
    """
    require_physical(cm)
    if cm.n_modes == 2:
        alpha, beta, gamma = cm.block(1, 1), cm.block(2, 2), cm.block(1, 2)
        return float(np.linalg.det(alpha) + np.linalg.det(beta) + 2 * np.linalg.det(gamma))
    return float(np.sum(_spectrum_values(cm.matrix) ** 2))


def entropy(cm: CovarianceMatrix) -> float:
    """Von Neumann entropy in nats."""
    require_physical(cm)
    nu = np.maximum(_spectrum_values(cm.matrix), 1.0)
    plus, minus = (nu + 1) / 2, (nu - 1) / 2
    return float(np.sum(xlogy(plus, plus) - xlogy(minus, minus)))


# ==================== Williamson decomposition ====================

def williamson(cm: CovarianceMatrix) -> WilliamsonResult:
    """Symplectic diagonalization sigma = S diag(nu1, nu1, ..., nuN, nuN) S^T.

    The antisymmetric matrix sigma^(-1/2) Omega sigma^(-1/2) is brought to real
    Schur form, whose 2x2 blocks carry 1/nu_i. Degenerate spectra make S
    non-unique; any S meeting the residual bound is returned.
    """
    require_physical(cm)
    sigma = cm.matrix
    n = cm.n_modes

    eigenvalues, eigenvectors = np.linalg.eigh(sigma)
    if eigenvalues[0] <= 0:
        raise NotPositiveDefinite(f"smallest eigenvalue {eigenvalues[0]:.3g} is not positive")
    root = (eigenvectors * np.sqrt(eigenvalues)) @ eigenvectors.T
    inv_root = (eigenvectors / np.sqrt(eigenvalues)) @ eigenvectors.T

    antisym = inv_root @ omega(n) @ inv_root
    antisym = (antisym - antisym.T) / 2
    try:
        schur_form, basis = linalg.schur(antisym, output="real")
    except (linalg.LinAlgError, ValueError) as exc:
        raise DegenerateNumerics(f"Schur decomposition failed: {exc}") from exc

    swap = np.array([[0.0, 1.0], [1.0, 0.0]])
    flips = []
    for i in range(n):
        flips.append(np.eye(2) if schur_form[2 * i, 2 * i + 1] > 0 else swap)
    perm = linalg.block_diag(*flips)
    basis = basis @ perm
    schur_form = perm @ schur_form @ perm

    d = np.array([
        (schur_form[2 * i, 2 * i + 1] - schur_form[2 * i + 1, 2 * i]) / 2 for i in range(n)
    ])
    if np.any(d <= 0):
        raise DegenerateNumerics("canonical form has a non-positive block")
    nu = 1.0 / d

    order = np.argsort(nu, kind="stable")
    columns = np.concatenate([[2 * i, 2 * i + 1] for i in order])
    basis = basis[:, columns]
    nu, d = nu[order], d[order]

    s = root @ basis @ np.diag(np.repeat(np.sqrt(d), 2))
    diag = np.diag(np.repeat(nu, 2))

    residual = float(np.max(np.abs(s @ diag @ s.T - sigma)))
    scale = float(np.max(np.abs(sigma)))
    logger.debug("williamson residual %.3e (scale %.3e)", residual, scale)
    if residual > RECONSTRUCTION_TOLERANCE * scale or not is_symplectic(s):
        raise DegenerateNumerics(f"reconstruction residual {residual:.3e} exceeds tolerance")

    return WilliamsonResult(
        s=SymplecticTransform(n_modes=n, matrix=s),
        nu=SymplecticSpectrum(values=nu.tolist()),
    )


# ==================== Transformations ====================

def apply_symplectic(cm: CovarianceMatrix, s: SymplecticTransform) -> CovarianceMatrix:
    if s.n_modes != cm.n_modes:
        raise DimensionMismatch(f"transform acts on {s.n_modes} modes, state has {cm.n_modes}")
    out = s.matrix @ cm.matrix @ s.matrix.T
    return covariance((out + out.T) / 2, transposed=cm.transposed)


def direct_sum(a: CovarianceMatrix, b: CovarianceMatrix) -> CovarianceMatrix:
    require_physical(a)
    require_physical(b)
    return covariance(linalg.block_diag(a.matrix, b.matrix))


def _check_labels(labels: Iterable[int], n_modes: int) -> list[int]:
    labels = sorted(set(int(label) for label in labels))
    bad = [label for label in labels if not 1 <= label <= n_modes]
    if bad:
        raise IndexOutOfRange(f"mode labels {bad} outside 1..{n_modes}")
    return labels


def _quadrature_indices(labels: Sequence[int]) -> list[int]:
    return [q for label in labels for q in (2 * (label - 1), 2 * (label - 1) + 1)]


def partial_trace(cm: CovarianceMatrix, keep: Iterable[int]) -> CovarianceMatrix:
    """Reduced state on the kept modes, in ascending label order."""
    keep = list(keep)
    if not keep:
        raise EmptyKeepSet("at least one mode must be kept")
    labels = _check_labels(keep, cm.n_modes)
    idx = _quadrature_indices(labels)
    return covariance(cm.matrix[np.ix_(idx, idx)], transposed=cm.transposed)


def permute_modes(cm: CovarianceMatrix, order: Sequence[int]) -> CovarianceMatrix:
    """Reorder modes so that new mode k is old mode order[k-1]."""
    if sorted(order) != list(range(1, cm.n_modes + 1)):
        raise IndexOutOfRange(f"{list(order)} is not a permutation of 1..{cm.n_modes}")
    idx = _quadrature_indices(order)
    return covariance(cm.matrix[np.ix_(idx, idx)], transposed=cm.transposed)


def partial_transpose(cm: CovarianceMatrix, side: Iterable[int]) -> CovarianceMatrix:
    """Mirror the p quadrature of every mode in ``side``.

    The result is flagged ``transposed`` and may be unphysical.
    """
    labels = _check_labels(side, cm.n_modes)
    if not labels or len(labels) == cm.n_modes:
        raise IndexOutOfRange("side must be a nonempty proper subset of the modes")
    signs = np.ones(2 * cm.n_modes)
    for label in labels:
        signs[2 * (label - 1) + 1] = -1.0
    return covariance(cm.matrix * np.outer(signs, signs), transposed=True)


def log_negativity(cm: CovarianceMatrix, bp: Bipartition) -> float:
    """E_N = sum over transposed eigenvalues below 1 of -ln(nu~), natural log."""
    require_physical(cm)
    covered = bp.side_a | bp.side_b
    if covered != set(range(1, cm.n_modes + 1)):
        raise IndexOutOfRange(f"bipartition covers {sorted(covered)}, state has {cm.n_modes} modes")
    nu_tilde = _spectrum_values(partial_transpose(cm, bp.side_b).matrix)
    below = nu_tilde[nu_tilde < 1]
    return float(max(0.0, -np.sum(np.log(below))))


def transposed_spectrum(cm: CovarianceMatrix, bp: Bipartition) -> SymplecticSpectrum:
    return symplectic_spectrum(partial_transpose(cm, bp.side_b))


# ==================== Elementary optical transforms ====================

def _finite(*values: float) -> None:
    if not all(np.isfinite(v) for v in values):
        raise NonFinite(f"non-finite parameter in {values}")


def make_squeezer(r: float, kind: Literal["x", "p"] = "x") -> SymplecticTransform:
    """Single-mode squeezer; kind "x" reduces the x variance to e^(-2r)."""
    _finite(r)
    if kind not in ("x", "p"):
        raise DomainError(f"unknown squeezer kind {kind!r}")
    sign = -1.0 if kind == "x" else 1.0
    return SymplecticTransform(n_modes=1, matrix=np.diag([np.exp(sign * r), np.exp(-sign * r)]))


def make_phase_rotation(theta: float) -> SymplecticTransform:
    _finite(theta)
    c, s = np.cos(theta), np.sin(theta)
    return SymplecticTransform(n_modes=1, matrix=np.array([[c, s], [-s, c]]))


def make_beam_splitter(theta: float, i: int, j: int, n: int) -> SymplecticTransform:
    """Rotation by theta mixing modes i and j, identical on the x and p planes."""
    _finite(theta)
    if i == j or not (1 <= i <= n and 1 <= j <= n):
        raise IndexOutOfRange(f"beam splitter needs two distinct modes in 1..{n}, got {i}, {j}")
    c, s = np.cos(theta), np.sin(theta)
    u = np.eye(n)
    u[i - 1, i - 1], u[i - 1, j - 1] = c, -s
    u[j - 1, i - 1], u[j - 1, j - 1] = s, c
    return passive(u)


def passive(u: np.ndarray) -> SymplecticTransform:
    """Orthogonal mode mixing ``u`` acting identically on x and p."""
    u = np.asarray(u, dtype=float)
    return SymplecticTransform(n_modes=u.shape[0], matrix=np.kron(u, np.eye(2)))


def embed(s: SymplecticTransform, modes: Sequence[int], n: int) -> SymplecticTransform:
    """Act with ``s`` on the listed modes of an n-mode system, identity elsewhere."""
    if len(modes) != s.n_modes:
        raise DimensionMismatch(f"transform acts on {s.n_modes} modes, {len(modes)} given")
    labels = _check_labels(modes, n)
    if len(labels) != len(modes):
        raise IndexOutOfRange(f"repeated mode labels in {list(modes)}")
    idx = _quadrature_indices(list(modes))
    out = np.eye(2 * n)
    out[np.ix_(idx, idx)] = s.matrix
    return SymplecticTransform(n_modes=n, matrix=out)


def local_transform(*parts: SymplecticTransform) -> SymplecticTransform:
    """Direct sum of transforms acting on consecutive groups of modes."""
    return SymplecticTransform(
        n_modes=sum(p.n_modes for p in parts),
        matrix=linalg.block_diag(*(p.matrix for p in parts)),
    )


def compose(*transforms: SymplecticTransform) -> SymplecticTransform:
    """Product S_1 S_2 ... S_k, so S_k acts first."""
    out = transforms[0].matrix
    for t in transforms[1:]:
        if t.n_modes != transforms[0].n_modes:
            raise DimensionMismatch("cannot compose transforms on different mode counts")
        out = out @ t.matrix
    return SymplecticTransform(n_modes=transforms[0].n_modes, matrix=out)


def squeezed_vacuum(r: float, kind: Literal["x", "p"] = "x") -> CovarianceMatrix:
    return apply_symplectic(vacuum(1), make_squeezer(r, kind))
