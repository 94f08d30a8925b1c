"""Dense symmetric eigendecomposition and the dual rank-one trick.

The sample covariance of a d x n data matrix X is Sigma_hat = (1/n) X X^T.
For d >> n it is never formed here: the dual matrix S = (1/n) X^T X is only
n x n and shares the non-zero spectrum, and the leading left vector is
recovered as X v1 where v1 is the leading dual eigenvector.

The eigensolver is a cyclic Jacobi rotation scheme.  It is slower than
LAPACK but fully deterministic (fixed rotation order, no threading), which
keeps every downstream Monte-Carlo output bit-reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import DegenerateInputError, DimensionError, NumericError

# Off-diagonal Frobenius-norm target, relative to ||m||_F.
JACOBI_REL_TOL = 1e-14
JACOBI_MAX_SWEEPS = 100

# Relative eigengap below which the leading dual eigenvector is flagged
# as ambiguous (multiple leading eigenvalue).
AMBIGUITY_REL_GAP = 1e-12


@dataclass(frozen=True)
class EigenPair:
    """One (eigenvalue, unit eigenvector) pair, sign-canonicalized."""

    value: float
    vector: np.ndarray


@dataclass(frozen=True)
class DualComponent:
    """Leading dual eigenvector and its lift back to d dimensions.

    Attributes
    ----------
    v1 : (n,) ndarray
        Leading unit eigenvector of S = (1/n) X^T X.
    u_tilde : (d,) ndarray
        X @ v1, the unnormalized leading left vector.  Normalizing it gives
        the leading eigenvector of the d x d sample covariance.
    value : float
        Leading eigenvalue of S.
    ambiguous : bool
        True when the top dual eigengap is below ``AMBIGUITY_REL_GAP``
        (relative); v1 is still returned under a deterministic tie-break
        (canonical sign, then lowest index).
    """

    v1: np.ndarray
    u_tilde: np.ndarray
    value: float
    ambiguous: bool


def canonical_sign(v: np.ndarray) -> np.ndarray:
    """Flip ``v`` so its largest-|entry| coordinate is non-negative.

    Ties are broken toward the lowest index (argmax behaviour).  The input
    is returned unchanged when already canonical.
    """
    i = int(np.argmax(np.abs(v)))
    if v[i] < 0:
        return -v
    return v


def _check_symmetric_input(m: np.ndarray) -> np.ndarray:
    a = np.asarray(m, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {a.shape}")
    if a.shape[0] < 1:
        raise DimensionError("matrix order must be >= 1")
    if not np.isfinite(a).all():
        raise NumericError("matrix contains non-finite entries")
    if not np.array_equal(a, a.T):
        raise NumericError("matrix must be exactly symmetric")
    return a


def jacobi_eigh(
    m: np.ndarray,
    rel_tol: float = JACOBI_REL_TOL,
    max_sweeps: int = JACOBI_MAX_SWEEPS,
) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic Jacobi eigendecomposition of a symmetric matrix.

    Sweeps row-major over the strict upper triangle, rotating away every
    entry above a small threshold, until the off-diagonal Frobenius norm
    drops below ``rel_tol * ||m||_F``.

    Returns
    -------
    values : (n,) ndarray
        Eigenvalues in descending order (stable order under exact ties).
    vectors : (n, n) ndarray
        Matching unit eigenvectors as columns, sign-canonicalized.
    """
    a = _check_symmetric_input(m).copy()
    n = a.shape[0]
    v = np.eye(n)
    fro = float(np.linalg.norm(a, "fro"))
    target = rel_tol * fro
    # Entries individually below target/n cannot keep the off-norm above
    # target, so they are safe to skip within a sweep.
    skip = target / n if n else 0.0

    if n > 1 and fro > 0.0:
        iu = np.triu_indices(n, k=1)
        for _ in range(max_sweeps):
            # Summed directly (not total - diagonal) to avoid cancellation.
            off2 = 2.0 * float(np.sum(np.square(a[iu])))
            if math.sqrt(off2) <= target:
                break
            for p in range(n - 1):
                for q in range(p + 1, n):
                    apq = a[p, q]
                    if abs(apq) <= skip:
                        continue
                    app = a[p, p]
                    aqq = a[q, q]
                    tau = (aqq - app) / (2.0 * apq)
                    if tau >= 0.0:
                        t = 1.0 / (tau + math.sqrt(1.0 + tau * tau))
                    else:
                        t = -1.0 / (-tau + math.sqrt(1.0 + tau * tau))
                    c = 1.0 / math.sqrt(1.0 + t * t)
                    s = t * c

                    cp = a[:, p].copy()
                    cq = a[:, q].copy()
                    a[:, p] = c * cp - s * cq
                    a[:, q] = s * cp + c * cq
                    rp = a[p, :].copy()
                    rq = a[q, :].copy()
                    a[p, :] = c * rp - s * rq
                    a[q, :] = s * rp + c * rq
                    # Exact 2x2 block values; cheaper and more accurate
                    # than the rotated entries.
                    a[p, p] = app - t * apq
                    a[q, q] = aqq + t * apq
                    a[p, q] = 0.0
                    a[q, p] = 0.0

                    vp = v[:, p].copy()
                    vq = v[:, q].copy()
                    v[:, p] = c * vp - s * vq
                    v[:, q] = s * vp + c * vq

    values = np.diag(a).copy()
    order = np.argsort(-values, kind="stable")
    values = values[order]
    vectors = v[:, order]
    for j in range(n):
        vectors[:, j] = canonical_sign(vectors[:, j])
    return values, vectors


def sym_eigen(m: np.ndarray) -> list[EigenPair]:
    """Full eigendecomposition as a descending list of ``EigenPair``."""
    values, vectors = jacobi_eigh(m)
    return [EigenPair(float(values[j]), vectors[:, j].copy()) for j in range(len(values))]


def dual_first_component(x: np.ndarray) -> DualComponent:
    """Leading PC direction of a d x n matrix via the n x n dual matrix.

    Forms S = (1/n) X^T X (symmetrized exactly), extracts its leading
    eigenpair with the Jacobi solver, and lifts the eigenvector back as
    u_tilde = X v1.

    Raises
    ------
    DimensionError
        If ``x`` is not a 2-d array.
    NumericError
        If ``x`` has non-finite entries.
    DegenerateInputError
        If ``x`` is identically zero.
    """
    a = np.asarray(x, dtype=float)
    if a.ndim != 2:
        raise DimensionError(f"expected a 2-d data matrix, got shape {a.shape}")
    if a.shape[0] < 1 or a.shape[1] < 1:
        raise DimensionError("data matrix must have at least one row and column")
    if not np.isfinite(a).all():
        raise NumericError("data matrix contains non-finite entries")
    if not a.any():
        raise DegenerateInputError("data matrix is identically zero")

    n = a.shape[1]
    g = a.T @ a
    s = (g + g.T) / (2.0 * n)
    values, vectors = jacobi_eigh(s)
    v1 = vectors[:, 0].copy()
    lead = float(values[0])
    ambiguous = False
    if n > 1:
        gap = lead - float(values[1])
        ambiguous = gap <= AMBIGUITY_REL_GAP * abs(lead)
    u_tilde = a @ v1
    return DualComponent(v1=v1, u_tilde=u_tilde, value=lead, ambiguous=ambiguous)
