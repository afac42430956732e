"""Dense complex linear-algebra contracts shared by all precoders."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ToleranceParams:
    """Numerical cutoffs: rank_rtol for singular-value truncation (relative to
    the largest singular value), residual_tol for cancellation checks."""

    rank_rtol: float = 1e-12
    residual_tol: float = 1e-9

    def __post_init__(self) -> None:
        for name in ("rank_rtol", "residual_tol"):
            value = getattr(self, name)
            if not 0.0 < value < 1.0:
                raise ValueError(f"{name} must be in (0, 1), got {value}")


DEFAULT_TOL = ToleranceParams()


def pseudo_inverse(a: np.ndarray, tol: ToleranceParams = DEFAULT_TOL) -> np.ndarray:
    """Moore-Penrose pseudo-inverse with singular values below
    rank_rtol * sigma_max treated as zero. An empty (0, M) input is legal and
    yields an (M, 0) result."""
    a = np.asarray(a)
    if a.ndim != 2:
        raise ValueError("expected a 2-D matrix")
    if a.size and not np.all(np.isfinite(a)):
        raise ValueError("matrix contains non-finite entries")
    if a.shape[0] == 0 or a.shape[1] == 0:
        return np.zeros((a.shape[1], a.shape[0]), dtype=a.dtype)
    return np.linalg.pinv(a, rcond=tol.rank_rtol)


def rowspace_projector(h_tilde: np.ndarray, tol: ToleranceParams = DEFAULT_TOL) -> np.ndarray:
    """Hermitian idempotent projector onto the row space of a (K, M) matrix;
    K = 0 yields the zero matrix."""
    h_tilde = np.asarray(h_tilde)
    if h_tilde.ndim != 2:
        raise ValueError("expected a 2-D matrix")
    m = h_tilde.shape[1]
    if h_tilde.shape[0] == 0:
        return np.zeros((m, m), dtype=complex)
    return pseudo_inverse(h_tilde, tol) @ h_tilde


def nullspace_project(
    h_tilde: np.ndarray, h: np.ndarray, tol: ToleranceParams = DEFAULT_TOL
) -> np.ndarray:
    """Project h onto the null space of a (K, M) matrix; K = 0 returns h.

    Forms the full M x M row-space projector rather than applying the cheaper
    pinv(H)(H h) factorization: the classical-precoder cost model assumed by
    the scaling benchmarks is quadratic in M.
    """
    h = np.asarray(h)
    h_tilde = np.asarray(h_tilde)
    if h_tilde.ndim != 2 or h.ndim != 1:
        raise ValueError("expected a (K, M) matrix and a length-M vector")
    if h_tilde.shape[1] != h.shape[0]:
        raise ValueError(
            f"dimension mismatch: matrix has {h_tilde.shape[1]} columns,"
            f" vector has {h.shape[0]} entries"
        )
    if h_tilde.shape[0] == 0:
        return h.astype(complex, copy=True)
    projector = rowspace_projector(h_tilde, tol)
    return h - projector @ h


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product of two vectors; entry i*len(b)+j is a[i]*b[j], so
    kron(h_v, h_h) matches the channel stacking n*m_h + m."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.ndim != 1 or b.ndim != 1:
        raise ValueError("expected 1-D vectors")
    return np.kron(a, b)
