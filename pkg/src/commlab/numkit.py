"""Dense complex matrix kernel.

Commutators, Hilbert-Schmidt and trace norms, Hermitian eigendecomposition,
re-orthogonalized Gram-Schmidt and unitarity checks.  Everything downstream
builds on these routines.  Scalars are double-precision complex throughout;
there is no arbitrary-precision path.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

# Shared rejection / verification tolerance; matches the residual scale of
# the eigendecomposition at desk-scale dimensions.
DEFAULT_TOL = 1e-10

# Relative Hermitian-defect tolerance used by all Hermitian preconditions.
HERMITIAN_RTOL = 1e-9


class ShapeError(ValueError):
    """Operand shapes do not match the operation's requirements."""


class DomainError(ValueError):
    """Input violates a mathematical precondition (trace, symmetry, range)."""


class NumericError(RuntimeError):
    """A numerical kernel failed to converge."""


class VerificationError(RuntimeError):
    """A construction identity or certified check failed its tolerance."""


def as_matrix(a) -> np.ndarray:
    """Coerce to a finite 2-d complex128 array."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise ShapeError(f"expected a matrix, got array of ndim {m.ndim}")
    if not np.isfinite(m).all():
        raise DomainError("matrix contains non-finite entries")
    return m


def as_square(a) -> np.ndarray:
    m = as_matrix(a)
    if m.shape[0] != m.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {m.shape}")
    return m


def commutator(a, b) -> np.ndarray:
    """[A, B] = AB - BA for square matrices of equal dimension."""
    a = as_square(a)
    b = as_square(b)
    if a.shape != b.shape:
        raise ShapeError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return a @ b - b @ a


def self_commutator(y) -> np.ndarray:
    """[Y*, Y] = Y*Y - YY*; Hermitian and trace-free up to rounding."""
    y = as_square(y)
    yh = y.conj().T
    return yh @ y - y @ yh


def hs_norm(a) -> float:
    """Hilbert-Schmidt (Frobenius) norm."""
    return float(np.linalg.norm(as_matrix(a)))


def trace_norm(a) -> float:
    """Trace norm, computed as the sum of singular values."""
    a = as_matrix(a)
    try:
        s = np.linalg.svd(a, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"SVD did not converge on shape {a.shape}: {exc}") from exc
    return float(s.sum())


def hermitian_defect(a) -> float:
    """Frobenius distance to the adjoint, ||A - A*||_F."""
    a = as_square(a)
    return float(np.linalg.norm(a - a.conj().T))


def require_hermitian(a, rtol: float = HERMITIAN_RTOL) -> np.ndarray:
    a = as_square(a)
    if hermitian_defect(a) > rtol * (1.0 + hs_norm(a)):
        raise DomainError("matrix is not Hermitian within tolerance")
    return a


@dataclass(frozen=True)
class EigenDecomposition:
    """Hermitian eigendecomposition with eigenvalues sorted non-increasing.

    Column j of ``vectors`` is the unit eigenvector for ``values[j]``.
    """

    values: np.ndarray
    vectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.vectors * self.values) @ self.vectors.conj().T


def descending_order(values: np.ndarray) -> np.ndarray:
    """Stable permutation sorting ``values`` non-increasing."""
    return np.argsort(-np.asarray(values), kind="stable")


def hermitian_eigen(a) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix, eigenvalues descending.

    Ties keep the order the underlying routine produced (stable sort, then
    index-ascending).  Raises DomainError for non-Hermitian input.
    """
    a = require_hermitian(a)
    w, v = np.linalg.eigh(a)
    order = descending_order(w)
    return EigenDecomposition(
        values=np.ascontiguousarray(w[order]),
        vectors=np.ascontiguousarray(v[:, order]),
    )


def project_residual(v: np.ndarray, basis: np.ndarray) -> np.ndarray:
    """Residual of v against orthonormal columns, re-orthogonalized twice.

    Applying the classical projection twice keeps the loss of orthogonality
    at the rounding level without pivoting.
    """
    w = v - basis @ (basis.conj().T @ v)
    return w - basis @ (basis.conj().T @ w)


def gram_schmidt(
    vectors: Sequence, tolerance: float = DEFAULT_TOL
) -> tuple[np.ndarray, list[int]]:
    """Orthonormalize ``vectors`` in order.

    Returns ``(basis, accepted)`` where ``basis`` has orthonormal columns and
    ``accepted`` lists the input indices that produced a new column.  A vector
    is rejected (not an error) when its projection residual has norm at most
    ``tolerance * (1 + its norm)``.
    """
    vs = [np.asarray(v, dtype=np.complex128).reshape(-1) for v in vectors]
    if not vs:
        raise ShapeError("no vectors given")
    dim = vs[0].size
    if any(v.size != dim for v in vs):
        raise ShapeError("vectors must share one dimension")
    basis = np.zeros((dim, min(dim, len(vs))), dtype=np.complex128)
    accepted: list[int] = []
    k = 0
    for idx, v in enumerate(vs):
        if k == dim:
            break
        w = project_residual(v, basis[:, :k])
        norm_w = float(np.linalg.norm(w))
        if norm_w <= tolerance * (1.0 + float(np.linalg.norm(v))):
            continue
        basis[:, k] = w / norm_w
        accepted.append(idx)
        k += 1
    return basis[:, :k].copy(), accepted


def unitary_defect(u) -> float:
    """||U*U - I||_F."""
    u = as_square(u)
    eye = np.eye(u.shape[0], dtype=np.complex128)
    return float(np.linalg.norm(u.conj().T @ u - eye))


def is_unitary(u, tolerance: float = DEFAULT_TOL) -> bool:
    """True when ||U*U - I||_F <= tolerance."""
    return unitary_defect(u) <= tolerance
