"""Finite-dimensional Lie theory on sl(r+1, C).

Matrix-unit root data, the Killing form computed from adjoint matrices, a
semisimplicity test via Gram nondegeneracy, the root-space self-commutator
solver, and the two-commutator additive decomposition.
"""

from __future__ import annotations

import numpy as np

from . import numkit, selfcomm
from .numkit import DomainError
from .report import SolveReport

SPAN_RTOL = 1e-8


class SlRootData:
    """Matrix units E_jk of M_{r+1}(C) with the standard root conventions.

    H_j = E_jj - E_{j+1,j+1} for j = 1..r is the Cartan basis; the simple
    root through (j, j+1) is represented by the same matrix, since the
    functional it induces is H -> Tr((E_jj - E_{j+1,j+1}) H).  Indices are
    1-based to match the usual formulas; the stored arrays are 0-based.
    """

    def __init__(self, rank: int):
        if rank < 1:
            raise DomainError("rank must be >= 1")
        self.rank = rank
        self.dimension = rank + 1
        n = self.dimension
        self._units: dict[tuple[int, int], np.ndarray] = {}
        for j in range(1, n + 1):
            for k in range(1, n + 1):
                m = np.zeros((n, n), dtype=np.complex128)
                m[j - 1, k - 1] = 1.0
                self._units[(j, k)] = m
        self._validate()

    def _validate(self) -> None:
        n = self.dimension
        zero = np.zeros((n, n), dtype=np.complex128)
        for (j, k), ejk in self._units.items():
            for (q, l), eql in self._units.items():
                expect = self._units[(j, l)] if k == q else zero
                if not np.array_equal(ejk @ eql, expect):
                    raise numkit.VerificationError(
                        f"matrix-unit relation fails at E_{j}{k} E_{q}{l}"
                    )
        for j in range(1, n + 1):
            for k in range(1, n + 1):
                if j == k:
                    continue
                bracket = numkit.commutator(self.unit(j, k), self.unit(k, j))
                if not np.array_equal(bracket, self.unit(j, j) - self.unit(k, k)):
                    raise numkit.VerificationError(
                        f"[E_{j}{k}, E_{k}{j}] != E_{j}{j} - E_{k}{k}"
                    )

    def unit(self, j: int, k: int) -> np.ndarray:
        return self._units[(j, k)].copy()

    def h(self, j: int) -> np.ndarray:
        """Cartan basis element H_j = E_jj - E_{j+1,j+1}, 1 <= j <= rank."""
        if not 1 <= j <= self.rank:
            raise DomainError(f"H index {j} outside 1..{self.rank}")
        return self.unit(j, j) - self.unit(j + 1, j + 1)

    def simple_root_matrix(self, j: int) -> np.ndarray:
        """Matrix inducing the simple-root functional through (j, j+1)."""
        return self.h(j)

    def basis(self) -> list[np.ndarray]:
        """Off-diagonal units then H_1..H_r: a basis of sl(r+1, C)."""
        n = self.dimension
        out = [self.unit(j, k) for j in range(1, n + 1) for k in range(1, n + 1) if j != k]
        out.extend(self.h(j) for j in range(1, self.rank + 1))
        return out


def sl_basis(rank: int) -> list[np.ndarray]:
    return SlRootData(rank).basis()


def _basis_stack(algebra_basis) -> tuple[list[np.ndarray], np.ndarray, np.ndarray]:
    mats = [numkit.as_square(g) for g in algebra_basis]
    if not mats:
        raise DomainError("empty basis")
    n = mats[0].shape[0]
    if any(g.shape[0] != n for g in mats):
        raise numkit.ShapeError("basis matrices must share one dimension")
    stack = np.column_stack([g.reshape(-1) for g in mats])
    pinv = np.linalg.pinv(stack)
    return mats, stack, pinv


def _expand(m: np.ndarray, stack: np.ndarray, pinv: np.ndarray) -> tuple[np.ndarray, float]:
    vec = m.reshape(-1)
    coef = pinv @ vec
    residual = float(np.linalg.norm(stack @ coef - vec))
    return coef, residual


def _require_in_span(m: np.ndarray, stack: np.ndarray, pinv: np.ndarray,
                     what: str) -> np.ndarray:
    coef, residual = _expand(m, stack, pinv)
    if residual > SPAN_RTOL * (1.0 + float(np.linalg.norm(m))):
        raise DomainError(f"{what} lies outside the span of the basis "
                          f"(expansion residual {residual:.3e})")
    return coef


def _ad_matrix(x: np.ndarray, mats: list[np.ndarray], stack: np.ndarray,
               pinv: np.ndarray) -> np.ndarray:
    cols = []
    for g in mats:
        bracket = x @ g - g @ x
        cols.append(_require_in_span(bracket, stack, pinv,
                                     "a bracket (basis not closed?)"))
    return np.column_stack(cols)


def killing_form(x, w, algebra_basis) -> complex:
    """Tr(ad X . ad W) with adjoint matrices built in the given basis.

    Both arguments must lie in the span of the basis and the basis must be
    closed under brackets (least-squares expansion residual at most 1e-8
    relative); violations raise DomainError.
    """
    mats, stack, pinv = _basis_stack(algebra_basis)
    x = numkit.as_square(x)
    w = numkit.as_square(w)
    _require_in_span(x, stack, pinv, "first argument")
    _require_in_span(w, stack, pinv, "second argument")
    ad_x = _ad_matrix(x, mats, stack, pinv)
    ad_w = _ad_matrix(w, mats, stack, pinv)
    return complex(np.trace(ad_x @ ad_w))


def is_semisimple(algebra_basis) -> bool:
    """Nondegeneracy of the Killing Gram matrix on a bracket-closed basis.

    True iff the smallest singular value of G_mn = B(g_m, g_n) is at least
    1e-8 times the largest.  Linearly dependent or non-closed bases raise
    DomainError.
    """
    mats, stack, pinv = _basis_stack(algebra_basis)
    svals = np.linalg.svd(stack, compute_uv=False)
    if svals.min() <= 1e-10 * svals.max():
        raise DomainError("basis is not linearly independent")
    ads = [_ad_matrix(g, mats, stack, pinv) for g in mats]
    dim = len(mats)
    gram = np.empty((dim, dim), dtype=np.complex128)
    for a in range(dim):
        for b in range(a, dim):
            val = np.trace(ads[a] @ ads[b])
            gram[a, b] = val
            gram[b, a] = val
    gsv = np.linalg.svd(gram, compute_uv=False)
    if gsv.max() == 0.0:
        return False
    return bool(gsv.min() >= 1e-8 * gsv.max())


def solve_sl(a) -> SolveReport:
    """Root-space solution of [Y*, Y] = A for Hermitian traceless A.

    Same pipeline as the plain type (A) solver, reported in root-space
    vocabulary: the coefficient of H_j in the diagonalized target is the
    partial sum a_j, and Y is the shift with weights sqrt(a_j) carried back
    to the original coordinates.
    """
    a = numkit.as_square(a)
    sol = selfcomm.solve_type_A(a)
    r = a.shape[0] - 1
    coeffs = sol.partial_sums[:r]
    rep = SolveReport(command="lie solve-sl")
    rep.check("residual", sol.residual, 1e-9 * (1.0 + numkit.hs_norm(a)))
    worst = float(-coeffs.min()) if r else 0.0
    rep.check("coefficient_negativity", max(worst, 0.0), 1e-12)
    rep.info("solution_hs_norm", numkit.hs_norm(sol.solution))
    rep.matrices["Y"] = sol.solution
    rep.details["coefficients"] = coeffs
    rep.details["permutation"] = sol.permutation
    return rep


def oberwolfach_split(a) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Write traceless A as [X1, X2] + [Y1, Y2] inside sl.

    A splits into Hermitian parts A1, A2 with A = A1 + i A2, each solved as
    a self-commutator [W*, W]; the returned tuple is
    (W1*, W1, i W2*, W2).
    """
    a = numkit.as_square(a)
    if abs(complex(np.trace(a))) > 1e-9 * (1.0 + numkit.hs_norm(a)):
        raise DomainError("trace-zero required")
    a1 = (a + a.conj().T) / 2.0
    a2 = (a - a.conj().T) / 2.0j
    w1 = selfcomm.solve_type_A(a1).solution
    w2 = selfcomm.solve_type_A(a2).solution
    return w1.conj().T, w1, 1j * w2.conj().T, w2
