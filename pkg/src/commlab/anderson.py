"""Anderson-style block tri-diagonal construction.

Two block tri-diagonal operators C and Z are assembled from four families of
rectangular blocks (1-based block index n, unscaled):

    A_n = (1/n)      n x (n+1),  main diagonal  sqrt(n), ..., sqrt(1), zero last column
    X_n = (1/n)      n x (n+1),  superdiagonal  sqrt(1), ..., sqrt(n)
    B_n = -1/(n+1)  (n+1) x n,   subdiagonal    sqrt(1), ..., sqrt(n)
    Y_n = 1/(n+1)   (n+1) x n,   main diagonal  sqrt(n), ..., sqrt(1), zero last row

C carries (A_n, B_n) on its block super/sub diagonals and Z carries
(X_n, Y_n).  Unscaled, [C, Z] is the rank-one projection onto the first
coordinate.  Multiplying every index-n block by sqrt(d_n) telescopes the
commutator into the diagonal with d_1 at the top and (d_{n+1} - d_n)/(n+1)
across the block of size n+1, so non-decreasing weights with d_n/n -> 0
produce a positive compact diagonal.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from . import numkit
from .numkit import DomainError, VerificationError
from .report import SolveReport
from .sequences import PowerLog, WeightSequence

IDENTITY_TOL = 1e-12

#: Eigenvalue-list parameterizations accepted by :func:`eigenvalue_profile`.
DIFFERENCES = "differences"
CESARO_FORM = "cesaro"


def _sqrt_run(n: int) -> np.ndarray:
    return np.sqrt(np.arange(1, n + 1, dtype=np.float64))


def make_blocks(n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Unscaled blocks (A_n, B_n, X_n, Y_n) for block index n >= 1.

    Operator norms: ||A_n|| = ||X_n|| = 1/sqrt(n) and
    ||B_n|| = ||Y_n|| = sqrt(n)/(n+1).
    """
    if n < 1:
        raise DomainError("block index must be >= 1")
    roots = _sqrt_run(n)
    a = np.zeros((n, n + 1), dtype=np.complex128)
    a[np.arange(n), np.arange(n)] = roots[::-1] / n
    x = np.zeros((n, n + 1), dtype=np.complex128)
    x[np.arange(n), np.arange(1, n + 1)] = roots / n
    b = np.zeros((n + 1, n), dtype=np.complex128)
    b[np.arange(1, n + 1), np.arange(n)] = -roots / (n + 1)
    y = np.zeros((n + 1, n), dtype=np.complex128)
    y[np.arange(n), np.arange(n)] = roots[::-1] / (n + 1)
    return a, b, x, y


def identity_checks(n: int) -> SolveReport:
    """Verify the five product identities behind the construction at index n.

    With unscaled blocks:

        A_1 Y_1 - X_1 B_1         = [1]
        B_n X_n - Y_n A_n         = -I_{n+1} / (n+1)
        A_{n+1} Y_{n+1} - X_{n+1} B_{n+1} = +I_{n+1} / (n+1)
        B_{n+1} Y_n - Y_{n+1} B_n = 0      (sub-diagonal blocks of [C, Z])
        A_n X_{n+1} - X_n A_{n+1} = 0      (super-diagonal blocks of [C, Z])

    The second and third identity cancel block-row by block-row, which is
    what collapses [C, Z] to the rank-one projection.  Each residual must
    stay below 1e-12; a violation raises VerificationError naming the
    identity.
    """
    if n < 1:
        raise DomainError("block index must be >= 1")
    a1, b1, x1, y1 = make_blocks(1)
    an, bn, xn, yn = make_blocks(n)
    an1, bn1, xn1, yn1 = make_blocks(n + 1)
    eye = np.eye(n + 1)

    residuals = {
        "first_diagonal": np.abs(a1 @ y1 - x1 @ b1 - np.ones((1, 1))).max(),
        "down_up_product": np.abs(bn @ xn - yn @ an + eye / (n + 1)).max(),
        "up_down_product": np.abs(an1 @ yn1 - xn1 @ bn1 - eye / (n + 1)).max(),
        "sub_cross": np.abs(bn1 @ yn - yn1 @ bn).max(),
        "super_cross": np.abs(an @ xn1 - xn @ an1).max(),
    }
    rep = SolveReport(command=f"identity-checks n={n}")
    for name, res in residuals.items():
        rep.check(name, float(res), IDENTITY_TOL)
        if res > IDENTITY_TOL:
            raise VerificationError(f"block identity '{name}' fails at n={n}: {res:.3e}")
    return rep


@dataclass(frozen=True)
class BlockTriDiagonalOperator:
    """Ordered block lists before assembly.

    Block n of ``super_blocks`` is n x (n+1), block n of ``sub_blocks`` is
    (n+1) x n, and ``diag_blocks`` (all zero here, retained for generality)
    has square block n+1 of size matching the row structure.
    """

    diag_blocks: tuple[np.ndarray, ...]
    super_blocks: tuple[np.ndarray, ...]
    sub_blocks: tuple[np.ndarray, ...]

    def __post_init__(self):
        for n, blk in enumerate(self.super_blocks, start=1):
            if blk.shape != (n, n + 1):
                raise numkit.ShapeError(
                    f"super block {n} has shape {blk.shape}, expected {(n, n + 1)}"
                )
        for n, blk in enumerate(self.sub_blocks, start=1):
            if blk.shape != (n + 1, n):
                raise numkit.ShapeError(
                    f"sub block {n} has shape {blk.shape}, expected {(n + 1, n)}"
                )
        if len(self.super_blocks) != len(self.sub_blocks):
            raise numkit.ShapeError("super/sub block counts differ")

    @property
    def block_count(self) -> int:
        return len(self.super_blocks)

    @property
    def dimension(self) -> int:
        m = self.block_count
        return (m + 1) * (m + 2) // 2


def build_modified(weights: WeightSequence, block_count: int
                   ) -> tuple[BlockTriDiagonalOperator, BlockTriDiagonalOperator]:
    """Scale every index-n block by sqrt(d_n) and return the pair (C, Z)."""
    if block_count < 1:
        raise DomainError("block_count must be >= 1")
    d = weights.values(block_count + 1)
    if (d < 0).any():
        raise DomainError("weights must be nonnegative")
    scale = np.sqrt(d)
    c_super, c_sub, z_super, z_sub = [], [], [], []
    for n in range(1, block_count + 1):
        a, b, x, y = make_blocks(n)
        s = scale[n - 1]
        c_super.append(s * a)
        c_sub.append(s * b)
        z_super.append(s * x)
        z_sub.append(s * y)
    zeros = tuple(np.zeros((k, k), dtype=np.complex128) for k in range(1, block_count + 2))
    c = BlockTriDiagonalOperator(zeros, tuple(c_super), tuple(c_sub))
    z = BlockTriDiagonalOperator(zeros, tuple(z_super), tuple(z_sub))
    return c, z


def _block_offsets(block_count: int) -> list[int]:
    # Block row k (1-based) has size k and starts at k(k-1)/2.
    return [k * (k - 1) // 2 for k in range(1, block_count + 3)]


def assemble(op: BlockTriDiagonalOperator) -> np.ndarray:
    """Dense square matrix with blocks placed tri-diagonally."""
    m = op.block_count
    dim = op.dimension
    off = _block_offsets(m)
    out = np.zeros((dim, dim), dtype=np.complex128)
    for n in range(1, m + 1):
        r0, r1 = off[n - 1], off[n - 1] + n
        c0, c1 = off[n], off[n] + n + 1
        out[r0:r1, c0:c1] = op.super_blocks[n - 1]
        out[c0:c1, r0:r1] = op.sub_blocks[n - 1]
    for k, blk in enumerate(op.diag_blocks, start=1):
        r0 = off[k - 1]
        out[r0:r0 + k, r0:r0 + k] += blk
    return out


def telescoped_profile(d: np.ndarray) -> np.ndarray:
    """Predicted scalar on diagonal block k: d_1 at k=1, else (d_k - d_{k-1})/k."""
    k = np.arange(1, d.size + 1, dtype=np.float64)
    out = np.empty_like(d)
    out[0] = d[0]
    out[1:] = (d[1:] - d[:-1]) / k[1:]
    return out


def verify_positive_commutator(weights: WeightSequence, block_count: int,
                               tolerance: float = numkit.DEFAULT_TOL) -> SolveReport:
    """Assemble [C, Z] at the given truncation and certify its structure.

    Asserted, each to ``tolerance``: (a) entries outside the block
    pentadiagonal support are zero, (b) the interior two-step shift blocks
    vanish, (c) the interior diagonal blocks (all but the last two block
    rows, where truncation breaks the telescoping) match the telescoped
    scalar profile.  The measured per-block diagonal means and the boundary
    residual are recorded in ``details`` rather than asserted.
    """
    if block_count < 3:
        raise DomainError("block_count must be >= 3")
    start = time.perf_counter()
    d = weights.values(block_count + 1)
    c_op, z_op = build_modified(weights, block_count)
    w = numkit.commutator(assemble(c_op), assemble(z_op))
    nblocks = block_count + 1
    off = _block_offsets(block_count)
    predicted = telescoped_profile(d)

    structure = np.zeros(w.shape, dtype=bool)
    shift_interior = 0.0
    shift_boundary = 0.0
    for k in range(1, nblocks + 1):
        s = slice(off[k - 1], off[k - 1] + k)
        structure[s, s] = True
    for k in range(1, nblocks - 1):
        rows = slice(off[k - 1], off[k - 1] + k)
        cols = slice(off[k + 1], off[k + 1] + k + 2)
        structure[rows, cols] = True
        structure[cols, rows] = True
        mass = max(np.abs(w[rows, cols]).max(), np.abs(w[cols, rows]).max())
        if k + 2 <= nblocks - 2:
            shift_interior = max(shift_interior, mass)
        else:
            shift_boundary = max(shift_boundary, mass)
    off_mass = float(np.abs(w[~structure]).max()) if (~structure).any() else 0.0

    block_means = np.empty(nblocks)
    diag_dev = 0.0
    boundary_residual = 0.0
    failures: list[int] = []
    for k in range(1, nblocks + 1):
        s = slice(off[k - 1], off[k - 1] + k)
        blk = w[s, s]
        block_means[k - 1] = float(np.mean(np.diag(blk)).real)
        dev = float(np.abs(blk - predicted[k - 1] * np.eye(k)).max())
        if k <= nblocks - 2:
            diag_dev = max(diag_dev, dev)
            if dev > tolerance:
                failures.append(k)
        else:
            boundary_residual = max(boundary_residual, dev)

    rep = SolveReport(command="anderson-verify")
    rep.check("off_tridiagonal_mass", off_mass, tolerance)
    rep.check("interior_shift_mass", shift_interior, tolerance)
    rep.check("interior_diagonal_residual", diag_dev, tolerance)
    rep.details.update(
        block_means=block_means,
        predicted_profile=predicted,
        boundary_residual=boundary_residual,
        boundary_shift_mass=shift_boundary,
        dimension=w.shape[0],
        weights=d,
    )
    rep.wall_time = time.perf_counter() - start
    if failures:
        raise VerificationError(
            f"diagonal block(s) {failures} deviate from the telescoped profile "
            f"beyond {tolerance:g}"
        )
    if off_mass > tolerance or shift_interior > tolerance:
        raise VerificationError(
            "off-structure mass exceeds tolerance "
            f"(off={off_mass:.3e}, shifts={shift_interior:.3e})"
        )
    return rep


@dataclass(frozen=True)
class AdmissibilityReport:
    """Whether d_n/n -> 0; analytic for the closed-form family, otherwise a
    tail diagnostic with no limit claim."""

    analytic: bool
    admissible: bool | None
    tail_max_ratio: float
    horizon: int


def admissible(weights: WeightSequence, horizon: int = 256) -> AdmissibilityReport:
    """Decide (or diagnose) the growth condition d_n/n -> 0.

    The tail maximum of d_n/n is reported over the second half of the
    horizon window, capped at the available prefix for explicit data.
    """
    if weights.family is not None:
        fam: PowerLog = weights.family
        count = horizon
        d = fam.terms(count)
        verdict: bool | None = fam.ratio_to_index_vanishes()
        analytic = True
    else:
        count = min(horizon, len(weights.prefix))
        d = weights.values(count)
        verdict = None
        analytic = False
    if count == 0:
        return AdmissibilityReport(analytic, verdict, 0.0, 0)
    n = np.arange(1, count + 1, dtype=np.float64)
    lo = count // 2
    tail = float(np.max(d[lo:] / n[lo:]))
    return AdmissibilityReport(analytic, verdict, tail, count)


def eigenvalue_profile(weights: WeightSequence, parameterization: str,
                       terms: int) -> np.ndarray:
    """Materialize the multiplicity-graded eigenvalue list.

    ``differences``: (d_1, (d_2-d_1)/2 x2, (d_3-d_2)/3 x3, ...);
    ``cesaro``: (d_1, d_2/2 x2, d_3/3 x3, ...).  Truncated to ``terms``.
    """
    if terms < 0:
        raise DomainError("terms must be nonnegative")
    if terms == 0:
        return np.empty(0)
    groups = 1
    while groups * (groups + 1) // 2 < terms:
        groups += 1
    d = weights.values(groups)
    if parameterization == DIFFERENCES:
        values = telescoped_profile(d)
    elif parameterization == CESARO_FORM:
        values = d / np.arange(1, groups + 1, dtype=np.float64)
    else:
        raise DomainError(f"unknown parameterization {parameterization!r}")
    return np.repeat(values, np.arange(1, groups + 1))[:terms]


def cesaro_mean_vanishes(weights: WeightSequence) -> bool | None:
    """Analytic Cesaro-mean verdict for closed-form weights, else None."""
    if weights.family is None:
        return None
    return weights.family.cesaro_mean_vanishes()
