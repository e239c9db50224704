"""Shared generators for the test suite."""

from __future__ import annotations

import numpy as np
import pytest

from commlab import selfcomm


def random_complex(rng: np.random.Generator, d: int) -> np.ndarray:
    return rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))


def random_hermitian(rng: np.random.Generator, d: int) -> np.ndarray:
    g = random_complex(rng, d)
    return (g + g.conj().T) / 2.0


def random_traceless_hermitian(rng: np.random.Generator, d: int) -> np.ndarray:
    h = random_hermitian(rng, d)
    return h - (np.trace(h) / d) * np.eye(d)


def random_sp(rng: np.random.Generator, j: selfcomm.AntiConjugation) -> np.ndarray:
    """Random member of the symplectic algebra (canonical averaging)."""
    return selfcomm.project_to_sp(random_complex(rng, j.dimension), j)


def random_sp_hermitian(rng: np.random.Generator,
                        j: selfcomm.AntiConjugation) -> np.ndarray:
    """Random Hermitian member of the symplectic algebra.

    Hermitian symmetrization commutes with the sp averaging, so one pass of
    each lands in the intersection.
    """
    t = random_sp(rng, j)
    return (t + t.conj().T) / 2.0


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20260809)
