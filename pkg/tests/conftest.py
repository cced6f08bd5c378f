"""Shared fixtures: seeded states, channels, and catalog handles."""

from __future__ import annotations

import numpy as np
import pytest

import qcontract as qc


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture(scope="session")
def f_cat():
    return qc.f_catalog()

@pytest.fixture(scope="session")
def g_cat():
    return qc.g_catalog()


@pytest.fixture(scope="session")
def golden_pair():
    """Fixed non-commuting qubit pair used for pinned divergence values."""
    rho = qc.validate_density(
        np.array([[0.65, 0.15 + 0.1j], [0.15 - 0.1j, 0.35]])
    )
    sigma = qc.validate_density(
        np.array([[0.4, -0.05j], [0.05j, 0.6]])
    )
    return rho, sigma


def commuting_pair(d: int, rng: np.random.Generator):
    """Two random full-rank states diagonal in one shared random basis.

    Returns (rho, sigma, p, q) with p/q the eigenvalues matched to the
    same shared eigenvectors, so the classical f-divergence of (p, q) is
    the reference value.
    """
    u, _ = np.linalg.qr(
        rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    )
    p = rng.dirichlet(np.ones(d)) * 0.9 + 0.1 / d
    s = rng.dirichlet(np.ones(d)) * 0.9 + 0.1 / d
    rho = qc.validate_density(u @ np.diag(p) @ u.conj().T)
    sig = qc.validate_density(u @ np.diag(s) @ u.conj().T)
    return rho, sig, p, s


def classical_f_divergence(p, q, f) -> float:
    p = np.asarray(p, float)
    q = np.asarray(q, float)
    return float(np.sum(q * f(p / q)))
