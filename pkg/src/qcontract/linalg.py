"""Core linear-algebra layer: validated operator types and spectral utilities.

Conventions
-----------
* Vectorization is column-stacking: ``vec(X)[i + d*j] = X[i, j]``, i.e.
  ``numpy`` order ``'F'``.  Under this convention ``vec(A X B) =
  (B.T kron A) vec(X)``, so a superoperator acting as ``X -> A X B`` has
  matrix ``np.kron(B.T, A)``.
* Eigenvalues are always reported in ascending order (``numpy.linalg.eigh``).
* All wrapper types are immutable after construction; their ndarrays are
  marked read-only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import (
    DimensionMismatch,
    DomainError,
    InputError,
    NotHermitian,
    NotPositive,
    NotSquare,
    SingularReference,
    TraceZero,
    UnsupportedOrder,
)

__all__ = [
    "DEFAULT_VALIDATION_TOL",
    "HERMITICITY_REJECT_TOL",
    "SPECTRAL_RESIDUAL_TOL",
    "INEQ_TOL",
    "HermitianMatrix",
    "DensityMatrix",
    "EigenSystem",
    "Superoperator",
    "hermitianize",
    "validate_density",
    "hermitian_eig",
    "matrix_function",
    "positive_part",
    "schatten_norm",
    "trace_distance",
    "vectorize",
    "devectorize",
    "relative_modular",
    "random_hermitian",
    "random_density",
]

#: default tolerance for state validation (PSD slack, rank decisions)
DEFAULT_VALIDATION_TOL = 1e-9
#: inputs whose relative asymmetry exceeds this are rejected as non-Hermitian
HERMITICITY_REJECT_TOL = 1e-6
#: eigendecompositions must reconstruct their input this well
SPECTRAL_RESIDUAL_TOL = 1e-10
#: slack used when asserting analytic inequalities numerically
INEQ_TOL = 1e-7


def _as_matrix(a, *, name: str = "matrix") -> np.ndarray:
    """Coerce input to a square complex ndarray with d >= 2."""
    if isinstance(a, (HermitianMatrix, DensityMatrix)):
        return a.entries
    arr = np.asarray(a, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise NotSquare(f"{name} must be a square 2-d array, got shape {arr.shape}")
    if arr.shape[0] < 2:
        raise DimensionMismatch(f"{name} must have dimension >= 2, got {arr.shape[0]}")
    if not np.all(np.isfinite(arr)):
        raise InputError(f"{name} contains non-finite entries")
    return arr


def hermitianize(a) -> np.ndarray:
    """Return (A + A^dag)/2."""
    arr = _as_matrix(a)
    return 0.5 * (arr + arr.conj().T)


def _asymmetry(arr: np.ndarray) -> float:
    """Relative deviation of A from A^dag."""
    scale = max(1.0, float(np.linalg.norm(arr)))
    return float(np.linalg.norm(arr - arr.conj().T)) / scale


class HermitianMatrix:
    """A validated Hermitian matrix.

    The input is symmetrized on construction; inputs whose relative
    asymmetry exceeds ``herm_tol`` are rejected with :class:`NotHermitian`.
    """

    __slots__ = ("entries", "dim", "asymmetry")

    def __init__(self, entries, *, herm_tol: float = HERMITICITY_REJECT_TOL):
        arr = _as_matrix(entries)
        asym = _asymmetry(arr)
        if asym > herm_tol:
            raise NotHermitian(
                f"matrix deviates from Hermitian by {asym:.3e} (> {herm_tol:.0e})"
            )
        herm = 0.5 * (arr + arr.conj().T)
        herm.setflags(write=False)
        object.__setattr__(self, "entries", herm)
        object.__setattr__(self, "dim", herm.shape[0])
        object.__setattr__(self, "asymmetry", asym)

    def __setattr__(self, name, value):
        raise AttributeError("HermitianMatrix is immutable")

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.entries, dtype=dtype)

    def __repr__(self):
        return f"HermitianMatrix(dim={self.dim})"


@dataclass(frozen=True)
class EigenSystem:
    """Spectral decomposition H = V diag(values) V^dag.

    ``values`` ascending, ``vectors`` orthonormal columns, ``residual`` the
    relative Frobenius reconstruction error.
    """

    values: np.ndarray
    vectors: np.ndarray
    residual: float

    def reconstruct(self) -> np.ndarray:
        return (self.vectors * self.values) @ self.vectors.conj().T


class DensityMatrix:
    """A validated density matrix (Hermitian, PSD, unit trace).

    Use :func:`validate_density` to construct one from raw entries.  The
    spectral decomposition computed during validation is cached on the
    instance so downstream code never re-diagonalizes reference states.
    """

    __slots__ = (
        "entries",
        "dim",
        "eigenvalues",
        "eigenvectors",
        "full_rank",
        "validation_tol",
        "clip_magnitude",
        "trace_deviation",
    )

    def __init__(self, entries, dim, eigenvalues, eigenvectors, full_rank,
                 validation_tol, clip_magnitude, trace_deviation):
        for name, value in (
            ("entries", entries),
            ("dim", dim),
            ("eigenvalues", eigenvalues),
            ("eigenvectors", eigenvectors),
            ("full_rank", full_rank),
            ("validation_tol", validation_tol),
            ("clip_magnitude", clip_magnitude),
            ("trace_deviation", trace_deviation),
        ):
            object.__setattr__(self, name, value)

    def __setattr__(self, name, value):
        raise AttributeError("DensityMatrix is immutable")

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.entries, dtype=dtype)

    @property
    def min_eigenvalue(self) -> float:
        return float(self.eigenvalues[0])

    def eigensystem(self) -> EigenSystem:
        recon = (self.eigenvectors * self.eigenvalues) @ self.eigenvectors.conj().T
        scale = max(1.0, float(np.linalg.norm(self.entries)))
        res = float(np.linalg.norm(recon - self.entries)) / scale
        return EigenSystem(self.eigenvalues, self.eigenvectors, res)

    def __repr__(self):
        return (
            f"DensityMatrix(dim={self.dim}, full_rank={self.full_rank}, "
            f"min_eig={self.min_eigenvalue:.3e})"
        )


def validate_density(entries, tol: float = DEFAULT_VALIDATION_TOL) -> DensityMatrix:
    """Validate raw entries as a density matrix.

    Symmetrizes, clips eigenvalues at zero (rejecting anything below
    ``-tol`` with :class:`NotPositive`), renormalizes the trace to one, and
    caches the spectral decomposition.  Tiny negative eigenvalues from
    iterated channel application are the intended clients of the clipping.
    """
    if isinstance(entries, DensityMatrix):
        return entries
    herm = HermitianMatrix(entries)
    vals, vecs = np.linalg.eigh(herm.entries)
    if vals[0] < -tol:
        raise NotPositive(
            f"minimum eigenvalue {vals[0]:.3e} below -{tol:.0e}"
        )
    clip_magnitude = float(max(0.0, -vals[0]))
    vals = np.clip(vals, 0.0, None)
    trace = float(vals.sum())
    if trace <= tol:
        raise TraceZero(f"trace {trace:.3e} too small to normalize")
    trace_deviation = abs(trace - 1.0)
    vals = vals / trace
    ents = hermitianize((vecs * vals) @ vecs.conj().T)
    for a in (ents, vals, vecs):
        a.setflags(write=False)
    return DensityMatrix(
        entries=ents,
        dim=herm.dim,
        eigenvalues=vals,
        eigenvectors=vecs,
        full_rank=bool(vals[0] > tol),
        validation_tol=tol,
        clip_magnitude=clip_magnitude,
        trace_deviation=trace_deviation,
    )


def hermitian_eig(h) -> EigenSystem:
    """Eigendecomposition of a Hermitian matrix, ascending eigenvalues."""
    if isinstance(h, DensityMatrix):
        return h.eigensystem()
    arr = hermitianize(h)
    vals, vecs = np.linalg.eigh(arr)
    recon = (vecs * vals) @ vecs.conj().T
    scale = max(1.0, float(np.linalg.norm(arr)))
    res = float(np.linalg.norm(recon - arr)) / scale
    for a in (vals, vecs):
        a.setflags(write=False)
    return EigenSystem(vals, vecs, res)


def matrix_function(h, phi: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    """Apply a scalar function to a Hermitian matrix through its spectrum.

    Raises :class:`DomainError` if ``phi`` produces a non-finite value on
    any eigenvalue (e.g. log of a nonpositive spectrum).
    """
    eig = hermitian_eig(h)
    with np.errstate(all="ignore"):
        w = np.asarray(phi(eig.values), dtype=float)
    if w.shape != eig.values.shape or not np.all(np.isfinite(w)):
        raise DomainError(
            "scalar function returned a non-finite value on the spectrum "
            f"(eigenvalues in [{eig.values[0]:.3e}, {eig.values[-1]:.3e}])"
        )
    return hermitianize((eig.vectors * w) @ eig.vectors.conj().T)


def positive_part(h) -> np.ndarray:
    """Positive part (A)_+ = sum of positive-eigenvalue spectral blocks."""
    eig = hermitian_eig(h)
    w = np.clip(eig.values, 0.0, None)
    return hermitianize((eig.vectors * w) @ eig.vectors.conj().T)


def schatten_norm(a, order=2) -> float:
    """Schatten norm of order 1 (trace), 2 (Frobenius) or inf (operator)."""
    arr = _as_matrix(a)
    if order == 2:
        return float(np.linalg.norm(arr))
    s = np.linalg.svd(arr, compute_uv=False)
    if order == 1:
        return float(s.sum())
    if order in (np.inf, math.inf, "inf"):
        return float(s[0])
    raise UnsupportedOrder(f"Schatten order must be 1, 2 or inf, got {order!r}")


def trace_distance(rho, sigma) -> float:
    """Half the trace norm of the difference."""
    return 0.5 * schatten_norm(_as_matrix(rho) - _as_matrix(sigma), 1)


def vectorize(x) -> np.ndarray:
    """Column-stacking vectorization: vec(X)[i + d*j] = X[i, j]."""
    return np.asarray(_as_matrix(x)).ravel(order="F").copy()


def devectorize(v, dim: int | None = None) -> np.ndarray:
    """Inverse of :func:`vectorize`."""
    vec = np.asarray(v, dtype=complex).ravel()
    if dim is None:
        dim = math.isqrt(vec.size)
    if dim * dim != vec.size:
        raise DimensionMismatch(
            f"vector of length {vec.size} is not a vectorized {dim}x{dim} matrix"
        )
    return vec.reshape((dim, dim), order="F")


@dataclass(frozen=True)
class Superoperator:
    """A linear map on d x d matrices in the column-stacking convention."""

    matrix: np.ndarray
    dim: int

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (self.dim**2, self.dim**2):
            raise DimensionMismatch(
                f"superoperator matrix shape {m.shape} does not match dim {self.dim}"
            )
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def apply(self, x) -> np.ndarray:
        return devectorize(self.matrix @ vectorize(x), self.dim)

    def __matmul__(self, other: "Superoperator") -> "Superoperator":
        if self.dim != other.dim:
            raise DimensionMismatch("superoperator dimensions differ")
        return Superoperator(self.matrix @ other.matrix, self.dim)

    def adjoint(self) -> "Superoperator":
        """Adjoint with respect to the Hilbert-Schmidt inner product."""
        return Superoperator(self.matrix.conj().T, self.dim)


def relative_modular(p, q, tol: float = DEFAULT_VALIDATION_TOL) -> Superoperator:
    """Relative modular operator X -> P X Q^{-1} as a superoperator.

    Requires Q full rank; its spectrum is the set of eigenvalue ratios
    lambda_i(P) / mu_j(Q).
    """
    p_arr = hermitianize(p)
    q_eig = hermitian_eig(q)
    if q_eig.values[0] <= tol:
        raise SingularReference(
            f"second argument has minimum eigenvalue {q_eig.values[0]:.3e}"
        )
    q_inv = (q_eig.vectors / q_eig.values) @ q_eig.vectors.conj().T
    dim = p_arr.shape[0]
    if q_inv.shape[0] != dim:
        raise DimensionMismatch("operands have different dimensions")
    return Superoperator(np.kron(q_inv.T, p_arr), dim)


def random_hermitian(dim: int, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    """Gaussian Hermitian matrix (GUE-style, unnormalized)."""
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return scale * hermitianize(g)


def random_density(dim: int, rng: np.random.Generator, rank: int | None = None) -> DensityMatrix:
    """Random density matrix A A^dag / tr from a complex Ginibre A of the given rank."""
    if rank is None:
        rank = dim
    a = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    m = a @ a.conj().T
    return validate_density(m / np.trace(m).real)
