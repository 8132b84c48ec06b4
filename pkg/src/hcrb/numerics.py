"""Dense complex linear-algebra kernel.

Everything here is a pure function of its inputs.  Matrices are plain
``numpy.ndarray`` objects of dtype ``complex128`` (or ``float64`` for the real
solves); Hermitian inputs are symmetrised on entry so that 1e-14 level
asymmetries produced by upstream arithmetic never leak into the spectra.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import ConvergenceError, DomainError, RankDeficiencyError, StructuralError

#: smallest eigenvalue of a state that still counts as full rank
PD_THRESHOLD = 1e-12
#: condition number above which a real system is treated as singular
SINGULAR_CONDITION = 1e13


class SpectralDecomposition(NamedTuple):
    """Ascending eigenvalues and orthonormal eigenvectors (as columns)."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T

    def to_eigenbasis(self, m: np.ndarray) -> np.ndarray:
        """Matrix elements ``<e_j|m|e_k>``."""
        v = self.eigenvectors
        return v.conj().T @ m @ v

    def from_eigenbasis(self, m: np.ndarray) -> np.ndarray:
        v = self.eigenvectors
        return v @ m @ v.conj().T


class LinearSolution(NamedTuple):
    x: np.ndarray
    condition: float


def as_square(m, name: str = "matrix") -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise StructuralError(f"{name} must be a non-empty square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise StructuralError(f"{name} has non-finite entries")
    return a


def hermitize(m, name: str = "matrix", tol: float = 1e-8) -> np.ndarray:
    """Return ``(m + m^dagger)/2`` after checking ``m`` is Hermitian to ``tol`` (relative)."""
    a = as_square(m, name)
    scale = max(1.0, float(np.max(np.abs(a))))
    if np.max(np.abs(a - a.conj().T)) > tol * scale:
        raise StructuralError(f"{name} is not Hermitian")
    return (a + a.conj().T) / 2


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(m, -1, -2))


def eig_hermitian(m) -> SpectralDecomposition:
    """Eigendecomposition of a Hermitian matrix with a reconstruction check.

    Backed by LAPACK ``zheevd`` through :func:`numpy.linalg.eigh`.
    """
    a = hermitize(m)
    try:
        w, v = np.linalg.eigh(a)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise ConvergenceError(f"eigendecomposition failed: {exc}", residual=np.inf) from exc
    dec = SpectralDecomposition(w, v)
    norm = np.linalg.norm(a)
    residual = np.linalg.norm(dec.reconstruct() - a)
    if residual > 1e-10 * max(norm, 1e-300) and residual > 1e-14:
        raise ConvergenceError(f"eigendecomposition residual {residual:.3e} too large", residual=residual)
    return dec


def positive_spectrum(rho, spectral: SpectralDecomposition | None = None) -> SpectralDecomposition:
    """Spectral decomposition of ``rho``, refusing states that are not positive definite."""
    dec = eig_hermitian(rho) if spectral is None else spectral
    pmin = float(dec.eigenvalues[0])
    if pmin <= PD_THRESHOLD:
        raise DomainError(f"state is not positive definite (min eigenvalue {pmin:.3e})")
    return dec


def trace_norm(m) -> float:
    """Sum of singular values."""
    a = np.asarray(m, dtype=complex)
    if not np.all(np.isfinite(a)):
        raise StructuralError("trace_norm of a non-finite matrix")
    if a.size == 0:
        return 0.0
    return float(np.sum(np.linalg.svd(a, compute_uv=False)))


def solve_linear_real(k, b) -> LinearSolution:
    """Solve ``k x = b`` for real square ``k``.

    Raises :class:`RankDeficiencyError` when ``k`` is singular to working
    precision; the estimated 2-norm condition number is returned with ``x``.
    """
    k = np.asarray(k, dtype=float)
    b = np.asarray(b, dtype=float)
    if k.ndim != 2 or k.shape[0] != k.shape[1]:
        raise StructuralError(f"system matrix must be square, got {k.shape}")
    if not (np.all(np.isfinite(k)) and np.all(np.isfinite(b))):
        raise StructuralError("non-finite linear system")
    cond = float(np.linalg.cond(k))
    if not np.isfinite(cond) or cond > SINGULAR_CONDITION:
        raise RankDeficiencyError(f"linear system is singular (condition {cond:.3e})", condition=cond)
    x = np.linalg.solve(k, b)
    residual = np.linalg.norm(k @ x - b)
    bound = 1e-9 * (np.linalg.norm(k, 2) * np.linalg.norm(x) + np.linalg.norm(b))
    if residual > bound:
        raise RankDeficiencyError(f"linear solve residual {residual:.3e} exceeds {bound:.3e}", condition=cond)
    return LinearSolution(x, cond)


def sylvester_denominators(p: np.ndarray, u: float) -> np.ndarray:
    """``c[j, k] = u p_k + (1 - u) p_j``."""
    return u * p[None, :] + (1.0 - u) * p[:, None]


def solve_sylvester(rho, u: float, a, spectral: SpectralDecomposition | None = None) -> np.ndarray:
    """Solve ``u Y rho + (1-u) rho Y + A^dagger = 0`` for ``Y``.

    The solution is written down in the eigenbasis of ``rho``:
    ``Y_jk = -(A^dagger)_jk / (u p_k + (1-u) p_j)``.  ``spectral`` may carry a
    precomputed decomposition of ``rho`` when many solves share one state.
    """
    if not 0.0 <= u <= 1.0:
        raise DomainError(f"u must lie in [0, 1], got {u}")
    dec = positive_spectrum(rho, spectral)
    a = as_square(a, "A")
    if a.shape[0] != dec.eigenvalues.size:
        raise StructuralError("A and rho differ in dimension")
    rhs = dec.to_eigenbasis(a.conj().T)
    y = -rhs / sylvester_denominators(dec.eigenvalues, u)
    return dec.from_eigenbasis(y)


def hermitian_basis(dim: int) -> np.ndarray:
    """Orthonormal (Hilbert-Schmidt) basis of the ``dim**2`` real-dimensional Hermitian space.

    Returned as an array of shape ``(dim**2, dim, dim)``: diagonal units first,
    then symmetric and antisymmetric off-diagonal pairs.
    """
    out = np.zeros((dim * dim, dim, dim), dtype=complex)
    n = 0
    for j in range(dim):
        out[n, j, j] = 1.0
        n += 1
    s = 1 / np.sqrt(2)
    for j in range(dim):
        for k in range(j + 1, dim):
            out[n, j, k] = out[n, k, j] = s
            n += 1
            out[n, j, k] = -1j * s
            out[n, k, j] = 1j * s
            n += 1
    return out
