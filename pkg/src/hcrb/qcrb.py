"""Logarithmic derivatives, quantum Fisher information and the SLD/RLD bounds.

All bounds use the identity weight matrix.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import HypothesisError, RankDeficiencyError
from .model import StatisticalModel
from .numerics import SpectralDecomposition, positive_spectrum, trace_norm


@dataclass(frozen=True)
class QfimResult:
    """SLD operators, both information matrices and the derived scalar bounds.

    Attributes
    ----------
    sld_list : tuple of ndarray
        Symmetric logarithmic derivatives ``L_j``.
    qfim_sld : ndarray
        Real symmetric ``Re tr(rho L_j L_k)``.
    qfim_rld : ndarray
        Complex Hermitian ``tr(drho_j rho^-1 drho_k)``.
    c_s, c_r : float
        SLD and RLD scalar bounds.
    weak_comm : ndarray
        Antisymmetric ``Im tr(L_j L_k rho)``; vanishes iff the SLD bound is attainable.
    """

    sld_list: tuple
    qfim_sld: np.ndarray
    qfim_rld: np.ndarray
    c_s: float
    c_r: float
    weak_comm: np.ndarray

    @property
    def weak_comm_norm(self) -> float:
        return float(np.linalg.norm(self.weak_comm))


def _spectrum(m: StatisticalModel, spectral: SpectralDecomposition | None) -> SpectralDecomposition:
    return positive_spectrum(m.rho, spectral)


def compute_sld(m: StatisticalModel, j: int, spectral: SpectralDecomposition | None = None) -> np.ndarray:
    """Solve ``L rho + rho L = 2 drho_j`` in the eigenbasis of ``rho``."""
    dec = _spectrum(m, spectral)
    p = dec.eigenvalues
    d = dec.to_eigenbasis(m.drho[j])
    lmat = dec.from_eigenbasis(2 * d / (p[:, None] + p[None, :]))
    return (lmat + lmat.conj().T) / 2


def compute_rld(m: StatisticalModel, j: int, spectral: SpectralDecomposition | None = None) -> np.ndarray:
    """``R = rho^-1 drho_j`` (not Hermitian in general)."""
    dec = _spectrum(m, spectral)
    v = dec.eigenvectors
    return (v / dec.eigenvalues) @ v.conj().T @ m.drho[j]


def _inverse_qfim(f: np.ndarray, kind: str) -> np.ndarray:
    w = np.linalg.eigvalsh(f) if kind == "SLD" else np.linalg.eigvalsh((f + f.conj().T) / 2)
    if w[0] <= 1e-12 * max(w[-1], 1e-300):
        raise RankDeficiencyError(f"{kind} information matrix is singular: parameters are not identifiable",
                                  condition=float("inf"))
    return np.linalg.inv(f)


def scalar_bounds(m: StatisticalModel, spectral: SpectralDecomposition | None = None) -> QfimResult:
    """SLD and RLD quantum Cramer-Rao bounds with identity weight."""
    dec = _spectrum(m, spectral)
    slds = tuple(compute_sld(m, j, dec) for j in range(m.nparams))
    ls = np.asarray(slds)
    lr = np.einsum("jab,kbc,ca->jk", ls, ls, m.rho)  # tr(L_j L_k rho)
    f_s = lr.real
    f_s = (f_s + f_s.T) / 2
    weak = lr.imag
    weak = (weak - weak.T) / 2

    v = dec.eigenvectors
    rho_inv = (v / dec.eigenvalues) @ v.conj().T
    d = np.asarray(m.drho)
    f_r = np.einsum("jab,bc,kca->jk", d, rho_inv, d)
    f_r = (f_r + f_r.conj().T) / 2

    try:
        inv_s = _inverse_qfim(f_s, "SLD")
        inv_r = _inverse_qfim(f_r, "RLD")
    except RankDeficiencyError as exc:
        raise HypothesisError(str(exc), "parameter identifiability") from exc
    c_s = float(np.trace(inv_s))
    c_r = float(np.trace(inv_r.real) + trace_norm(inv_r.imag))
    return QfimResult(slds, f_s, f_r, c_s, c_r, weak)
