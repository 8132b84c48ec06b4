"""Closed-form upper and lower bounds on the two-parameter Holevo bound.

Writing ``Y = X1 + i X2`` turns the two-parameter Holevo problem into a
quadratic program over one non-Hermitian matrix.  Fixing the dual point to
either boundary of the ``u`` interval gives two Lagrangians that are minimised
in closed form (``Y = -A^dagger rho^-1`` or ``Y = -rho^-1 A^dagger``).  Their
dual values are lower bounds; the objectives of the corresponding primal
points are upper bounds.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import HypothesisError, RankDeficiencyError, StructuralError
from .model import StatisticalModel, validate
from .numerics import SpectralDecomposition, positive_spectrum, solve_linear_real

#: right-hand side of the dual stationarity condition
B_VECTOR = np.array([0.0, 1.0, 0.0, 0.0, 0.0, 1.0])


def a_basis(m: StatisticalModel) -> np.ndarray:
    """The six operators ``rho/2, drho_1/2, drho_2/2`` followed by ``-i`` times each."""
    if m.nparams != 2:
        raise StructuralError(f"two-parameter routine given {m.nparams} parameters")
    first = np.array([m.rho, m.drho[0], m.drho[1]]) / 2
    return np.concatenate([first, -1j * first])


def combine(basis: np.ndarray, z) -> np.ndarray:
    """``sum_a z_a basis[a]``."""
    return np.tensordot(np.asarray(z, dtype=float), basis, axes=1)


def check_hypotheses(m: StatisticalModel) -> None:
    """Raise :class:`HypothesisError` unless ``rho`` is full rank and the derivatives independent."""
    diag = validate(m)
    if not diag.full_rank:
        raise HypothesisError(f"state is not full rank (min eigenvalue {diag.min_eigenvalue:.3e})", "full rank")
    if not diag.derivative_independence:
        raise HypothesisError("parameter derivatives are linearly dependent", "derivative independence")


def _inverse(dec: SpectralDecomposition, power: int = 1) -> np.ndarray:
    v = dec.eigenvectors
    return (v * dec.eigenvalues ** (-power)) @ v.conj().T


def build_q_matrices(m: StatisticalModel, spectral: SpectralDecomposition | None = None):
    """``Q1[i,k] = tr(A_i^dag rho^-1 A_k)`` and ``Q2[i,k] = tr(A_i rho^-1 A_k^dag)``."""
    dec = positive_spectrum(m.rho, spectral)
    a = a_basis(m)
    ri = _inverse(dec)
    ad = a.conj().transpose(0, 2, 1)
    q1 = np.einsum("iab,bc,kca->ik", ad, ri, a)
    q2 = np.einsum("iab,bc,kca->ik", a, ri, ad)
    return (q1 + q1.conj().T) / 2, (q2 + q2.conj().T) / 2


@dataclass(frozen=True)
class SimpleTwoParamReport:
    """Result of the closed-form two-parameter bounds.

    ``m1`` and ``m2`` are the primal objectives of the two boundary
    candidates; ``branch`` (1 or 2) names the candidate whose observables are
    returned in ``X1``/``X2``.
    """

    l1: float
    l2: float
    m1: float
    m2: float
    lower: float
    upper: float
    z1: np.ndarray
    z2: np.ndarray
    X1: np.ndarray
    X2: np.ndarray
    cond_q1: float
    cond_q2: float
    branch: int


def _split(y: np.ndarray):
    x1 = (y + y.conj().T) / 2
    x2 = (y - y.conj().T) / 2j
    return (x1 + x1.conj().T) / 2, (x2 + x2.conj().T) / 2


def simple_bounds(m: StatisticalModel) -> SimpleTwoParamReport:
    check_hypotheses(m)
    dec = positive_spectrum(m.rho)
    q1, q2 = build_q_matrices(m, dec)
    basis = a_basis(m)
    ri = _inverse(dec)

    results = []
    for j, q in enumerate((q1, q2), start=1):
        try:
            sol = solve_linear_real(2 * q.real, -B_VECTOR)
        except RankDeficiencyError as exc:
            raise HypothesisError(f"Re(Q{j}) is singular: {exc}", "derivative independence") from exc
        z = sol.x
        lj = -0.5 * float(B_VECTOR @ z)  # = b^T Re(Q)^-1 b / 4
        ad = combine(basis, z).conj().T
        y = -ad @ ri if j == 1 else -ri @ ad
        # the dual value is one of the two primal terms; the other is the candidate objective
        t_left = float(np.trace(y @ m.rho @ y.conj().T).real)
        t_right = float(np.trace(y.conj().T @ m.rho @ y).real)
        mj = t_right if j == 1 else t_left
        results.append((lj, mj, z, y, sol.condition))

    (l1, m1, z1, y1, c1), (l2, m2, z2, y2, c2) = results
    up1, up2 = max(l1, m1), max(l2, m2)
    branch = 1 if up1 <= up2 else 2
    x1, x2 = _split(y1 if branch == 1 else y2)
    return SimpleTwoParamReport(
        l1=l1, l2=l2, m1=m1, m2=m2,
        lower=max(l1, l2), upper=min(up1, up2),
        z1=z1, z2=z2, X1=x1, X2=x2,
        cond_q1=c1, cond_q2=c2, branch=branch,
    )
