"""Lower bound on the Holevo bound for three or more parameters.

The cyclic pairs ``Y_j = X_j + i X_{j+1}`` (with ``X_{d+1} = X_1``) rewrite
``tr Re Z + tr(U_alpha Im Z)`` as a sum of one-sided quadratic forms, one for
each sign pattern ``alpha``.  Each pattern gives a Lagrange dual that is a
concave quadratic in the multipliers ``(z, xi)``.  That dual is maximised
exactly by one linear solve, and the best pattern is kept.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, RankDeficiencyError, StructuralError
from .model import StatisticalModel
from .numerics import hermitian_basis, positive_spectrum, solve_linear_real

MAX_PARAMS = 12
MAX_VARIABLES = 6000


@dataclass(frozen=True)
class SignVector:
    """Sign pattern ``alpha``; ``alpha_bar`` flips the last bit when ``d % 4 == 0``."""

    alpha: tuple

    def __post_init__(self):
        bits = tuple(int(a) for a in self.alpha)
        if not bits or any(a not in (0, 1) for a in bits):
            raise StructuralError(f"sign vector must be a non-empty tuple of bits, got {self.alpha}")
        object.__setattr__(self, "alpha", bits)

    @property
    def d(self) -> int:
        return len(self.alpha)

    @property
    def alpha_bar(self) -> tuple:
        if self.d % 4 == 0:
            return self.alpha[:-1] + (1 - self.alpha[-1],)
        return self.alpha

    def __str__(self) -> str:
        return "".join(map(str, self.alpha))


@dataclass(frozen=True)
class SMatrix:
    S: np.ndarray
    T: np.ndarray


def build_s_matrix(d: int) -> SMatrix:
    """Cyclic map ``Y = S X``: ones on the diagonal and ``i`` on the cyclic superdiagonal.

    The wrap entry ``S[d-1, 0]`` becomes ``-i`` when ``d % 4 == 0`` (otherwise S would be singular).
    """
    if d < 2:
        raise DomainError(f"need at least two parameters, got {d}")
    s = np.eye(d, dtype=complex)
    for j in range(d - 1):
        s[j, j + 1] = 1j
    s[d - 1, 0] += -1j if d % 4 == 0 else 1j
    return SMatrix(s, np.linalg.inv(s))


def u_alpha(alpha: SignVector) -> np.ndarray:
    """``U = sum_j (-1)^alpha_j |j><j+1|`` with the wrap term ``(-1)^alpha_d |d><1|``."""
    d = alpha.d
    u = np.zeros((d, d))
    for j in range(d - 1):
        u[j, j + 1] = (-1) ** alpha.alpha[j]
    u[d - 1, 0] += (-1) ** alpha.alpha[d - 1]
    return u


def z_matrix(rho, xs) -> np.ndarray:
    """``Z[j, k] = tr(rho X_j X_k)``."""
    xs = np.asarray(xs)
    return np.einsum("ab,jbc,kca->jk", rho, xs, xs)


def v_alpha(rho, xs, alpha: SignVector) -> float:
    """Half the sum of one-sided forms of ``Y_j = X_j + i X_{j+1}``.

    ``alpha_j = 0`` selects ``tr(Y rho Y^dag)`` and ``alpha_j = 1`` selects ``tr(Y^dag rho Y)``.
    """
    d = len(xs)
    total = 0.0
    for j in range(d):
        y = xs[j] + 1j * xs[(j + 1) % d]
        if alpha.alpha[j] == 0:
            total += np.trace(y @ rho @ y.conj().T).real
        else:
            total += np.trace(y.conj().T @ rho @ y).real
    return total / 2


def dual_value(m: StatisticalModel, alpha: SignVector, z, xi) -> float:
    """Evaluate ``g_alpha(z, xi)`` directly.

    Parameters
    ----------
    z : array_like, shape (d+1, d)
        ``z[j, k]`` multiplies ``tr(rho_j X_k)``, where ``rho_0 = rho`` and ``rho_j = drho_j``.
    xi : array_like, shape (d, D, D)
        Hermitian multipliers.
    """
    d = m.nparams
    if alpha.d != d:
        raise StructuralError("sign vector length differs from the parameter count")
    dec = positive_spectrum(m.rho)
    v = dec.eigenvectors
    rho_inv = (v / dec.eigenvalues) @ v.conj().T
    z = np.asarray(z, dtype=float).reshape(d + 1, d)
    xi = np.asarray(xi, dtype=complex).reshape(d, m.dim, m.dim)
    ops = np.array((m.rho,) + m.drho)
    t = build_s_matrix(d).T
    inner = np.einsum("jk,jab->kab", z, ops) + 1j * xi
    value = -float(np.trace(z[1:]))
    for ell, bit in enumerate(alpha.alpha_bar):
        g = np.tensordot(t[:, ell], inner, axes=1)
        if bit == 0:
            value -= np.trace(g @ rho_inv @ g.conj().T).real / 2
        else:
            value -= np.trace(g.conj().T @ rho_inv @ g).real / 2
    return float(value)


class _DualForms:
    """Gram matrices of the elementary multiplier directions, shared by every sign vector."""

    def __init__(self, m: StatisticalModel):
        d, dim = m.nparams, m.dim
        self.d, self.dim = d, dim
        self.nelem = d + 1 + dim * dim
        if d * self.nelem > MAX_VARIABLES:
            raise DomainError(f"dual has {d * self.nelem} variables, above the limit of {MAX_VARIABLES}")
        self.dec = positive_spectrum(m.rho)
        ops = [np.diag(self.dec.eigenvalues).astype(complex)] + [self.dec.to_eigenbasis(x) for x in m.drho]
        self.elem = np.concatenate([np.array(ops), 1j * hermitian_basis(dim)])
        flat = self.elem.reshape(self.nelem, -1)
        inv_p = 1.0 / self.dec.eigenvalues
        w0 = np.broadcast_to(inv_p[None, :], (dim, dim)).reshape(-1)  # tr(E rho^-1 F^dag)
        w1 = np.broadcast_to(inv_p[:, None], (dim, dim)).reshape(-1)  # tr(E^dag rho^-1 F)
        self.k0 = (flat * w0) @ flat.conj().T
        self.k1 = (flat.conj() * w1) @ flat.T
        self.t = build_s_matrix(d).T
        self.c = np.zeros(d * self.nelem)
        for k in range(d):
            self.c[k * self.nelem + k + 1] = 1.0

    def quadratic(self, alpha: SignVector) -> np.ndarray:
        p = np.zeros((self.d * self.nelem,) * 2, dtype=complex)
        for ell, bit in enumerate(alpha.alpha_bar):
            col = self.t[:, ell]
            w = np.outer(col, col.conj())
            p += np.kron(w, self.k0) if bit == 0 else np.kron(w.conj(), self.k1)
        p = p.real / 2
        return (p + p.T) / 2

    def unpack(self, theta: np.ndarray):
        blocks = theta.reshape(self.d, self.nelem)
        z = blocks[:, : self.d + 1].T.copy()
        coords = blocks[:, self.d + 1:]
        basis = hermitian_basis(self.dim)
        xi = np.array([self.dec.from_eigenbasis(np.tensordot(c, basis, axes=1)) for c in coords])
        return z, (xi + xi.conj().transpose(0, 2, 1)) / 2


@dataclass(frozen=True)
class DualMaximum:
    """Maximum of one sign vector's dual together with its maximiser."""

    alpha: SignVector
    value: float
    z: np.ndarray
    xi: np.ndarray
    condition: float
    pseudo_inverse: bool


def _maximize(forms: _DualForms, alpha: SignVector) -> DualMaximum:
    p = forms.quadratic(alpha)
    c = forms.c
    try:
        sol = solve_linear_real(2 * p, -c)
        theta, cond, pinv = sol.x, sol.condition, False
    except RankDeficiencyError as exc:
        # degenerate directions: least-squares stationary point, still a valid lower bound
        theta = np.linalg.lstsq(2 * p, -c, rcond=1e-12)[0]
        cond, pinv = float(exc.condition if exc.condition is not None else np.inf), True
    value = float(-c @ theta - theta @ p @ theta)
    z, xi = forms.unpack(theta)
    return DualMaximum(alpha, value, z, xi, cond, pinv)


def maximize_dual(m: StatisticalModel, alpha: SignVector) -> DualMaximum:
    """Exact maximiser of ``g_alpha``: one real linear solve over ``z`` and the coordinates of ``xi``."""
    if alpha.d != m.nparams:
        raise StructuralError("sign vector length differs from the parameter count")
    return _maximize(_DualForms(m), alpha)


@dataclass(frozen=True)
class MultiLowerReport:
    """Best sign vector, its bound and every per-pattern value.

    ``per_alpha`` maps the bit string of each enumerated pattern to its dual maximum.
    """

    best_alpha: SignVector
    lower: float
    per_alpha: dict
    z: np.ndarray
    xi: np.ndarray
    pseudo_inverse: bool
    condition: float
    enumerated: list = field(default_factory=list)


def sign_vectors(d: int, paired_only: bool = False):
    """All ``2**d`` patterns in lexicographic order.

    ``paired_only`` keeps the two patterns with ``alpha_1 != alpha_2`` (two-parameter validation).
    """
    for bits in itertools.product((0, 1), repeat=d):
        if paired_only and (d != 2 or bits[0] == bits[1]):
            continue
        yield SignVector(bits)


def multi_lower_bound(m: StatisticalModel, validation: bool = False) -> MultiLowerReport:
    """Maximise the dual over every sign vector.

    With ``validation=True`` and two parameters only the two mixed patterns
    are used, which reproduces the closed-form two-parameter lower bound.
    """
    d = m.nparams
    if d < 2:
        raise DomainError("the multi-parameter bound needs at least two parameters")
    if d > MAX_PARAMS:
        raise DomainError(f"{d} parameters exceeds the enumeration limit of {MAX_PARAMS}")
    forms = _DualForms(m)
    results = [_maximize(forms, a) for a in sign_vectors(d, paired_only=validation)]
    best = max(results, key=lambda r: r.value)
    return MultiLowerReport(
        best_alpha=best.alpha,
        lower=best.value,
        per_alpha={str(r.alpha): r.value for r in results},
        z=best.z,
        xi=best.xi,
        pseudo_inverse=any(r.pseudo_inverse for r in results),
        condition=max(r.condition for r in results),
        enumerated=[str(r.alpha) for r in results],
    )
