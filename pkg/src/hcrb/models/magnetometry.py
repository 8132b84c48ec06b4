"""Depolarised spin probes for estimating magnetic field components.

Each of the ``n`` spins evolves under ``theta . S`` with ``S = sigma / 2``,
so the collective unitary is ``exp(-i theta . J)`` with ``J = sum_i S_i``.
Local depolarising noise acts on the probe before the field is imprinted.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

import numpy as np

from ..errors import ConfigError
from ..model import StatisticalModel

MAX_QUBITS = 10
FAMILIES = ("ghz", "ghz3d", "gnu")

PAULI = np.array([
    [[0, 1], [1, 0]],
    [[0, -1j], [1j, 0]],
    [[1, 0], [0, -1]],
], dtype=complex)


@dataclass(frozen=True)
class MagnetometryScenario:
    """Probe family, qubit count, noise strength and evaluation point.

    ``theta`` holds all three field components; the third is treated as
    known unless ``estimate_all_three`` is set.
    """

    family: str
    n: int
    g: float
    theta: tuple = field(default=(0.0, 0.0, 0.0))
    estimate_all_three: bool = False

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ConfigError(f"unknown probe family {self.family!r}; choose from {FAMILIES}")
        if int(self.n) != self.n or not 1 <= self.n <= MAX_QUBITS:
            raise ConfigError(f"n must be an integer in [1, {MAX_QUBITS}], got {self.n}")
        if self.family == "gnu" and self.n % 2:
            raise ConfigError("GNU probes need an even number of qubits")
        if not 0.0 <= self.g <= 1.0:
            raise ConfigError(f"g must lie in [0, 1], got {self.g}")
        theta = tuple(float(t) for t in self.theta)
        if len(theta) == 2:
            theta += (0.0,)
        if len(theta) != 3:
            raise ConfigError("theta needs two or three components")
        object.__setattr__(self, "theta", theta)


def collective_spin(n: int) -> np.ndarray:
    """``J_a = sum_i sigma_a^(i) / 2`` for ``a = x, y, z``; shape ``(3, 2**n, 2**n)``."""
    dim = 2 ** n
    out = np.zeros((3, dim, dim), dtype=complex)
    for a in range(3):
        for i in range(n):
            out[a] += np.kron(np.kron(np.eye(2 ** i), PAULI[a] / 2), np.eye(2 ** (n - i - 1)))
    return out


def _product(v: np.ndarray, n: int) -> np.ndarray:
    out = np.ones(1, dtype=complex)
    for _ in range(n):
        out = np.kron(out, v)
    return out


def dicke(n: int, w: int) -> np.ndarray:
    """Uniform superposition of the ``n``-bit basis states of Hamming weight ``w``."""
    idx = np.arange(2 ** n)
    weights = np.array([bin(i).count("1") for i in idx])
    v = (weights == w).astype(complex)
    return v / np.sqrt(comb(n, w))


def probe_state(family: str, n: int) -> np.ndarray:
    """Normalised pure probe vector."""
    if family == "ghz":
        v = _product(np.array([1, 0]), n) + _product(np.array([0, 1]), n)
    elif family == "ghz3d":
        r = 1 / np.sqrt(2)
        eig = [
            (np.array([r, r]), np.array([r, -r])),
            (np.array([r, 1j * r]), np.array([r, -1j * r])),
            (np.array([1, 0]), np.array([0, 1])),
        ]
        v = sum(_product(p, n) + _product(m, n) for p, m in eig)
    elif family == "gnu":
        gap = n // 2
        v = sum(np.sqrt(comb(2, j)) * dicke(n, gap * j) for j in range(3)) / 2
    else:
        raise ConfigError(f"unknown probe family {family!r}")
    v = np.asarray(v, dtype=complex)
    return v / np.linalg.norm(v)


def depolarize(rho: np.ndarray, n: int, g: float) -> np.ndarray:
    """Apply ``(1-g) rho + g tr_i(rho) (x) I/2`` to every qubit ``i``."""
    t = rho.reshape((2,) * (2 * n))
    for i in range(n):
        traced = np.trace(t, axis1=i, axis2=n + i)
        mixed = np.expand_dims(np.expand_dims(traced, i), n + i) * (np.eye(2) / 2).reshape(
            [2 if a in (i, n + i) else 1 for a in range(2 * n)])
        t = (1 - g) * t + g * mixed
    return t.reshape(rho.shape)


def unitary_and_derivatives(theta, spins: np.ndarray):
    """``U = exp(-i theta . J)`` and ``dU/dtheta_a`` by divided differences.

    In the eigenbasis of ``H``, ``dU = V (F o V^dag J_a V) V^dag`` where
    ``F_ab = (e^{-i l_a} - e^{-i l_b}) / (l_a - l_b)``, with limit
    ``-i e^{-i l_a}`` on (near-)degenerate pairs.
    """
    h = np.tensordot(np.asarray(theta, dtype=float), spins, axes=1)
    lam, v = np.linalg.eigh((h + h.conj().T) / 2)
    ph = np.exp(-1j * lam)
    diff = lam[:, None] - lam[None, :]
    close = np.abs(diff) < 1e-9
    f = np.where(close, -1j * ph[:, None], (ph[:, None] - ph[None, :]) / np.where(close, 1.0, diff))
    u = (v * ph) @ v.conj().T
    du = [v @ (f * (v.conj().T @ j @ v)) @ v.conj().T for j in spins]
    return u, du


def build_magnetometry(s: MagnetometryScenario) -> StatisticalModel:
    psi = probe_state(s.family, s.n)
    sigma = depolarize(np.outer(psi, psi.conj()), s.n, s.g)
    spins = collective_spin(s.n)
    u, du = unitary_and_derivatives(s.theta, spins)
    rho = u @ sigma @ u.conj().T
    count = 3 if s.estimate_all_three else 2
    drho = []
    for a in range(count):
        t = du[a] @ sigma @ u.conj().T
        drho.append(t + t.conj().T)
    labels = ("Bx", "By", "Bz")[:count]
    return StatisticalModel(rho, tuple(drho), labels)


def magnetometry_builder(family: str, n: int, g: float, theta3: float = 0.0, estimate_all_three: bool = False):
    """Return ``theta -> model`` over the estimated components, for finite-difference checks."""

    def build(theta):
        theta = tuple(float(t) for t in theta)
        full = theta if estimate_all_three else theta + (theta3,)
        return build_magnetometry(MagnetometryScenario(family, n, g, full, estimate_all_three))

    return build
