import numpy as np
import pytest

from hcrb.model import StatisticalModel

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
I2 = np.eye(2, dtype=complex)


def random_state(rng, dim, min_weight=0.0):
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = a @ a.conj().T
    rho /= np.trace(rho).real
    if min_weight:
        rho = (1 - min_weight * dim) * rho + min_weight * np.eye(dim)
    return rho


def random_traceless(rng, dim, scale=1.0):
    h = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    h = h + h.conj().T
    h -= np.trace(h).real / dim * np.eye(dim)
    return scale * h / np.linalg.norm(h)


def random_model(rng, dim, nparams=2, min_weight=0.0):
    rho = random_state(rng, dim, min_weight)
    return StatisticalModel(rho, tuple(random_traceless(rng, dim) for _ in range(nparams)))


def commuting_model(rng, dim, nparams=2):
    """Diagonal state with diagonal derivatives (a classical model)."""
    p = rng.dirichlet(np.ones(dim))
    p = 0.5 * p + 0.5 / dim
    drho = []
    for _ in range(nparams):
        v = rng.normal(size=dim)
        drho.append(np.diag(v - v.mean()))
    return StatisticalModel(np.diag(p), tuple(drho))


def bloch_vector(theta1, theta2, radius=0.9):
    return radius * np.array([np.sin(theta1) * np.cos(theta2), np.sin(theta1) * np.sin(theta2), np.cos(theta1)])


def bloch_model(theta1=np.pi / 4, theta2=np.pi / 3, radius=0.9):
    """Qubit with Bloch vector of fixed length pointing along spherical angles ``(theta1, theta2)``."""
    r = bloch_vector(theta1, theta2, radius)
    d1 = radius * np.array([np.cos(theta1) * np.cos(theta2), np.cos(theta1) * np.sin(theta2), -np.sin(theta1)])
    d2 = radius * np.array([-np.sin(theta1) * np.sin(theta2), np.sin(theta1) * np.cos(theta2), 0.0])
    pauli = (SX, SY, SZ)
    rho = (I2 + sum(c * p for c, p in zip(r, pauli))) / 2
    drho = tuple(sum(c * p for c, p in zip(d, pauli)) / 2 for d in (d1, d2))
    return StatisticalModel(rho, drho), r, (d1, d2)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
