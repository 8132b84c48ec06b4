"""Thermally mixed binomial codestates on a single bosonic mode.

The logical state ``x|0_L> + sqrt(1-x^2) e^{i phi}|1_L>`` lives on the Fock
states ``|0>, |G>, ..., |Gn>``.  Mixing with a thermal state adds weight
everywhere, but the derivatives stay on that support.  The model is therefore
reduced to the support block ``tau`` plus one lumped level that carries the
remaining thermal weight ``1 - tr(tau)``.  That level is diagonal and
parameter independent, so the reduction is exact.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb

import numpy as np

from ..errors import ConfigError, DomainError, HCRBError
from ..model import StatisticalModel


@dataclass(frozen=True)
class BinomialScenario:
    """Code gap ``G``, order ``n``, logical point ``(x, phi)`` and thermal noise ``(lambda_th, beta)``.

    ``lumped_tail=False`` drops the off-support level and renormalises the
    support block (the model conditioned on the code support).
    """

    G: int
    n: int
    x: float
    phi: float = 0.0
    lambda_th: float = 0.01
    beta: float = 1.0
    lumped_tail: bool = True

    def __post_init__(self):
        if int(self.G) != self.G or self.G < 1:
            raise ConfigError(f"G must be a positive integer, got {self.G}")
        if int(self.n) != self.n or self.n < 1:
            raise ConfigError(f"n must be a positive integer, got {self.n}")
        if not -1.0 <= self.x <= 1.0:
            raise ConfigError(f"x must lie in [-1, 1], got {self.x}")
        if not 0.0 <= self.lambda_th < 1.0:
            raise ConfigError(f"lambda_th must lie in [0, 1), got {self.lambda_th}")
        if not self.beta > 0:
            raise ConfigError(f"beta must be positive, got {self.beta}")


def codewords(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Amplitudes of ``|0_L>`` (even ``j``) and ``|1_L>`` (odd ``j``) on ``|Gj>``, ``j = 0..n``."""
    amp = np.array([2 ** (-(n - 1) / 2) * np.sqrt(comb(n, j)) for j in range(n + 1)])
    even = np.arange(n + 1) % 2 == 0
    return np.where(even, amp, 0.0), np.where(even, 0.0, amp)


def thermal_weights(levels, beta: float) -> np.ndarray:
    """Populations ``(1 - e^-beta) e^{-beta k}`` of a unit-trace thermal state."""
    return -np.expm1(-beta) * np.exp(-beta * np.asarray(levels, dtype=float))


def build_binomial(s: BinomialScenario) -> StatisticalModel:
    """Effective model for the parameters ``(x, phi)``.

    The poles ``|x| = 1`` are refused: there the ``x``-derivative diverges
    and ``phi`` has no effect on the state.
    """
    if abs(s.x) == 1.0:
        raise DomainError("x-derivative diverges and phi is unidentifiable at |x| = 1")
    c0, c1 = codewords(s.n)
    root = np.sqrt(1.0 - s.x * s.x)
    phase = np.exp(1j * s.phi)
    psi = s.x * c0 + root * phase * c1
    d_phi = 1j * root * phase * c1
    d_x = c0 - (s.x / root) * phase * c1

    pops = thermal_weights(s.G * np.arange(s.n + 1), s.beta)
    tau = s.lambda_th * np.diag(pops).astype(complex) + (1 - s.lambda_th) * np.outer(psi, psi.conj())
    dtau = [(1 - s.lambda_th) * (np.outer(v, psi.conj()) + np.outer(psi, v.conj())) for v in (d_x, d_phi)]

    if s.lumped_tail:
        tail = 1.0 - float(np.trace(tau).real)
        rho = np.pad(tau, ((0, 1), (0, 1)))
        rho[-1, -1] = tail
        drho = [np.pad(d, ((0, 1), (0, 1))) for d in dtau]
    else:
        t = float(np.trace(tau).real)
        rho, drho = tau / t, [d / t for d in dtau]
    return StatisticalModel(rho, tuple(drho), ("x", "phi"))


def binomial_builder(G: int, n: int, lambda_th: float, beta: float, lumped_tail: bool = True):
    """Return ``theta -> model`` for use with :func:`hcrb.model.finite_difference_check`."""

    def build(theta):
        return build_binomial(BinomialScenario(G, n, float(theta[0]), float(theta[1]), lambda_th, beta, lumped_tail))

    return build


@dataclass(frozen=True)
class LandscapePoint:
    scenario: BinomialScenario
    lower: float | None
    upper: float | None
    u_star: float | None
    certified: bool
    error: str | None = None


def binomial_landscape(x, G, n, lambda_th, beta, phi: float = 0.0) -> list[LandscapePoint]:
    """Certified Holevo bound on the Cartesian grid of the given value lists.

    Points are ordered with ``x`` varying fastest.  A failing point is
    recorded with its error message and the sweep continues.
    """
    from ..tight import optimize_u

    out = []
    for g_, n_, lam, b, x_ in itertools.product(G, n, lambda_th, beta, x):
        sc = None
        try:
            sc = BinomialScenario(int(g_), int(n_), float(x_), phi, float(lam), float(b))
            r = optimize_u(build_binomial(sc))
            out.append(LandscapePoint(sc, r.lower, r.upper, r.u_star, r.certified))
        except HCRBError as exc:
            out.append(LandscapePoint(sc, None, None, None, False, f"{type(exc).__name__}: {exc}"))
    return out
