"""Quantum statistical model snapshots: a state and its parameter derivatives."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import StructuralError
from .numerics import PD_THRESHOLD, as_square, eig_hermitian, hermitize

TRACE_TOL = 1e-10
INDEPENDENCE_TOL = 1e-10
# derivatives with Frobenius norm below this (states have unit trace) count as zero
ZERO_DERIVATIVE = 1e-10


@dataclass(frozen=True)
class StatisticalModel:
    """State ``rho`` and derivatives ``drho[j] = d rho / d theta_j`` at one parameter point.

    Operators are symmetrised on construction. ``rho`` must have unit trace
    and every derivative must be traceless (both to 1e-10).
    """

    rho: np.ndarray
    drho: tuple
    labels: tuple = field(default=())

    def __post_init__(self):
        rho = hermitize(self.rho, "rho")
        if len(self.drho) == 0:
            raise StructuralError("a model needs at least one parameter")
        drho = []
        for j, d in enumerate(self.drho):
            d = hermitize(d, f"drho[{j}]")
            if d.shape != rho.shape:
                raise StructuralError(f"drho[{j}] has shape {d.shape}, expected {rho.shape}")
            if abs(np.trace(d)) > TRACE_TOL:
                raise StructuralError(f"drho[{j}] is not traceless (trace {np.trace(d):.3e})")
            drho.append(d)
        if abs(np.trace(rho) - 1) > TRACE_TOL:
            raise StructuralError(f"rho has trace {np.trace(rho).real:.12g}, expected 1")
        labels = tuple(self.labels) if self.labels else tuple(f"theta{j + 1}" for j in range(len(drho)))
        if len(labels) != len(drho):
            raise StructuralError("one label per parameter is required")
        for a in (rho, *drho):
            a.setflags(write=False)
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "drho", tuple(drho))
        object.__setattr__(self, "labels", labels)

    @property
    def dim(self) -> int:
        return self.rho.shape[0]

    @property
    def nparams(self) -> int:
        return len(self.drho)

    def to_dict(self) -> dict:
        """JSON-shaped document; complex entries are ``[re, im]`` pairs."""
        return {
            "dim": self.dim,
            "nparams": self.nparams,
            "labels": list(self.labels),
            "rho": _encode(self.rho),
            "drho": [_encode(d) for d in self.drho],
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "StatisticalModel":
        try:
            rho = _decode(doc["rho"])
            drho = tuple(_decode(d) for d in doc["drho"])
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            raise StructuralError(f"malformed model document: {exc}") from exc
        if "dim" in doc and doc["dim"] != rho.shape[0]:
            raise StructuralError(f"declared dim {doc['dim']} does not match rho ({rho.shape[0]})")
        if "nparams" in doc and doc["nparams"] != len(drho):
            raise StructuralError(f"declared nparams {doc['nparams']} does not match drho ({len(drho)})")
        return cls(rho, drho, tuple(doc.get("labels") or ()))


def _encode(m: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def _decode(rows) -> np.ndarray:
    a = np.asarray(rows, dtype=float)
    if a.ndim != 3 or a.shape[2] != 2:
        raise ValueError("matrix must be a list of rows of [re, im] pairs")
    return as_square(a[..., 0] + 1j * a[..., 1])


@dataclass(frozen=True)
class ModelDiagnostics:
    """Regularity report for a model.

    ``condition_estimate`` is the condition number of the Hilbert-Schmidt Gram
    matrix of the derivatives (``inf`` when they are dependent).
    """

    min_eigenvalue: float
    full_rank: bool
    derivative_independence: bool
    condition_estimate: float


def gram_matrix(m: StatisticalModel) -> np.ndarray:
    """Real Gram matrix ``tr(drho_j drho_k)`` of the derivatives."""
    d = np.asarray(m.drho)
    return np.einsum("jab,kba->jk", d, d).real


def validate(m: StatisticalModel) -> ModelDiagnostics:
    """Report full rank and derivative independence without raising."""
    pmin = float(eig_hermitian(m.rho).eigenvalues[0])
    g = np.linalg.eigvalsh(gram_matrix(m))
    gmax = float(g[-1])
    gmin = float(g[0])
    independent = gmin > ZERO_DERIVATIVE**2 and gmin > INDEPENDENCE_TOL * gmax
    cond = gmax / gmin if independent else float("inf")
    return ModelDiagnostics(
        min_eigenvalue=pmin,
        full_rank=pmin > PD_THRESHOLD,
        derivative_independence=independent,
        condition_estimate=cond,
    )


def finite_difference_check(
    builder: Callable[[np.ndarray], StatisticalModel], theta: Sequence[float], h: float = 1e-5
) -> float:
    """Largest relative Frobenius error between analytic and central-difference derivatives.

    When an analytic derivative vanishes the absolute error is used instead.
    """
    if h <= 0:
        raise ValueError("step must be positive")
    theta = np.asarray(theta, dtype=float)
    base = builder(theta)
    worst = 0.0
    for j in range(base.nparams):
        e = np.zeros_like(theta)
        e[j] = h
        fd = (builder(theta + e).rho - builder(theta - e).rho) / (2 * h)
        err = np.linalg.norm(fd - base.drho[j])
        scale = np.linalg.norm(base.drho[j])
        worst = max(worst, err / scale if scale > 0 else err)
    return float(worst)
